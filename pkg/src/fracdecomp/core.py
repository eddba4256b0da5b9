"""Hypergraph data model, degree queries and the plain-text file format.

Vertices are the integers ``0..n-1``.  Edges are stored as sorted tuples in
a frozenset.  For every (k-1)-set ``T`` we also keep a *link mask*: an int
whose bit ``v`` is set when ``T + (v,)`` is an edge.  For graphs (k = 2)
the link of ``(v,)`` is the usual adjacency bitset of ``v``, and all clique
routines work off these masks.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable

from .errors import InputError

Edge = tuple[int, ...]


class Hypergraph:
    """A simple k-uniform hypergraph on vertices ``0..n-1``."""

    __slots__ = ("n", "k", "_edges", "_links", "_adj")

    def __init__(self, n: int, k: int, edges: Iterable[Iterable[int]]) -> None:
        if k < 2:
            raise InputError(f"uniformity k must be at least 2, got {k}")
        if n < 0:
            raise InputError(f"vertex count must be non-negative, got {n}")
        canon: set[Edge] = set()
        for raw in edges:
            e = tuple(sorted(raw))
            if len(e) != k or len(set(e)) != k:
                raise InputError(f"edge {tuple(raw)} does not have {k} distinct vertices")
            if e[0] < 0 or e[-1] >= n:
                raise InputError(f"edge {e} has a vertex outside 0..{n - 1}")
            if e in canon:
                raise InputError(f"duplicate edge {e}")
            canon.add(e)
        self.n = n
        self.k = k
        self._edges: frozenset[Edge] | None = frozenset(canon)
        links: dict[Edge, int] = {}
        for e in canon:
            for i, v in enumerate(e):
                key = e[:i] + e[i + 1:]
                links[key] = links.get(key, 0) | (1 << v)
        self._links = links
        self._adj: list[int] | None = None
        if k == 2:
            self._adj = [links.get((v,), 0) for v in range(n)]

    @classmethod
    def from_adjacency(cls, n: int, adj: list[int], *, validate: bool = True) -> Hypergraph:
        """Graph from symmetric adjacency bitsets; the edge set is built lazily.

        Useful for very large dense graphs where only clique counts are needed.
        ``validate=False`` skips the quadratic symmetry check.
        """
        if len(adj) != n:
            raise InputError(f"expected {n} adjacency masks, got {len(adj)}")
        full = (1 << n) - 1
        for v, m in enumerate(adj):
            if m & ~full or m >> v & 1:
                raise InputError(f"adjacency of {v} has a loop or an out-of-range bit")
        for v, m in enumerate(adj if validate else ()):
            for u in iter_bits(m):
                if not adj[u] >> v & 1:
                    raise InputError(f"adjacency is not symmetric at ({v}, {u})")
        g = cls.__new__(cls)
        g.n, g.k = n, 2
        g._edges = None
        g._adj = list(adj)
        g._links = None
        return g

    # -- basic queries -------------------------------------------------

    @property
    def edges(self) -> frozenset[Edge]:
        if self._edges is None:
            assert self._adj is not None
            self._edges = frozenset(
                (v, u) for v, m in enumerate(self._adj) for u in iter_bits(m >> (v + 1) << (v + 1))
            )
        return self._edges

    @property
    def num_edges(self) -> int:
        if self._edges is None:
            assert self._adj is not None
            return sum(m.bit_count() for m in self._adj) // 2
        return len(self._edges)

    @property
    def is_graph(self) -> bool:
        return self.k == 2

    @property
    def adj(self) -> list[int]:
        """Adjacency bitsets (graphs only)."""
        if self._adj is None:
            raise InputError("adjacency bitsets exist only for graphs (k = 2)")
        return self._adj

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def link(self, t: Edge) -> int:
        """Bitset of vertices v with ``t + (v,)`` an edge; ``t`` sorted, size k-1."""
        if self._links is None:
            return self._adj[t[0]] if len(t) == 1 and 0 <= t[0] < self.n else 0  # type: ignore[index]
        return self._links.get(t, 0)

    def has_edge(self, e: Iterable[int]) -> bool:
        e = tuple(sorted(e))
        if self._adj is not None:
            return len(e) == 2 and e[0] != e[1] and 0 <= e[0] and e[1] < self.n and bool(self._adj[e[0]] >> e[1] & 1)
        return e in self.edges

    def is_clique(self, vertices: Iterable[int]) -> bool:
        """True when every k-subset of ``vertices`` is an edge."""
        s = tuple(sorted(vertices))
        if len(set(s)) != len(s):
            return False
        if len(s) < self.k:
            return all(0 <= v < self.n for v in s)
        if self._adj is not None:
            adj = self._adj
            for i, v in enumerate(s):
                need = 0
                for u in s[i + 1:]:
                    need |= 1 << u
                if adj[v] & need != need:
                    return False
            return True
        return all(c in self.edges for c in combinations(s, self.k))

    def degree(self, s: Iterable[int]) -> int:
        """d(S): number of edges containing the vertex set S."""
        s = tuple(sorted(s))
        if len(s) == self.k - 1:
            return self.link(s).bit_count()
        if self._adj is not None and len(s) == 1:
            return self._adj[s[0]].bit_count()
        ss = set(s)
        return sum(1 for e in self.edges if ss.issubset(e))

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.n, self.k, self.edges) == (other.n, other.k, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.k, self.edges))

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, k={self.k}, edges={self.num_edges})"

    def __getstate__(self) -> tuple[int, int, list[Edge]]:
        return (self.n, self.k, sorted(self.edges))

    def __setstate__(self, state: tuple[int, int, list[Edge]]) -> None:
        n, k, edges = state
        self.__init__(n, k, edges)  # type: ignore[misc]

    def without_edges(self, removed: Iterable[Edge]) -> Hypergraph:
        gone = {tuple(sorted(e)) for e in removed}
        return Hypergraph(self.n, self.k, (e for e in self.edges if e not in gone))


def iter_bits(mask: int) -> Iterable[int]:
    """Set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


# -- neighbourhoods -----------------------------------------------------


def _check_subset(g: Hypergraph, s: Iterable[int]) -> Edge:
    t = tuple(sorted(s))
    if len(set(t)) != len(t):
        raise InputError(f"vertex set {t} has repeated vertices")
    if t and (t[0] < 0 or t[-1] >= g.n):
        raise InputError(f"vertex set {t} has a vertex outside 0..{g.n - 1}")
    if len(t) >= g.k:
        raise InputError(f"|S| = {len(t)} must be at most k-1 = {g.k - 1}")
    return t


def neighborhood(g: Hypergraph, s: Iterable[int]) -> set[Edge]:
    """N(S): the (k-|S|)-sets T disjoint from S with T ∪ S an edge."""
    t = _check_subset(g, s)
    if len(t) == g.k - 1:
        return {(v,) for v in iter_bits(g.link(t))}
    ts = set(t)
    out: set[Edge] = set()
    for e in g.edges:
        if ts.issubset(e):
            out.add(tuple(v for v in e if v not in ts))
    return out


def non_neighborhood(
    g: Hypergraph, s: Iterable[int], *, include_overlap: bool | None = None
) -> set[Edge]:
    """N^c(S): the (k-|S|)-sets T for which T ∪ S is not an edge.

    With ``include_overlap`` (the default for graphs) T ranges over all
    (k-|S|)-subsets of V(G), so a graph vertex x lies in its own N^c(x) and
    |N(x)| + |N^c(x)| = n.  Otherwise T must be disjoint from S, giving
    |N(S)| + |N^c(S)| = C(n-|S|, k-|S|).
    """
    t = _check_subset(g, s)
    if include_overlap is None:
        include_overlap = g.k == 2
    ts = set(t)
    nbrs = neighborhood(g, t)
    size = g.k - len(t)
    pool = range(g.n) if include_overlap else [v for v in range(g.n) if v not in ts]
    return {c for c in combinations(pool, size) if c not in nbrs}


def non_neighbors_mask(g: Hypergraph, x: int) -> int:
    """Graph N^c(x) as a bitset, including x itself."""
    return g.full_mask & ~g.adj[x]


def min_degree(g: Hypergraph) -> int:
    """Minimum codegree δ_{k-1}(G); the ordinary minimum degree for graphs."""
    return min_j_degree(g, g.k - 1).min_degree


def observed_delta(g: Hypergraph) -> Fraction:
    """Smallest δ with δ_{k-1}(G) ≥ (1-δ)n, namely (n - δ_{k-1}(G))/n."""
    if g.n == 0:
        return Fraction(0)
    return Fraction(g.n - min_degree(g), g.n)


@dataclass(frozen=True)
class DegreeProfile:
    j: int
    min_degree: int
    arg_min: Edge


def min_j_degree(g: Hypergraph, j: int) -> DegreeProfile:
    """Exact minimum j-degree with the lexicographically least witness."""
    if not 1 <= j <= g.k - 1:
        raise InputError(f"j must lie in 1..{g.k - 1}, got {j}")
    if g.n < j:
        raise InputError(f"no {j}-subsets in a graph on {g.n} vertices")
    if j == g.k - 1:
        best, arg = None, ()
        for s in combinations(range(g.n), j):
            d = g.link(s).bit_count()
            if best is None or d < best:
                best, arg = d, s
        assert best is not None
        return DegreeProfile(j, best, arg)
    counts: Counter[Edge] = Counter()
    for e in g.edges:
        counts.update(combinations(e, j))
    best, arg = None, ()
    for s in combinations(range(g.n), j):
        d = counts.get(s, 0)
        if best is None or d < best:
            best, arg = d, s
    assert best is not None
    return DegreeProfile(j, best, arg)


# -- file formats -------------------------------------------------------


def load(text: str) -> Hypergraph:
    """Parse the text format: a header ``n k`` then one edge per line.

    Blank lines and lines starting with ``#`` are ignored.
    """
    header: tuple[int, int] | None = None
    edges: list[Edge] = []
    seen: dict[Edge, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise InputError(f"non-integer token in {line!r}", lineno) from None
        if header is None:
            if len(nums) != 2:
                raise InputError("header must be 'n k'", lineno)
            n, k = nums
            if k < 2 or n < 0:
                raise InputError(f"invalid header n={n} k={k}", lineno)
            header = (n, k)
            continue
        n, k = header
        if len(nums) != k:
            raise InputError(f"edge has {len(nums)} vertices, expected {k}", lineno)
        if len(set(nums)) != k:
            raise InputError(f"edge {tuple(nums)} repeats a vertex", lineno)
        if min(nums) < 0 or max(nums) >= n:
            raise InputError(f"edge {tuple(nums)} has a vertex outside 0..{n - 1}", lineno)
        e = tuple(sorted(nums))
        if e in seen:
            raise InputError(f"duplicate edge {e} (first on line {seen[e]})", lineno)
        seen[e] = lineno
        edges.append(e)
    if header is None:
        raise InputError("missing 'n k' header")
    return Hypergraph(header[0], header[1], edges)


def save(g: Hypergraph) -> str:
    lines = [f"{g.n} {g.k}"]
    lines.extend(" ".join(map(str, e)) for e in g.sorted_edges())
    return "\n".join(lines) + "\n"


def to_json(g: Hypergraph) -> dict[str, object]:
    return {"n": g.n, "k": g.k, "edges": [list(e) for e in g.sorted_edges()]}


def from_json(data: dict[str, object]) -> Hypergraph:
    try:
        n = int(data["n"])  # type: ignore[arg-type]
        k = int(data["k"])  # type: ignore[arg-type]
        edges = [tuple(int(v) for v in e) for e in data["edges"]]  # type: ignore[union-attr]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed hypergraph JSON: {exc}") from None
    return Hypergraph(n, k, edges)


def read_hypergraph(path: str | Path) -> Hypergraph:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        try:
            return from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from None
    return load(text)


def write_hypergraph(path: str | Path, g: Hypergraph) -> None:
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(json.dumps(to_json(g), sort_keys=True) + "\n", encoding="utf-8")
    else:
        path.write_text(save(g), encoding="utf-8")


def edge_hash(g: Hypergraph) -> str:
    """SHA-256 of the canonical text form."""
    return hashlib.sha256(save(g).encode("utf-8")).hexdigest()
