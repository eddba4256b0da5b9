"""Clique enumeration and counting over link bitsets.

A partial clique ``P`` is extended by a vertex ``v`` only when every new
k-set (a (k-2)-subset of ``P`` plus ``v`` plus the next vertex) is an edge.
The candidate mask for the next vertex is therefore the intersection of the
link masks of all (k-1)-subsets of ``P + (v,)`` that contain ``v``.  For
graphs this is plain common-neighbourhood intersection.

Fixed-size enumeration cannot use Bron-Kerbosch pivoting (pivoting skips
non-maximal cliques), so we prune instead when fewer candidates remain than
vertices still needed.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Callable, Iterable, Iterator

from .core import Edge, Hypergraph, iter_bits, mask_of
from .errors import InputError, SizeLimitError

DEFAULT_CLIQUE_CAP = 10**8
CLIQUE_CAP_ENV = "FRACDECOMP_CLIQUE_CAP"

Clique = tuple[int, ...]


def clique_cap(cap: int | None = None) -> int:
    """Explicit cap, else the environment override, else the default."""
    if cap is not None:
        return cap
    raw = os.environ.get(CLIQUE_CAP_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise InputError(f"{CLIQUE_CAP_ENV} must be an integer, got {raw!r}") from None
    return DEFAULT_CLIQUE_CAP


class CliqueFamily:
    """An ordered, duplicate-free family of r-cliques of ``host``."""

    __slots__ = ("r", "members", "host", "_set")

    def __init__(self, host: Hypergraph, r: int, members: Iterable[Clique]) -> None:
        self.host = host
        self.r = r
        self.members: tuple[Clique, ...] = tuple(sorted(set(members)))
        self._set: frozenset[Clique] | None = None

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Clique]:
        return iter(self.members)

    def __contains__(self, item: object) -> bool:
        if self._set is None:
            self._set = frozenset(self.members)
        return item in self._set

    def filter(self, keep: Callable[[Clique], bool]) -> CliqueFamily:
        fam = CliqueFamily.__new__(CliqueFamily)
        fam.host, fam.r = self.host, self.r
        fam.members = tuple(c for c in self.members if keep(c))
        fam._set = None
        return fam

    def to_text(self) -> str:
        return "".join(" ".join(map(str, c)) + "\n" for c in self.members)

    def __repr__(self) -> str:
        return f"CliqueFamily(r={self.r}, size={len(self.members)})"


# -- low-level walkers --------------------------------------------------


def _new_link(g: Hypergraph, chosen: tuple[int, ...], v: int) -> int:
    """Mask of u such that every k-subset of chosen + (v, u) containing v, u is an edge."""
    k = g.k
    if k == 2:
        return g.adj[v]
    if len(chosen) < k - 2:
        return -1
    m = -1
    for q in combinations(chosen, k - 2):
        m &= g.link(tuple(sorted(q + (v,))))
        if not m:
            return 0
    return m


def extension_mask(g: Hypergraph, s: Iterable[int]) -> int:
    """Vertices u outside the clique S such that S + {u} is again a clique."""
    s = tuple(sorted(s))
    k = g.k
    if k == 2:
        m = g.full_mask
        for v in s:
            m &= g.adj[v]
        return m
    m = g.full_mask & ~mask_of(s)
    if len(s) >= k - 1:
        for t in combinations(s, k - 1):
            m &= g.link(t)
            if not m:
                break
    return m


def _walk(g: Hypergraph, chosen: tuple[int, ...], cand: int, need: int) -> Iterator[tuple[int, ...]]:
    """Yield ascending ``need``-tuples from ``cand`` that extend the clique ``chosen``."""
    if need == 0:
        yield ()
        return
    while cand:
        if cand.bit_count() < need:
            return
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        if need == 1:
            yield (v,)
            continue
        nxt = cand & _new_link(g, chosen, v)
        if nxt.bit_count() < need - 1:
            continue
        for rest in _walk(g, chosen + (v,), nxt, need - 1):
            yield (v,) + rest


def _graph_walk(adj: list[int], cand: int, need: int) -> Iterator[tuple[int, ...]]:
    if need == 1:
        while cand:
            low = cand & -cand
            yield (low.bit_length() - 1,)
            cand ^= low
        return
    while cand:
        if cand.bit_count() < need:
            return
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        nxt = cand & adj[v]
        if nxt.bit_count() < need - 1:
            continue
        for rest in _graph_walk(adj, nxt, need - 1):
            yield (v,) + rest


def _count(g: Hypergraph, chosen: tuple[int, ...], cand: int, need: int) -> int:
    if need == 0:
        return 1
    if need == 1:
        return cand.bit_count()
    total = 0
    if g.k == 2:
        adj = g.adj
        if need == 2:
            while cand:
                low = cand & -cand
                cand ^= low
                total += (cand & adj[low.bit_length() - 1]).bit_count()
            return total
        while cand:
            if cand.bit_count() < need:
                break
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            nxt = cand & adj[v]
            if nxt.bit_count() >= need - 1:
                total += _count(g, chosen, nxt, need - 1)
        return total
    while cand:
        if cand.bit_count() < need:
            break
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        nxt = cand & _new_link(g, chosen, v)
        if nxt.bit_count() >= need - 1:
            total += _count(g, chosen + (v,), nxt, need - 1)
    return total


def walk_extensions(g: Hypergraph, s: Iterable[int], size: int, within: int = -1) -> Iterator[tuple[int, ...]]:
    """Ascending ``size``-sets T (drawn from ``within``) with S ∪ T a clique.

    S itself must already be a clique.
    """
    s = tuple(sorted(s))
    cand = extension_mask(g, s) & within
    if g.k == 2:
        if size == 0:
            return iter([()])
        return _graph_walk(g.adj, cand, size)
    return _walk(g, s, cand, size)


def count_extensions(g: Hypergraph, s: Iterable[int], size: int, within: int = -1) -> int:
    """Number of ``size``-sets T ⊆ ``within`` with S ∪ T a clique (S a clique)."""
    s = tuple(sorted(s))
    return _count(g, s, extension_mask(g, s) & within, size)


# -- public operations ----------------------------------------------------


def _cliques_with_min(args: tuple[Hypergraph, int, int]) -> list[Clique]:
    g, r, v = args
    above = g.full_mask & ~((1 << (v + 1)) - 1)
    cand = extension_mask(g, (v,)) & above
    return [(v,) + rest for rest in walk_extensions(g, (v,), r - 1, cand)]


def enumerate_cliques(
    g: Hypergraph, r: int, *, cap: int | None = None, workers: int = 1
) -> CliqueFamily:
    """All r-cliques of ``g`` in lexicographic order.

    For r < k every r-set counts as a clique.  Raises ``SizeLimitError`` when
    the family would exceed the cap.  With ``workers > 1`` the work is split
    by smallest vertex across processes; the merged result is identical.
    """
    if r < 1:
        raise InputError(f"clique size must be positive, got {r}")
    limit = clique_cap(cap)
    if r > g.n:
        return CliqueFamily(g, r, ())
    if r < g.k:
        if comb(g.n, r) > limit:
            raise SizeLimitError(f"{comb(g.n, r)} {r}-sets exceed the clique cap {limit}")
        return CliqueFamily(g, r, combinations(range(g.n), r))
    out: list[Clique] = []
    if workers > 1 and g.n > 1:
        jobs = [(g, r, v) for v in range(g.n - r + 1)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_cliques_with_min, jobs, chunksize=max(1, len(jobs) // (4 * workers))):
                out.extend(part)
                if len(out) > limit:
                    raise SizeLimitError(f"more than {limit} {r}-cliques; raise the clique cap")
    else:
        for v in range(g.n - r + 1):
            above = g.full_mask & ~((1 << (v + 1)) - 1)
            cand = extension_mask(g, (v,)) & above
            for rest in walk_extensions(g, (v,), r - 1, cand):
                out.append((v,) + rest)
                if len(out) > limit:
                    raise SizeLimitError(f"more than {limit} {r}-cliques; raise the clique cap")
    fam = CliqueFamily.__new__(CliqueFamily)
    fam.host, fam.r, fam.members, fam._set = g, r, tuple(out), None
    return fam


def iter_cliques(g: Hypergraph, r: int) -> Iterator[Clique]:
    """Lazy lexicographic stream of the r-cliques (r >= k), without a cap."""
    if r > g.n or r < 1:
        return
    for v in range(g.n - r + 1):
        above = g.full_mask & ~((1 << (v + 1)) - 1)
        cand = extension_mask(g, (v,)) & above
        for rest in walk_extensions(g, (v,), r - 1, cand):
            yield (v,) + rest


def count_cliques(g: Hypergraph, r: int) -> int:
    """k_r with the conventions k_r = 0 for r < 0 and k_r = C(n, r) for r < k.

    For r = k this is the number of edges (every edge is a k-clique).
    """
    if r < 0:
        return 0
    if r < g.k:
        return comb(g.n, r)
    return _count(g, (), g.full_mask, r)


class CliqueCounter:
    """Memoised k_j values for one host."""

    def __init__(self, g: Hypergraph) -> None:
        self.g = g
        self._cache: dict[int, int] = {}

    def __call__(self, j: int) -> int:
        if j not in self._cache:
            self._cache[j] = count_cliques(self.g, j)
        return self._cache[j]


def extensions(g: Hypergraph, s: Iterable[int], r: int) -> int:
    """κ_S^(r): the number of r-cliques containing the vertex set S."""
    s = tuple(sorted(s))
    if len(s) > r:
        raise InputError(f"|S| = {len(s)} exceeds the clique size {r}")
    if len(set(s)) != len(s) or (s and (s[0] < 0 or s[-1] >= g.n)):
        raise InputError(f"invalid vertex set {s}")
    if not g.is_clique(s):
        return 0
    return count_extensions(g, s, r - len(s))


def cliques_containing(g: Hypergraph, s: Iterable[int], r: int, within: int = -1) -> list[Clique]:
    """Sorted r-cliques containing S whose other vertices lie in ``within``."""
    s = tuple(sorted(s))
    if not g.is_clique(s):
        return []
    out = []
    for t in walk_extensions(g, s, r - len(s), within):
        out.append(tuple(sorted(s + t)))
    out.sort()
    return out


def intersection_size(c: Iterable[int], x_mask: int) -> int:
    return sum(1 for v in c if x_mask >> v & 1)


def restricted_family(g: Hypergraph, r: int, x: Iterable[int], t: int) -> CliqueFamily:
    """{K ∈ K_r(G) : |V(K) ∩ X| ≤ t}."""
    xm = mask_of(x)
    return enumerate_cliques(g, r).filter(lambda c: intersection_size(c, xm) <= t)


def extension_family_He(g: Hypergraph, e: Iterable[int], r: int) -> list[Clique]:
    """H_e: the r-sets A disjoint from e with A ∪ V(e) a clique (graphs)."""
    if g.k != 2:
        raise InputError("extension_family_He is defined for graphs")
    e = tuple(sorted(e))
    if not g.has_edge(e):
        raise InputError(f"{e} is not an edge")
    return list(walk_extensions(g, e, r))


# -- host cliques and well-distributedness ---------------------------------


def host_counts(
    g: Hypergraph, r: int, admissible: Callable[[Clique], bool] | None = None
) -> tuple[dict[Edge, int], int]:
    """Count, per edge e, the (r+2)-cliques J ⊇ e passing ``admissible``.

    J ∖ e then ranges over the host r-sets A of e; admissibility of A for e
    only depends on J = A ∪ V(e) for all the families used here.  Returns the
    per-edge counts (every edge present) and the number of admissible J.
    """
    counts = {e: 0 for e in g.edges}
    total = 0
    for j in enumerate_cliques(g, r + 2) if r + 2 <= g.n else ():
        if admissible is not None and not admissible(j):
            continue
        total += 1
        for e in combinations(j, 2):
            counts[e] += 1
    return counts, total


def all_subcliques_in(family: CliqueFamily | frozenset[Clique] | set[Clique], r: int) -> Callable[[Clique], bool]:
    """Predicate on J: every r-subset of J belongs to ``family``."""

    def test(j: Clique) -> bool:
        return all(c in family for c in combinations(j, r))

    return test


@dataclass(frozen=True)
class WellDistributedReport:
    verdict: bool
    threshold: Fraction
    counts: dict[Edge, int]
    witness: Edge | None
    k_r: int


def well_distributed_check(g: Hypergraph, r: int, family: CliqueFamily) -> WellDistributedReport:
    """Check that every edge has at least k_r/2 host r-sets inside ``family``."""
    return well_distributed_by(g, r, family.__contains__)


def well_distributed_by(
    g: Hypergraph, r: int, member: Callable[[Clique], bool], k_r: int | None = None
) -> WellDistributedReport:
    """As :func:`well_distributed_check`, with the family given by a membership test."""
    if g.k != 2:
        raise InputError("well-distributedness is defined for graphs")
    if k_r is None:
        k_r = count_cliques(g, r)
    threshold = Fraction(k_r, 2)

    def admissible(j: Clique) -> bool:
        return all(member(c) for c in combinations(j, r))

    counts, _ = host_counts(g, r, admissible)
    witness = None
    for e in sorted(counts):
        if counts[e] < threshold:
            witness = e
            break
    return WellDistributedReport(witness is None, threshold, counts, witness, k_r)
