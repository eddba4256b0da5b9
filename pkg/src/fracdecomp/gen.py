"""Instance generators: complete hosts, the extremal family and random dense hosts."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil
from typing import Callable

from .core import Hypergraph, edge_hash
from .errors import InputError


def gen_complete(n: int, k: int = 2) -> Hypergraph:
    """K_n^(k): every k-subset of {0, .., n-1}."""
    if k < 2 or n < k:
        raise InputError(f"need n >= k >= 2, got n={n}, k={k}")
    return Hypergraph(n, k, combinations(range(n), k))


def gen_k4_minus_edge() -> Hypergraph:
    """K_4 without the edge 03: two triangles sharing the edge 12."""
    return Hypergraph(4, 2, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])


def gen_lower_bound_family(r: int, s: int, seed: int | None = None) -> Hypergraph:
    """Complete (r-1)-partite graph with classes of size m = 2s(r+1), plus a
    (4s-1)-regular circulant inside each class.

    Any r-clique has two vertices in one class and so uses an inside edge,
    yet inside edges are fewer than a 1/C(r,2) share of all edges, so no
    fractional K_r-decomposition exists.  A seed relabels vertices within
    each class; the graph is otherwise fixed.
    """
    if r < 3 or s < 1:
        raise InputError(f"need r >= 3 and s >= 1, got r={r}, s={s}")
    m = 2 * s * (r + 1)
    parts = r - 1
    n = parts * m
    rng = random.Random(seed) if seed is not None else None
    label = list(range(n))
    if rng is not None:
        for p in range(parts):
            block = label[p * m:(p + 1) * m]
            rng.shuffle(block)
            label[p * m:(p + 1) * m] = block
    edges = set()
    for p in range(parts):
        base = p * m
        offsets = list(range(1, 2 * s)) + [m // 2]
        for i in range(m):
            for d in offsets:
                u, v = label[base + i], label[base + (i + d) % m]
                edges.add((min(u, v), max(u, v)))
    for p, q in combinations(range(parts), 2):
        for i in range(m):
            for j in range(m):
                u, v = label[p * m + i], label[q * m + j]
                edges.add((min(u, v), max(u, v)))
    return Hypergraph(n, 2, edges)


def gen_random_min_degree(
    n: int, k: int, delta: Fraction | float, seed: int, *, max_deletions: int | None = None
) -> Hypergraph:
    """Delete random edges from K_n^(k) while the codegree stays ≥ ⌈(1-δ)n⌉.

    Edges are visited once in a seeded random order; an edge is deleted when
    every (k-1)-subset it contains keeps enough edges.
    """
    delta = Fraction(delta)
    if not 0 <= delta < 1:
        raise InputError(f"δ must lie in [0, 1), got {delta}")
    g = gen_complete(n, k)
    need = ceil((1 - delta) * n)
    codeg = {s: n - k + 1 for s in combinations(range(n), k - 1)}
    order = g.sorted_edges()
    random.Random(seed).shuffle(order)
    removed = set()
    for e in order:
        if max_deletions is not None and len(removed) >= max_deletions:
            break
        subs = list(combinations(e, k - 1))
        if all(codeg[s] - 1 >= need for s in subs):
            for s in subs:
                codeg[s] -= 1
            removed.add(e)
    return g.without_edges(removed) if removed else g


@dataclass(frozen=True)
class GenSpec:
    family: str
    n: int | None = None
    k: int = 2
    r: int | None = None
    s: int | None = None
    delta: str | None = None
    seed: int | None = None

    def build(self) -> Hypergraph:
        maker = _FAMILIES.get(self.family)
        if maker is None:
            raise InputError(f"unknown family {self.family!r}; choose from {sorted(_FAMILIES)}")
        return maker(self)

    def manifest(self, g: Hypergraph | None = None) -> dict[str, object]:
        g = self.build() if g is None else g
        return {
            "family": self.family,
            "params": {k: v for k, v in asdict(self).items() if k != "family" and v is not None},
            "seed": self.seed,
            "n": g.n,
            "k": g.k,
            "edges": g.num_edges,
            "edge_hash": edge_hash(g),
        }

    @classmethod
    def parse(cls, text: str) -> GenSpec:
        """Read ``family:key=value,...``, e.g. ``random:n=20,k=2,delta=1/10,seed=3``."""
        family, _, rest = text.partition(":")
        fields: dict[str, object] = {}
        for item in filter(None, rest.split(",")):
            key, eq, value = item.partition("=")
            key = key.strip()
            if not eq or key not in ("n", "k", "r", "s", "delta", "seed"):
                raise InputError(f"bad generator parameter {item!r}")
            try:
                fields[key] = str(Fraction(value)) if key == "delta" else int(value)
            except (ValueError, ZeroDivisionError):
                raise InputError(f"bad value in {item!r}") from None
        return cls(family.strip(), **fields)  # type: ignore[arg-type]


def _need(spec: GenSpec, *names: str) -> None:
    for name in names:
        if getattr(spec, name) is None:
            raise InputError(f"family {spec.family!r} needs parameter {name}")


def _complete(spec: GenSpec) -> Hypergraph:
    _need(spec, "n")
    return gen_complete(spec.n, spec.k)  # type: ignore[arg-type]


def _lower(spec: GenSpec) -> Hypergraph:
    _need(spec, "r", "s")
    return gen_lower_bound_family(spec.r, spec.s, spec.seed)  # type: ignore[arg-type]


def _random(spec: GenSpec) -> Hypergraph:
    _need(spec, "n", "delta", "seed")
    return gen_random_min_degree(spec.n, spec.k, Fraction(spec.delta), spec.seed)  # type: ignore[arg-type]


_FAMILIES: dict[str, Callable[[GenSpec], Hypergraph]] = {
    "complete": _complete,
    "lower-bound": _lower,
    "random": _random,
    "k4-minus-edge": lambda spec: gen_k4_minus_edge(),
}
FAMILY_NAMES = tuple(sorted(_FAMILIES))
