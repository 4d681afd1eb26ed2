"""Seeded generators for synthetic graph / hypergraph classification datasets.

Factor constructions (vertex ids before the optional seeded relabeling):

graph factors (2-uniform)
    complete(p)   K_p
    bipartite(p)  K_{ceil(p/2), floor(p/2)}
    circle(p)     cycle C_p
    cube(d)       hypercube Q_d
    star(p)       centre 0 joined to p-1 leaves
    wheel(p)      hub 0 joined to every vertex of the rim cycle 1..p-1

hypergraph factors
    flower(p)             hub 0 in p petals {0, a_i, b_i}
    pyramid(L)            complete binary tree with L+1 levels, one hyperedge
                          {node, left, right} per internal node
    firm-pyramid(L)       pyramid(L) plus {left, right} per internal node
    checked-table(r, c)   r x c cells, one hyperedge per row and per column
    rot-checked-table(r, c)
                          columns as in checked-table; each row is replaced by
                          its c cyclic windows of length c-1
    wheel(p)              hub 0, rim 1..p, hyperedges {0, r_i, r_i+1}
    cycle(n, k)           ring 0..n-1 covered by k-vertex windows starting every
                          k-1 positions, consecutive windows share one vertex
    lattice(r, c)         r x c grid points, one 4-vertex hyperedge per unit square
    windmill(p)           one core hyperedge over c_0..c_p-1 and a blade
                          {c_i, x_i, y_i} at every core vertex
    fern(L)               spine path s_0..s_L of pair hyperedges and a leaflet
                          {s_i, a_i, b_i} at every spine vertex s_1..s_L

The two pairs pyramid/firm-pyramid and checked-table/rot-checked-table have
identical clique expansions at equal parameters while the hypergraphs are not
isomorphic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Optional, Sequence, Union

import numpy as np

from hgwl.core import Hypergraph, ValidationError, build_hypergraph, disjoint_union, permute

Param = Union[int, tuple[int, ...]]

GRAPH_FACTORS = ("complete", "bipartite", "circle", "cube", "star", "wheel")
HYPERGRAPH_FACTORS = (
    "flower", "pyramid", "checked-table", "wheel", "lattice",
    "windmill", "firm-pyramid", "rot-checked-table", "cycle", "fern",
)
LINK_SCHEMES = ("chain", "star", "circle", "bridge-clique", "shared-vertex", "double-chain")
FAMILIES = ("rg-macro", "rg-sub", "rhg-10", "rhg-3", "rhg-table", "rhg-pyramid", "gnm")

FAMILY_CLASSES = {
    "rg-macro": LINK_SCHEMES,
    "rg-sub": GRAPH_FACTORS,
    "rhg-10": HYPERGRAPH_FACTORS,
    "rhg-3": ("pyramid", "checked-table", "wheel"),
    "rhg-table": ("checked-table", "rot-checked-table"),
    "rhg-pyramid": ("pyramid", "firm-pyramid"),
    "gnm": ("gnm",),
}

# Inclusive ranges for the primary parameter of each factor. Labels after
# iteration 0 encode exact sizes, so ranges are kept narrow enough that every
# size recurs within a few hundred items; averages land near 20-35 vertices.
DEFAULT_RANGES = {
    "flower": (10, 16),
    "pyramid": (3, 4),
    "firm-pyramid": (3, 4),
    "checked-table": (4, 7),
    "rot-checked-table": (4, 7),
    "wheel": (24, 32),
    "lattice": (4, 6),
    "windmill": (6, 10),
    "cycle": (16, 24),
    "fern": (8, 12),
}
GRAPH_DEFAULT_RANGES = {
    "complete": (3, 7),
    "bipartite": (4, 10),
    "circle": (4, 12),
    "cube": (2, 3),
    "star": (4, 12),
    "wheel": (5, 12),
}
GNM_DEFAULT_RANGE = (20, 40)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValidationError(msg)


def _as_tuple(param: Param, arity: int, fill: Optional[int] = None) -> tuple[int, ...]:
    """Normalize a factor parameter; a bare int for a 2-ary kind means (p, fill or p)."""
    if isinstance(param, (int, np.integer)):
        vals: tuple[int, ...] = (int(param),)
    else:
        vals = tuple(int(x) for x in param)
    if arity == 2 and len(vals) == 1:
        vals = (vals[0], vals[0] if fill is None else fill)
    if len(vals) != arity:
        raise ValidationError(f"expected {arity} parameter(s), got {vals}")
    return vals


def gen_graph_factor(kind: str, param: int) -> Hypergraph:
    """Canonical 2-uniform factor graph of the named family."""
    p = int(param)
    if kind == "complete":
        _require(p >= 2, "complete needs param >= 2")
        edges = list(combinations(range(p), 2))
    elif kind == "bipartite":
        _require(p >= 2, "bipartite needs param >= 2")
        a = (p + 1) // 2
        edges = [(u, w) for u in range(a) for w in range(a, p)]
    elif kind == "circle":
        _require(p >= 3, "circle needs param >= 3")
        edges = [(i, (i + 1) % p) for i in range(p)]
    elif kind == "cube":
        _require(p >= 1, "cube needs dimension >= 1")
        n = 1 << p
        edges = [(u, u | (1 << b)) for u in range(n) for b in range(p) if not u & (1 << b)]
    elif kind == "star":
        _require(p >= 2, "star needs param >= 2")
        edges = [(0, i) for i in range(1, p)]
    elif kind == "wheel":
        _require(p >= 4, "wheel needs param >= 4")
        rim = p - 1
        edges = [(0, i) for i in range(1, p)]
        edges += [(1 + i, 1 + (i + 1) % rim) for i in range(rim)]
    else:
        raise ValidationError(f"unknown graph factor {kind!r}")
    n = 1 << p if kind == "cube" else p
    return build_hypergraph(n, edges)


def _pyramid_edges(levels: int, firm: bool) -> tuple[int, list[tuple[int, ...]]]:
    n = (1 << (levels + 1)) - 1
    internal = (1 << levels) - 1
    edges: list[tuple[int, ...]] = [(i, 2 * i + 1, 2 * i + 2) for i in range(internal)]
    if firm:
        edges += [(2 * i + 1, 2 * i + 2) for i in range(internal)]
    return n, edges


def gen_hypergraph_factor(kind: str, param: Param, seed: Optional[int] = None) -> Hypergraph:
    """Factor hypergraph of the named family; a seed applies a random vertex relabeling."""
    if kind == "flower":
        (p,) = _as_tuple(param, 1)
        _require(p >= 2, "flower needs param >= 2")
        n = 2 * p + 1
        edges = [(0, 2 * i + 1, 2 * i + 2) for i in range(p)]
    elif kind in ("pyramid", "firm-pyramid"):
        (levels,) = _as_tuple(param, 1)
        _require(levels >= 1, f"{kind} needs param >= 1")
        n, edges = _pyramid_edges(levels, kind == "firm-pyramid")
    elif kind in ("checked-table", "rot-checked-table"):
        r, c = _as_tuple(param, 2)
        _require(r >= 2 and c >= 3, f"{kind} needs rows >= 2 and columns >= 3")
        n = r * c
        edges = [tuple(i * c + j for i in range(r)) for j in range(c)]
        if kind == "checked-table":
            edges += [tuple(i * c + j for j in range(c)) for i in range(r)]
        else:
            for i in range(r):
                edges += [tuple(i * c + (s + t) % c for t in range(c - 1)) for s in range(c)]
    elif kind == "wheel":
        (p,) = _as_tuple(param, 1)
        _require(p >= 3, "wheel needs param >= 3")
        n = p + 1
        edges = [(0, 1 + i, 1 + (i + 1) % p) for i in range(p)]
    elif kind == "cycle":
        n, k = _as_tuple(param, 2, fill=3)
        _require(k >= 2 and n >= 3, "cycle needs n >= 3 and k >= 2")
        _require(n % (k - 1) == 0 and n // (k - 1) >= 2, "cycle needs n divisible by k-1 with >= 2 windows")
        edges = [tuple((s + t) % n for t in range(k)) for s in range(0, n, k - 1)]
    elif kind == "lattice":
        r, c = _as_tuple(param, 2)
        _require(r >= 2 and c >= 2, "lattice needs r, c >= 2")
        n = r * c
        edges = [
            (i * c + j, i * c + j + 1, (i + 1) * c + j, (i + 1) * c + j + 1)
            for i in range(r - 1) for j in range(c - 1)
        ]
    elif kind == "windmill":
        (p,) = _as_tuple(param, 1)
        _require(p >= 3, "windmill needs param >= 3")
        n = 3 * p
        edges = [tuple(range(p))] + [(i, p + 2 * i, p + 2 * i + 1) for i in range(p)]
    elif kind == "fern":
        (length,) = _as_tuple(param, 1)
        _require(length >= 1, "fern needs param >= 1")
        n = (length + 1) + 2 * length
        edges = [(i, i + 1) for i in range(length)]
        base = length + 1
        edges += [(i, base + 2 * (i - 1), base + 2 * (i - 1) + 1) for i in range(1, length + 1)]
    else:
        raise ValidationError(f"unknown hypergraph factor {kind!r}")
    hg = build_hypergraph(n, edges)
    if seed is not None:
        rng = np.random.default_rng(seed)
        hg = permute(hg, [int(x) for x in rng.permutation(n)])
    return hg


def link_macro(factors: Sequence[Hypergraph], scheme: str, seed: Optional[int] = None) -> Hypergraph:
    """Disjoint union of factors joined by 2-vertex bridge hyperedges.

    Each factor contributes two anchor vertices ``a`` and ``b`` (distinct
    when the factor has at least two vertices), picked by the seed.

    chain          a_i - a_i+1
    star           a_0 - a_i
    circle         chain plus a closing bridge (b_1 - b_0 when only two factors)
    bridge-clique  a_i - a_j for every pair
    shared-vertex  all a_i merged into a single vertex, no bridges
    double-chain   a_i - a_i+1 and b_i - b_i+1
    """
    k = len(factors)
    if k < 2:
        raise ValidationError("link_macro needs at least 2 factors")
    if scheme not in LINK_SCHEMES:
        raise ValidationError(f"unknown linking scheme {scheme!r}")
    for f in factors:
        _require(f.num_vertices >= 1, "factors must have at least one vertex")
    rng = np.random.default_rng(seed)
    union, offsets = disjoint_union(factors)
    a, b = [], []
    for f, off in zip(factors, offsets):
        picks = rng.permutation(f.num_vertices)[:2]
        a.append(off + int(picks[0]))
        b.append(off + int(picks[1 if len(picks) > 1 else 0]))

    edges = list(union.hyperedges)
    if scheme == "chain":
        edges += [(a[i], a[i + 1]) for i in range(k - 1)]
    elif scheme == "star":
        edges += [(a[0], a[i]) for i in range(1, k)]
    elif scheme == "circle":
        edges += [(a[i], a[i + 1]) for i in range(k - 1)]
        edges.append((a[k - 1], a[0]) if k >= 3 else (b[1], b[0]))
    elif scheme == "bridge-clique":
        edges += [(a[i], a[j]) for i, j in combinations(range(k), 2)]
    elif scheme == "double-chain":
        edges += [(a[i], a[i + 1]) for i in range(k - 1)]
        edges += [(b[i], b[i + 1]) for i in range(k - 1)]
    else:  # shared-vertex
        merge = {v: a[0] for v in a[1:]}
        keep = [v for v in range(union.num_vertices) if v not in merge]
        relabel = {v: j for j, v in enumerate(keep)}
        edges = [[relabel[merge.get(v, v)] for v in e] for e in edges]
        return build_hypergraph(len(keep), edges)
    return build_hypergraph(union.num_vertices, edges)


def gnm_capacity(n: int, max_degree: int = 5) -> int:
    return sum(comb(n, k) for k in range(2, min(max_degree, n) + 1))


def gen_gnm(n: int, m: int, seed: Optional[int] = None, degree: Optional[int] = None) -> Hypergraph:
    """m distinct random hyperedges, degree k in {2..5} drawn with weight 2^-k.

    A fixed ``degree`` gives a k-uniform hypergraph instead.
    """
    _require(n >= 2, "gnm needs n >= 2")
    _require(m >= 1, "gnm needs m >= 1")
    if degree is None:
        ks = np.arange(2, min(5, n) + 1)
        cap = gnm_capacity(n)
    else:
        _require(2 <= degree <= n, "degree must lie in [2, n]")
        ks = np.array([degree])
        cap = comb(n, degree)
    if m > cap:
        raise ValidationError(f"m={m} exceeds the {cap} distinct hyperedges possible for n={n}")
    w = 2.0 ** -ks
    w /= w.sum()
    rng = np.random.default_rng(seed)
    seen: set[tuple[int, ...]] = set()
    edges = []
    while len(edges) < m:
        k = int(rng.choice(ks, p=w))
        edge = tuple(sorted(int(v) for v in rng.choice(n, size=k, replace=False)))
        if edge in seen:
            continue
        seen.add(edge)
        edges.append(edge)
    return Hypergraph(n, tuple(edges))


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    count: int
    seed: int
    size_range: Optional[tuple[int, int]] = None


@dataclass
class LabeledDataset:
    """Hypergraphs with class-id targets (int) or multi-label targets (frozenset of ints)."""

    hypergraphs: list[Hypergraph]
    targets: list
    class_names: list[str]
    ids: list[str] = field(default_factory=list)
    vertex_labels: Optional[list[Optional[list[int]]]] = None

    def __post_init__(self):
        if len(self.targets) != len(self.hypergraphs):
            raise ValidationError("targets and hypergraphs differ in length")
        if not self.ids:
            self.ids = [str(i) for i in range(len(self.hypergraphs))]
        for t in self.targets:
            if isinstance(t, frozenset) and not t:
                raise ValidationError("multi-label targets must be nonempty")

    def __len__(self) -> int:
        return len(self.hypergraphs)

    @property
    def items(self) -> list[tuple[Hypergraph, object]]:
        return list(zip(self.hypergraphs, self.targets))

    @property
    def multi_label(self) -> bool:
        return bool(self.targets) and isinstance(self.targets[0], frozenset)


def _draw(rng: np.random.Generator, lo: int, hi: int) -> int:
    return int(rng.integers(lo, hi + 1))


def _factor_param(kind: str, rng: np.random.Generator, size_range: Optional[tuple[int, int]]) -> Param:
    lo, hi = size_range or DEFAULT_RANGES[kind]
    if kind in ("checked-table", "rot-checked-table"):
        return (_draw(rng, max(lo, 2), hi), _draw(rng, max(lo, 3), hi))
    if kind == "lattice":
        return (_draw(rng, max(lo, 2), hi), _draw(rng, max(lo, 2), hi))
    if kind == "cycle":
        k = _draw(rng, 3, 4)
        windows = max(2, _draw(rng, lo, hi) // (k - 1))
        return (windows * (k - 1), k)
    minimum = {"pyramid": 1, "firm-pyramid": 1, "flower": 2, "wheel": 3, "windmill": 3, "fern": 1}[kind]
    return _draw(rng, max(lo, minimum), max(hi, minimum))


def _graph_param(kind: str, rng: np.random.Generator) -> int:
    lo, hi = GRAPH_DEFAULT_RANGES[kind]
    return _draw(rng, lo, hi)


def gen_dataset(spec: GeneratorSpec) -> LabeledDataset:
    """Round-robin class assignment; every random draw comes from ``spec.seed``."""
    if spec.family not in FAMILIES:
        raise ValidationError(f"unknown family {spec.family!r}; expected one of {FAMILIES}")
    if spec.count < 1:
        raise ValidationError("count must be positive")
    rng = np.random.default_rng(spec.seed)
    names = list(FAMILY_CLASSES[spec.family])
    hgs, targets = [], []
    for i in range(spec.count):
        item_seed = int(rng.integers(2**63))
        if spec.family in ("rg-macro", "rg-sub"):
            scheme = LINK_SCHEMES[i % len(LINK_SCHEMES)]
            kind = GRAPH_FACTORS[(i // len(LINK_SCHEMES)) % len(GRAPH_FACTORS)]
            sub = np.random.default_rng(item_seed)
            num_factors = _draw(sub, 2, 4)
            factors = [gen_graph_factor(kind, _graph_param(kind, sub)) for _ in range(num_factors)]
            hg = link_macro(factors, scheme, seed=int(sub.integers(2**63)))
            hg = permute(hg, [int(x) for x in sub.permutation(hg.num_vertices)])
            target = names.index(scheme if spec.family == "rg-macro" else kind)
        elif spec.family == "gnm":
            sub = np.random.default_rng(item_seed)
            lo, hi = spec.size_range or GNM_DEFAULT_RANGE
            n = _draw(sub, max(lo, 2), max(hi, 2))
            m = min(5 * n, gnm_capacity(n))
            hg = gen_gnm(n, m, seed=int(sub.integers(2**63)))
            target = 0
        else:
            kind = names[i % len(names)]
            sub = np.random.default_rng(item_seed)
            param = _factor_param(kind, sub, spec.size_range)
            hg = gen_hypergraph_factor(kind, param, seed=int(sub.integers(2**63)))
            target = i % len(names)
        hgs.append(hg)
        targets.append(target)
    return LabeledDataset(hgs, targets, names)
