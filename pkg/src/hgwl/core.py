"""Hypergraph incidence structure and basic queries."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence


class ValidationError(ValueError):
    """Raised when a hypergraph or its inputs violate structural constraints."""


@dataclass(frozen=True)
class Hypergraph:
    """Immutable hypergraph on vertices ``0..num_vertices-1``.

    ``hyperedges`` is an ordered multiset of canonical vertex tuples (sorted,
    no repeats). Use :func:`build_hypergraph` to construct from raw input.
    """

    num_vertices: int
    hyperedges: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.num_vertices < 0:
            raise ValidationError("num_vertices must be non-negative")
        for idx, edge in enumerate(self.hyperedges):
            if not edge:
                raise ValidationError(f"hyperedge {idx} is empty")
            prev = -1
            for v in edge:
                if v <= prev:
                    raise ValidationError(f"hyperedge {idx} is not strictly increasing: {edge}")
                prev = v
            if edge[0] < 0 or edge[-1] >= self.num_vertices:
                raise ValidationError(
                    f"hyperedge {idx} has vertex out of range [0, {self.num_vertices}): {edge}"
                )

    @property
    def num_hyperedges(self) -> int:
        return len(self.hyperedges)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Per-vertex tuple of incident hyperedge ids, ascending."""
        inc: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for e, edge in enumerate(self.hyperedges):
            for v in edge:
                inc[v].append(e)
        return tuple(tuple(x) for x in inc)

    @property
    def capacity(self) -> int:
        """Number of non-zeros of the incidence matrix."""
        return sum(len(e) for e in self.hyperedges)

    def is_uniform(self, k: int) -> bool:
        return all(len(e) == k for e in self.hyperedges)

    def canonical_edges(self) -> list[tuple[int, ...]]:
        """Hyperedge multiset as a sorted list, for order-insensitive comparison."""
        return sorted(self.hyperedges)


@dataclass(frozen=True)
class DegreeProfile:
    vertex_degrees: tuple[int, ...]
    hyperedge_degrees: tuple[int, ...]
    capacity: int


def build_hypergraph(num_vertices: int, raw_hyperedges: Iterable[Iterable[int]]) -> Hypergraph:
    """Canonicalize raw hyperedges (sort + dedupe ids), keeping hyperedge order."""
    if num_vertices < 0:
        raise ValidationError("num_vertices must be non-negative")
    edges = []
    for idx, raw in enumerate(raw_hyperedges):
        edge = tuple(sorted(set(int(v) for v in raw)))
        if not edge:
            raise ValidationError(f"hyperedge {idx} is empty")
        if edge[0] < 0 or edge[-1] >= num_vertices:
            raise ValidationError(
                f"hyperedge {idx} has vertex out of range [0, {num_vertices}): {list(raw)}"
            )
        edges.append(edge)
    return Hypergraph(num_vertices, tuple(edges))


def vertex_hyperedge_neighbors(h: Hypergraph, v: int) -> set[int]:
    if not 0 <= v < h.num_vertices:
        raise ValidationError(f"vertex {v} out of range [0, {h.num_vertices})")
    return set(h.incidence[v])


def hyperedge_vertex_neighbors(h: Hypergraph, e: int) -> set[int]:
    if not 0 <= e < h.num_hyperedges:
        raise ValidationError(f"hyperedge {e} out of range [0, {h.num_hyperedges})")
    return set(h.hyperedges[e])


def degrees(h: Hypergraph) -> DegreeProfile:
    vdeg = tuple(len(x) for x in h.incidence)
    edeg = tuple(len(e) for e in h.hyperedges)
    return DegreeProfile(vdeg, edeg, sum(edeg))


def clique_expansion(h: Hypergraph) -> Hypergraph:
    """Simple graph (2-uniform, deduplicated, lexicographically sorted) of co-occurring pairs."""
    pairs = set()
    for edge in h.hyperedges:
        pairs.update(combinations(edge, 2))
    return Hypergraph(h.num_vertices, tuple(sorted(pairs)))


def permute(h: Hypergraph, perm: Sequence[int]) -> Hypergraph:
    """Relabel vertex ``v`` as ``perm[v]``; hyperedge order is preserved."""
    n = h.num_vertices
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise ValidationError("perm must be a permutation of range(num_vertices)")
    return Hypergraph(n, tuple(tuple(sorted(perm[v] for v in e)) for e in h.hyperedges))


def disjoint_union(parts: Sequence[Hypergraph]) -> tuple[Hypergraph, list[int]]:
    """Concatenate hypergraphs; also returns each part's vertex offset."""
    offsets, edges, n = [], [], 0
    for part in parts:
        offsets.append(n)
        edges.extend(tuple(v + n for v in e) for e in part.hyperedges)
        n += part.num_vertices
    return Hypergraph(n, tuple(edges)), offsets
