"""Exhaustive isomorphism check for small hypergraphs (ground truth for tests)."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from hgwl.core import Hypergraph, degrees


class OracleRefusal(ValueError):
    """Input exceeds the oracle's size limit."""


@dataclass(frozen=True)
class OracleLimit:
    max_vertices: int = 8


def _signatures(h: Hypergraph) -> list[tuple[int, ...]]:
    # a vertex can only map to one incident to the same multiset of hyperedge sizes
    return [tuple(sorted(len(h.hyperedges[e]) for e in inc)) for inc in h.incidence]


def brute_force_isomorphic(g1: Hypergraph, g2: Hypergraph, limit: OracleLimit = OracleLimit()) -> bool:
    """True iff a vertex bijection maps g1's hyperedge multiset exactly onto g2's."""
    for g in (g1, g2):
        if g.num_vertices > limit.max_vertices:
            raise OracleRefusal(
                f"{g.num_vertices} vertices exceeds oracle limit {limit.max_vertices}"
            )
    if g1.num_vertices != g2.num_vertices or g1.num_hyperedges != g2.num_hyperedges:
        return False
    p1, p2 = degrees(g1), degrees(g2)
    if sorted(p1.vertex_degrees) != sorted(p2.vertex_degrees):
        return False
    if sorted(p1.hyperedge_degrees) != sorted(p2.hyperedge_degrees):
        return False
    sig1, sig2 = _signatures(g1), _signatures(g2)
    if sorted(sig1) != sorted(sig2):
        return False

    n = g1.num_vertices
    # most constrained vertices first: smallest candidate pool
    pool = Counter(sig2)
    order = sorted(range(n), key=lambda v: (pool[sig1[v]], v))
    position = {v: k for k, v in enumerate(order)}
    # edges checked the moment their last (in search order) vertex is placed
    closing: list[list[tuple[int, ...]]] = [[] for _ in range(n)]
    for edge in g1.hyperedges:
        closing[max(position[v] for v in edge)].append(edge)
    candidates = [[w for w in range(n) if sig2[w] == sig1[v]] for v in order]
    remaining = Counter(g2.hyperedges)
    mapping = [-1] * n
    used = [False] * n

    def place(k: int) -> bool:
        if k == n:
            return True
        v = order[k]
        for w in candidates[k]:
            if used[w]:
                continue
            mapping[v] = w
            used[w] = True
            taken = []
            ok = True
            for edge in closing[k]:
                img = tuple(sorted(mapping[u] for u in edge))
                if remaining[img] <= 0:
                    ok = False
                    break
                remaining[img] -= 1
                taken.append(img)
            if ok and place(k + 1):
                return True
            for img in taken:
                remaining[img] += 1
            used[w] = False
            mapping[v] = -1
        return False

    return place(0)
