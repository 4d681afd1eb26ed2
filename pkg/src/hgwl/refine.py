"""Two-stage hypergraph WL label refinement and the isomorphism tests built on it."""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

from hgwl.core import Hypergraph, ValidationError, degrees

# Label id handed out by a frozen interner for a string it has never seen.
UNSEEN = -1

SEPARATOR = "|"

# Multisets shorter than this are sorted with the builtin sort; above it the
# counting-based radix sort is used. Both produce the same ascending order.
RADIX_THRESHOLD = 64


def radix_sort(values: Sequence[int]) -> list[int]:
    """LSD radix sort (base 256) of integers; negatives are handled by offsetting."""
    if not values:
        return []
    lo = min(values)
    keys = [v - lo for v in values] if lo < 0 else list(values)
    top = max(keys)
    shift = 0
    while True:
        buckets: list[list[int]] = [[] for _ in range(256)]
        for k in keys:
            buckets[(k >> shift) & 0xFF].append(k)
        keys = [k for b in buckets for k in b]
        shift += 8
        if top >> shift == 0:
            break
    return [k + lo for k in keys] if lo < 0 else keys


def sort_labels(values: Sequence[int]) -> list[int]:
    if len(values) < RADIX_THRESHOLD:
        return sorted(values)
    return radix_sort(values)


def refinement_string(prev: int, multiset: Sequence[int]) -> str:
    """``prev|a,b,c`` with the neighbour label ids in ascending order."""
    return f"{prev}{SEPARATOR}{','.join(map(str, sort_labels(multiset)))}"


class LabelInterner:
    """Injective string -> dense integer id map (ids assigned in first-seen order).

    A frozen interner never registers new strings; unknown strings map to
    :data:`UNSEEN`. Frozen views share the table of the interner they came from.
    """

    def __init__(self, frozen: bool = False):
        self.table: dict[str, int] = {}
        self.strings: list[str] = []
        self.frozen = frozen

    def __len__(self) -> int:
        return len(self.strings)

    @property
    def next_id(self) -> int:
        return len(self.strings)

    def intern(self, s: str) -> int:
        lid = self.table.get(s)
        if lid is None:
            if self.frozen:
                return UNSEEN
            lid = len(self.strings)
            self.table[s] = lid
            self.strings.append(s)
        return lid

    def lookup(self, lid: int) -> str:
        return self.strings[lid]

    def frozen_view(self) -> "LabelInterner":
        view = LabelInterner(frozen=True)
        view.table = self.table
        view.strings = self.strings
        return view


@dataclass
class Interners:
    """Per-batch label namespaces.

    ``graph`` holds vertex labels of the single-stage graph refinement so they
    never share ids with the hypergraph vertex labels.
    """

    vertex: LabelInterner = field(default_factory=LabelInterner)
    hyperedge: LabelInterner = field(default_factory=LabelInterner)
    code: LabelInterner = field(default_factory=LabelInterner)
    graph: LabelInterner = field(default_factory=LabelInterner)

    def frozen(self) -> "Interners":
        return Interners(
            self.vertex.frozen_view(),
            self.hyperedge.frozen_view(),
            self.code.frozen_view(),
            self.graph.frozen_view(),
        )


@dataclass(frozen=True)
class LabelState:
    iteration: int
    vertex_labels: tuple[int, ...]
    hyperedge_labels: tuple[int, ...]


@dataclass(frozen=True)
class HwlSequence:
    hypergraph: Hypergraph
    states: tuple[LabelState, ...]

    @property
    def height(self) -> int:
        return len(self.states) - 1


class Outcome(enum.Enum):
    NON_ISOMORPHIC = "non-isomorphic"
    POSSIBLY_ISOMORPHIC = "possibly-isomorphic"


@dataclass(frozen=True)
class IsoVerdict:
    outcome: Outcome
    decided_at: Optional[int] = None

    @property
    def non_isomorphic(self) -> bool:
        return self.outcome is Outcome.NON_ISOMORPHIC


def initial_label_state(
    h: Hypergraph,
    interners: Interners,
    vertex_labels: Optional[Sequence[int]] = None,
    hyperedge_labels: Optional[Sequence[int]] = None,
) -> LabelState:
    """Iteration-0 labels: degree strings unless explicit input labels are given."""
    prof = degrees(h)
    if vertex_labels is None:
        vertex_labels = prof.vertex_degrees
    elif len(vertex_labels) != h.num_vertices:
        raise ValidationError("vertex_labels length does not match num_vertices")
    if hyperedge_labels is None:
        hyperedge_labels = prof.hyperedge_degrees
    elif len(hyperedge_labels) != h.num_hyperedges:
        raise ValidationError("hyperedge_labels length does not match the hyperedge count")
    vi, ei = interners.vertex.intern, interners.hyperedge.intern
    return LabelState(
        0,
        tuple(vi(str(x)) for x in vertex_labels),
        tuple(ei(str(x)) for x in hyperedge_labels),
    )


def refine_round(h: Hypergraph, state: LabelState, interners: Interners) -> LabelState:
    """One iteration: vertex labels -> hyperedge labels, then hyperedge labels -> vertex labels."""
    vlab = state.vertex_labels
    intern_e = interners.hyperedge.intern
    new_e = tuple(
        intern_e(refinement_string(prev, [vlab[v] for v in edge]))
        for prev, edge in zip(state.hyperedge_labels, h.hyperedges)
    )
    intern_v = interners.vertex.intern
    new_v = tuple(
        intern_v(refinement_string(prev, [new_e[e] for e in inc]))
        for prev, inc in zip(vlab, h.incidence)
    )
    return LabelState(state.iteration + 1, new_v, new_e)


def wl_sequence(
    h: Hypergraph,
    iterations: int,
    interners: Interners,
    vertex_labels: Optional[Sequence[int]] = None,
) -> HwlSequence:
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    state = initial_label_state(h, interners, vertex_labels)
    states = [state]
    for _ in range(iterations):
        state = refine_round(h, state, interners)
        states.append(state)
    return HwlSequence(h, tuple(states))


def hwl_isomorphism_test(g1: Hypergraph, g2: Hypergraph, max_iterations: int) -> IsoVerdict:
    """One-sided test: NON_ISOMORPHIC is certain, POSSIBLY_ISOMORPHIC is not."""
    if max_iterations < 0:
        raise ValueError("max_iterations must be non-negative")
    if g1.num_vertices != g2.num_vertices or g1.num_hyperedges != g2.num_hyperedges:
        return IsoVerdict(Outcome.NON_ISOMORPHIC, 0)
    interners = Interners()
    s1 = initial_label_state(g1, interners)
    s2 = initial_label_state(g2, interners)
    i = 0
    while True:
        if Counter(s1.vertex_labels) != Counter(s2.vertex_labels):
            return IsoVerdict(Outcome.NON_ISOMORPHIC, i)
        if i >= max_iterations:
            return IsoVerdict(Outcome.POSSIBLY_ISOMORPHIC)
        s1 = refine_round(g1, s1, interners)
        s2 = refine_round(g2, s2, interners)
        i += 1


def _check_graph(g: Hypergraph) -> list[list[int]]:
    if not g.is_uniform(2):
        raise ValidationError("graph WL requires a 2-uniform hypergraph")
    adj: list[list[int]] = [[] for _ in range(g.num_vertices)]
    for u, w in g.hyperedges:
        adj[u].append(w)
        adj[w].append(u)
    return adj


def graph_wl_sequence(
    g: Hypergraph,
    iterations: int,
    interner: LabelInterner,
    vertex_labels: Optional[Sequence[int]] = None,
) -> HwlSequence:
    """Classical single-stage vertex refinement over vertex neighbours.

    States carry no hyperedge labels (``hyperedge_labels == ()``).
    """
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    adj = _check_graph(g)
    if vertex_labels is None:
        vertex_labels = [len(a) for a in adj]
    labels = tuple(interner.intern(str(x)) for x in vertex_labels)
    states = [LabelState(0, labels, ())]
    for i in range(1, iterations + 1):
        labels = tuple(
            interner.intern(refinement_string(labels[v], [labels[u] for u in adj[v]]))
            for v in range(g.num_vertices)
        )
        states.append(LabelState(i, labels, ()))
    return HwlSequence(g, tuple(states))


def graph_wl_test(g1: Hypergraph, g2: Hypergraph, max_iterations: int) -> IsoVerdict:
    """Graph WL isomorphism test on 2-uniform inputs."""
    _check_graph(g1)
    _check_graph(g2)
    if g1.num_vertices != g2.num_vertices or g1.num_hyperedges != g2.num_hyperedges:
        return IsoVerdict(Outcome.NON_ISOMORPHIC, 0)
    interner = LabelInterner()
    seq1 = graph_wl_sequence(g1, max_iterations, interner)
    seq2 = graph_wl_sequence(g2, max_iterations, interner)
    for s1, s2 in zip(seq1.states, seq2.states):
        if Counter(s1.vertex_labels) != Counter(s2.vertex_labels):
            return IsoVerdict(Outcome.NON_ISOMORPHIC, s1.iteration)
    return IsoVerdict(Outcome.POSSIBLY_ISOMORPHIC)


def partition(labels: Sequence[int]) -> frozenset[frozenset[int]]:
    """Label-id-agnostic view of a labeling: the set of its colour classes."""
    classes: dict[int, set[int]] = {}
    for v, lab in enumerate(labels):
        classes.setdefault(lab, set()).add(v)
    return frozenset(frozenset(c) for c in classes.values())
