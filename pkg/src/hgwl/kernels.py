"""WL subtree / hyperedge feature maps and Gram-matrix computation."""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import sparse

from hgwl.core import Hypergraph, ValidationError
from hgwl.refine import (
    UNSEEN,
    HwlSequence,
    Interners,
    graph_wl_sequence,
    wl_sequence,
)

SUBTREE = "subtree"
HYPEREDGE = "hyperedge"
GRAPH_SUBTREE = "graph-subtree"
KINDS = (SUBTREE, HYPEREDGE, GRAPH_SUBTREE)

FeatureKey = tuple[int, int]  # (iteration, label-or-code id)


@dataclass(frozen=True)
class FeatureVector:
    """Sparse count vector. ``kind`` fixes the meaning of the ids in the keys:
    vertex-label ids for the subtree kinds, hyperedge-code ids for ``hyperedge``.
    """

    kind: str
    counts: dict[FeatureKey, int]

    def __len__(self) -> int:
        return len(self.counts)

    def mass(self, iteration: int) -> int:
        return sum(c for (i, _), c in self.counts.items() if i == iteration)

    def sorted_items(self) -> list[tuple[FeatureKey, int]]:
        return sorted(self.counts.items())


@dataclass(frozen=True)
class HyperedgeCode:
    iteration: int
    code: tuple[int, ...]


@dataclass
class KernelMatrix:
    values: np.ndarray
    normalized: bool
    kind: str
    h: int

    @property
    def n(self) -> int:
        return self.values.shape[0]


def subtree_features(seq: HwlSequence, kind: str = SUBTREE) -> FeatureVector:
    counts: dict[FeatureKey, int] = {}
    for state in seq.states:
        for lab, c in Counter(state.vertex_labels).items():
            counts[(state.iteration, lab)] = c
    return FeatureVector(kind, counts)


def hyperedge_codes(seq: HwlSequence) -> list[list[HyperedgeCode]]:
    """Per iteration, the code of every hyperedge in hyperedge order."""
    out = []
    for state in seq.states:
        lab = state.vertex_labels
        out.append([
            HyperedgeCode(state.iteration, tuple(sorted(lab[v] for v in edge)))
            for edge in seq.hypergraph.hyperedges
        ])
    return out


def hyperedge_features(seq: HwlSequence, interners: Interners) -> FeatureVector:
    intern = interners.code.intern
    counts: dict[FeatureKey, int] = {}
    for per_iter in hyperedge_codes(seq):
        for hc, c in Counter(per_iter).items():
            cid = intern(",".join(map(str, hc.code)))
            key = (hc.iteration, cid)
            # every unseen code collapses onto UNSEEN, so accumulate
            counts[key] = counts.get(key, 0) + c
    return FeatureVector(HYPEREDGE, counts)


def featurize(
    batch: Sequence[Hypergraph],
    kind: str,
    h: int,
    interners: Optional[Interners] = None,
    vertex_labels: Optional[Sequence[Optional[Sequence[int]]]] = None,
) -> list[FeatureVector]:
    """Feature vectors for a batch, all interned through one set of namespaces."""
    if kind not in KINDS:
        raise ValueError(f"unknown kernel kind {kind!r}; expected one of {KINDS}")
    if interners is None:
        interners = Interners()
    labels = vertex_labels if vertex_labels is not None else [None] * len(batch)
    feats = []
    for g, vl in zip(batch, labels):
        if kind == GRAPH_SUBTREE:
            seq = graph_wl_sequence(g, h, interners.graph, vl)
            feats.append(subtree_features(seq, GRAPH_SUBTREE))
        else:
            seq = wl_sequence(g, h, interners, vl)
            if kind == SUBTREE:
                feats.append(subtree_features(seq))
            else:
                feats.append(hyperedge_features(seq, interners))
    return feats


def kernel_value(f: FeatureVector, g: FeatureVector) -> int:
    if f.kind != g.kind:
        raise ValueError(f"cannot combine {f.kind!r} and {g.kind!r} features")
    if len(f.counts) > len(g.counts):
        f, g = g, f
    other = g.counts
    return sum(c * other.get(k, 0) for k, c in f.counts.items())


def _vocabulary_index(features: Iterable[FeatureVector]) -> dict[FeatureKey, int]:
    keys = set()
    for fv in features:
        keys.update(fv.counts)
    return {k: j for j, k in enumerate(sorted(keys))}


def _design_matrix(features: Sequence[FeatureVector], index: dict[FeatureKey, int]) -> sparse.csr_matrix:
    rows, cols, vals = [], [], []
    for r, fv in enumerate(features):
        for k, c in fv.counts.items():
            j = index.get(k)
            if j is not None:
                rows.append(r)
                cols.append(j)
                vals.append(c)
    return sparse.csr_matrix(
        (np.asarray(vals, dtype=np.int64), (rows, cols)),
        shape=(len(features), len(index)),
        dtype=np.int64,
    )


def _product(a: sparse.csr_matrix, b: sparse.csr_matrix, workers: int) -> np.ndarray:
    """Exact integer ``a @ b.T``, optionally split into row blocks across threads."""
    bt = b.T.tocsc()
    if workers <= 1 or a.shape[0] < 2 * workers:
        return np.asarray((a @ bt).toarray(), dtype=np.int64)
    bounds = np.linspace(0, a.shape[0], workers + 1, dtype=int)
    blocks = [(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda lh: (a[lh[0]:lh[1]] @ bt).toarray(), blocks))
    return np.vstack(parts).astype(np.int64)


def gram(features: Sequence[FeatureVector], workers: int = 1) -> np.ndarray:
    """Raw integer Gram matrix of a feature batch."""
    kinds = {fv.kind for fv in features}
    if len(kinds) > 1:
        raise ValueError(f"mixed feature kinds in one batch: {sorted(kinds)}")
    index = _vocabulary_index(features)
    x = _design_matrix(features, index)
    return _product(x, x, workers)


def kernel_matrix(
    batch: Sequence[Hypergraph],
    kind: str,
    h: int,
    workers: int = 1,
    vertex_labels: Optional[Sequence[Optional[Sequence[int]]]] = None,
) -> KernelMatrix:
    if kind == GRAPH_SUBTREE:
        for idx, g in enumerate(batch):
            if not g.is_uniform(2):
                raise ValidationError(f"graph-subtree kernel needs 2-uniform input (item {idx})")
    feats = featurize(batch, kind, h, vertex_labels=vertex_labels)
    return KernelMatrix(gram(feats, workers), False, kind, h)


def _cosine(raw: np.ndarray, diag_rows: np.ndarray, diag_cols: np.ndarray) -> np.ndarray:
    denom = np.sqrt(np.outer(diag_rows.astype(float), diag_cols.astype(float)))
    out = np.zeros(raw.shape, dtype=float)
    np.divide(raw.astype(float), denom, out=out, where=denom > 0)
    return out


def normalize(km: KernelMatrix) -> KernelMatrix:
    """Cosine normalization; zero self-kernel rows get 0 off-diagonal and 1 on the diagonal."""
    d = np.diag(km.values).copy()
    out = _cosine(km.values, d, d)
    np.fill_diagonal(out, 1.0)
    return KernelMatrix(out, True, km.kind, km.h)


def vocabulary(features: Iterable[FeatureVector]) -> set[FeatureKey]:
    keys: set[FeatureKey] = set()
    for fv in features:
        keys.update(fv.counts)
    return keys


def project_test(test_features: FeatureVector, train_vocabulary: set[FeatureKey]) -> FeatureVector:
    """Drop every structure the training batch never produced."""
    return FeatureVector(
        test_features.kind,
        {k: c for k, c in test_features.counts.items() if k in train_vocabulary and k[1] != UNSEEN},
    )


def normalized_cross(
    test_features: Sequence[FeatureVector], train_features: Sequence[FeatureVector], workers: int = 1
) -> np.ndarray:
    """N_te x N_tr normalized kernel rows, with test features projected onto the train vocabulary."""
    index = _vocabulary_index(train_features)
    vocab = set(index)
    projected = [project_test(fv, vocab) for fv in test_features]
    x_tr = _design_matrix(train_features, index)
    x_te = _design_matrix(projected, index)
    raw = _product(x_te, x_tr, workers)
    self_te = np.asarray(x_te.multiply(x_te).sum(axis=1)).ravel()
    self_tr = np.asarray(x_tr.multiply(x_tr).sum(axis=1)).ravel()
    return _cosine(raw, self_te, self_tr)


def cross_kernel(
    train_batch: Sequence[Hypergraph],
    test_batch: Sequence[Hypergraph],
    kind: str,
    h: int,
    workers: int = 1,
) -> np.ndarray:
    """Normalized test-vs-train kernel; test items never extend the train vocabulary."""
    interners = Interners()
    train_feats = featurize(train_batch, kind, h, interners)
    test_feats = featurize(test_batch, kind, h, interners.frozen())
    return normalized_cross(test_feats, train_feats, workers)
