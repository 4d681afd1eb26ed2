"""Kernel classification harness: 1-NN / nearest-centroid, k-fold CV, metrics."""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from sklearn.metrics import accuracy_score, f1_score
from sklearn.model_selection import KFold, StratifiedKFold

from hgwl.core import Hypergraph, clique_expansion
from hgwl.kernels import GRAPH_SUBTREE, KINDS, SUBTREE, featurize, normalized_cross
from hgwl.refine import Interners
from hgwl.synth import LabeledDataset

CLASSIFIERS = ("knn1", "nearest-centroid")
DEFAULT_SEEDS = (2021, 2022, 2023, 2024, 2025)
SINGLE_METRICS = ("accuracy", "macro_f1")
MULTI_METRICS = ("emr", "eb_accuracy", "eb_precision")


@dataclass(frozen=True)
class EvalConfig:
    kind: str = SUBTREE
    h: int = 2
    folds: int = 5
    seeds: tuple[int, ...] = DEFAULT_SEEDS
    classifier: str = "knn1"

    def __post_init__(self):
        if self.folds < 2:
            raise ValueError("folds must be >= 2")
        if not self.seeds:
            raise ValueError("seeds must be nonempty")
        if self.classifier not in CLASSIFIERS:
            raise ValueError(f"unknown classifier {self.classifier!r}; expected one of {CLASSIFIERS}")
        if self.kind not in KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.h < 0:
            raise ValueError("h must be non-negative")


@dataclass(frozen=True)
class FoldResult:
    seed: int
    fold: int
    metrics: dict[str, float]


@dataclass
class MetricsReport:
    multi_label: bool
    per_fold: list[FoldResult] = field(default_factory=list)

    @property
    def metric_names(self) -> tuple[str, ...]:
        return MULTI_METRICS if self.multi_label else SINGLE_METRICS

    @property
    def mean(self) -> dict[str, float]:
        return {m: float(np.mean([f.metrics[m] for f in self.per_fold])) for m in self.metric_names}

    @property
    def std(self) -> dict[str, float]:
        return {m: float(np.std([f.metrics[m] for f in self.per_fold])) for m in self.metric_names}

    @property
    def accuracy(self) -> float:
        return self.mean["accuracy"]

    @property
    def macro_f1(self) -> float:
        return self.mean["macro_f1"]

    @property
    def emr(self) -> float:
        return self.mean["emr"]

    @property
    def eb_accuracy(self) -> float:
        return self.mean["eb_accuracy"]

    @property
    def eb_precision(self) -> float:
        return self.mean["eb_precision"]

    def table(self) -> str:
        lines = [f"{'metric':<14}{'mean':>10}{'std':>10}"]
        mean, std = self.mean, self.std
        for m in self.metric_names:
            lines.append(f"{m:<14}{mean[m]:>10.4f}{std[m]:>10.4f}")
        lines.append(f"{'runs':<14}{len(self.per_fold):>10d}")
        return "\n".join(lines)


def knn1_predict(row: Sequence[float], train_targets: Sequence):
    """Target of the most similar train item; ties go to the lowest train index."""
    if len(train_targets) == 0:
        raise ValueError("empty training set")
    row = np.asarray(row, dtype=float)
    if row.shape[0] != len(train_targets):
        raise ValueError("kernel row length does not match the number of train items")
    return train_targets[int(np.argmax(row))]


def nearest_centroid_predict(row: Sequence[float], train_targets: Sequence, train_gram: np.ndarray,
                             self_value: float = 1.0):
    """Closest class mean in the kernel feature space (squared RKHS distance)."""
    if len(train_targets) == 0:
        raise ValueError("empty training set")
    row = np.asarray(row, dtype=float)
    groups: dict = {}
    for i, t in enumerate(train_targets):
        groups.setdefault(t, []).append(i)
    best, best_d = None, np.inf
    for t, idx in groups.items():  # insertion order == first train occurrence
        idx = np.asarray(idx)
        d = self_value - 2.0 * row[idx].mean() + train_gram[np.ix_(idx, idx)].mean()
        if d < best_d:
            best, best_d = t, d
    return best


def score_single(preds: Sequence, truths: Sequence) -> tuple[float, float]:
    if len(preds) != len(truths):
        raise ValueError("preds and truths differ in length")
    if not preds:
        raise ValueError("cannot score empty predictions")
    acc = accuracy_score(list(truths), list(preds))
    f1 = f1_score(list(truths), list(preds), average="macro", zero_division=0)
    return float(acc), float(f1)


def score_multi(pred_sets: Sequence, truth_sets: Sequence) -> tuple[float, float, float]:
    """Exact match ratio, example-based accuracy (Jaccard) and precision."""
    if len(pred_sets) != len(truth_sets):
        raise ValueError("pred_sets and truth_sets differ in length")
    if not pred_sets:
        raise ValueError("cannot score empty predictions")
    emr = acc = prec = 0.0
    for p, t in zip(pred_sets, truth_sets):
        p, t = set(p), set(t)
        if not t:
            raise ValueError("truth label sets must be nonempty")
        inter = len(p & t)
        emr += p == t
        acc += inter / len(p | t)
        prec += inter / len(p) if p else 0.0
    n = len(pred_sets)
    return emr / n, acc / n, prec / n


def _splits(targets: Sequence, folds: int, seed: int, multi: bool):
    n = len(targets)
    idx = np.zeros(n)
    if multi:
        return list(KFold(folds, shuffle=True, random_state=seed).split(idx))
    y = np.asarray(targets)
    _, counts = np.unique(y, return_counts=True)
    if counts.max() < folds:
        warnings.warn("every class has fewer members than folds; falling back to unstratified folds")
        return list(KFold(folds, shuffle=True, random_state=seed).split(idx))
    if counts.min() < folds:
        warnings.warn(f"smallest class has {counts.min()} members (< {folds} folds); stratification is best-effort")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        return list(StratifiedKFold(folds, shuffle=True, random_state=seed).split(idx, y))


def _run_fold(task) -> FoldResult:
    seed, fold, hgs, vlabels, targets, train_idx, test_idx, cfg, multi = task
    train = [hgs[i] for i in train_idx]
    test = [hgs[i] for i in test_idx]
    vl_tr = [vlabels[i] for i in train_idx] if vlabels is not None else None
    vl_te = [vlabels[i] for i in test_idx] if vlabels is not None else None
    interners = Interners()
    f_tr = featurize(train, cfg.kind, cfg.h, interners, vl_tr)
    f_te = featurize(test, cfg.kind, cfg.h, interners.frozen(), vl_te)
    rows = normalized_cross(f_te, f_tr)
    t_tr = [targets[i] for i in train_idx]
    t_te = [targets[i] for i in test_idx]
    if cfg.classifier == "knn1":
        preds = [knn1_predict(r, t_tr) for r in rows]
    else:
        g_tr = normalized_cross(f_tr, f_tr)
        preds = [nearest_centroid_predict(r, t_tr, g_tr, 1.0 if r.any() else 0.0) for r in rows]
    if multi:
        vals = dict(zip(MULTI_METRICS, score_multi(preds, t_te)))
    else:
        vals = dict(zip(SINGLE_METRICS, score_single(preds, t_te)))
    return FoldResult(seed, fold, vals)


def cross_validate(ds: LabeledDataset, cfg: EvalConfig, workers: int = 1) -> MetricsReport:
    """k-fold CV repeated over seeds; every fold builds its vocabulary from train items only.

    The graph-subtree kind runs on clique expansions of the inputs.
    """
    if len(ds) < cfg.folds:
        raise ValueError(f"dataset has {len(ds)} items, fewer than {cfg.folds} folds")
    multi = ds.multi_label
    hgs: list[Hypergraph] = list(ds.hypergraphs)
    if cfg.kind == GRAPH_SUBTREE:
        hgs = [clique_expansion(g) for g in hgs]
    targets = list(ds.targets)
    tasks = []
    for seed in cfg.seeds:
        for fold, (tr, te) in enumerate(_splits(targets, cfg.folds, seed, multi)):
            tasks.append((seed, fold, hgs, ds.vertex_labels, targets, tr, te, cfg, multi))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_fold, tasks))
    else:
        results = [_run_fold(t) for t in tasks]
    return MetricsReport(multi, results)
