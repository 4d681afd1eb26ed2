"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import statistics
import sys
import time
import timeit
from contextlib import nullcontext
from functools import lru_cache
from math import comb

import numpy as np
import pytest

from hgwl.core import build_hypergraph, clique_expansion, permute
from hgwl.eval import EvalConfig, cross_validate
from hgwl.kernels import GRAPH_SUBTREE, HYPEREDGE, SUBTREE, featurize, kernel_matrix, normalize
from hgwl.oracle import brute_force_isomorphic
from hgwl.refine import hwl_isomorphism_test
from hgwl.synth import GeneratorSpec, gen_dataset, gen_gnm, gnm_capacity

SEEDS = (2021, 2022, 2023, 2024, 2025)
SCALING_SIZES = (5_000, 10_000, 20_000, 40_000)


def report(capsys, number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} ({detail})"
    with capsys.disabled() if capsys is not None else nullcontext():
        print(f"\n{line}", flush=True)
    assert ok, line


# ---- batches (cached so criterion 10 can revisit every one of them) ----

@lru_cache(maxsize=None)
def graph_batch() -> tuple:
    rng = np.random.default_rng(1)
    out = []
    for s in range(50):
        n = int(rng.integers(2, 21))
        m = int(rng.integers(1, min(40, comb(n, 2)) + 1))
        out.append(gen_gnm(n, m, seed=1000 + s, degree=2))
    return tuple(out)


@lru_cache(maxsize=None)
def psd_batches() -> tuple:
    return tuple(tuple(gen_gnm(30, 90, seed=b * 100 + i) for i in range(32)) for b in range(20))


@lru_cache(maxsize=None)
def iso_pairs() -> tuple:
    rng = np.random.default_rng(3)
    pairs = []
    for k in range(500):
        n = int(rng.integers(2, 8))
        m = int(rng.integers(1, min(10, gnm_capacity(n)) + 1))
        g = gen_gnm(n, m, seed=5000 + k)
        if k % 2 == 0:
            perm = [int(x) for x in rng.permutation(n)]
            pairs.append((g, permute(g, perm), True))
        else:
            pairs.append((g, gen_gnm(n, m, seed=9000 + k), False))
    return tuple(pairs)


@lru_cache(maxsize=None)
def permutation_cases() -> tuple:
    rng = np.random.default_rng(4)
    refs = tuple(gen_gnm(12, 24, seed=700 + i) for i in range(6))
    cases = []
    for k in range(100):
        n = int(rng.integers(4, 16))
        g = gen_gnm(n, int(rng.integers(n, 3 * n)), seed=8000 + k)
        cases.append((g, [int(x) for x in rng.permutation(n)]))
    return refs, tuple(cases)


@lru_cache(maxsize=None)
def dataset(family: str, count: int):
    return gen_dataset(GeneratorSpec(family, count, 2021))


@lru_cache(maxsize=None)
def scaling_batch(m: int):
    return gen_gnm(m // 5, m, seed=m)


def accuracy(family: str, count: int, kind: str) -> float:
    cfg = EvalConfig(kind=kind, h=2, folds=5, seeds=SEEDS, classifier="knn1")
    return cross_validate(dataset(family, count), cfg).accuracy


# ---- criteria ----

def test_01_graph_kernel_degeneration(capsys):
    t0 = time.perf_counter()
    batch = list(graph_batch())
    mismatches = []
    for h in range(4):
        a = kernel_matrix(batch, SUBTREE, h).values
        b = kernel_matrix(batch, GRAPH_SUBTREE, h).values
        if not np.array_equal(a, b):
            mismatches.append(h)
    dt = time.perf_counter() - t0
    ok = not mismatches and dt < 10
    report(capsys, 1, "subtree == graph-subtree raw Gram on 2-uniform inputs",
           ok, f"50 graphs, h=0..3, mismatched h={mismatches}, {dt:.2f}s < 10s")


def test_02_positive_semidefinite(capsys):
    t0 = time.perf_counter()
    worst = math.inf
    for batch in psd_batches():
        for kind in (SUBTREE, HYPEREDGE):
            eig = np.linalg.eigvalsh(kernel_matrix(list(batch), kind, 3).values.astype(float))
            worst = min(worst, eig.min() / eig.max())
    dt = time.perf_counter() - t0
    ok = worst >= -1e-8 and dt < 30
    report(capsys, 2, "raw Gram matrices are PSD", ok,
           f"20 batches x 2 kernels, worst min/max eigenvalue {worst:.3e} >= -1e-8, {dt:.2f}s < 30s")


def test_03_isomorphism_soundness(capsys):
    t0 = time.perf_counter()
    violations = permuted_misses = 0
    for a, b, is_copy in iso_pairs():
        verdict = hwl_isomorphism_test(a, b, a.num_vertices)
        if verdict.non_isomorphic and brute_force_isomorphic(a, b):
            violations += 1
        if is_copy and verdict.non_isomorphic:
            permuted_misses += 1
    dt = time.perf_counter() - t0
    ok = violations == 0 and permuted_misses == 0 and dt < 60
    report(capsys, 3, "HWL test never contradicts the brute-force oracle", ok,
           f"500 pairs, {violations} violations, {permuted_misses} permuted copies rejected, {dt:.2f}s < 60s")


def test_04_permutation_invariance(capsys):
    refs, cases = permutation_cases()
    failures = 0
    for g, perm in cases:
        gp = permute(g, perm)
        for kind in (SUBTREE, HYPEREDGE):
            k = kernel_matrix([g, gp, *refs], kind, 3).values
            if not (k[0, 0] == k[1, 1] == k[0, 1] and np.array_equal(k[0, 2:], k[1, 2:])):
                failures += 1
    report(capsys, 4, "kernel values invariant under vertex permutation", failures == 0,
           f"100 cases x 2 kernels, {failures} mismatches")


def test_05_rhg3(capsys):
    t0 = time.perf_counter()
    acc = {kind: accuracy("rhg-3", 300, kind) for kind in (SUBTREE, HYPEREDGE)}
    dt = time.perf_counter() - t0
    ok = all(a >= 0.99 for a in acc.values()) and dt < 120
    report(capsys, 5, "rhg-3 accuracy >= 0.99 for both HWL kernels", ok,
           f"subtree {acc[SUBTREE]:.4f}, hyperedge {acc[HYPEREDGE]:.4f}, {dt:.1f}s < 120s")


def test_06_rhg_pyramid(capsys):
    t0 = time.perf_counter()
    hwl = accuracy("rhg-pyramid", 300, SUBTREE)
    graph = accuracy("rhg-pyramid", 300, GRAPH_SUBTREE)
    dt = time.perf_counter() - t0
    ok = hwl >= 0.95 and graph <= 0.65 and dt < 120
    report(capsys, 6, "rhg-pyramid: HWL >= 0.95, graph WL on expansions <= 0.65", ok,
           f"subtree {hwl:.4f}, graph-subtree {graph:.4f}, {dt:.1f}s < 120s")


def test_07_rhg_table(capsys):
    t0 = time.perf_counter()
    acc = {kind: accuracy("rhg-table", 200, kind) for kind in (SUBTREE, HYPEREDGE, GRAPH_SUBTREE)}
    dt = time.perf_counter() - t0
    ok = acc[SUBTREE] == 1.0 and acc[HYPEREDGE] == 1.0 and acc[GRAPH_SUBTREE] <= 0.65 and dt < 120
    report(capsys, 7, "rhg-table: HWL exactly 1.0, graph WL on expansions <= 0.65", ok,
           f"subtree {acc[SUBTREE]:.4f}, hyperedge {acc[HYPEREDGE]:.4f}, "
           f"graph-subtree {acc[GRAPH_SUBTREE]:.4f}, {dt:.1f}s < 120s")


def test_08_linear_scaling(capsys):
    # timeit turns the cyclic collector off while timing; one untimed warm-up
    # per size absorbs allocator growth, and sizes are interleaved round by
    # round so background load drifts across all of them alike
    medians = {}
    for kind in (SUBTREE, HYPEREDGE):
        timers = {m: timeit.Timer(lambda g=scaling_batch(m): featurize([g], kind, 3)) for m in SCALING_SIZES}
        for t in timers.values():
            t.timeit(1)
        runs = {m: [] for m in SCALING_SIZES}
        for _ in range(5):
            for m, t in timers.items():
                runs[m].append(t.timeit(1))
        for m in SCALING_SIZES:
            medians[kind, m] = statistics.median(runs[m])
    ratios = {
        kind: [medians[kind, b] / medians[kind, a] for a, b in zip(SCALING_SIZES, SCALING_SIZES[1:])]
        for kind in (SUBTREE, HYPEREDGE)
    }
    ok = all(r <= 2.5 for rs in ratios.values() for r in rs)
    detail = "; ".join(f"{k} ratios " + ", ".join(f"{r:.2f}" for r in rs) for k, rs in ratios.items())
    report(capsys, 8, "featurization time grows <= 2.5x per doubling of m", ok, f"h=3, m=5k..40k, {detail}")


def test_09_golden_values(capsys):
    g1 = build_hypergraph(3, [[0, 1, 2]])
    g2 = build_hypergraph(3, [[0, 1], [1, 2]])
    raw = kernel_matrix([g1, g2], SUBTREE, 0)
    off = normalize(raw).values[0, 1]
    ok = raw.values.tolist() == [[9, 6], [6, 5]] and abs(off - 6 / math.sqrt(45)) <= 1e-12
    report(capsys, 9, "hand-computed kernel values", ok,
           f"raw {raw.values.tolist()}, normalized off-diagonal {off:.15f}")


def test_10_feature_mass(capsys):
    refs, cases = permutation_cases()
    batches = {
        "2-uniform graphs": list(graph_batch()),
        "psd batches": [g for b in psd_batches() for g in b],
        "isomorphism pairs": [g for a, b, _ in iso_pairs() for g in (a, b)],
        "permutation cases": list(refs) + [g for g, p in cases] + [permute(g, p) for g, p in cases],
        "rhg-3": dataset("rhg-3", 300).hypergraphs,
        "rhg-pyramid": dataset("rhg-pyramid", 300).hypergraphs,
        "rhg-table": dataset("rhg-table", 200).hypergraphs,
        "scaling": [scaling_batch(m) for m in SCALING_SIZES],
    }
    checked = bad = 0
    h = 3
    for batch in batches.values():
        subtree = featurize(batch, SUBTREE, h)
        hyper = featurize(batch, HYPEREDGE, h)
        for g, fs, fe in zip(batch, subtree, hyper):
            checked += 1
            if any(fs.mass(i) != g.num_vertices or fe.mass(i) != g.num_hyperedges for i in range(h + 1)):
                bad += 1
        # expansion features as fed to the graph-subtree kernel
        expanded = [clique_expansion(g) for g in batch]
        for g, fv in zip(expanded, featurize(expanded, GRAPH_SUBTREE, h)):
            if any(fv.mass(i) != g.num_vertices for i in range(h + 1)):
                bad += 1
    report(capsys, 10, "per-iteration feature counts sum to |V| and |E|", bad == 0,
           f"{checked} hypergraphs across {len(batches)} suite batches, {bad} violations")


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    failed = 0
    for test in tests:
        try:
            test(None)
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
