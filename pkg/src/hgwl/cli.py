"""Command-line entry point: ``hgwl <subcommand> ...``.

Exit codes: 0 success, 1 validation / format error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional, Sequence

from hgwl.core import ValidationError
from hgwl.eval import CLASSIFIERS, EvalConfig, cross_validate
from hgwl.io import FormatError, load_dataset, save_dataset, save_matrix
from hgwl.kernels import HYPEREDGE, KINDS, SUBTREE, featurize, kernel_matrix, normalize
from hgwl.refine import hwl_isomorphism_test
from hgwl.synth import FAMILIES, GeneratorSpec, gen_dataset, gen_gnm

SWEEPS = ("vertices", "hyperedges", "count", "degree")
# Sweep values follow the runtime-comparison settings; --count defaults are
# scaled down from 500 hypergraphs to keep a sweep under a minute.
SWEEP_DEFAULTS = {
    "vertices": [50, 100, 150, 200],
    "hyperedges": [50, 100, 150, 200],
    "count": [50, 100, 200, 500],
    "degree": [2, 3, 4, 5],
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _seed_list(text: str) -> list[int]:
    """``2021,2022`` or ``2021-2025``."""
    out = []
    for part in text.split(","):
        if "-" in part.strip()[1:]:
            lo, hi = part.rsplit("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hgwl", description="Hypergraph Weisfeiler-Lehman test and kernels")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a synthetic dataset")
    g.add_argument("--family", required=True, choices=FAMILIES)
    g.add_argument("--count", required=True, type=int)
    g.add_argument("--seed", required=True, type=int)
    g.add_argument("--size-range", nargs=2, type=int, metavar=("MIN", "MAX"))
    g.add_argument("--out", required=True)

    f = sub.add_parser("featurize", help="emit sparse feature vectors")
    f.add_argument("--in", dest="inp", required=True)
    f.add_argument("--kind", required=True, choices=KINDS)
    f.add_argument("--h", type=int, default=3)
    f.add_argument("--vertex-labels", action="store_true", help="initialize from stored vertex labels")
    f.add_argument("--out")

    m = sub.add_parser("gram", help="write a kernel matrix")
    m.add_argument("--in", dest="inp", required=True)
    m.add_argument("--kind", required=True, choices=KINDS)
    m.add_argument("--h", type=int, default=3)
    m.add_argument("--normalize", action="store_true")
    m.add_argument("--vertex-labels", action="store_true")
    m.add_argument("--workers", type=int, default=1)
    m.add_argument("--out", required=True)

    t = sub.add_parser("test-iso", help="hypergraph WL isomorphism test on two single-record files")
    t.add_argument("--a", required=True)
    t.add_argument("--b", required=True)
    t.add_argument("--h", type=int, default=3)

    c = sub.add_parser("classify", help="k-fold cross-validated kernel classification")
    c.add_argument("--in", dest="inp", required=True)
    c.add_argument("--kind", required=True, choices=KINDS)
    c.add_argument("--h", type=int, default=2)
    c.add_argument("--folds", type=int, default=5)
    c.add_argument("--seeds", required=True, type=_seed_list, help="e.g. 2021-2025 or 2021,2023")
    c.add_argument("--classifier", choices=CLASSIFIERS, default="knn1")
    c.add_argument("--workers", type=int, default=1)

    b = sub.add_parser("bench", help="runtime sweep, CSV on stdout")
    b.add_argument("--sweep", required=True, choices=SWEEPS)
    b.add_argument("--values", type=lambda s: [int(x) for x in s.split(",")])
    b.add_argument("--count", type=int, default=50)
    b.add_argument("--h", type=int, default=3)
    b.add_argument("--seed", type=int, default=2021)
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--out")
    return p


def _write_or_print(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_generate(args) -> None:
    spec = GeneratorSpec(args.family, args.count, args.seed,
                         tuple(args.size_range) if args.size_range else None)
    ds = gen_dataset(spec)
    save_dataset(ds, args.out)
    n = len(ds)
    print(f"family={args.family} count={n} classes={len(ds.class_names)} "
          f"avg_vertices={sum(g.num_vertices for g in ds.hypergraphs) / n:.2f} "
          f"avg_hyperedges={sum(g.num_hyperedges for g in ds.hypergraphs) / n:.2f} out={args.out}")


def _vertex_labels(ds, wanted: bool):
    if not wanted:
        return None
    if ds.vertex_labels is None:
        raise ValidationError("--vertex-labels given but the dataset stores no vertex_labels")
    return ds.vertex_labels


def _cmd_featurize(args) -> None:
    ds = load_dataset(args.inp)
    feats = featurize(ds.hypergraphs, args.kind, args.h,
                      vertex_labels=_vertex_labels(ds, args.vertex_labels))
    tag = "hyperedge-code" if args.kind == HYPEREDGE else "subtree-label"
    lines = []
    for rid, fv in zip(ds.ids, feats):
        rows = [[i, tag, lid, c] for (i, lid), c in fv.sorted_items()]
        lines.append(json.dumps({"id": rid, "kind": args.kind, "features": rows}, separators=(",", ":")))
    _write_or_print("\n".join(lines) + "\n", args.out)
    if args.out:
        print(f"featurized {len(feats)} hypergraphs kind={args.kind} h={args.h} out={args.out}")


def _cmd_gram(args) -> None:
    ds = load_dataset(args.inp)
    km = kernel_matrix(ds.hypergraphs, args.kind, args.h, workers=args.workers,
                       vertex_labels=_vertex_labels(ds, args.vertex_labels))
    if args.normalize:
        km = normalize(km)
    save_matrix(km, args.out)
    print(f"n={km.n} kind={km.kind} h={km.h} normalized={int(km.normalized)} out={args.out}")


def _single(path: str):
    ds = load_dataset(path)
    if len(ds) != 1:
        raise ValidationError(f"{path}: expected exactly one record, found {len(ds)}")
    return ds.hypergraphs[0]


def _cmd_test_iso(args) -> None:
    verdict = hwl_isomorphism_test(_single(args.a), _single(args.b), args.h)
    if verdict.non_isomorphic:
        print(f"{verdict.outcome.value} decided_at={verdict.decided_at}")
    else:
        print(verdict.outcome.value)


def _cmd_classify(args) -> None:
    ds = load_dataset(args.inp)
    cfg = EvalConfig(kind=args.kind, h=args.h, folds=args.folds, seeds=tuple(args.seeds),
                     classifier=args.classifier)
    report = cross_validate(ds, cfg, workers=args.workers)
    print(f"kind={cfg.kind} h={cfg.h} folds={cfg.folds} seeds={','.join(map(str, cfg.seeds))} "
          f"classifier={cfg.classifier} items={len(ds)}")
    print(report.table())


def _bench_batch(sweep: str, value: int, count: int, seed: int):
    n, m, degree = 50, 250, None
    if sweep == "vertices":
        n, m = value, 5 * value
    elif sweep == "hyperedges":
        m = value
    elif sweep == "count":
        count = value
    else:
        degree = value
    return [gen_gnm(n, m, seed=seed + i, degree=degree) for i in range(count)], n, m, count


def _cmd_bench(args) -> None:
    values = args.values or SWEEP_DEFAULTS[args.sweep]
    lines = ["sweep,value,num_hypergraphs,num_vertices,num_hyperedges,kind,seconds"]
    for value in values:
        batch, n, m, count = _bench_batch(args.sweep, value, args.count, args.seed)
        for kind in (SUBTREE, HYPEREDGE):
            t0 = time.perf_counter()
            kernel_matrix(batch, kind, args.h, workers=args.workers)
            dt = time.perf_counter() - t0
            lines.append(f"{args.sweep},{value},{count},{n},{m},{kind},{dt:.6f}")
    _write_or_print("\n".join(lines) + "\n", args.out)


COMMANDS = {
    "generate": _cmd_generate,
    "featurize": _cmd_featurize,
    "gram": _cmd_gram,
    "test-iso": _cmd_test_iso,
    "classify": _cmd_classify,
    "bench": _cmd_bench,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    try:
        COMMANDS[args.command](args)
    except (ValidationError, FormatError, ValueError, OSError) as exc:
        print(f"hgwl {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
