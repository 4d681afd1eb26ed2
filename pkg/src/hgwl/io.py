"""Dataset (JSON lines) and kernel matrix (CSV with header) persistence.

Dataset file: one JSON object per line with keys ``id``, ``num_vertices``,
``hyperedges`` (list of vertex-id lists), ``target`` (int, or list of ints for
multi-label) and optionally ``vertex_labels`` (list of ints).

Matrix file: header ``n=<N>,normalized=<0|1>,kind=<kind>,h=<int>`` followed by
N comma-separated rows. Raw matrices hold integers; normalized ones use 17
significant digits so every binary64 value round-trips.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

import numpy as np

from hgwl.core import ValidationError, build_hypergraph
from hgwl.kernels import KINDS, KernelMatrix
from hgwl.synth import LabeledDataset

PathLike = Union[str, Path]


class FormatError(ValueError):
    """A dataset or matrix file could not be parsed."""


def save_dataset(ds: LabeledDataset, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for k, (hg, target) in enumerate(ds.items):
            rec = {
                "id": ds.ids[k],
                "num_vertices": hg.num_vertices,
                "hyperedges": [list(e) for e in hg.hyperedges],
                "target": sorted(target) if isinstance(target, frozenset) else int(target),
            }
            if ds.vertex_labels is not None and ds.vertex_labels[k] is not None:
                rec["vertex_labels"] = list(ds.vertex_labels[k])
            fh.write(json.dumps(rec, separators=(",", ":")) + "\n")


def load_dataset(path: PathLike) -> LabeledDataset:
    hgs, targets, ids, vlabels = [], [], [], []
    multi = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(rec, dict):
                raise FormatError(f"{path}:{lineno}: record is not an object")
            rid = str(rec.get("id", lineno - 1))
            try:
                hg = build_hypergraph(int(rec["num_vertices"]), rec["hyperedges"])
                target = rec["target"]
            except KeyError as exc:
                raise FormatError(f"{path}:{lineno}: record {rid!r} lacks field {exc.args[0]!r}") from None
            except (ValidationError, TypeError, ValueError) as exc:
                raise ValidationError(f"record {rid!r} (line {lineno}): {exc}") from None
            is_list = isinstance(target, list)
            if multi is None:
                multi = is_list
            elif multi != is_list:
                raise ValidationError(f"record {rid!r} (line {lineno}): mixed scalar and list targets")
            if is_list:
                if not target:
                    raise ValidationError(f"record {rid!r} (line {lineno}): empty label set")
                target = frozenset(int(t) for t in target)
            else:
                target = int(target)
            labels = rec.get("vertex_labels")
            if labels is not None and len(labels) != hg.num_vertices:
                raise ValidationError(f"record {rid!r} (line {lineno}): vertex_labels length mismatch")
            hgs.append(hg)
            targets.append(target)
            ids.append(rid)
            vlabels.append([int(x) for x in labels] if labels is not None else None)
    classes = sorted({c for t in targets for c in (t if multi else [t])})
    names = [str(c) for c in range(max(classes) + 1)] if classes else []
    has_labels = any(v is not None for v in vlabels)
    return LabeledDataset(hgs, targets, names, ids, vlabels if has_labels else None)


def _fmt(v, normalized: bool) -> str:
    return format(float(v), ".17g") if normalized else str(int(v))


def save_matrix(km: KernelMatrix, path: PathLike) -> None:
    lines = [f"n={km.n},normalized={int(km.normalized)},kind={km.kind},h={km.h}"]
    for row in km.values:
        lines.append(",".join(_fmt(v, km.normalized) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _parse_header(line: str) -> dict[str, str]:
    try:
        fields = dict(part.split("=", 1) for part in line.strip().split(","))
    except ValueError:
        raise FormatError(f"malformed matrix header: {line.strip()!r}") from None
    if set(fields) != {"n", "normalized", "kind", "h"}:
        raise FormatError(f"matrix header must have n, normalized, kind, h: {line.strip()!r}")
    if fields["kind"] not in KINDS or fields["normalized"] not in ("0", "1"):
        raise FormatError(f"bad kind or normalized flag in header: {line.strip()!r}")
    return fields


def load_matrix(path: PathLike) -> KernelMatrix:
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
    if not lines:
        raise FormatError(f"{path}: empty matrix file")
    hdr = _parse_header(lines[0])
    n, normalized = int(hdr["n"]), hdr["normalized"] == "1"
    rows = lines[1:]
    if len(rows) != n:
        raise FormatError(f"{path}: header says n={n} but found {len(rows)} rows")
    conv = float if normalized else int
    try:
        data = [[conv(x) for x in row.split(",")] for row in rows]
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None
    if any(len(r) != n for r in data):
        raise FormatError(f"{path}: every row must have {n} entries")
    values = np.array(data, dtype=float if normalized else np.int64).reshape(n, n)
    if not np.array_equal(values, values.T):
        raise FormatError(f"{path}: matrix is not symmetric")
    return KernelMatrix(values, normalized, hdr["kind"], int(hdr["h"]))
