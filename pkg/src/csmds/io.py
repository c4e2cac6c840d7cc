"""CSV persistence for matrices, point sets and traces, plus run manifests."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import platform
from pathlib import Path

import numpy as np

from .types import TraceRecord, ValidationError

FLOAT_FMT = "%.17g"
# wall-clock columns are excluded from reproducibility digests
TIMING_COLUMNS = frozenset({"elapsed_ms", "embed_time_ms"})


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return FLOAT_FMT % float(x)


def write_table(path, header, rows, append: bool = False) -> None:
    """Write a headered CSV; with ``append`` the header is skipped if the file exists."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    append = append and path.exists()
    with open(path, "a" if append else "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if not append:
            w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else _fmt(v) for v in row])


def read_table(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        try:
            header = next(r)
        except StopIteration:
            raise ValidationError(f"{path}: empty file") from None
        return header, [row for row in r if row]


def write_matrix(path, values, prefix: str = "c", extra: dict | None = None) -> None:
    """Dense rows with a leading ``index`` column; ``extra`` adds named trailing columns."""
    values = np.asarray(values, dtype=np.float64)
    extra = extra or {}
    header = ["index"] + [f"{prefix}{j}" for j in range(values.shape[1])] + list(extra)
    cols = [np.asarray(v) for v in extra.values()]
    lines = io.StringIO()
    lines.write(",".join(header) + "\n")
    for i, row in enumerate(values):
        parts = [str(i)] + [FLOAT_FMT % v for v in row] + [_fmt(c[i]) for c in cols]
        lines.write(",".join(parts) + "\n")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(lines.getvalue())


def read_matrix(path, named: tuple[str, ...] = ("aux", "label")):
    """Read a CSV written by :func:`write_matrix`.

    Returns ``(values, extras)`` where ``extras`` maps any of the ``named``
    trailing columns that are present to their arrays.
    """
    header, rows = read_table(path)
    if not header or header[0] != "index":
        raise ValidationError(f"{path}: first column must be 'index'")
    try:
        data = np.array(rows, dtype=np.float64)
    except ValueError as exc:
        raise ValidationError(f"{path}: non-numeric entry ({exc})") from None
    if data.ndim != 2 or data.shape[1] != len(header):
        raise ValidationError(f"{path}: ragged rows")
    if not np.array_equal(data[:, 0], np.arange(len(data))):
        raise ValidationError(f"{path}: index column is not 0..N-1")
    extras = {}
    keep = []
    for j, name in enumerate(header[1:], start=1):
        if name in named:
            extras[name] = data[:, j]
        else:
            keep.append(j)
    if "label" in extras:
        extras["label"] = extras["label"].astype(np.int64)
    return np.ascontiguousarray(data[:, keep]), extras


def write_trace(path, trace) -> None:
    write_table(path, TraceRecord.FIELDS, (rec.as_row() for rec in trace))


def read_trace(path) -> list[TraceRecord]:
    header, rows = read_table(path)
    if tuple(header) != TraceRecord.FIELDS:
        raise ValidationError(f"{path}: unexpected trace header {header}")
    return [TraceRecord(int(r[0]), float(r[1]), float(r[2]), int(r[3]), float(r[4]))
            for r in rows]


def content_digest(path) -> str:
    """SHA-256 of a file, ignoring wall-clock columns when it is a CSV."""
    path = Path(path)
    if path.suffix != ".csv":
        return hashlib.sha256(path.read_bytes()).hexdigest()
    header, rows = read_table(path)
    keep = [j for j, name in enumerate(header) if name not in TIMING_COLUMNS]
    h = hashlib.sha256()
    for row in [header] + rows:
        h.update((",".join(row[j] for j in keep) + "\n").encode())
    return h.hexdigest()


def write_manifest(path, command: str, argv: list[str], config: dict, seed,
                   inputs: dict, outputs: dict, cwd: str, **extra) -> dict:
    from . import __version__
    from ._backend import NAME

    manifest = {
        "tool": "csmds",
        "version": __version__,
        "backend": NAME,
        "python": platform.python_version(),
        "command": command,
        "argv": list(argv),
        "cwd": cwd,
        "seed": seed,
        "config": config,
        "inputs": {k: {"path": str(p), "sha256": content_digest(p)} for k, p in inputs.items()},
        "outputs": {k: {"path": str(p), "sha256": content_digest(p)} for k, p in outputs.items()},
    }
    manifest.update(extra)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def read_manifest(path) -> dict:
    return json.loads(Path(path).read_text())
