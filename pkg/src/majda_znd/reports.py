"""Deterministic file output: canonical JSON, CSV, atomic writes."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def _canonical(obj: Any) -> str:
    if obj is None or isinstance(obj, bool):
        return "null" if obj is None else ("true" if obj else "false")
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if obj == 0.0:
            obj = 0.0  # no signed zero in reports
        return format_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, complex):
        return _canonical([obj.real, obj.imag])
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=True)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ",".join(f"{_canonical(k)}:{_canonical(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_canonical(v) for v in obj) + "]"
    if hasattr(obj, "item"):  # numpy scalar
        return _canonical(obj.item())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def canonical_json(obj: Any) -> str:
    """Sorted keys, ``%.17g`` floats, non-finite floats as ``null``, trailing newline."""
    return _canonical(obj) + "\n"


def atomic_write(path: str | os.PathLike, text: str) -> Path:
    """Write via a temporary file in the target directory and rename over the target."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
    return path


def _cell(v: Any) -> str:
    if isinstance(v, (float, np.floating)):
        return format_float(v) if math.isfinite(v) else "nan"
    return "" if v is None else str(v)


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    return atomic_write(path, csv_text(header, rows))


def write_json(path, obj: Any) -> Path:
    return atomic_write(path, canonical_json(obj))


def emit_report(report, path) -> Path:
    """Write a :class:`~majda_znd.stability.StabilityReport` as canonical JSON."""
    return write_json(path, report.to_dict())


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def gnuplot_script(csv_name: str, x_col: int, y_cols: Sequence[int], labels: Sequence[str], title: str) -> str:
    plots = ", ".join(
        f"'{csv_name}' using {x_col}:{c} with lines title '{lab}'" for c, lab in zip(y_cols, labels)
    )
    return (
        "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        f"set title '{title}'\n"
        f"plot {plots}\n"
    )
