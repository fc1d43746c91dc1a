"""Deterministic CSV and manifest writers."""
from __future__ import annotations

import json
import math
import platform
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import NumericalIntegrityError

FLOAT_FORMAT = "{:.12g}"


def _format_column(name: str, values: Sequence[Any]) -> list[str]:
    arr = values if isinstance(values, np.ndarray) else None
    if arr is not None and arr.dtype.kind == "f":
        if not np.all(np.isfinite(arr)):
            raise NumericalIntegrityError(f"non-finite value in column {name!r}")
        return [FLOAT_FORMAT.format(x) for x in arr.tolist()]
    if arr is not None and arr.dtype.kind in "iu":
        return [str(x) for x in arr.tolist()]
    out = []
    for v in (values.tolist() if arr is not None else values):
        if v is None:
            out.append("")
        elif isinstance(v, bool):
            out.append("true" if v else "false")
        elif isinstance(v, (int, np.integer)):
            out.append(str(int(v)))
        elif isinstance(v, (float, np.floating)):
            if not math.isfinite(v):
                raise NumericalIntegrityError(f"non-finite value {v!r} in column {name!r}")
            out.append(FLOAT_FORMAT.format(float(v)))
        else:
            out.append(str(v))
    return out


def write_csv(path: str | Path, columns: Mapping[str, Sequence[Any]]) -> None:
    """Write column-major data: header row, then one newline-terminated row per record.

    Floats get 12 significant digits; NaN or infinity anywhere is refused.
    Rows are written in the order given.
    """
    names = list(columns)
    lengths = {len(columns[n]) for n in names}
    if len(lengths) > 1:
        raise ValueError(f"ragged columns: lengths {sorted(lengths)}")
    formatted = [_format_column(n, columns[n]) for n in names]
    lines = [",".join(names)]
    lines.extend(",".join(row) for row in zip(*formatted))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def versions() -> dict[str, str]:
    from . import __version__

    return {"xychain": __version__, "numpy": np.__version__, "python": platform.python_version()}


def write_manifest(path: str | Path, manifest: Mapping[str, Any]) -> None:
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")
