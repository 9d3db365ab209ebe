"""Plain-text code files and census CSV.

Code file: a header ``d N mode`` followed by N coordinate rows. In float mode
the rows are decimals. In exact mode they are integers, and a final line
``/sqrt(n0)`` records the shared squared norm. Exact rows may be wider than
d when the code sits in a subspace of a larger lattice.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from pathlib import Path

import numpy as np

from .catalog import SphericalCode
from .census import Census


def dumps_code(c: SphericalCode, exact: bool | None = None) -> str:
    exact = c.is_exact if exact is None else exact
    if exact and not c.is_exact:
        raise ValueError(f"{c.label or 'code'} has no exact model")
    out = io.StringIO()
    out.write(f"{c.dim} {c.N} {'exact' if exact else 'float'}\n")
    if exact:
        for row in c.exact.Z:
            out.write(" ".join(str(int(v)) for v in row) + "\n")
        out.write(f"/sqrt({c.exact.n0})\n")
    else:
        for row in c.points:
            out.write(" ".join(repr(float(v)) for v in row) + "\n")
    return out.getvalue()


def write_code(path, c: SphericalCode, exact: bool | None = None) -> None:
    Path(path).write_text(dumps_code(c, exact))


def loads_code(text: str, label: str = "") -> SphericalCode:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty code file")
    head = lines[0].split()
    if len(head) != 3 or head[2] not in ("float", "exact"):
        raise ValueError("header must be 'd N mode' with mode float|exact")
    d, N, mode = int(head[0]), int(head[1]), head[2]
    body = lines[1:]
    if mode == "exact":
        if not body or not body[-1].startswith("/sqrt(") or not body[-1].endswith(")"):
            raise ValueError("exact code file must end with a /sqrt(n0) line")
        n0 = int(body[-1][len("/sqrt("):-1])
        rows = body[:-1]
        if len(rows) != N:
            raise ValueError(f"header says {N} rows, found {len(rows)}")
        Z = np.array([[int(v) for v in r.split()] for r in rows], dtype=np.int64)
        return SphericalCode.from_exact(Z, n0, d, label)
    if len(body) != N:
        raise ValueError(f"header says {N} rows, found {len(body)}")
    pts = np.array([[float(v) for v in r.split()] for r in body])
    if pts.shape[1] != d:
        raise ValueError(f"rows have {pts.shape[1]} coordinates, header says {d}")
    return SphericalCode(d, pts, None, label)


def read_code(path) -> SphericalCode:
    return loads_code(Path(path).read_text(), label=Path(path).stem)


def _fmt(a) -> str:
    if isinstance(a, Fraction):
        return f"{a.numerator}/{a.denominator}"
    return repr(float(a))


def census_csv(cen: Census) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["alpha", "count", "max_deviation"])
    for a, n, dev in zip(cen.reference_values, cen.counts, cen.max_deviation):
        w.writerow([_fmt(a), n, repr(float(dev))])
    w.writerow(["other", cen.catch_all, ""])
    return out.getvalue()
