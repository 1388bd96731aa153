"""Input file formats and output emitters for the CLI.

Input formats (the token ``inf`` is the only spelling of an infinite
distance in every text format):

* distance-matrix CSV: square, comma-separated, no header;
* point-cloud CSV: one row per point, columns are coordinates;
* edge list: lines ``u v`` or ``u v length``;
* poset: lines ``a < b`` (cover relations) or a bare element name;
* region: the RegionSpec JSON documented in :mod:`magnitude.regions`.

Output: JSON numbers carry 17 significant digits, CSV numbers 12 --
reproducibility over prettiness.  CSV emitters write an optional leading
``# key: value`` metadata block, a header row, data rows, and optional
trailing ``#`` blocks (e.g. located singularities); the parser returns all
three parts so a parse -> re-emit round trip is byte identical.
"""

from __future__ import annotations

import json
import math
import re

import numpy as np

from .errors import ParseError
from .regions import RegionSpec, from_json as region_from_json
from .spaces import (
    FiniteMetricSpace,
    from_distance_matrix,
    from_graph,
    from_points,
    from_poset,
)

JSON_DIGITS = 17
CSV_DIGITS = 12


# --------------------------------------------------------------------------
# number formatting
# --------------------------------------------------------------------------

def fmt(x, digits: int = CSV_DIGITS) -> str:
    """Canonical text for a float; empty string for None."""
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.{digits}g}"


_FLOAT_TOKEN = "$magfloat:{}$"


def dumps_json(obj, digits: int = JSON_DIGITS) -> str:
    """json.dumps with every float rendered at ``digits`` significant digits.

    Floats are swapped for placeholder tokens before encoding and the
    tokens replaced afterwards, so the output stays a plain JSON document
    with full-precision numbers.
    """
    stash: list = []

    def swap(o):
        if isinstance(o, float):
            if math.isnan(o) or math.isinf(o):
                return None
            stash.append(o)
            return _FLOAT_TOKEN.format(len(stash) - 1)
        if isinstance(o, dict):
            return {k: swap(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [swap(v) for v in o]
        if isinstance(o, np.ndarray):
            return [swap(float(v)) for v in o.tolist()]
        if isinstance(o, (np.floating,)):
            return swap(float(o))
        if isinstance(o, (np.integer,)):
            return int(o)
        return o

    text = json.dumps(swap(obj), indent=2)
    def repl(match):
        idx = int(match.group(1))
        return fmt(stash[idx], digits)
    return re.sub(r'"\$magfloat:(\d+)\$"', repl, text)


# --------------------------------------------------------------------------
# input parsing
# --------------------------------------------------------------------------

def _parse_extended(token: str, where: str) -> float:
    tok = token.strip()
    if tok == "inf":
        return math.inf
    try:
        value = float(tok)
    except ValueError as exc:
        raise ParseError(f"{where}: bad number {token!r} "
                         "(use the token 'inf' for infinity)") from exc
    if math.isinf(value) or math.isnan(value):
        raise ParseError(f"{where}: {token!r} not accepted; "
                         "'inf' is the only infinite-distance token")
    return value


def read_distance_csv(text: str, generalized: bool = False) -> FiniteMetricSpace:
    rows = []
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([_parse_extended(tok, f"line {ln}")
                     for tok in line.split(",")])
    if not rows:
        raise ParseError("distance CSV is empty")
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ParseError("distance CSV must be square")
    return from_distance_matrix(np.array(rows), generalized=generalized)


def read_points_csv(text: str, p=2) -> FiniteMetricSpace:
    rows = []
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([_parse_extended(tok, f"line {ln}")
                     for tok in line.split(",")])
    if not rows:
        raise ParseError("point CSV is empty")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ParseError("all points must have the same dimension")
    return from_points(np.array(rows), p=p)


def read_edge_list(text: str, default_length: float = 1.0) -> FiniteMetricSpace:
    edges = []
    vertices: dict = {}
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) == 1:
            vertices.setdefault(parts[0], None)
            continue
        if len(parts) not in (2, 3):
            raise ParseError(f"line {ln}: expected 'u v [length]'")
        u, v = parts[0], parts[1]
        vertices.setdefault(u, None)
        vertices.setdefault(v, None)
        if len(parts) == 3:
            length = _parse_extended(parts[2], f"line {ln}")
            edges.append((u, v, length))
        else:
            edges.append((u, v, default_length))
    if not vertices:
        raise ParseError("edge list is empty")
    return from_graph(list(vertices), edges)


def read_poset_text(text: str) -> FiniteMetricSpace:
    elements: dict = {}
    covers = []
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "<" in line:
            sides = [s.strip() for s in line.split("<")]
            if len(sides) != 2 or not all(sides):
                raise ParseError(f"line {ln}: expected 'a < b'")
            a, b = sides
            elements.setdefault(a, None)
            elements.setdefault(b, None)
            covers.append((a, b))
        else:
            elements.setdefault(line, None)
    if not elements:
        raise ParseError("poset file is empty")
    return from_poset(list(elements), covers)


def read_region_json(text: str) -> RegionSpec:
    return region_from_json(text)


_FORMATS = ("dist", "points", "graph", "poset", "region")


def load_space(path: str, fmt_name: str, p=2,
               default_length: float = 1.0) -> FiniteMetricSpace:
    if fmt_name not in ("dist", "points", "graph", "poset"):
        raise ParseError(f"unknown space format {fmt_name!r}; "
                         f"expected one of {_FORMATS}")
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if fmt_name == "dist":
        return read_distance_csv(text)
    if fmt_name == "points":
        return read_points_csv(text, p=p)
    if fmt_name == "graph":
        return read_edge_list(text, default_length=default_length)
    return read_poset_text(text)


def load_region(path: str) -> RegionSpec:
    try:
        with open(path) as fh:
            return read_region_json(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


# --------------------------------------------------------------------------
# CSV documents with round-trip support
# --------------------------------------------------------------------------

def emit_csv(header, rows, leading=(), trailing=()) -> str:
    """Assemble a CSV document: '#' metadata, header, rows, '#' trailers."""
    lines = [f"# {item}" for item in leading]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(fmt(v) if isinstance(v, (int, float, type(None)))
                              else str(v) for v in row))
    lines.extend(f"# {item}" for item in trailing)
    return "\n".join(lines) + "\n"


def parse_csv(text: str):
    """Inverse of emit_csv: (leading, header, rows, trailing) as strings."""
    leading, trailing, rows = [], [], []
    header = None
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("# "):
            (leading if header is None else trailing).append(line[2:])
        elif header is None:
            header = line.split(",")
        else:
            rows.append(line.split(","))
    if header is None:
        raise ParseError("CSV document has no header row")
    return leading, header, rows, trailing


def reemit_csv(parsed) -> str:
    leading, header, rows, trailing = parsed
    lines = [f"# {item}" for item in leading]
    lines.append(",".join(header))
    lines.extend(",".join(r) for r in rows)
    lines.extend(f"# {item}" for item in trailing)
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# payload emitters
# --------------------------------------------------------------------------

def result_payload(space, result) -> dict:
    return {
        "magnitude": result.magnitude,
        "status": result.status,
        "method": result.method,
        "labels": [str(l) for l in space.labels],
        "weighting": result.weighting,
        "coweighting": result.coweighting,
        "diagnostics": result.diagnostics,
    }


def result_csv(space, result) -> str:
    leading = [f"magnitude: {fmt(result.magnitude)}",
               f"status: {result.status}",
               f"method: {result.method}"]
    rows = []
    if result.weighting is not None:
        for lab, w, v in zip(space.labels, result.weighting, result.coweighting):
            rows.append((str(lab), float(w), float(v)))
    return emit_csv(("label", "weight", "coweight"), rows, leading=leading)


def profile_payload(profile) -> dict:
    return {
        "grid": {"t0": profile.grid[0], "t1": profile.grid[1],
                 "steps": profile.grid[2], "kind": profile.grid[3]},
        "space_size": profile.space_size,
        "samples": [
            {"t": s.t, "magnitude": s.magnitude, "status": s.status,
             "min_eigenvalue": None if math.isnan(s.min_eigenvalue)
             else s.min_eigenvalue,
             "det_sign": s.det_sign}
            for s in profile.samples
        ],
        "singularities": [{"t": r.t, "width": r.width} for r in profile.singularities],
    }


def profile_csv(profile) -> str:
    rows = [(s.t, s.magnitude, s.status, s.min_eigenvalue)
            for s in profile.samples]
    trailing = [f"singularity: t={fmt(r.t)} width={fmt(r.width)}"
                for r in profile.singularities]
    return emit_csv(("t", "magnitude", "status", "min_eig"), rows,
                    trailing=trailing)


def report_payload(report, conjecture=None) -> dict:
    return {
        "region": report.region.to_dict(),
        "t": report.t,
        "p": report.p,
        "rows": [
            {"delta": d, "n_points": n, "magnitude": m}
            for d, n, m in zip(report.resolutions, report.n_points,
                               report.magnitudes)
        ],
        "extrapolated": report.extrapolated,
        "closed_form": report.closed_form,
        "conjecture_rhs": conjecture,
        "lower_bound_vol": report.lower_bound_vol,
        "monotone": report.monotone,
    }


def report_csv(report, conjecture=None) -> str:
    rows = [(d, n, m, report.lower_bound_vol, report.closed_form, conjecture)
            for d, n, m in zip(report.resolutions, report.n_points,
                               report.magnitudes)]
    leading = [f"t: {fmt(report.t)}", f"p: {report.p}"]
    if report.extrapolated is not None:
        leading.append(f"extrapolated: {fmt(report.extrapolated)}")
    return emit_csv(
        ("delta", "n_points", "magnitude", "lower_bound", "closed_form",
         "conjecture_rhs"), rows, leading=leading)
