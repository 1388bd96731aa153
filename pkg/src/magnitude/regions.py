"""Descriptions of compact subsets of R^N used by the approximators.

A :class:`RegionSpec` is one of:

* ``interval_union`` -- sorted disjoint closed intervals and isolated
  points of the real line,
* ``cuboid``        -- axis-aligned box given by its side lengths,
* ``ball``          -- Euclidean ball of a given radius and dimension,
* ``polygon``       -- simple polygon in the plane,
* ``product``       -- cartesian product of other regions,

together with a norm tag p in {1, 2}.  Regions know their dimension,
volume, and how to produce *nested* inner grids: grids are anchored to a
region-specific corner so that refining the spacing by an integer factor
keeps every previous point.  That nesting is what guarantees the monotone
lower bounds downstream.

JSON form: {"kind": "cuboid", "sides": [1, 2], "p": 1} and the analogous
shapes for the other kinds.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np
import shapely
from shapely.geometry import Polygon as _ShapelyPolygon

from .errors import MalformedRegion, NegativeSide, UnsupportedRegion

KINDS = ("interval_union", "cuboid", "ball", "polygon", "product")


@dataclass(frozen=True)
class RegionSpec:
    kind: str
    p: int
    components: tuple = ()   # interval_union: ((lo, hi), ...)
    sides: tuple = ()        # cuboid
    radius: float = 0.0      # ball
    dim: int = 0             # ball
    vertices: tuple = ()     # polygon
    parts: tuple = ()        # product

    # ------------------------------------------------------------- geometry

    def dimension(self) -> int:
        if self.kind == "interval_union":
            return 1
        if self.kind == "cuboid":
            return len(self.sides)
        if self.kind == "ball":
            return self.dim
        if self.kind == "polygon":
            return 2
        return sum(part.dimension() for part in self.parts)

    def volume(self) -> float:
        """Lebesgue measure in the ambient dimension."""
        if self.kind == "interval_union":
            return float(sum(hi - lo for lo, hi in self.components))
        if self.kind == "cuboid":
            return float(np.prod(self.sides)) if self.sides else 1.0
        if self.kind == "ball":
            return unit_ball_volume(self.dim) * self.radius ** self.dim
        if self.kind == "polygon":
            return float(self._shapely().area)
        out = 1.0
        for part in self.parts:
            out *= part.volume()
        return out

    def is_empty(self) -> bool:
        if self.kind == "interval_union":
            return not self.components
        if self.kind == "product":
            return any(p.is_empty() for p in self.parts)
        return False

    def _shapely(self):
        return _ShapelyPolygon(self.vertices)

    def perimeter(self) -> float:
        if self.kind == "polygon":
            return float(self._shapely().length)
        if self.kind == "ball" and self.dim == 2:
            return 2.0 * math.pi * self.radius
        if self.kind == "cuboid" and len(self.sides) == 2:
            return 2.0 * float(sum(self.sides))
        raise UnsupportedRegion(f"no perimeter for {self.kind}")

    def is_convex(self, tol: float = 1e-12) -> bool:
        if self.kind == "interval_union":
            return len(self.components) <= 1
        if self.kind in ("cuboid", "ball"):
            return True
        if self.kind == "polygon":
            poly = self._shapely()
            return poly.convex_hull.area <= poly.area * (1 + 1e-9) + tol
        return all(p.is_convex() for p in self.parts)

    # ----------------------------------------------------------------- grids

    def grid_points(self, delta: float) -> np.ndarray:
        """Inner grid of spacing delta, anchored for nesting.

        Halving (or any integer refinement of) delta yields a superset of
        the previous points, so magnitudes of successive grids are
        monotone by subset inclusion.
        """
        if delta <= 0:
            raise MalformedRegion(f"grid spacing must be positive, got {delta}")
        if self.kind == "interval_union":
            cols = []
            for lo, hi in self.components:
                k = int(math.floor((hi - lo) / delta + 1e-12))
                cols.append(lo + delta * np.arange(k + 1))
            pts = np.concatenate(cols) if cols else np.zeros(0)
            return pts.reshape(-1, 1)
        if self.kind == "cuboid":
            axes = []
            for side in self.sides:
                k = int(math.floor(side / delta + 1e-12))
                axes.append(delta * np.arange(k + 1))
            if not axes:
                return np.zeros((1, 0))
            grids = np.meshgrid(*axes, indexing="ij")
            return np.stack([g.ravel() for g in grids], axis=1)
        if self.kind == "ball":
            r = self.radius
            k = int(math.floor(r / delta + 1e-12))
            axis = delta * np.arange(-k, k + 1)
            grids = np.meshgrid(*([axis] * self.dim), indexing="ij")
            pts = np.stack([g.ravel() for g in grids], axis=1)
            keep = np.einsum("ij,ij->i", pts, pts) <= r * r * (1 + 1e-12)
            return pts[keep]
        if self.kind == "polygon":
            poly = self._shapely()
            minx, miny, maxx, maxy = poly.bounds
            xs = minx + delta * np.arange(int((maxx - minx) / delta + 1e-12) + 1)
            ys = miny + delta * np.arange(int((maxy - miny) / delta + 1e-12) + 1)
            gx, gy = np.meshgrid(xs, ys, indexing="ij")
            flat_x, flat_y = gx.ravel(), gy.ravel()
            keep = shapely.intersects_xy(poly, flat_x, flat_y)  # boundary incl.
            return np.stack([flat_x[keep], flat_y[keep]], axis=1)
        if self.kind == "product":
            factors = [part.grid_points(delta) for part in self.parts]
            if any(f.shape[0] == 0 for f in factors):
                return np.zeros((0, self.dimension()))
            rows = []
            for combo in itertools.product(*[range(f.shape[0]) for f in factors]):
                rows.append(np.concatenate([factors[i][j] for i, j in enumerate(combo)]))
            return np.asarray(rows)
        raise UnsupportedRegion(self.kind)

    # ------------------------------------------------------------------ json

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_dict(self) -> dict:
        base = {"kind": self.kind, "p": self.p}
        if self.kind == "interval_union":
            base["components"] = [[lo, hi] for lo, hi in self.components]
        elif self.kind == "cuboid":
            base["sides"] = list(self.sides)
        elif self.kind == "ball":
            base["radius"] = self.radius
            base["dim"] = self.dim
        elif self.kind == "polygon":
            base["vertices"] = [list(v) for v in self.vertices]
        elif self.kind == "product":
            base["parts"] = [p.to_dict() for p in self.parts]
        return base


def unit_ball_volume(n: int) -> float:
    """Volume of the unit Euclidean n-ball (1 for n = 0)."""
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


# --------------------------------------------------------------------------
# constructors
# --------------------------------------------------------------------------

def interval(lo: float, hi: float, p: int = 2) -> RegionSpec:
    return interval_union([(lo, hi)], p=p)


def interval_union(components, p: int = 2) -> RegionSpec:
    """Union of closed intervals/points of R; merged, sorted, disjoint."""
    comps = []
    for c in components:
        lo, hi = (float(c[0]), float(c[1])) if not np.isscalar(c) else (float(c), float(c))
        if math.isnan(lo) or math.isnan(hi) or math.isinf(lo) or math.isinf(hi):
            raise MalformedRegion("interval endpoints must be finite")
        if hi < lo:
            raise MalformedRegion(f"interval [{lo}, {hi}] has negative length")
        comps.append((lo, hi))
    comps.sort()
    merged: list = []
    for lo, hi in comps:
        if merged and lo <= merged[-1][1]:
            if lo < merged[-1][1]:
                raise MalformedRegion("interval components overlap")
            merged[-1] = (merged[-1][0], max(hi, merged[-1][1]))  # touching: merge
        else:
            merged.append((lo, hi))
    return RegionSpec(kind="interval_union", p=_check_p(p),
                      components=tuple(merged))


def cuboid(sides, p: int = 1) -> RegionSpec:
    sides = tuple(float(s) for s in sides)
    if any(s < 0 or math.isnan(s) or math.isinf(s) for s in sides):
        raise NegativeSide(f"cuboid sides must be >= 0, got {sides}")
    return RegionSpec(kind="cuboid", p=_check_p(p), sides=sides)


def ball(radius: float, dim: int, p: int = 2) -> RegionSpec:
    if radius < 0:
        raise MalformedRegion(f"ball radius must be >= 0, got {radius}")
    if dim < 1:
        raise MalformedRegion(f"ball dimension must be >= 1, got {dim}")
    return RegionSpec(kind="ball", p=_check_p(p), radius=float(radius),
                      dim=int(dim))


def polygon(vertices, p: int = 2) -> RegionSpec:
    verts = tuple((float(x), float(y)) for x, y in vertices)
    if len(verts) < 3:
        raise MalformedRegion("polygon needs at least 3 vertices")
    poly = _ShapelyPolygon(verts)
    if not poly.is_valid or poly.area <= 0:
        raise MalformedRegion("polygon must be simple with positive area")
    return RegionSpec(kind="polygon", p=_check_p(p), vertices=verts)


def product(parts, p: int = 1) -> RegionSpec:
    parts = tuple(parts)
    if not parts:
        raise MalformedRegion("product needs at least one part")
    return RegionSpec(kind="product", p=_check_p(p), parts=parts)


def _check_p(p) -> int:
    if p not in (1, 2):
        raise UnsupportedRegion(f"norm tag p must be 1 or 2, got {p!r}")
    return int(p)


def from_dict(obj: dict) -> RegionSpec:
    try:
        kind = obj["kind"]
        p = obj.get("p", 2)
        if kind == "interval_union":
            return interval_union(obj["components"], p=p)
        if kind == "cuboid":
            return cuboid(obj["sides"], p=p)
        if kind == "ball":
            return ball(obj["radius"], obj["dim"], p=p)
        if kind == "polygon":
            return polygon(obj["vertices"], p=p)
        if kind == "product":
            return product([from_dict(part) for part in obj["parts"]], p=p)
    except KeyError as exc:
        raise MalformedRegion(f"region JSON missing field {exc}") from exc
    raise UnsupportedRegion(f"unknown region kind {kind!r}")


def from_json(text: str) -> RegionSpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedRegion(f"invalid region JSON: {exc}") from exc
    return from_dict(obj)
