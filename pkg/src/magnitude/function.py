"""Magnitude functions: sampling, singularities, asymptotics, dimension.

The magnitude function of a space A is the partially defined map
t -> |tA|.  It has at most finitely many singularities (zeros of
det zeta_{tA}), is analytic elsewhere, and tends to the point count as
t -> infinity.  The growth exponent of the function is the magnitude
dimension; it is estimated here by a log-log least-squares fit over the
top decade of sampled scales (the window is configurable and always
reported, since any finite-sample estimate of a t -> infinity notion is
heuristic).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import engine
from .errors import AsymmetricSpace, EmptyGrid, InsufficientSamples
from .spaces import FiniteMetricSpace, scale

# Scan density for singularity detection, points per decade of t.
SCAN_DENSITY = 2048
DIAGNOSTIC_CAP = 600  # skip per-sample eigen/det diagnostics above this size


@dataclass(frozen=True)
class FunctionSample:
    t: float
    magnitude: float | None
    status: str
    min_eigenvalue: float
    det_sign: int  # sign of det zeta_{tA}; 0 when unknown or zero


@dataclass(frozen=True)
class Singularity:
    t: float
    width: float          # final bracket width of the bisection
    sign_change: bool     # False for suspected even-order roots


@dataclass(frozen=True)
class SingularityScan:
    roots: tuple
    suspects: tuple
    interval: tuple


@dataclass(frozen=True)
class MagnitudeFunctionProfile:
    """Sampled magnitude function plus located singularities."""

    samples: tuple
    grid: tuple                       # (t0, t1, steps, kind)
    singularities: tuple = ()
    space_size: int = 0

    def defined_points(self):
        ts, ms = [], []
        for s in self.samples:
            if s.magnitude is not None:
                ts.append(s.t)
                ms.append(s.magnitude)
        return np.array(ts), np.array(ms)

    def with_singularities(self, scan: SingularityScan):
        return MagnitudeFunctionProfile(
            samples=self.samples, grid=self.grid,
            singularities=tuple(scan.roots), space_size=self.space_size)


def make_grid(t0: float, t1: float, steps: int, log: bool = False) -> np.ndarray:
    if steps < 1 or t0 <= 0 or t1 < t0:
        raise EmptyGrid(f"bad grid spec ({t0}, {t1}, {steps})")
    if steps == 1:
        return np.array([t0])
    if log:
        return np.geomspace(t0, t1, steps)
    return np.linspace(t0, t1, steps)


def sample_function(space: FiniteMetricSpace, grid, threads: int = 1,
                    diagnostics: bool | None = None) -> MagnitudeFunctionProfile:
    """Evaluate |tA| on a grid of scales.

    Undefined points are recorded with their status, never interpolated.
    Per-sample det sign and minimum eigenvalue are included for spaces up
    to ``DIAGNOSTIC_CAP`` points (or on request); each scale is an
    independent solve, so the work parallelizes over the grid.
    """
    ts = np.asarray(list(grid), dtype=float)
    if ts.size == 0:
        raise EmptyGrid("empty scale grid")
    if (ts <= 0).any():
        raise EmptyGrid("scales must be positive")
    ts = np.sort(ts)
    if diagnostics is None:
        diagnostics = len(space) <= DIAGNOSTIC_CAP

    def eval_one(t: float) -> FunctionSample:
        st = scale(space, t)
        res = engine.magnitude(st)
        min_eig = math.nan
        det_sign = 0
        if diagnostics:
            with np.errstate(under="ignore"):
                zeta = np.exp(-st.dist)
            if st.symmetric:
                eigs = np.linalg.eigvalsh(zeta)
                min_eig = float(eigs[0])
            sign, _ = np.linalg.slogdet(zeta)
            det_sign = int(sign)
        return FunctionSample(float(t), res.magnitude, res.status, min_eig,
                              det_sign)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            samples = list(pool.map(eval_one, ts))
    else:
        samples = [eval_one(t) for t in ts]
    grid_spec = (float(ts[0]), float(ts[-1]), int(ts.size), "explicit")
    return MagnitudeFunctionProfile(samples=tuple(samples), grid=grid_spec,
                                    space_size=len(space))


# --------------------------------------------------------------------------
# singularities
# --------------------------------------------------------------------------

def _det_at(space: FiniteMetricSpace):
    def f(t: float) -> float:
        with np.errstate(under="ignore"):
            zeta = np.exp(-t * space.dist)
        sign, logdet = np.linalg.slogdet(zeta)
        if sign == 0:
            return 0.0
        return float(sign * math.exp(max(min(logdet, 700.0), -700.0)))
    return f


def scan_roots(f: Callable[[float], float], t0: float, t1: float,
               density: int = SCAN_DENSITY, width: float = 1e-9,
               suspect_ratio: float = 1e-8) -> SingularityScan:
    """Bracket sign changes of f on [t0, t1] and bisect to ``width``.

    The scan grid is logarithmic with ``density`` points per decade.  Local
    minima of |f| that dip below ``suspect_ratio`` times the neighbourhood
    level without a sign change are reported as suspects (possible
    even-order roots).
    """
    decades = max(math.log10(t1 / t0), 1e-9)
    n = max(int(math.ceil(density * decades)) + 1, 16)
    ts = np.geomspace(t0, t1, n)
    vals = np.array([f(t) for t in ts])

    roots = []
    for i in range(n - 1):
        a, b = float(ts[i]), float(ts[i + 1])
        fa, fb = float(vals[i]), float(vals[i + 1])
        if fa == 0.0:
            roots.append(Singularity(a, 0.0, True))
            continue
        if fa * fb < 0.0:
            while b - a > width:
                m = 0.5 * (a + b)
                fm = f(m)
                if fm == 0.0:
                    a = b = m
                    break
                if fa * fm < 0.0:
                    b = m
                else:
                    a, fa = m, fm
            roots.append(Singularity(0.5 * (a + b), b - a, True))
    if vals[-1] == 0.0:
        roots.append(Singularity(float(ts[-1]), 0.0, True))

    # Even-order roots leave no sign change; candidate local minima of |f|
    # are sharpened by ternary search and flagged when the refined minimum
    # is at noise level relative to the scan's typical magnitude.
    scale_level = float(np.median(np.abs(vals))) or 1.0
    suspects = []
    absv = np.abs(vals)
    for i in range(1, n - 1):
        if not (absv[i] < absv[i - 1] and absv[i] <= absv[i + 1]
                and vals[i - 1] * vals[i + 1] > 0 and vals[i] != 0.0):
            continue
        lo, hi = float(ts[i - 1]), float(ts[i + 1])
        for _ in range(80):
            m1 = lo + (hi - lo) / 3.0
            m2 = hi - (hi - lo) / 3.0
            if abs(f(m1)) <= abs(f(m2)):
                hi = m2
            else:
                lo = m1
            if hi - lo < width:
                break
        t_min = 0.5 * (lo + hi)
        if abs(f(t_min)) < suspect_ratio * scale_level:
            suspects.append(t_min)
    return SingularityScan(tuple(roots), tuple(suspects), (t0, t1))


def find_singularities(space: FiniteMetricSpace, t_interval,
                       density: int = SCAN_DENSITY,
                       width: float = 1e-9) -> SingularityScan:
    """Zeros of t -> det zeta_{tA} inside a positive finite interval."""
    t0, t1 = float(t_interval[0]), float(t_interval[1])
    if not (0 < t0 < t1 < math.inf):
        raise EmptyGrid(f"interval must be positive and finite, got {t_interval}")
    return scan_roots(_det_at(space), t0, t1, density=density, width=width)


# --------------------------------------------------------------------------
# asymptotics and stability
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoteReport:
    limit_estimate: float
    n_points: int
    gap: float
    weighting_positive: bool


def asymptote_check(space: FiniteMetricSpace, t_max: float = 50.0
                    ) -> AsymptoteReport:
    """|tA| at a large scale, against the t -> inf limit #A.

    Also certifies that the weighting is positive there, which holds for
    all sufficiently large scales.
    """
    res = engine.magnitude(scale(space, t_max)) if len(space) else None
    if res is None:
        return AsymptoteReport(0.0, 0, 0.0, True)
    est = res.magnitude if res.defined else math.nan
    gap = abs(len(space) - est) if res.defined else math.inf
    pos = bool(res.defined and res.weighting.min() > 0)
    return AsymptoteReport(est, len(space), gap, pos)


@dataclass(frozen=True)
class StabilityRecord:
    t: float
    pd: bool
    min_eigenvalue: float


@dataclass(frozen=True)
class StabilityReport:
    records: tuple
    last_singularity: float  # 0.0 when none found in the scanned interval
    pd_beyond_last_singularity: bool


def stability_scan(space: FiniteMetricSpace, grid) -> StabilityReport:
    """Minimum eigenvalue of zeta_{tA} per grid point, symmetric spaces only.

    Also locates singularities inside the grid range and verifies positive
    definiteness at every sampled scale beyond the last one.
    """
    if not space.symmetric:
        raise AsymmetricSpace("stability scan requires a symmetric space")
    ts = np.sort(np.asarray(list(grid), dtype=float))
    if ts.size == 0:
        raise EmptyGrid("empty scale grid")
    records = []
    for t in ts:
        with np.errstate(under="ignore"):
            zeta = np.exp(-t * space.dist)
        eig = float(np.linalg.eigvalsh(zeta)[0])
        records.append(StabilityRecord(float(t), eig > 0.0, eig))
    if ts[0] < ts[-1]:
        scan = find_singularities(space, (float(ts[0]), float(ts[-1])))
        last = max((r.t for r in scan.roots), default=0.0)
    else:
        last = 0.0
    beyond = all(r.pd for r in records if r.t > last)
    return StabilityReport(tuple(records), last, beyond)


# --------------------------------------------------------------------------
# dimension
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GrowthFit:
    exponent: float
    window: tuple       # (t_lo, t_hi) actually used
    residual: float     # RMS residual of the log-log fit
    n_samples: int


def dimension_estimate(profile, window: tuple | None = None,
                       min_samples: int = 8) -> GrowthFit:
    """Growth exponent of a magnitude function by log-log regression.

    ``profile`` is a :class:`MagnitudeFunctionProfile` or a sequence of
    (t, magnitude) pairs.  Undefined samples are dropped, never
    interpolated.  The default window is the top decade of the sampled
    scales; pass ``window=(lo, hi)`` to override.  Requires at least
    ``min_samples`` defined samples spanning at least one decade.
    """
    if isinstance(profile, MagnitudeFunctionProfile):
        ts, ms = profile.defined_points()
    else:
        pairs = [(float(t), float(m)) for t, m in profile
                 if m is not None and np.isfinite(m)]
        ts = np.array([p[0] for p in pairs])
        ms = np.array([p[1] for p in pairs])
    keep = (ts > 0) & (ms > 0)
    ts, ms = ts[keep], ms[keep]
    if ts.size < min_samples:
        raise InsufficientSamples(
            f"need >= {min_samples} defined samples, have {ts.size}")
    if ts.max() < 10.0 * ts.min():
        raise InsufficientSamples("samples must span at least one decade of t")

    if window is None:
        window = (ts.max() / 10.0, ts.max())
    lo, hi = float(window[0]), float(window[1])
    mask = (ts >= lo * (1 - 1e-12)) & (ts <= hi * (1 + 1e-12))
    if mask.sum() < 2:
        raise InsufficientSamples("fit window contains fewer than 2 samples")
    x = np.log(ts[mask])
    y = np.log(ms[mask])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    rms = float(np.sqrt(np.mean(resid ** 2)))
    return GrowthFit(float(slope), (lo, hi), rms, int(mask.sum()))
