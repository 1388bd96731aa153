"""Magnitude of finite metric spaces.

The similarity matrix of a space A is zeta(a,b) = exp(-d(a,b)), with
exp(-inf) = 0.  A weighting is a vector w with zeta @ w = 1, a coweighting
a vector v with v @ zeta = 1; the magnitude |A| is the total weight, which
is independent of the choice whenever both exist.  When zeta is invertible
its inverse is the Moebius matrix and the weighting is its row sums.

Solver policy (see DESIGN notes in the repo README):

* Cholesky first for symmetric matrices -- success doubles as the positive
  definiteness certificate -- with LU as the general fallback.
* zeta counts as singular when the LAPACK reciprocal condition estimate
  drops below ``RCOND_SINGULAR`` (1e-12).  Singular systems are then tried
  by least squares: if the residual inf-norm is below 1e-8 * sqrt(n) the
  space still *has magnitude* (status ``singular_consistent``, e.g.
  homogeneous spaces with singular zeta); otherwise the status is
  ``singular_no_weighting`` and no magnitude is reported.
* Spaces whose distances are all 0 or inf with an acyclic zero-relation
  (posets, discrete spaces) are inverted in exact integer arithmetic, so
  poset Euler characteristics come out exactly.

Closed-form operations (Speyer's homogeneous formula, unions, gluing,
fibrations, products, codes) also run the direct solve when the space has
at most ``CROSS_CHECK_MAX_N`` points and record the discrepancy as a
diagnostic; the closed form is authoritative in the returned value.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.linalg import LinAlgWarning, lapack

from .errors import (
    AsymmetricSpace,
    EnumerationTooLarge,
    NotHomogeneous,
    NotPositiveDefinite,
    NotScattered,
    NotUltrametric,
    ProjectionFails,
    ResonantGlue,
    SeriesNotConverged,
    SingularSimilarity,
    SubmagnitudeUndefined,
    ZeroVector,
)
from .spaces import (
    FiniteMetricSpace,
    check_projection,
    constant_distance_glue,
    is_homogeneous,
    is_scattered,
    is_ultrametric,
)

RCOND_SINGULAR = 1e-12       # below this, zeta is treated as singular
RCOND_LOW_CONFIDENCE = 1e-10  # within 100x of the threshold: flag result
RESIDUAL_FACTOR = 1e-8       # singular-consistent acceptance: ||r||_inf < f*sqrt(n)
CROSS_CHECK_MAX_N = 2000     # closed forms re-solve directly up to this size
EXACT_PATH_MAX_N = 512       # integer Moebius inversion cap for 0/inf spaces

STATUS_CLOSED_FORM = "closed_form"
STATUS_SOLVED = "solved"
STATUS_SINGULAR_CONSISTENT = "singular_consistent"
STATUS_SINGULAR_NO_WEIGHTING = "singular_no_weighting"
STATUSES = frozenset({
    STATUS_CLOSED_FORM,
    STATUS_SOLVED,
    STATUS_SINGULAR_CONSISTENT,
    STATUS_SINGULAR_NO_WEIGHTING,
})


# --------------------------------------------------------------------------
# similarity matrices
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SimilaritySystem:
    """zeta = exp(-dist) plus its factorization state.

    ``factorization`` is "cholesky", "lu" or "singular".  ``min_eigenvalue``
    is computed with a symmetric eigensolver and is NaN for asymmetric
    spaces or when skipped for size (``eigenvalue_cap``).
    """

    zeta: np.ndarray = field(repr=False)
    factorization: str
    min_eigenvalue: float
    rcond: float
    symmetric: bool
    _factor: tuple = field(repr=False, compare=False, default=None)

    @property
    def is_singular(self) -> bool:
        return self.factorization == "singular"

    def solve(self, rhs: np.ndarray, transposed: bool = False) -> np.ndarray:
        if self.is_singular:
            raise SingularSimilarity("cannot solve a singular system exactly")
        kind, data = self._factor
        if kind == "cholesky":
            return sla.cho_solve(data, rhs, check_finite=False)
        return sla.lu_solve(data, rhs, trans=1 if transposed else 0,
                            check_finite=False)


def similarity(space: FiniteMetricSpace, eigenvalue_cap: int = 600
               ) -> SimilaritySystem:
    """Build and factor the similarity matrix of a space.

    Cholesky is attempted first for symmetric spaces, then LU; the LAPACK
    reciprocal condition estimate decides singularity.  exp(-inf) gives
    exact zeros, so discrete spaces produce the identity matrix.
    """
    with np.errstate(under="ignore"):
        zeta = np.exp(-space.dist)
    n = zeta.shape[0]
    if n == 0:
        return SimilaritySystem(zeta, "lu", math.nan, 1.0, True, ("lu", None))

    min_eig = math.nan
    if space.symmetric and n <= eigenvalue_cap:
        min_eig = float(sla.eigvalsh(zeta, check_finite=False)[0])

    anorm = float(np.linalg.norm(zeta, 1))
    if space.symmetric:
        try:
            c, low = sla.cho_factor(zeta, lower=False, check_finite=False)
            rcond, info = lapack.dpocon(c, anorm, uplo=b"U")
            if info == 0 and rcond >= RCOND_SINGULAR:
                return SimilaritySystem(zeta, "cholesky", min_eig, float(rcond),
                                        True, ("cholesky", (c, low)))
        except sla.LinAlgError:
            pass

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        warnings.simplefilter("ignore", RuntimeWarning)
        lu, piv = sla.lu_factor(zeta, check_finite=False)
    rcond, _ = lapack.dgecon(lu, anorm)
    rcond = float(rcond)
    if not np.isfinite(lu).all() or rcond < RCOND_SINGULAR:
        return SimilaritySystem(zeta, "singular", min_eig, rcond,
                                space.symmetric, ("singular", None))
    return SimilaritySystem(zeta, "lu", min_eig, rcond, space.symmetric,
                            ("lu", (lu, piv)))


# --------------------------------------------------------------------------
# results
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MagnitudeResult:
    """Magnitude plus the weighting data and solver diagnostics.

    ``magnitude`` is None exactly when status is ``singular_no_weighting``.
    For symmetric spaces the coweighting equals the weighting.  Diagnostics
    carry rcond, residual norms, the weight/coweight total gap, and (for
    closed forms) the discrepancy against the direct solve.
    """

    magnitude: float | None
    weighting: np.ndarray | None
    coweighting: np.ndarray | None
    status: str
    method: str
    diagnostics: dict = field(default_factory=dict)

    @property
    def defined(self) -> bool:
        return self.magnitude is not None


@dataclass(frozen=True)
class MobiusMatrix:
    """Inverse similarity matrix; row sums are the weighting."""
    mu: np.ndarray
    space: FiniteMetricSpace

    def weighting(self) -> np.ndarray:
        return self.mu.sum(axis=1)

    def coweighting(self) -> np.ndarray:
        return self.mu.sum(axis=0)

    def total(self) -> float:
        return float(self.mu.sum())


# --------------------------------------------------------------------------
# exact integer path for 0/inf spaces
# --------------------------------------------------------------------------

def _zero_inf_relation(space: FiniteMetricSpace):
    """If all distances are 0 or inf, return the boolean zero-relation."""
    d = space.dist
    finite = ~np.isinf(d)
    if not (d[finite] == 0).all():
        return None
    return finite  # reflexive boolean matrix: zeta as exact 0/1


def _topological_order(rel: np.ndarray):
    """Topological order of the off-diagonal zero-relation, or None."""
    n = rel.shape[0]
    adj = rel & ~np.eye(n, dtype=bool)
    indeg = adj.sum(axis=0)
    order, stack = [], [i for i in range(n) if indeg[i] == 0]
    indeg = indeg.copy()
    while stack:
        a = stack.pop()
        order.append(a)
        for b in np.flatnonzero(adj[a]):
            indeg[b] -= 1
            if indeg[b] == 0:
                stack.append(int(b))
    return order if len(order) == n else None


def _exact_mobius(space: FiniteMetricSpace):
    """Integer Moebius matrix for acyclic 0/inf spaces, else None.

    Under a linear extension the 0/1 similarity matrix is unitriangular, so
    its inverse is computed exactly by back substitution over the integers
    (this is Rota's Moebius function when the space comes from a poset).
    """
    if len(space) > EXACT_PATH_MAX_N:
        return None
    rel = _zero_inf_relation(space)
    if rel is None:
        return None
    n = len(space)
    if not (rel & ~np.eye(n, dtype=bool)).any():
        return np.eye(n, dtype=object)  # discrete space: zeta = mu = identity
    order = _topological_order(rel)
    if order is None:
        return None
    pos = {p: k for k, p in enumerate(order)}
    z = rel[np.ix_(order, order)].astype(object)  # upper unitriangular
    mu_perm = np.zeros((n, n), dtype=object)
    for j in range(n):
        col = [0] * n
        col[j] = 1
        for i in range(j - 1, -1, -1):  # back substitution, exact ints
            s = 0
            for k in range(i + 1, j + 1):
                if z[i, k]:
                    s += col[k]
            col[i] = -s
        for i in range(j + 1):
            mu_perm[i, j] = col[i]
    mu = np.zeros((n, n), dtype=object)
    for a in range(n):
        for b in range(n):
            mu[a, b] = mu_perm[pos[a], pos[b]]
    return mu


# --------------------------------------------------------------------------
# magnitude
# --------------------------------------------------------------------------

def magnitude(space: FiniteMetricSpace, *, rcond_threshold: float | None = None,
              residual_factor: float | None = None,
              eigenvalue_cap: int = 600) -> MagnitudeResult:
    """Magnitude, weighting and coweighting of a finite metric space.

    Never raises on singular input: the status field reports whether a
    (co)weighting exists.  The total weight is summed in index order so
    results are reproducible.  Thresholds default to the module-level
    ``RCOND_SINGULAR`` / ``RESIDUAL_FACTOR`` (read at call time, so the CLI
    tolerance overrides take effect).
    """
    if rcond_threshold is None:
        rcond_threshold = RCOND_SINGULAR
    if residual_factor is None:
        residual_factor = RESIDUAL_FACTOR
    n = len(space)
    if n == 0:
        e = np.zeros(0)
        return MagnitudeResult(0.0, e, e, STATUS_SOLVED, "empty")

    mu = _exact_mobius(space)
    if mu is not None:
        w = np.array([int(sum(row)) for row in mu], dtype=float)
        v = np.array([int(sum(mu[:, j])) for j in range(n)], dtype=float)
        total = float(w.sum())
        return MagnitudeResult(total, w, v, STATUS_SOLVED, "mobius_exact",
                               {"rcond": 1.0, "exact": True})

    sim = similarity(space, eigenvalue_cap=eigenvalue_cap)
    ones = np.ones(n)
    diags: dict = {"rcond": sim.rcond, "factorization": sim.factorization}

    if not sim.is_singular and sim.rcond >= rcond_threshold:
        w = sim.solve(ones)
        v = w if space.symmetric else sim.solve(ones, transposed=True)
        residual = float(np.max(np.abs(sim.zeta @ w - ones)))
        diags["residual"] = residual
        diags["coweight_gap"] = abs(float(w.sum()) - float(v.sum()))
        if sim.rcond < RCOND_LOW_CONFIDENCE:
            diags["low_confidence"] = True
        return MagnitudeResult(float(w.sum()), w, v, STATUS_SOLVED,
                               sim.factorization + "_solve", diags)

    # Singular zeta: the space may still have magnitude (weaker definition:
    # any weighting + coweighting).  Accept a least-squares solution whose
    # residual is at solver-noise level.
    w, *_ = sla.lstsq(sim.zeta, ones, check_finite=False, lapack_driver="gelsd")
    res_w = float(np.max(np.abs(sim.zeta @ w - ones)))
    v, *_ = sla.lstsq(sim.zeta.T, ones, check_finite=False, lapack_driver="gelsd")
    res_v = float(np.max(np.abs(sim.zeta.T @ v - ones)))
    tol = residual_factor * math.sqrt(n)
    diags.update(residual=res_w, coweight_residual=res_v, low_confidence=True)
    if res_w < tol and res_v < tol:
        diags["coweight_gap"] = abs(float(w.sum()) - float(v.sum()))
        return MagnitudeResult(float(w.sum()), w, v,
                               STATUS_SINGULAR_CONSISTENT, "lstsq", diags)
    return MagnitudeResult(None, None, None, STATUS_SINGULAR_NO_WEIGHTING,
                           "lstsq", diags)


def mobius(space: FiniteMetricSpace) -> MobiusMatrix:
    """Full inverse of the similarity matrix.

    Raises SingularSimilarity when the reciprocal condition estimate is
    below the singularity threshold.
    """
    exact = _exact_mobius(space)
    if exact is not None:
        return MobiusMatrix(mu=exact.astype(float), space=space)
    sim = similarity(space)
    if sim.is_singular:
        raise SingularSimilarity(
            f"similarity matrix is singular (rcond={sim.rcond:.3g})")
    mu = sim.solve(np.eye(len(space)))
    return MobiusMatrix(mu=mu, space=space)


# --------------------------------------------------------------------------
# positive definiteness
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PDCertificate:
    pd: bool
    min_eigenvalue: float
    cholesky_ok: bool


def is_positive_definite(space: FiniteMetricSpace) -> PDCertificate:
    """Strict positive definiteness of zeta, for symmetric spaces only.

    Decided by Cholesky success plus an eigenvalue threshold pinned to the
    package-wide singularity tolerance, so an exactly singular matrix that
    rounds to a tiny positive pivot is still rejected.
    """
    if not space.symmetric:
        raise AsymmetricSpace("positive definiteness needs a symmetric space")
    with np.errstate(under="ignore"):
        zeta = np.exp(-space.dist)
    n = len(space)
    if n == 0:
        return PDCertificate(True, math.nan, True)
    eigs = sla.eigvalsh(zeta, check_finite=False)
    min_eig, max_eig = float(eigs[0]), float(eigs[-1])
    try:
        sla.cho_factor(zeta, check_finite=False)
        chol_ok = True
    except sla.LinAlgError:
        chol_ok = False
    pd = chol_ok and min_eig > RCOND_SINGULAR * max(max_eig, 1.0)
    return PDCertificate(pd, min_eig, chol_ok)


def cauchy_schwarz_ratio(space: FiniteMetricSpace, v) -> float:
    """(sum v)^2 / (v' zeta v), the supremum characterization of magnitude.

    Equals the magnitude exactly when v is proportional to the weighting,
    and is <= magnitude for every other nonzero v on a positive definite
    space.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (len(space),):
        raise ZeroVector(f"vector length {v.shape} does not match space")
    if not np.any(v):
        raise ZeroVector("v must be nonzero")
    cert = is_positive_definite(space)
    if not cert.pd:
        raise NotPositiveDefinite(
            f"space is not positive definite (min eig {cert.min_eigenvalue:.3g})")
    with np.errstate(under="ignore"):
        zeta = np.exp(-space.dist)
    quad = float(v @ zeta @ v)
    return float(v.sum()) ** 2 / quad


# --------------------------------------------------------------------------
# closed forms
# --------------------------------------------------------------------------

def _cross_check(result_value: float, space: FiniteMetricSpace) -> dict:
    """Diagnostic: direct-solve discrepancy for a closed-form value."""
    if len(space) > CROSS_CHECK_MAX_N:
        return {}
    direct = magnitude(space)
    if direct.magnitude is None:
        return {"direct_solve": None}
    return {"direct_solve": direct.magnitude,
            "closed_form_vs_solve": abs(direct.magnitude - result_value)}


def magnitude_scattered_series(space: FiniteMetricSpace, max_terms: int = 200,
                               tol: float = 1e-14) -> MagnitudeResult:
    """Magnitude of a scattered space by the alternating Neumann series.

    With P the off-diagonal part of zeta, the Moebius matrix is
    sum_k (-1)^k P^k; scatteredness makes ||P|| < 1 so the series converges.
    Truncated when the term's max-norm drops below ``tol``.
    """
    if not is_scattered(space):
        raise NotScattered("series requires all distances > log(n-1)")
    n = len(space)
    if n == 0:
        return MagnitudeResult(0.0, np.zeros(0), np.zeros(0), STATUS_SOLVED,
                               "scattered_series")
    with np.errstate(under="ignore"):
        zeta = np.exp(-space.dist)
    P = zeta - np.eye(n)
    mu = np.eye(n)
    term = np.eye(n)
    converged = False
    for k in range(1, max_terms + 1):
        term = term @ P
        if k % 2:
            mu -= term
        else:
            mu += term
        if float(np.max(np.abs(term))) < tol:
            converged = True
            break
    if not converged:
        raise SeriesNotConverged(max_terms)
    w = mu.sum(axis=1)
    v = mu.sum(axis=0)
    total = float(w.sum())
    diags = {"terms": k, "last_term_norm": float(np.max(np.abs(term)))}
    diags.update(_cross_check(total, space))
    return MagnitudeResult(total, w, v, STATUS_SOLVED, "scattered_series", diags)


def magnitude_homogeneous(space: FiniteMetricSpace, check: bool = True
                          ) -> MagnitudeResult:
    """Speyer's formula: |A| = n^2 / sum_{a,b} exp(-d(a,b)).

    Works even when zeta is singular (the weighting is the constant |A|/n).
    ``check=False`` skips the transitivity search when homogeneity is known
    by construction.
    """
    n = len(space)
    if n == 0:
        raise NotHomogeneous("empty space")
    if check and not is_homogeneous(space):
        raise NotHomogeneous("isometry group is not transitive")
    with np.errstate(under="ignore"):
        zeta = np.exp(-space.dist)
    total_sim = float(zeta.sum())
    value = n * n / total_sim
    w = np.full(n, value / n)
    diags = {"mean_similarity": total_sim / (n * n)}
    diags.update(_cross_check(value, space))
    return MagnitudeResult(value, w, w.copy(), STATUS_CLOSED_FORM,
                           "homogeneous", diags)


@dataclass(frozen=True)
class CodeMagnitude:
    magnitude: float
    weight_enumerator: tuple  # A_i = #codewords at Hamming weight i
    size: int
    diagnostics: dict = field(default_factory=dict)


def magnitude_code(generator, q: int, t: float = 1.0,
                   max_codewords: int = 1 << 20) -> CodeMagnitude:
    """Magnitude function value of a linear code C <= F_q^N at scale t.

    The weight enumerator W_C is found by exhaustive enumeration of the row
    space of the generator matrix (q must be prime in this version); then
    |tC| = #C / W_C(e^{-t}).  Small codes are cross-checked against the
    direct solve of the scaled Hamming space on the codewords.
    """
    G = np.asarray(generator, dtype=np.int64)
    if G.ndim != 2:
        raise ValueError("generator must be a k x N matrix")
    if q < 2 or any(q % p == 0 for p in range(2, int(math.isqrt(q)) + 1)):
        raise ValueError(f"q={q} must be prime (v1 restriction)")
    k, N = G.shape
    G = np.mod(G, q)
    n_words = q ** k
    if n_words > max_codewords:
        raise EnumerationTooLarge(f"{n_words} codewords exceeds cap {max_codewords}")

    counts = [0] * (N + 1)
    seen = set()
    for coeffs in itertools.product(range(q), repeat=k):
        word = tuple(np.mod(np.asarray(coeffs) @ G, q)) if k else tuple([0] * N)
        if word in seen:
            continue
        seen.add(word)
        counts[int(np.count_nonzero(word))] += 1
    size = len(seen)
    x = math.exp(-t)
    w_val = sum(a * x ** i for i, a in enumerate(counts))
    value = size / w_val
    diags = {}
    if size <= CROSS_CHECK_MAX_N:
        words = np.array(sorted(seen), dtype=np.int64)
        hamming = (words[:, None, :] != words[None, :, :]).sum(axis=2)
        space = FiniteMetricSpace(
            labels=tuple(map(tuple, words)), dist=t * hamming.astype(float),
            symmetric=True, generalized=False)
        diags = _cross_check(value, space)
    return CodeMagnitude(magnitude=value, weight_enumerator=tuple(counts),
                         size=size, diagnostics=diags)


def union_magnitude(space: FiniteMetricSpace, a_idx, b_idx) -> MagnitudeResult:
    """Inclusion-exclusion |A u B| = |A| + |B| - |A n B| for mutual projections.

    Requires A to project to B and B to A inside the ambient space; the
    weighting is assembled piecewise from the weightings of A, B and A n B.
    """
    a_idx = list(dict.fromkeys(a_idx))
    b_idx = list(dict.fromkeys(b_idx))
    if not check_projection(space, a_idx, b_idx).holds:
        raise ProjectionFails("A does not project to B")
    if not check_projection(space, b_idx, a_idx).holds:
        raise ProjectionFails("B does not project to A")

    inter = [i for i in a_idx if i in set(b_idx)]
    union = sorted(set(a_idx) | set(b_idx))
    parts = {}
    for name, idx in (("A", a_idx), ("B", b_idx), ("A∩B", inter)):
        res = magnitude(space.subspace(idx))
        if not res.defined:
            raise SubmagnitudeUndefined(f"|{name}| is undefined")
        parts[name] = (idx, res)

    value = (parts["A"][1].magnitude + parts["B"][1].magnitude
             - parts["A∩B"][1].magnitude)
    w = np.zeros(len(union))
    pos = {p: k for k, p in enumerate(union)}
    for name, sign in (("A", 1.0), ("B", 1.0), ("A∩B", -1.0)):
        idx, res = parts[name]
        for j, point in enumerate(idx):
            w[pos[point]] += sign * res.weighting[j]
    diags = _cross_check(value, space.subspace(union))
    return MagnitudeResult(value, w, w.copy(), STATUS_CLOSED_FORM, "union", diags)


def glued_magnitude(a: FiniteMetricSpace, b: FiniteMetricSpace, glue_distance: float,
                    resonance_tol: float = 1e-9) -> MagnitudeResult:
    """Magnitude of the constant-distance gluing A +_D B.

    Closed form (|A| + |B| - 2 e^{-D} |A||B|) / (1 - e^{-2D} |A||B|), with
    the weighting obtained by rescaling the part weightings.  Raises
    ResonantGlue when |A||B| = e^{2D} within tolerance.
    """
    D = float(glue_distance)
    ra, rb = magnitude(a), magnitude(b)
    if not (ra.defined and rb.defined):
        raise SubmagnitudeUndefined("both parts need defined magnitude")
    ma, mb = ra.magnitude, rb.magnitude
    e_d = math.exp(-D)
    denom = 1.0 - e_d * e_d * ma * mb
    if abs(denom) <= resonance_tol:
        raise ResonantGlue(f"|A||B| = e^(2D) within {resonance_tol}")
    value = (ma + mb - 2.0 * e_d * ma * mb) / denom
    w = np.concatenate([
        (1.0 - e_d * mb) / denom * ra.weighting,
        (1.0 - e_d * ma) / denom * rb.weighting,
    ])
    glued = constant_distance_glue(a, b, D)
    diags = _cross_check(value, glued)
    return MagnitudeResult(value, w, w.copy(), STATUS_CLOSED_FORM, "glue", diags)


def product_magnitude(a: FiniteMetricSpace, b: FiniteMetricSpace) -> float:
    """|A (x) B| = |A| |B| for the 1-norm tensor product."""
    ra, rb = magnitude(a), magnitude(b)
    if not (ra.defined and rb.defined):
        raise SubmagnitudeUndefined("both factors need defined magnitude")
    return ra.magnitude * rb.magnitude


def fibration_magnitude(base: FiniteMetricSpace, fibre: FiniteMetricSpace) -> float:
    """|total| = |base| |fibre| for a metric fibration with this base/fibre."""
    rb, rf = magnitude(base), magnitude(fibre)
    if not (rb.defined and rf.defined):
        raise SubmagnitudeUndefined("base and fibre need defined magnitude")
    return rb.magnitude * rf.magnitude


@dataclass(frozen=True)
class UltrametricReport:
    magnitude: float
    bound: float              # e^{diam A}
    positive_weights: bool
    min_weight: float


def ultrametric_magnitude_bound(space: FiniteMetricSpace) -> UltrametricReport:
    """Solve an ultrametric space and certify |A| <= e^{diam}, weights > 0."""
    if not is_ultrametric(space):
        raise NotUltrametric("space is not ultrametric")
    res = magnitude(space)
    if not res.defined:
        raise SubmagnitudeUndefined("ultrametric solve failed unexpectedly")
    bound = math.exp(space.diameter())
    min_w = float(res.weighting.min()) if len(space) else math.inf
    return UltrametricReport(res.magnitude, bound, bool(min_w > 0), min_w)
