"""Finite metric spaces: construction, validation, combination, predicates.

The central object is :class:`FiniteMetricSpace`: point labels plus a square
matrix of extended nonnegative reals (``inf`` is a legal distance).  Spaces
may be *generalized*: asymmetric, and with zero distance between distinct
points.  All values are immutable after construction and every operation is
a pure function, so spaces can be shared freely across threads.

Metric axioms are checked with a relative tolerance ``TAU_METRIC`` because
inputs are floating point; ``inf`` absorbs additions, so discrete spaces and
distant unions validate naturally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse.csgraph import shortest_path
from scipy.spatial.distance import cdist

from .errors import (
    CycleDetected,
    DimensionMismatch,
    GlueDistanceTooSmall,
    MetricError,
    NegativeDistance,
    NonpositiveScale,
    TriangleViolation,
    ZeroOffDiagonal,
)

# Relative tolerance for triangle-inequality / equality checks on distances.
TAU_METRIC = 1e-9


def _close(x: float, y: float, tol: float = TAU_METRIC) -> bool:
    """Equality of extended reals, relative tolerance on the finite part."""
    if math.isinf(x) or math.isinf(y):
        return x == y
    return abs(x - y) <= tol * max(1.0, abs(x), abs(y))


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A finite (possibly generalized) metric space.

    Attributes:
        labels: opaque point identifiers, one per row of ``dist``.
        dist: square float array; ``dist[i, j]`` is the distance from point
            ``i`` to point ``j``.  ``inf`` entries are allowed.
        symmetric: True iff ``dist`` equals its transpose.
        generalized: True iff asymmetry or zero distances between distinct
            points are permitted.
    """

    labels: tuple
    dist: np.ndarray = field(repr=False)
    symmetric: bool
    generalized: bool

    def __post_init__(self):
        d = self.dist
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("distance matrix must be square")
        if len(self.labels) != d.shape[0]:
            raise ValueError("labels and matrix size disagree")
        d.setflags(write=False)

    def __len__(self) -> int:
        return self.dist.shape[0]

    @property
    def n_points(self) -> int:
        return self.dist.shape[0]

    def diameter(self) -> float:
        """Largest distance in the space (0 for spaces with < 2 points)."""
        if len(self) < 2:
            return 0.0
        return float(np.max(self.dist))

    def min_positive_distance(self) -> float:
        off = self.dist[~np.eye(len(self), dtype=bool)]
        pos = off[off > 0]
        return float(pos.min()) if pos.size else math.inf

    def subspace(self, indices: Sequence[int]) -> "FiniteMetricSpace":
        """Restriction to the given point indices (order preserved)."""
        idx = list(indices)
        sub = self.dist[np.ix_(idx, idx)].copy()
        return FiniteMetricSpace(
            labels=tuple(self.labels[i] for i in idx),
            dist=sub,
            symmetric=bool(np.array_equal(sub, sub.T)),
            generalized=self.generalized,
        )

    def index_of(self, label) -> int:
        return self.labels.index(label)


# --------------------------------------------------------------------------
# validation helpers
# --------------------------------------------------------------------------

def _check_triangle(d: np.ndarray, labels, tol: float = TAU_METRIC) -> None:
    """Raise TriangleViolation unless d(a,c) <= d(a,b) + d(b,c) throughout.

    Vectorized over the intermediate point; inf absorbs sums, so rows
    through an unreachable intermediate never violate.
    """
    n = d.shape[0]
    for b in range(n):
        with np.errstate(invalid="ignore"):
            via = d[:, b : b + 1] + d[b : b + 1, :]  # d(a,b) + d(b,c)
        slack = np.where(np.isinf(via), np.inf, tol * np.maximum(1.0, via))
        bad = d > via + slack
        if bad.any():
            a, c = np.argwhere(bad)[0]
            raise TriangleViolation(labels[a], labels[b], labels[c],
                                    via=float(via[a, c]), direct=float(d[a, c]))


def _validate_matrix(d: np.ndarray, labels, generalized: bool) -> None:
    if np.isnan(d).any():
        raise MetricError("distance matrix contains NaN")
    if (d < 0).any():
        i, j = np.argwhere(d < 0)[0]
        raise NegativeDistance(f"d({labels[i]},{labels[j]}) = {d[i, j]} < 0")
    diag = np.diagonal(d)
    if (diag != 0).any():
        i = int(np.argmax(diag != 0))
        raise MetricError(f"d({labels[i]},{labels[i]}) = {diag[i]} != 0")
    if not generalized:
        off_zero = (d == 0) & ~np.eye(d.shape[0], dtype=bool)
        if off_zero.any():
            i, j = np.argwhere(off_zero)[0]
            raise ZeroOffDiagonal(
                f"d({labels[i]},{labels[j]}) = 0 between distinct points"
            )
    _check_triangle(d, labels)


def _default_labels(n: int) -> tuple:
    return tuple(range(n))


def _build(d: np.ndarray, labels=None, generalized: bool = False,
           validate: bool = True) -> FiniteMetricSpace:
    d = np.array(d, dtype=float)  # copy: the space freezes its matrix
    labels = tuple(labels) if labels is not None else _default_labels(d.shape[0])
    if validate:
        _validate_matrix(d, labels, generalized)
    symmetric = bool(np.array_equal(d, d.T))
    if not symmetric and not generalized:
        raise MetricError("asymmetric matrix requires generalized=True")
    return FiniteMetricSpace(labels=labels, dist=d, symmetric=symmetric,
                             generalized=generalized)


# --------------------------------------------------------------------------
# constructors
# --------------------------------------------------------------------------

def from_distance_matrix(matrix, generalized: bool = False,
                         labels=None) -> FiniteMetricSpace:
    """Validate a square extended-real matrix as a metric space.

    Checks nonnegativity, zero diagonal, the triangle inequality (within
    ``TAU_METRIC`` relative tolerance, ``inf`` absorbing) and, unless
    ``generalized``, that distinct points are at positive distance.  The
    ``symmetric`` flag is auto-detected.
    """
    return _build(matrix, labels=labels, generalized=generalized, validate=True)


def from_points(coords, p=2, labels=None) -> FiniteMetricSpace:
    """Space of points of R^N under the p-norm metric, p in {1, 2, inf}."""
    pts = np.asarray(coords, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2:
        raise DimensionMismatch("coords must be a list of equal-length vectors")
    if p == 1:
        d = cdist(pts, pts, metric="cityblock")
    elif p == 2:
        d = cdist(pts, pts, metric="euclidean")
    elif p == math.inf or p == "inf":
        d = cdist(pts, pts, metric="chebyshev")
    else:
        raise ValueError(f"unsupported norm p={p!r}")
    np.fill_diagonal(d, 0.0)
    # p-norm axioms hold by construction; skip the O(n^3) re-check.
    return _build(d, labels=labels, generalized=True, validate=False)


def from_graph(vertices: Sequence, edges: Iterable, default_length: float = 1.0
               ) -> FiniteMetricSpace:
    """Shortest-path metric of an undirected weighted graph.

    ``edges`` holds ``(u, v)`` or ``(u, v, length)`` tuples; edges without an
    explicit length get ``default_length``.  Unreachable pairs end up at
    distance ``inf`` (the distant union of the components).
    """
    verts = list(vertices)
    index = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    w = np.full((n, n), np.inf)
    np.fill_diagonal(w, 0.0)
    for e in edges:
        if len(e) == 2:
            u, v = e
            length = float(default_length)
        else:
            u, v, length = e
            length = float(length)
        if length <= 0:
            raise NegativeDistance(f"edge ({u},{v}) has nonpositive length {length}")
        i, j = index[u], index[v]
        w[i, j] = min(w[i, j], length)
        w[j, i] = min(w[j, i], length)
    if n == 0:
        return _build(np.zeros((0, 0)), labels=verts, validate=False)
    d = shortest_path(np.where(np.isinf(w), 0.0, w), method="D", directed=False,
                      unweighted=False, indices=None)
    # csgraph treats 0 as "no edge"; re-derive inf for disconnected pairs.
    d = np.asarray(d)
    np.fill_diagonal(d, 0.0)
    return _build(d, labels=verts, generalized=False, validate=False)


def from_poset(elements: Sequence, covers: Iterable) -> FiniteMetricSpace:
    """Generalized space of a poset: d(a,b) = 0 if a <= b, else inf.

    ``covers`` holds ``(a, b)`` pairs meaning a < b.  The transitive closure
    is taken; a cycle raises :class:`CycleDetected`.
    """
    elems = list(elements)
    index = {e: i for i, e in enumerate(elems)}
    n = len(elems)
    adj = [set() for _ in range(n)]
    for a, b in covers:
        if a not in index or b not in index:
            raise KeyError(f"cover ({a},{b}) mentions unknown element")
        adj[index[a]].add(index[b])

    # Kahn topological sort doubles as the cycle check.
    indeg = [0] * n
    for a in range(n):
        for b in adj[a]:
            indeg[b] += 1
    queue = [i for i in range(n) if indeg[i] == 0]
    topo = []
    while queue:
        a = queue.pop()
        topo.append(a)
        for b in adj[a]:
            indeg[b] -= 1
            if indeg[b] == 0:
                queue.append(b)
    if len(topo) != n:
        raise CycleDetected("cover relations contain a cycle")

    leq = np.eye(n, dtype=bool)
    for a in reversed(topo):  # closure: a <= b iff a covers c <= b
        for c in adj[a]:
            leq[a] |= leq[c]
    d = np.where(leq, 0.0, np.inf)
    np.fill_diagonal(d, 0.0)
    return _build(d, labels=elems, generalized=True, validate=False)


# --------------------------------------------------------------------------
# transformations
# --------------------------------------------------------------------------

def scale(space: FiniteMetricSpace, t: float) -> FiniteMetricSpace:
    """The space tA with every distance multiplied by t > 0 (t*inf = inf)."""
    if not t > 0:
        raise NonpositiveScale(f"scale factor must be positive, got {t}")
    return FiniteMetricSpace(
        labels=space.labels,
        dist=space.dist * float(t),
        symmetric=space.symmetric,
        generalized=space.generalized,
    )


def tensor_product(a: FiniteMetricSpace, b: FiniteMetricSpace, p=1
                   ) -> FiniteMetricSpace:
    """Product space on pairs with d = (d_A^p + d_B^p)^{1/p}, p in {1, inf}.

    p=1 is the tensor product appearing in every magnitude product theorem;
    p=inf is the categorical product.
    """
    da, db = a.dist, b.dist
    if p == 1:
        d = (da[:, None, :, None] + db[None, :, None, :])
    elif p == math.inf or p == "inf":
        d = np.maximum(da[:, None, :, None], db[None, :, None, :])
    else:
        raise ValueError(f"unsupported product p={p!r}")
    n = len(a) * len(b)
    d = d.reshape(n, n)
    labels = tuple((la, lb) for la in a.labels for lb in b.labels)
    return FiniteMetricSpace(
        labels=labels, dist=d,
        symmetric=a.symmetric and b.symmetric,
        generalized=a.generalized or b.generalized,
    )


def distant_union(a: FiniteMetricSpace, b: FiniteMetricSpace
                  ) -> FiniteMetricSpace:
    """Disjoint union with all cross-distances infinite."""
    na, nb = len(a), len(b)
    d = np.full((na + nb, na + nb), np.inf)
    d[:na, :na] = a.dist
    d[na:, na:] = b.dist
    return FiniteMetricSpace(
        labels=a.labels + b.labels, dist=d,
        symmetric=a.symmetric and b.symmetric,
        generalized=a.generalized or b.generalized,
    )


def constant_distance_glue(a: FiniteMetricSpace, b: FiniteMetricSpace,
                           glue_distance: float) -> FiniteMetricSpace:
    """Disjoint union with every cross-distance equal to D.

    Requires D >= max(diam A, diam B)/2, which is exactly what the triangle
    inequality needs across the seam.
    """
    D = float(glue_distance)
    need = max(a.diameter(), b.diameter()) / 2.0
    if D < need * (1 - TAU_METRIC):
        raise GlueDistanceTooSmall(
            f"D={D} < max(diam A, diam B)/2 = {need}"
        )
    na, nb = len(a), len(b)
    d = np.full((na + nb, na + nb), D)
    d[:na, :na] = a.dist
    d[na:, na:] = b.dist
    return FiniteMetricSpace(
        labels=tuple(("A", l) for l in a.labels) + tuple(("B", l) for l in b.labels),
        dist=d,
        symmetric=a.symmetric and b.symmetric,
        generalized=a.generalized or b.generalized,
    )


# --------------------------------------------------------------------------
# structure checks
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectionCheck:
    """Outcome of a projection test: gates pi(a) in A∩B, one per point of A."""
    holds: bool
    projector: dict


def check_projection(space: FiniteMetricSpace, a_idx: Sequence[int],
                     b_idx: Sequence[int]) -> ProjectionCheck:
    """Does A project to B inside this space?

    A projects to B when every a in A has a gate c in A∩B with
    d(a,b) = d(a,c) + d(c,b) for all b in B.  Witnesses are searched
    exhaustively; equality is tested within ``TAU_METRIC``.
    """
    d = space.dist
    a_set = list(dict.fromkeys(a_idx))
    b_set = list(dict.fromkeys(b_idx))
    common = [i for i in a_set if i in set(b_set)]
    projector = {}
    for a in a_set:
        gate = None
        for c in common:
            with np.errstate(invalid="ignore"):
                ok = all(
                    _close(d[a, b], d[a, c] + d[c, b])
                    for b in b_set
                )
            if ok:
                gate = c
                break
        if gate is None:
            return ProjectionCheck(False, projector)
        projector[a] = gate
    return ProjectionCheck(True, projector)


def check_fibration(total: FiniteMetricSpace, base: FiniteMetricSpace,
                    pmap: Mapping | Sequence) -> bool:
    """Is pmap: total -> base a metric fibration?

    Checks that pmap is distance-decreasing and that for every a and every
    b' in the base at finite distance from p(a) there is a lift a_{b'} in
    the fibre over b' with d(a, a') = d(p(a), b') + d(a_{b'}, a') for all
    a' in that fibre.  Entirely exhaustive.
    """
    n, m = len(total), len(base)
    if isinstance(pmap, Mapping):
        img = [pmap[lab] for lab in total.labels]
        img = [base.index_of(x) if not isinstance(x, (int, np.integer)) else int(x)
               for x in img]
    else:
        img = [int(x) for x in pmap]
    if len(img) != n or any(not 0 <= x < m for x in img):
        return False

    dt, db = total.dist, base.dist
    for a in range(n):
        for a2 in range(n):
            if db[img[a], img[a2]] > dt[a, a2] and not _close(db[img[a], img[a2]], dt[a, a2]):
                return False

    fibres = [[a for a in range(n) if img[a] == b] for b in range(m)]
    for a in range(n):
        pa = img[a]
        for b2 in range(m):
            if math.isinf(db[pa, b2]):
                continue
            fibre = fibres[b2]
            if not fibre:
                return False
            found = False
            for cand in fibre:
                if all(_close(dt[a, a2], db[pa, b2] + dt[cand, a2]) for a2 in fibre):
                    found = True
                    break
            if not found:
                return False
    return True


# --------------------------------------------------------------------------
# predicates
# --------------------------------------------------------------------------

def is_ultrametric(space: FiniteMetricSpace) -> bool:
    """max{d(a,b), d(b,c)} >= d(a,c) for all triples (within tolerance)."""
    d = space.dist
    n = len(space)
    for b in range(n):
        strong = np.maximum(d[:, b : b + 1], d[b : b + 1, :])
        slack = np.where(np.isinf(strong), np.inf,
                         TAU_METRIC * np.maximum(1.0, strong))
        if (d > strong + slack).any():
            return False
    return True


def is_scattered(space: FiniteMetricSpace) -> bool:
    """All distances strictly exceed log(n-1); vacuous for n <= 1."""
    n = len(space)
    if n <= 1:
        return True
    threshold = math.log(n - 1)
    off = space.dist[~np.eye(n, dtype=bool)]
    return bool((off > threshold).all())


def _profile_keys(space: FiniteMetricSpace) -> list:
    """Per-point invariant under isometry: sorted, rounded row+column."""
    d = space.dist
    keys = []
    for i in range(len(space)):
        row = tuple(sorted(np.round(d[i], 9)))
        col = tuple(sorted(np.round(d[:, i], 9)))
        keys.append((row, col))
    return keys


def is_homogeneous(space: FiniteMetricSpace) -> bool:
    """Does the isometry group act transitively on points?

    For each target point y a distance-preserving bijection sending point 0
    to y is searched by backtracking over profile-compatible candidates.
    Worst case exponential; the profile pruning makes the spaces this
    package targets (a few hundred points) fast in practice.
    """
    n = len(space)
    if n <= 1:
        return True
    d = space.dist
    keys = _profile_keys(space)
    base_key = keys[0]
    if any(k != base_key for k in keys):
        return False  # transitivity forces identical profiles

    def extend(sigma, used, i):
        if i == n:
            return True
        for z in range(n):
            if used[z]:
                continue
            ok = True
            for j in range(i):
                if not (_close(d[i, j], d[z, sigma[j]]) and
                        _close(d[j, i], d[sigma[j], z])):
                    ok = False
                    break
            if ok:
                sigma[i] = z
                used[z] = True
                if extend(sigma, used, i + 1):
                    return True
                used[z] = False
        return False

    for target in range(1, n):
        sigma = [-1] * n
        used = [False] * n
        sigma[0] = target
        used[target] = True
        if not extend(sigma, used, 1):
            return False
    return True
