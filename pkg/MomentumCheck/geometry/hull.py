# -*- coding: utf-8 *-*
"""Convex hulls in dimension n <= 4

Gift wrapping is used in the plane (exactly when the input is rational),
Qhull through scipy for n = 3, 4. Inputs that span a lower dimensional
affine subspace are wrapped in coordinates of that subspace.

Included functions:

    - convex_hull
    - ccw_hull_2d
    - polygon_distance
    - polygon_hausdorff
    - hull_equations

"""
import logging

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from MomentumCheck.errors import InputError
from MomentumCheck.util.exact_util import as_point, as_float, is_exact

log = logging.getLogger(__name__)

MAX_HULL_DIM = 4
DEFAULT_RANK_TOL = 1e-12
TWO_PI = 2.0 * np.pi


def _unique_rows(P):
    if P.dtype != object:
        _, idx = np.unique(P, axis=0, return_index=True)
        return np.sort(idx)
    seen = {}
    for i, row in enumerate(P):
        seen.setdefault(tuple(row), i)
    return np.array(sorted(seen.values()), dtype=int)


def _cross_exact(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _gift_wrap_exact(P):
    m = len(P)
    start = min(range(m), key=lambda i: (P[i][0], P[i][1]))
    hull = [start]
    current = start
    for _ in range(m + 1):
        q = (current + 1) % m
        for j in range(m):
            if j == current:
                continue
            turn = _cross_exact(P[current], P[q], P[j])
            if turn < 0:
                q = j
            elif turn == 0:
                dq = (P[q][0] - P[current][0]) ** 2 + (P[q][1] - P[current][1]) ** 2
                dj = (P[j][0] - P[current][0]) ** 2 + (P[j][1] - P[current][1]) ** 2
                if dj > dq:
                    q = j
        if q == start:
            break
        hull.append(q)
        current = q
    return hull


def _gift_wrap_float(P, tol=1e-12):
    m = len(P)
    order = np.lexsort((P[:, 1], P[:, 0]))
    start = int(order[0])
    hull = [start]
    current = start
    heading = -np.pi / 2.0
    for _ in range(m + 1):
        V = P - P[current]
        dist = np.hypot(V[:, 0], V[:, 1])
        valid = dist > tol * max(1.0, dist.max())
        if not np.any(valid):
            break
        rel = np.mod(np.arctan2(V[:, 1], V[:, 0]) - heading, TWO_PI)
        rel[rel > TWO_PI - 1e-12] = 0.0
        rel[~valid] = np.inf
        best = rel.min()
        ties = np.flatnonzero(rel <= best + 1e-12)
        q = int(ties[np.argmax(dist[ties])])
        if q == start:
            break
        heading = np.arctan2(V[q, 1], V[q, 0])
        hull.append(q)
        current = q
    return hull


def _affine_frame(P, tol=DEFAULT_RANK_TOL):
    center = P.mean(axis=0)
    X = P - center
    if not np.any(X):
        return center, np.zeros((P.shape[1], 0))
    _, s, Vt = np.linalg.svd(X, full_matrices=False)
    rank = int(np.sum(s > tol * max(1.0, s.max()) * max(X.shape)))
    return center, Vt[:rank].T


def _hull_indices(P, exact):
    """Indices of hull vertices of unique points P, in no particular order"""
    m, n = P.shape
    if m == 1:
        return [0]
    if n == 1:
        values = list(P[:, 0])
        lo = min(range(m), key=lambda i: values[i])
        hi = max(range(m), key=lambda i: values[i])
        return sorted({lo, hi})
    F = as_float(P)
    center, frame = _affine_frame(F)
    rank = frame.shape[1]
    if rank == 0:
        return [0]
    if rank == n == 2:
        return _gift_wrap_exact(list(P)) if exact else _gift_wrap_float(F)
    Y = (F - center).dot(frame)
    if rank == 1:
        return sorted({int(np.argmin(Y[:, 0])), int(np.argmax(Y[:, 0]))})
    if rank == 2:
        return _gift_wrap_float(Y)
    try:
        return list(ConvexHull(Y).vertices)
    except QhullError:
        log.warning("qhull failed on %d points of rank %d", m, rank)
        raise InputError("degenerate point set for the convex hull")


def _prepare(points):
    if points is None or len(points) == 0:
        raise InputError("convex hull of an empty point set")
    if isinstance(points, np.ndarray) and points.dtype != object and points.ndim == 2:
        if points.shape[1] == 0 or points.shape[1] > MAX_HULL_DIM:
            raise InputError("convex hull supports dimensions 1..{0}, got {1}".format(MAX_HULL_DIM, points.shape[1]))
        return points.astype(float), False
    rows = [np.asarray(p, dtype=object).ravel() for p in points]
    dims = {len(r) for r in rows}
    if len(dims) != 1:
        raise InputError("points of different dimensions: {0}".format(sorted(dims)))
    n = dims.pop()
    if n == 0 or n > MAX_HULL_DIM:
        raise InputError("convex hull supports dimensions 1..{0}, got {1}".format(MAX_HULL_DIM, n))
    exact = all(is_exact(r) for r in rows)
    P = np.array([as_point(r, exact=exact) for r in rows],
                 dtype=object if exact else float).reshape(len(rows), n)
    return P, exact


def convex_hull(points):
    """Minimal vertex set of the convex hull of a point set

    Args:
        points (list of sequences): At least one point, all of the same
            dimension n <= 4. Rational points give an exact planar hull.

    Returns:
        list of np.ndarray: Hull vertices in lexicographic order

    Raises:
        InputError: Empty input, mixed dimensions or n > 4

    """
    P, exact = _prepare(points)
    keep = _unique_rows(P)
    U = P[keep]
    idx = _hull_indices(U, exact)
    vertices = [U[i] for i in idx]
    return sorted(vertices, key=lambda v: tuple(v))


def ccw_hull_2d(points):
    """Planar hull vertices in counterclockwise order from the lowest-left one"""
    P, exact = _prepare(points)
    if P.shape[1] != 2:
        raise InputError("ccw_hull_2d needs planar points")
    U = as_float(P[_unique_rows(P)])
    if len(U) == 1:
        return U
    _, frame = _affine_frame(U)
    if frame.shape[1] < 2:
        order = np.lexsort((U[:, 1], U[:, 0]))
        return U[[order[0], order[-1]]]
    return U[_gift_wrap_float(U)]


def _segment_distance(X, a, b):
    ab = b - a
    denom = float(ab.dot(ab))
    if denom == 0.0:
        return np.linalg.norm(X - a, axis=1)
    t = np.clip((X - a).dot(ab) / denom, 0.0, 1.0)
    return np.linalg.norm(X - (a + t[:, None] * ab), axis=1)


def polygon_distance(X, polygon):
    """Distance from planar points to a convex polygon (0 inside)

    Args:
        X (np.ndarray): (N, 2) points
        polygon (np.ndarray): (k, 2) vertices in counterclockwise order;
            k = 1, 2 describe a point and a segment

    Returns:
        np.ndarray: (N,) distances
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    polygon = np.atleast_2d(np.asarray(polygon, dtype=float))
    k = len(polygon)
    if k == 1:
        return np.linalg.norm(X - polygon[0], axis=1)
    edges = [(polygon[i], polygon[(i + 1) % k]) for i in range(k if k > 2 else 1)]
    d = np.min([_segment_distance(X, a, b) for a, b in edges], axis=0)
    if k > 2:
        inside = np.ones(len(X), dtype=bool)
        for a, b in edges:
            cross = (b[0] - a[0]) * (X[:, 1] - a[1]) - (b[1] - a[1]) * (X[:, 0] - a[0])
            inside &= cross >= 0
        d[inside] = 0.0
    return d


def polygon_hausdorff(P, Q):
    """Two-sided Hausdorff distance between the convex hulls of two planar sets"""
    A = ccw_hull_2d(P)
    B = ccw_hull_2d(Q)
    return float(max(polygon_distance(A, B).max(), polygon_distance(B, A).max()))


def hull_equations(points):
    """Outward unit facet normals and offsets of a full dimensional hull

    Returns:
        np.ndarray or None: (f, n + 1) rows [normal, offset] with
            normal . x + offset <= 0 inside, or None if the points do not
            span a full dimensional hull.
    """
    P = np.asarray(as_float(np.asarray(points, dtype=object)), dtype=float)
    if P.ndim != 2 or P.shape[1] < 2 or len(P) <= P.shape[1]:
        return None
    try:
        return ConvexHull(P).equations
    except QhullError:
        return None
