# -*- coding: utf-8 *-*
"""Polyhedral convex cones with a vertex

A cone is stored as

    vertex + span(subspace_basis) + cone(generators)

and membership is decided by linear feasibility. In exact mode the
feasibility problems are solved over the rationals on every Caratheodory
chart of the cone; in float mode a nonnegative least squares fit decides
single points and precomputed chart pseudo-inverses decide point clouds.

"""
import itertools
import logging

import numpy as np
from scipy.optimize import nnls

from MomentumCheck.errors import InputError
from MomentumCheck.util.exact_util import (as_point, as_float, is_exact,
                                          elimination_matrix,
                                          solve_with_elimination, exact_rank)

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9


def _as_directions(vectors, dim, exact):
    if vectors is None or len(vectors) == 0:
        return np.zeros((0, dim), dtype=object if exact else float)
    rows = [as_point(v, exact=exact) for v in vectors]
    for row in rows:
        if row.shape != (dim,):
            raise InputError("direction {0} does not have dimension {1}".format(list(row), dim))
    return np.vstack(rows) if not exact else np.array(rows, dtype=object).reshape(len(rows), dim)


class ConvexCone(object):
    def __init__(self, vertex, subspace_basis=(), generators=()):
        """ConvexCone class initializer

        Args:
            vertex (sequence): The vertex of the cone
            subspace_basis (list of sequences): Linearly independent
                directions spanning the lineality part. May be empty.
            generators (list of sequences): Nonzero directions whose
                nonnegative combinations form the pointed part. May be empty.

        Raises:
            InputError: On dimension mismatch, zero generators or a
                dependent subspace basis.

        """
        pieces = [vertex] + list(subspace_basis or []) + list(generators or [])
        exact = all(is_exact(np.asarray(p, dtype=object)) for p in pieces)
        self._vertex = as_point(vertex, exact=exact)
        if self._vertex.ndim != 1:
            raise InputError("vertex must be a vector")
        self._exact = exact
        dim = self._vertex.shape[0]
        self._subspace = _as_directions(subspace_basis, dim, exact)
        self._generators = _as_directions(generators, dim, exact)

        for g in self._generators:
            if all(v == 0 for v in g):
                raise InputError("degenerate generator list: zero vector")
        if len(self._subspace):
            rank = exact_rank(self._subspace) if exact else np.linalg.matrix_rank(self._subspace)
            if rank < len(self._subspace):
                raise InputError("subspace basis is linearly dependent")
        self._charts = None
        self._solvers = None
        self._projectors = None

    @property
    def dim(self):
        return self._vertex.shape[0]

    @property
    def exact(self):
        return self._exact

    @property
    def vertex(self):
        return self._vertex

    @property
    def subspace_basis(self):
        return self._subspace

    @property
    def generators(self):
        return self._generators

    def as_float(self):
        """Float copy of this cone"""
        if not self._exact:
            return self
        return ConvexCone(as_float(self._vertex), list(as_float(self._subspace)),
                          list(as_float(self._generators)))

    def translated(self, vertex):
        """Same directions, new vertex"""
        return ConvexCone(vertex, list(self._subspace), list(self._generators))

    def column_matrix(self, chart=None):
        """Columns [subspace | generators(chart)] as an (n, k) matrix"""
        gens = self._generators if chart is None else self._generators[list(chart)]
        cols = list(self._subspace) + list(gens)
        if not cols:
            return np.zeros((self.dim, 0), dtype=object if self._exact else float)
        return np.array(cols, dtype=object if self._exact else float).T

    def span_rank(self):
        M = self.column_matrix()
        if M.shape[1] == 0:
            return 0
        return exact_rank(M) if self._exact else int(np.linalg.matrix_rank(as_float(M)))

    def charts(self):
        """Caratheodory charts of the cone

        A chart is a set J of generator indices such that the subspace basis
        together with the generators in J is a basis of the span of the cone.
        Every member of the cone is a nonnegative combination on some chart.

        Returns:
            list of tuples: Generator index tuples, lexicographic order

        """
        if self._charts is not None:
            return self._charts
        k = len(self._subspace)
        r = self.span_rank() - k
        charts = []
        for J in itertools.combinations(range(len(self._generators)), r):
            M = self.column_matrix(J)
            if M.shape[1] == 0:
                rank = 0
            elif self._exact:
                rank = exact_rank(M)
            else:
                rank = np.linalg.matrix_rank(as_float(M))
            if rank == k + r:
                charts.append(J)
        self._charts = charts
        return charts

    def _exact_solvers(self):
        if self._solvers is None:
            self._solvers = []
            for J in self.charts():
                M = self.column_matrix(J)
                E, pivots = elimination_matrix(M) if M.shape[1] else (None, [])
                self._solvers.append((J, M.shape[1], E, pivots))
        return self._solvers

    def _float_projectors(self):
        if self._projectors is None:
            self._projectors = []
            for J in self.charts():
                M = as_float(self.column_matrix(J))
                P = np.linalg.pinv(M) if M.shape[1] else np.zeros((0, self.dim))
                self._projectors.append((J, M, P))
        return self._projectors

    def chart_coefficients(self, chart_index, points):
        """Coefficients of points on one chart in float mode

        Args:
            chart_index (int): Index into `charts()`
            points (np.ndarray): (N, n) displacement vectors from the vertex

        Returns:
            tuple: (coefficients (N, k + r), residual norms (N,))

        """
        J, M, P = self._float_projectors()[chart_index]
        coeffs = points.dot(P.T)
        residual = np.linalg.norm(points - coeffs.dot(M.T), axis=1)
        return coeffs, residual


def _check_dimension(cone, p):
    if p.ndim != 1 or p.shape[0] != cone.dim:
        raise InputError("point of dimension {0} tested against a cone of dimension {1}"
                         .format(p.shape[-1] if p.ndim else 0, cone.dim))


def cone_contains(cone, p, tol=DEFAULT_TOL):
    """Decide whether a point lies in a cone

    Args:
        cone (ConvexCone): The cone
        p (sequence): The point
        tol (:obj:`float`, optional): Nonnegativity tolerance. Zero is only
            allowed in exact mode, where it is the only meaningful value.

    Returns:
        bool: True iff p - vertex = s + sum(a_i g_i) with s in the subspace
            and a_i >= 0.

    Raises:
        InputError: Dimension mismatch, or tol = 0 in float mode

    """
    if tol < 0:
        raise InputError("tol must be nonnegative")
    exact = cone.exact and is_exact(np.asarray(p, dtype=object))
    if exact:
        p = as_point(p, exact=True)
        _check_dimension(cone, p)
        d = p - cone.vertex
        k = len(cone.subspace_basis)
        for J, cols, E, pivots in cone._exact_solvers():
            if cols == 0:
                if all(v == 0 for v in d):
                    return True
                continue
            x = solve_with_elimination(E, pivots, cols, d)
            if x is not None and all(a >= 0 for a in x[k:]):
                return True
        return False

    if tol == 0:
        raise InputError("tol = 0 is only allowed in exact mode")
    p = as_point(p, exact=False)
    _check_dimension(cone, p)
    fcone = cone.as_float()
    d = p - fcone.vertex
    scale = max(1.0, float(np.linalg.norm(d)))
    S = fcone.subspace_basis
    G = fcone.generators
    blocks = [S.T, -S.T, G.T]
    A = np.hstack([b for b in blocks if b.size] or [np.zeros((cone.dim, 1))])
    _, residual = nnls(A, d)
    return bool(residual <= tol * scale)


def cone_contains_many(cone, points, tol=DEFAULT_TOL):
    """Vectorized float membership over chart pseudo-inverses

    Args:
        cone (ConvexCone): The cone
        points (np.ndarray): (N, n) points
        tol (:obj:`float`, optional): Tolerance on residuals and on
            negative coefficients, relative to max(1, |p - vertex|)

    Returns:
        np.ndarray: (N,) booleans, agreeing with `cone_contains`

    """
    points = np.atleast_2d(as_float(points))
    if points.shape[1] != cone.dim:
        raise InputError("points of dimension {0} tested against a cone of dimension {1}"
                         .format(points.shape[1], cone.dim))
    fcone = cone.as_float()
    d = points - fcone.vertex
    scale = np.maximum(1.0, np.linalg.norm(d, axis=1))
    k = len(cone.subspace_basis)
    inside = np.zeros(len(points), dtype=bool)
    for index, J in enumerate(cone.charts()):
        coeffs, residual = cone.chart_coefficients(index, d)
        ok = residual <= tol * scale
        if coeffs.shape[1] > k:
            ok &= np.all(coeffs[:, k:] >= -tol * scale[:, None], axis=1)
        inside |= ok
    return inside


def coefficient_radius(cone):
    """Smallest singular value over the chart matrices of a float cone

    A displacement of length rho inside the cone has chart coefficients of
    size at most rho divided by this number.
    """
    sigmas = []
    for J in cone.charts():
        M = as_float(cone.column_matrix(J))
        if M.shape[1]:
            sigmas.append(np.linalg.svd(M, compute_uv=False).min())
    return min(sigmas) if sigmas else np.inf


def cone_frame(cone):
    """Orthonormal basis (n, r) of the linear span of the cone directions"""
    M = as_float(cone.column_matrix())
    if M.shape[1] == 0:
        return np.zeros((cone.dim, 0))
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    rank = int(np.sum(s > 1e-12 * max(1.0, s.max())))
    return U[:, :rank]


def cone_to_dict(cone):
    return {'vertex': list(cone.vertex),
            'subspace': [list(v) for v in cone.subspace_basis],
            'generators': [list(g) for g in cone.generators]}


def cone_from_dict(payload):
    try:
        return ConvexCone(payload['vertex'], payload.get('subspace', []),
                          payload.get('generators', []))
    except KeyError as e:
        raise InputError("cone JSON is missing field {0}".format(e))
