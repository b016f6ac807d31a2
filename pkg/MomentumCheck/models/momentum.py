# -*- coding: utf-8 *-*
"""Analytic momentum maps of the built-in scenes

Using MomentumMap as a base means you will only need to specify

- the name
- how domain points are drawn
- the map itself and its regular stratum

and, where the scene knows them, the fiber components, an exhaustion of
the domain and the local models at sample points.

Domain points are rows of real coordinates. Complex coordinates are stored
as consecutive (real, imaginary) pairs.

"""
import logging

import numpy as np

from MomentumCheck.errors import InputError
from MomentumCheck.models.local_model import LocalModel
from MomentumCheck.util.data_util import stratified_unit
from MomentumCheck.util.linalg_util import (conjugate, haar_unitaries,
                                            hermitian_spectra)

log = logging.getLogger(__name__)

DEFAULT_MAX_VALUE = 2.0
DEFAULT_SINGULAR_FRACTION = 0.1
DEFAULT_N_THETA = 32
DEFAULT_P_MAX = 2.0
TWO_PI = 2.0 * np.pi


def _norms_sq(X, pairs):
    return np.stack([X[:, 2 * j + o] ** 2 + X[:, 2 * j + o + 1] ** 2
                     for j, o in pairs], axis=1)


def _polar_columns(norms_sq, phases):
    """Real coordinates of complex numbers with given |z|^2 and phases"""
    radius = np.sqrt(np.maximum(norms_sq, 0.0))
    cols = []
    for k in range(norms_sq.shape[1]):
        cols.append(radius[:, k] * np.cos(phases[:, k]))
        cols.append(radius[:, k] * np.sin(phases[:, k]))
    return np.stack(cols, axis=1)


def _rotate_pairs(X, columns, rng):
    X = np.array(X, dtype=float, copy=True)
    for c in columns:
        theta = rng.uniform(0.0, TWO_PI, size=len(X))
        re, im = X[:, c].copy(), X[:, c + 1].copy()
        X[:, c] = np.cos(theta) * re - np.sin(theta) * im
        X[:, c + 1] = np.sin(theta) * re + np.cos(theta) * im
    return X


def _split(total, fractions):
    """Index ranges [lo, hi) of consecutive blocks of a run"""
    bounds = [0]
    for f in fractions[:-1]:
        bounds.append(bounds[-1] + int(round(f * total)))
    bounds.append(total)
    return list(zip(bounds[:-1], bounds[1:]))


def _block(start, size, lo, hi):
    """Part of items [start, start + size) falling into block [lo, hi)"""
    a, b = max(start, lo), min(start + size, hi)
    return (a, b) if a < b else None


class MomentumMap(object):
    """Abstract momentum map on a sampled domain"""

    group = 'torus'

    @property
    def name(self):
        """Name of the momentum map"""
        raise NotImplementedError('return the name of the momentum map')

    @property
    def sample_dim(self):
        """Number of real domain coordinates"""
        raise NotImplementedError('return the domain dimension')

    @property
    def dim_target(self):
        return len(self.image_box[0])

    @property
    def image_box(self):
        """(lo, hi) box containing the sampled image"""
        raise NotImplementedError('return the image box')

    @property
    def fixed_points(self):
        """Images of the fixed points of the action"""
        return []

    def evaluate(self, X):
        """Values at (N, sample_dim) domain points"""
        raise NotImplementedError('evaluate the momentum map here')

    def regular(self, X):
        """Regular stratum indicator at domain points"""
        raise NotImplementedError('return the regular stratum indicator')

    def draw(self, rng, start, size, total):
        """Items start .. start + size - 1 of a run of `total` domain samples"""
        raise NotImplementedError('draw domain samples here')

    def accept(self, X):
        """Rejection predicate carving the domain out of the drawn box"""
        return np.ones(len(X), dtype=bool)

    def act(self, X, rng):
        """Random group elements acting on domain points"""
        return _rotate_pairs(X, self._complex_columns(), rng)

    def _complex_columns(self):
        return list(range(0, self.sample_dim - 1, 2))

    def fiber_components(self, value):
        """Fiber components over `value` as dicts with a `regular` flag

        Returns None when the scene has no oracle.
        """
        return None

    def exhaustion(self, X):
        """Proper function on the domain, None for a compact domain"""
        return None

    def escape_points(self, rng, n, level):
        """Domain points at exhaustion level `level`, None for a compact domain"""
        return None

    def local_model(self, x):
        """Normal form model at a domain point, when known"""
        return None

    def graph_coordinates(self, X):
        """Coordinates in which sample graphs are built"""
        return np.asarray(X, dtype=float)

    def grid(self):
        """Structured discretization of the domain, when the scene has one"""
        return None

    def descriptor(self):
        return {'builtin': self.name}


class TorusQuadratic(MomentumMap):
    def __init__(self, excluded_radius=None, ball=None, max_value=DEFAULT_MAX_VALUE,
                 singular_fraction=DEFAULT_SINGULAR_FRACTION):
        """Standard T^2 action on C^2 with J = (|z1|^2, |z2|^2) / 2

        Args:
            excluded_radius (:obj:`float`, optional): Remove the closed
                bidisk of this radius from the domain
            ball (:obj:`float`, optional): Restrict to |z|^2 / 2 <= ball
            max_value (:obj:`float`, optional): Largest sampled value per
                coordinate. Defaults to 2
            singular_fraction (:obj:`float`, optional): Share of samples
                drawn on the coordinate axes

        """
        if excluded_radius is not None and ball is not None:
            raise InputError("a bidisk complement and a ball cannot be combined")
        self.excluded_radius = excluded_radius
        self.ball = ball
        self.max_value = float(ball if ball is not None else max_value)
        self.singular_fraction = float(singular_fraction)

    @property
    def name(self):
        if self.excluded_radius is not None:
            return 'prato'
        return 'c2_standard' if self.ball is None else 'c2_ball'

    @property
    def sample_dim(self):
        return 4

    @property
    def image_box(self):
        return np.zeros(2), np.full(2, self.max_value)

    @property
    def fixed_points(self):
        if self.excluded_radius is not None:
            return []
        if self.ball is not None:
            c = self.ball
            return [np.array([0.0, 0.0]), np.array([c, 0.0]), np.array([0.0, c])]
        return [np.zeros(2)]

    def evaluate(self, X):
        return 0.5 * _norms_sq(np.atleast_2d(X), [(0, 0), (1, 0)])

    def regular(self, X):
        n = _norms_sq(np.atleast_2d(X), [(0, 0), (1, 0)])
        return np.all(n > 0, axis=1)

    def draw(self, rng, start, size, total):
        values = np.empty((size, 2))
        blocks = _split(total, [1.0 - self.singular_fraction, self.singular_fraction])
        lo, hi = blocks[0]
        part = _block(start, size, lo, hi)
        if part:
            a, b = part
            values[a - start:b - start] = self.max_value * stratified_unit(rng, a - lo, b - a, hi - lo, 2)
        lo, hi = blocks[1]
        part = _block(start, size, lo, hi)
        if part:
            a, b = part
            line = self.max_value * stratified_unit(rng, a - lo, b - a, hi - lo, 1)[:, 0]
            axis = np.arange(a, b) % 2
            values[a - start:b - start, 0] = np.where(axis == 0, 0.0, line)
            values[a - start:b - start, 1] = np.where(axis == 0, line, 0.0)
        phases = rng.uniform(0.0, TWO_PI, size=(size, 2))
        return _polar_columns(2.0 * values, phases)

    def accept(self, X):
        n = _norms_sq(np.atleast_2d(X), [(0, 0), (1, 0)])
        if self.excluded_radius is not None:
            r2 = self.excluded_radius ** 2
            return ~np.all(n <= r2, axis=1)
        if self.ball is not None:
            return 0.5 * n.sum(axis=1) <= self.ball
        return np.ones(len(n), dtype=bool)

    def _in_image(self, v):
        if np.any(v < 0):
            return False
        if self.excluded_radius is not None:
            return not np.all(v <= 0.5 * self.excluded_radius ** 2)
        if self.ball is not None:
            return v.sum() <= self.ball
        return True

    def fiber_components(self, value):
        v = np.asarray(value, dtype=float)
        if v.shape != (2,):
            raise InputError("value of dimension {0} for a map into R^2".format(v.size))
        if not self._in_image(v):
            return []
        return [{'component': 'torus', 'regular': bool(np.all(v > 0))}]

    def exhaustion(self, X):
        if self.ball is not None:
            return None
        n = _norms_sq(np.atleast_2d(X), [(0, 0), (1, 0)])
        e = n.sum(axis=1)
        if self.excluded_radius is not None:
            gap = np.hypot(np.maximum(np.sqrt(n[:, 0]) - self.excluded_radius, 0.0),
                           np.maximum(np.sqrt(n[:, 1]) - self.excluded_radius, 0.0))
            e = np.maximum(e, 1.0 / np.maximum(gap, 1e-300))
        return e

    def escape_points(self, rng, n, level):
        if self.ball is not None:
            return None
        g = rng.standard_normal((n, 4))
        g *= np.sqrt(level) / np.linalg.norm(g, axis=1, keepdims=True)
        if self.excluded_radius is None:
            return g
        r = self.excluded_radius
        k = n // 2
        norms = np.stack([np.full(k, (r + 1.0 / level) ** 2),
                          (r * rng.uniform(0.0, 1.0, size=k)) ** 2], axis=1)
        swap = rng.uniform(size=k) < 0.5
        norms[swap] = norms[swap][:, ::-1]
        near = _polar_columns(norms, rng.uniform(0.0, TWO_PI, size=(k, 2)))
        return np.vstack([g[:n - k], near])

    def local_model(self, x):
        x = np.asarray(x, dtype=float).reshape(1, 4)
        base = self.evaluate(x)[0]
        n = _norms_sq(x, [(0, 0), (1, 0)])[0]
        eye = np.eye(2)
        free = [eye[i] for i in range(2) if n[i] > 0]
        weights = [eye[i] for i in range(2) if n[i] == 0]
        return LocalModel(base, len(free), free, weights)


class ProjectiveToric(MomentumMap):
    def __init__(self, singular_fraction=0.05):
        """Standard T^2 action on CP^2

        J[z0:z1:z2] = (|z1|^2, |z2|^2) / (2 |z|^2), with image the triangle
        spanned by the three fixed point values.
        """
        self.singular_fraction = float(singular_fraction)
        self._vertices = np.array([[0.0, 0.0], [0.5, 0.0], [0.0, 0.5]])

    @property
    def name(self):
        return 'cp2_toric'

    @property
    def sample_dim(self):
        return 6

    @property
    def image_box(self):
        return np.zeros(2), np.full(2, 0.5)

    @property
    def fixed_points(self):
        return [v.copy() for v in self._vertices]

    def evaluate(self, X):
        n = _norms_sq(np.atleast_2d(X), [(0, 0), (1, 0), (2, 0)])
        return 0.5 * n[:, 1:] / n.sum(axis=1, keepdims=True)

    def regular(self, X):
        n = _norms_sq(np.atleast_2d(X), [(0, 0), (1, 0), (2, 0)])
        return np.all(n > 0, axis=1)

    def draw(self, rng, start, size, total):
        g = rng.standard_normal((size, 6))
        n_regular = total - int(round(self.singular_fraction * total))
        index = np.arange(start, start + size)
        singular = index >= n_regular
        zero = index[singular] % 3
        for j in range(3):
            rows = np.flatnonzero(singular)[zero == j]
            g[rows, 2 * j:2 * j + 2] = 0.0
        return g / np.linalg.norm(g, axis=1, keepdims=True)

    def fiber_components(self, value):
        v = np.asarray(value, dtype=float)
        if v.shape != (2,):
            raise InputError("value of dimension {0} for a map into R^2".format(v.size))
        if np.any(v < 0) or v.sum() > 0.5:
            return []
        return [{'component': 'torus', 'regular': bool(np.all(v > 0) and v.sum() < 0.5)}]

    def local_model(self, x):
        x = np.asarray(x, dtype=float).reshape(1, 6)
        base = self.evaluate(x)[0]
        n = _norms_sq(x, [(0, 0), (1, 0), (2, 0)])[0]
        support = [j for j in range(3) if n[j] > 0]
        k = support[0]
        steps = [2.0 * (self._vertices[j] - self._vertices[k]) for j in range(3) if j != k]
        owners = [j for j in range(3) if j != k]
        free = [s for s, j in zip(steps, owners) if j in support]
        weights = [s for s, j in zip(steps, owners) if j not in support]
        return LocalModel(base, len(free), free, weights)


class CotangentCylinder(MomentumMap):
    def __init__(self, p_max=DEFAULT_P_MAX, n_theta=DEFAULT_N_THETA):
        """Lifted circle action on T*S^1, J(theta, p) = p

        The domain is truncated to |p| <= truncation, the largest multiple
        of the grid row spacing below p_max. Rows are spaced by the chord
        between neighbouring grid angles so that sample graphs are king
        graphs.
        """
        self.n_theta = int(n_theta)
        if self.n_theta < 8:
            raise InputError("n_theta must be at least 8")
        self.dp = 2.0 * np.sin(np.pi / self.n_theta)
        self.n_rows = int(np.floor(p_max / self.dp))
        self.truncation = self.n_rows * self.dp

    @property
    def name(self):
        return 'cylinder'

    @property
    def sample_dim(self):
        return 2

    @property
    def image_box(self):
        return np.array([-self.truncation]), np.array([self.truncation])

    def evaluate(self, X):
        return np.atleast_2d(X)[:, 1:2].astype(float)

    def regular(self, X):
        return np.ones(len(np.atleast_2d(X)), dtype=bool)

    def draw(self, rng, start, size, total):
        u = stratified_unit(rng, start, size, total, 2)
        return np.stack([TWO_PI * u[:, 0], self.truncation * (2.0 * u[:, 1] - 1.0)], axis=1)

    def act(self, X, rng):
        X = np.array(X, dtype=float, copy=True)
        X[:, 0] = np.mod(X[:, 0] + rng.uniform(0.0, TWO_PI, size=len(X)), TWO_PI)
        return X

    def graph_coordinates(self, X):
        X = np.atleast_2d(X)
        return np.stack([np.cos(X[:, 0]), np.sin(X[:, 0]), X[:, 1]], axis=1)

    def grid(self):
        theta = TWO_PI * np.arange(self.n_theta) / self.n_theta
        p = self.dp * np.arange(-self.n_rows, self.n_rows + 1)
        T, P = np.meshgrid(theta, p, indexing='xy')
        return np.stack([T.ravel(), P.ravel()], axis=1)

    def fiber_components(self, value):
        v = np.asarray(value, dtype=float).ravel()
        if v.shape != (1,):
            raise InputError("value of dimension {0} for a map into R".format(v.size))
        if abs(v[0]) > self.truncation:
            return []
        return [{'component': 'circle', 'regular': True}]

    def exhaustion(self, X):
        return np.abs(np.atleast_2d(X)[:, 1])

    def escape_points(self, rng, n, level):
        sign = np.where(rng.uniform(size=n) < 0.5, -1.0, 1.0)
        return np.stack([rng.uniform(0.0, TWO_PI, size=n), sign * level], axis=1)

    def local_model(self, x):
        p = float(np.asarray(x, dtype=float).ravel()[1])
        edge = self.truncation - 0.5 * self.dp
        if p >= edge:
            return LocalModel([p], 0, [], [[-1.0]])
        if p <= -edge:
            return LocalModel([p], 0, [], [[1.0]])
        return LocalModel([p], 1, [[1.0]], [])


class KarshonLerman(MomentumMap):
    def __init__(self, max_value=DEFAULT_MAX_VALUE, chart_fractions=(0.7, 0.2, 0.1)):
        """Two charts glued over the open positive quadrant

        Column 0 holds the chart. Chart 1 is T^2 x U, U the plane minus the
        origin and the positive x-axis, with J the projection onto U; its
        points are (theta1, theta2, u1, u2). Chart 2 is C^2 minus {z = 0}
        with J = (|z|^2, |w|^2) / 2; its singular stratum is w = 0.

        Args:
            max_value (:obj:`float`, optional): Half width of the image box
            chart_fractions (tuple): Shares of chart 1, regular chart 2 and
                singular chart 2 samples

        """
        self.max_value = float(max_value)
        self.chart_fractions = tuple(chart_fractions)

    @property
    def name(self):
        return 'karshon_lerman'

    @property
    def sample_dim(self):
        return 5

    @property
    def image_box(self):
        return np.full(2, -self.max_value), np.full(2, self.max_value)

    @staticmethod
    def _charts(X):
        X = np.atleast_2d(X)
        return X[:, 0] == 1, X[:, 0] == 2

    def evaluate(self, X):
        X = np.atleast_2d(X)
        first, second = self._charts(X)
        out = np.empty((len(X), 2))
        out[first] = X[first][:, 3:5]
        out[second] = 0.5 * _norms_sq(X[second][:, 1:], [(0, 0), (1, 0)])
        return out

    def regular(self, X):
        X = np.atleast_2d(X)
        first, second = self._charts(X)
        w = X[:, 3] ** 2 + X[:, 4] ** 2
        return first | (second & (w > 0))

    def draw(self, rng, start, size, total):
        X = np.zeros((size, 5))
        L = self.max_value
        for chart, (lo, hi) in enumerate(_split(total, self.chart_fractions)):
            part = _block(start, size, lo, hi)
            if not part:
                continue
            a, b = part
            rows = slice(a - start, b - start)
            if chart == 0:
                u = stratified_unit(rng, a - lo, b - a, hi - lo, 2)
                X[rows, 0] = 1
                X[rows, 1:3] = rng.uniform(0.0, TWO_PI, size=(b - a, 2))
                X[rows, 3:5] = L * (2.0 * u - 1.0)
                continue
            if chart == 1:
                values = L * stratified_unit(rng, a - lo, b - a, hi - lo, 2)
            else:
                values = np.zeros((b - a, 2))
                values[:, 0] = L * stratified_unit(rng, a - lo, b - a, hi - lo, 1)[:, 0]
            X[rows, 0] = 2
            X[rows, 1:5] = _polar_columns(2.0 * values, rng.uniform(0.0, TWO_PI, size=(b - a, 2)))
        return X

    def accept(self, X):
        X = np.atleast_2d(X)
        first, second = self._charts(X)
        on_axis = (X[:, 4] == 0) & (X[:, 3] >= 0)
        z = X[:, 1] ** 2 + X[:, 2] ** 2
        return (first & ~on_axis) | (second & (z > 0))

    def act(self, X, rng):
        X = np.array(X, dtype=float, copy=True)
        first, second = self._charts(X)
        shift = rng.uniform(0.0, TWO_PI, size=(int(first.sum()), 2))
        X[first, 1:3] = np.mod(X[first, 1:3] + shift, TWO_PI)
        X[second, 1:] = _rotate_pairs(X[second, 1:], [0, 2], rng)
        return X

    def fiber_components(self, value):
        v = np.asarray(value, dtype=float)
        if v.shape != (2,):
            raise InputError("value of dimension {0} for a map into R^2".format(v.size))
        if not np.any(v != 0):
            return []
        return [{'component': 'torus', 'regular': not (v[1] == 0 and v[0] > 0)}]

    def exhaustion(self, X):
        X = np.atleast_2d(X)
        J = self.evaluate(X)
        r = np.linalg.norm(J, axis=1)
        e = np.maximum(r, 1.0 / np.maximum(r, 1e-300))
        first, _ = self._charts(X)
        below = first & (J[:, 0] > 0) & (J[:, 1] < 0)
        e[below] = np.maximum(e[below], 1.0 / np.abs(J[below, 1]))
        return e

    def escape_points(self, rng, n, level):
        X = np.zeros((n, 5))
        X[:, 0] = 1
        X[:, 1:3] = rng.uniform(0.0, TWO_PI, size=(n, 2))
        X[:, 3] = rng.uniform(0.5, 1.0, size=n)
        X[:, 4] = -1.0 / level
        return X

    def local_model(self, x):
        x = np.asarray(x, dtype=float).ravel()
        base = self.evaluate(x[None, :])[0]
        eye = np.eye(2)
        if x[0] == 1:
            return LocalModel(base, 2, [eye[0], eye[1]], [])
        if x[3] ** 2 + x[4] ** 2 > 0:
            return LocalModel(base, 2, [eye[0], eye[1]], [])
        return LocalModel(base, 1, [eye[0]], [eye[1]])


class TwoSheet(MomentumMap):
    def __init__(self, max_value=DEFAULT_MAX_VALUE, singular_fraction=DEFAULT_SINGULAR_FRACTION):
        """Two sheets over the same quadrant

        Column 0 holds the sheet. Sheet 0 is the standard action on C^2.
        Sheet 1 is a square of fixed points mapped identically onto the
        quadrant, so every value over it has one regular and one singular
        fiber component.
        """
        self.max_value = float(max_value)
        self.singular_fraction = float(singular_fraction)
        self._sheet = TorusQuadratic(max_value=max_value, singular_fraction=singular_fraction)

    @property
    def name(self):
        return 'two_sheet'

    @property
    def sample_dim(self):
        return 5

    @property
    def image_box(self):
        return np.zeros(2), np.full(2, self.max_value)

    def evaluate(self, X):
        X = np.atleast_2d(X)
        out = np.empty((len(X), 2))
        torus = X[:, 0] == 0
        out[torus] = self._sheet.evaluate(X[torus][:, 1:])
        out[~torus] = X[~torus][:, 1:3]
        return out

    def regular(self, X):
        X = np.atleast_2d(X)
        torus = X[:, 0] == 0
        out = np.zeros(len(X), dtype=bool)
        out[torus] = self._sheet.regular(X[torus][:, 1:])
        return out

    def draw(self, rng, start, size, total):
        X = np.zeros((size, 5))
        for sheet, (lo, hi) in enumerate(_split(total, [0.5, 0.5])):
            part = _block(start, size, lo, hi)
            if not part:
                continue
            a, b = part
            rows = slice(a - start, b - start)
            X[rows, 0] = sheet
            if sheet == 0:
                X[rows, 1:] = self._sheet.draw(rng, a - lo, b - a, hi - lo)
            else:
                X[rows, 1:3] = self.max_value * stratified_unit(rng, a - lo, b - a, hi - lo, 2)
        return X

    def act(self, X, rng):
        X = np.array(X, dtype=float, copy=True)
        torus = X[:, 0] == 0
        X[torus, 1:] = _rotate_pairs(X[torus, 1:], [0, 2], rng)
        return X

    def fiber_components(self, value):
        v = np.asarray(value, dtype=float)
        components = list(self._sheet.fiber_components(v))
        if np.all(v >= 0) and np.all(v <= self.max_value):
            components.append({'component': 'fixed_sheet', 'regular': False})
        return components


class OrbitSum(MomentumMap):
    group = 'u(n)'

    def __init__(self, a=(1.0, 0.0), b=(1.0, 0.0)):
        """Diagonal U(2) action on a product of two coadjoint orbits

        Domain points are A + B, stored as the real and imaginary parts of
        the 2 x 2 Hermitian matrix; J is the decreasing spectrum.
        """
        self.a = np.asarray(a, dtype=float)
        self.b = np.asarray(b, dtype=float)
        if self.a.shape != (2,) or self.b.shape != (2,):
            raise InputError("orbit sums are implemented for n = 2 only")
        if self.a[0] < self.a[1] or self.b[0] < self.b[1]:
            raise InputError("spectra must be sorted decreasingly")

    @property
    def name(self):
        return 'u2_orbit_sum'

    @property
    def sample_dim(self):
        return 8

    @property
    def image_box(self):
        lo = self.a[1] + self.b[1]
        hi = self.a[0] + self.b[0]
        return np.full(2, lo), np.full(2, hi)

    @staticmethod
    def matrices(X):
        X = np.atleast_2d(X)
        return (X[:, :4] + 1j * X[:, 4:]).reshape(-1, 2, 2)

    @staticmethod
    def coordinates(H):
        H = H.reshape(-1, 4)
        return np.hstack([H.real, H.imag])

    def evaluate(self, X):
        return hermitian_spectra(self.matrices(X), check=False)

    def regular(self, X):
        spectra = self.evaluate(X)
        return spectra[:, 0] - spectra[:, 1] > 1e-12

    def draw(self, rng, start, size, total):
        U = haar_unitaries(rng, 2, size)
        V = haar_unitaries(rng, 2, size)
        H = conjugate(U, np.diag(self.a).astype(complex)) + conjugate(V, np.diag(self.b).astype(complex))
        return self.coordinates(H)

    def act(self, X, rng):
        U = haar_unitaries(rng, 2, len(np.atleast_2d(X)))
        return self.coordinates(conjugate(U, self.matrices(X)))

    def fiber_components(self, value):
        v = np.asarray(value, dtype=float)
        lo, hi = max(self.a[0] + self.b[1], self.a[1] + self.b[0]), self.a[0] + self.b[0]
        trace = self.a.sum() + self.b.sum()
        if v.shape != (2,) or abs(v.sum() - trace) > 1e-9 or not lo - 1e-9 <= v[0] <= hi + 1e-9:
            return []
        return [{'component': 'orbit', 'regular': bool(v[0] - v[1] > 1e-12)}]

    def descriptor(self):
        return {'builtin': self.name, 'params': {'a': list(self.a), 'b': list(self.b)}}


class AffineMomentum(MomentumMap):
    def __init__(self, inner, matrix, offset=None):
        """The composition x -> matrix . J(x) + offset"""
        self.inner = inner
        self.matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        if self.matrix.shape[1] != inner.dim_target:
            raise InputError("affine map of width {0} composed with a map into R^{1}"
                             .format(self.matrix.shape[1], inner.dim_target))
        n = self.matrix.shape[0]
        self.offset = np.zeros(n) if offset is None else np.asarray(offset, dtype=float).reshape(n)
        self.group = inner.group

    @property
    def name(self):
        return '{0}+affine'.format(self.inner.name)

    @property
    def sample_dim(self):
        return self.inner.sample_dim

    def _apply(self, values):
        return np.atleast_2d(values).dot(self.matrix.T) + self.offset

    @property
    def image_box(self):
        lo, hi = self.inner.image_box
        corners = np.array(np.meshgrid(*zip(lo, hi), indexing='ij')).reshape(len(lo), -1).T
        images = self._apply(corners)
        return images.min(axis=0), images.max(axis=0)

    @property
    def fixed_points(self):
        return [self._apply(p)[0] for p in self.inner.fixed_points]

    def evaluate(self, X):
        return self._apply(self.inner.evaluate(X))

    def regular(self, X):
        return self.inner.regular(X)

    def draw(self, rng, start, size, total):
        return self.inner.draw(rng, start, size, total)

    def accept(self, X):
        return self.inner.accept(X)

    def act(self, X, rng):
        return self.inner.act(X, rng)

    def fiber_components(self, value):
        A = self.matrix
        if A.shape[0] != A.shape[1] or abs(np.linalg.det(A)) < 1e-12:
            return None
        inner_value = np.linalg.solve(A, np.asarray(value, dtype=float) - self.offset)
        return self.inner.fiber_components(inner_value)

    def exhaustion(self, X):
        return self.inner.exhaustion(X)

    def escape_points(self, rng, n, level):
        return self.inner.escape_points(rng, n, level)

    def graph_coordinates(self, X):
        return self.inner.graph_coordinates(X)

    def grid(self):
        return self.inner.grid()

    def descriptor(self):
        return {'compose': [self.inner.descriptor(),
                            {'affine': {'matrix': self.matrix.tolist(), 'offset': list(self.offset)}}]}
