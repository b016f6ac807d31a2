# -*- coding: utf-8 *-*
"""Normal form models of Hamiltonian torus actions

Near an orbit the momentum map of a torus action reads

    J(m) + iota_1(beta) + 1/2 * sum_alpha |v_alpha|^2 alpha

where beta runs over the dual of the complementary subalgebra and the
v_alpha are the weight components of the symplectic slice. The group
coordinate does not enter the formula, so a ModelSample only carries beta
and the squared norms.

The sampled checks work in the two steps the map factors into: first
(beta, v) -> (beta, |v_alpha|^2), open onto a box with some faces at zero,
then a linear map onto the cone. Preimages of cone points are drawn through
the Caratheodory charts of that linear map.

"""
import logging

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.linalg import null_space
from scipy.optimize import linprog

from MomentumCheck.errors import EmptyFiberError, InputError
from MomentumCheck.geometry.cone import (ConvexCone, cone_contains, cone_contains_many,
                                         cone_frame, coefficient_radius)
from MomentumCheck.util.data_util import make_rng
from MomentumCheck.util.exact_util import as_float, as_point, is_exact

log = logging.getLogger(__name__)

DEFAULT_SAMPLES = 100000
MIN_SAMPLES = 100
DEFAULT_VN_RADIUS = 0.1
DEFAULT_TRIALS = 20
DEFAULT_TRIAL_SAMPLES = 8000
DEFAULT_FIBER_SAMPLES = 2000
DEFAULT_GAP_FACTOR = 5.0

DEFAULT_BETA_BOX = (-1.0, 1.0)
DEFAULT_NORMS_BOX = (0.0, 1.0)

# Raster cells per radius, by dimension of the cone
_CELLS_PER_RADIUS = {0: 1, 1: 10, 2: 10}
_CELLS_PER_RADIUS_HIGH = 4
_TRIAL_CELLS_PER_RADIUS = {0: 1, 1: 10, 2: 5}
_TRIAL_CELLS_PER_RADIUS_HIGH = 2


class LocalModel(object):
    def __init__(self, base, dim_t1, t0_perp_basis=(), weights=()):
        """LocalModel class initializer

        Args:
            base (sequence): The value J(m), a point of dimension n
            dim_t1 (int): Dimension of the beta block
            t0_perp_basis (list of sequences): dim_t1 directions of the
                ambient space along which beta acts
            weights (list of sequences): Nonzero weights, embedded in the
                ambient space

        Raises:
            InputError: When the blocks do not fit in dimension n

        """
        t0_perp_basis = list(t0_perp_basis or [])
        weights = list(weights or [])
        exact = all(is_exact(np.asarray(v, dtype=object))
                    for v in [base] + t0_perp_basis + weights)
        self._base = as_point(base, exact=exact)
        self._exact = exact
        n = len(self._base)
        self._dim_t1 = int(dim_t1)
        if len(t0_perp_basis) != self._dim_t1:
            raise InputError("dim_t1 = {0} but {1} beta directions given"
                             .format(self._dim_t1, len(t0_perp_basis)))
        self._t0_perp = np.array([as_point(v, exact=exact) for v in t0_perp_basis],
                                 dtype=object if exact else float).reshape(self._dim_t1, n)
        self._weights = np.array([as_point(v, exact=exact) for v in weights],
                                 dtype=object if exact else float).reshape(len(weights), n)
        for w in self._weights:
            if all(v == 0 for v in w):
                raise InputError("weights must be nonzero")
        weight_rank = np.linalg.matrix_rank(as_float(self._weights)) if len(weights) else 0
        if self._dim_t1 + weight_rank > n:
            raise InputError("dim_t1 + rank(weights) = {0} exceeds dimension {1}"
                             .format(self._dim_t1 + weight_rank, n))
        self._cone = None

    @property
    def dim(self):
        return len(self._base)

    @property
    def dim_t1(self):
        return self._dim_t1

    @property
    def num_weights(self):
        return len(self._weights)

    @property
    def base(self):
        return self._base

    @property
    def t0_perp_basis(self):
        return self._t0_perp

    @property
    def weights(self):
        return self._weights

    @property
    def exact(self):
        return self._exact

    def to_dict(self):
        return {'base': list(self._base), 'dim_t1': self._dim_t1,
                't0_perp': [list(v) for v in self._t0_perp],
                'weights': [list(w) for w in self._weights]}

    @classmethod
    def from_dict(cls, payload):
        try:
            return cls(payload['base'], payload['dim_t1'],
                       payload.get('t0_perp', []), payload.get('weights', []))
        except KeyError as e:
            raise InputError("local model JSON is missing field {0}".format(e))


class ModelSample(object):
    def __init__(self, beta=(), norms_sq=()):
        beta = list(np.asarray(beta, dtype=object).ravel())
        norms_sq = list(np.asarray(norms_sq, dtype=object).ravel())
        exact = all(is_exact(np.asarray([v], dtype=object)) for v in beta + norms_sq)
        self.beta = as_point(beta, exact=exact) if beta else np.zeros(0)
        self.norms_sq = as_point(norms_sq, exact=exact) if norms_sq else np.zeros(0)
        if any(v < 0 for v in self.norms_sq):
            raise InputError("norms_sq must be nonnegative")

    @property
    def exact(self):
        return all(v.dtype == object for v in (self.beta, self.norms_sq) if len(v))


def _check_sample(m, s):
    if len(s.beta) != m.dim_t1 or len(s.norms_sq) != m.num_weights:
        raise InputError("sample with {0} beta and {1} norms does not fit a model with "
                         "dim_t1 = {2} and {3} weights".format(len(s.beta), len(s.norms_sq),
                                                              m.dim_t1, m.num_weights))


def normal_form_momentum(m, s):
    """Momentum of a normal form sample

    Args:
        m (LocalModel): The model
        s (ModelSample): The sample

    Returns:
        np.ndarray: J(m) + iota_1(beta) + 1/2 sum norms_sq[alpha] alpha,
            exact when both model and sample are exact

    """
    _check_sample(m, s)
    exact = m.exact and (s.exact or (not len(s.beta) and not len(s.norms_sq)))
    if exact:
        from fractions import Fraction
        value = np.array(list(m.base), dtype=object)
        for b, direction in zip(s.beta, m.t0_perp_basis):
            value = value + direction * b
        for t, alpha in zip(s.norms_sq, m.weights):
            value = value + alpha * (Fraction(1, 2) * t)
        return value
    value = as_float(m.base).copy()
    if len(s.beta):
        value += as_float(s.beta).dot(as_float(m.t0_perp_basis))
    if len(s.norms_sq):
        value += 0.5 * as_float(s.norms_sq).dot(as_float(m.weights))
    return value


def model_momenta(m, betas, norms):
    """Vectorized float momentum of (N, dim_t1) betas and (N, w) norms"""
    betas = np.asarray(betas, dtype=float).reshape(-1, m.dim_t1)
    norms = np.asarray(norms, dtype=float).reshape(-1, m.num_weights)
    value = np.tile(as_float(m.base), (max(len(betas), len(norms)), 1))
    if m.dim_t1:
        value += betas.dot(as_float(m.t0_perp_basis))
    if m.num_weights:
        value += 0.5 * norms.dot(as_float(m.weights))
    return value


def local_cone(m):
    """The cone J(m) + t0_perp + cone(weights) of a model"""
    if m._cone is None:
        m._cone = ConvexCone(m.base, list(m.t0_perp_basis), list(m.weights))
    return m._cone


class ModelSampler(object):
    def __init__(self, m, beta_box=None, norms_box=None):
        """Box sampler over model sample coordinates

        Args:
            m (LocalModel): The model
            beta_box (:obj:`tuple`, optional): (lo, hi) arrays of length
                dim_t1. Defaults to [-1, 1] per coordinate
            norms_box (:obj:`tuple`, optional): (lo, hi) arrays of length
                #weights. Defaults to [0, 1] per coordinate

        """
        k, w = m.dim_t1, m.num_weights
        if beta_box is None:
            beta_box = (np.full(k, DEFAULT_BETA_BOX[0]), np.full(k, DEFAULT_BETA_BOX[1]))
        if norms_box is None:
            norms_box = (np.full(w, DEFAULT_NORMS_BOX[0]), np.full(w, DEFAULT_NORMS_BOX[1]))
        self.model = m
        self.beta_lo = np.asarray(beta_box[0], dtype=float).reshape(k)
        self.beta_hi = np.asarray(beta_box[1], dtype=float).reshape(k)
        self.norms_lo = np.asarray(norms_box[0], dtype=float).reshape(w)
        self.norms_hi = np.asarray(norms_box[1], dtype=float).reshape(w)
        if np.any(self.norms_lo < 0) or np.any(self.norms_hi < self.norms_lo) \
                or np.any(self.beta_hi < self.beta_lo):
            raise InputError("malformed sampler box")

    def constrained(self, index, value=0.0):
        """Copy with norms_sq[index] pinned to `value`"""
        lo, hi = self.norms_lo.copy(), self.norms_hi.copy()
        lo[index] = hi[index] = value
        return ModelSampler(self.model, (self.beta_lo, self.beta_hi), (lo, hi))

    def punctured(self, lower):
        """Copy with every norms_sq bounded below by `lower`"""
        lo = np.maximum(self.norms_lo, lower)
        return ModelSampler(self.model, (self.beta_lo, self.beta_hi), (lo, np.maximum(self.norms_hi, lo)))

    def draw(self, rng, size):
        betas = rng.uniform(self.beta_lo, self.beta_hi, size=(size, len(self.beta_lo)))
        norms = rng.uniform(self.norms_lo, self.norms_hi, size=(size, len(self.norms_lo)))
        return betas, norms

    def contains(self, betas, norms, tol=1e-12):
        ok = np.all((betas >= self.beta_lo - tol) & (betas <= self.beta_hi + tol), axis=1)
        ok &= np.all((norms >= self.norms_lo - tol) & (norms <= self.norms_hi + tol), axis=1)
        return ok

    def fixed(self):
        """Mask of pinned norm coordinates"""
        return self.norms_hi - self.norms_lo <= 1e-12


def _uniform_ball(rng, size, dim, radius):
    if dim == 0:
        return np.zeros((size, 0))
    g = rng.standard_normal((size, dim))
    g /= np.maximum(np.linalg.norm(g, axis=1, keepdims=True), 1e-300)
    return g * (radius * rng.uniform(0.0, 1.0, size=(size, 1)) ** (1.0 / dim))


def _frame(cone):
    Q = cone_frame(cone)
    if Q.shape[1] == cone.dim:
        return np.eye(cone.dim)
    return Q


def vertex_radius(m, sampler=None):
    """Largest radius at which the sampling box can reach every nearby cone point

    A cone point at distance R from the vertex has chart coefficients at
    most R / sigma, so R must keep beta and the norms inside the box.
    """
    sampler = sampler or ModelSampler(m)
    sigma = coefficient_radius(local_cone(m).as_float())
    if not np.isfinite(sigma):
        return DEFAULT_VN_RADIUS
    reach = np.concatenate([-sampler.beta_lo, sampler.beta_hi, 0.5 * sampler.norms_hi])
    return 0.8 * sigma * float(reach.min()) if len(reach) else DEFAULT_VN_RADIUS


def _chart_preimages(cone, displacements, signs, free_index):
    """Coefficients of displacements on the first chart that accepts them

    Args:
        cone (ConvexCone): Float cone whose subspace basis is the beta block
            and whose generators are +-weights
        displacements (np.ndarray): (N, n) displacements from the vertex
        signs (np.ndarray): (g,) sign of each generator as a weight step
        free_index (np.ndarray): (g,) weight index of each generator

    Returns:
        tuple: (mask of accepted rows, beta steps (N, k), norm steps (N, w))
    """
    N = len(displacements)
    k = len(cone.subspace_basis)
    w = int(free_index.max()) + 1 if len(free_index) else 0
    accepted = np.zeros(N, dtype=bool)
    dbeta = np.zeros((N, k))
    dnorm = np.zeros((N, max(w, 0)))
    scale = np.maximum(1.0, np.linalg.norm(displacements, axis=1))
    for index, J in enumerate(cone.charts()):
        todo = ~accepted
        if not todo.any():
            break
        coeffs, residual = cone.chart_coefficients(index, displacements[todo])
        ok = residual <= 1e-9 * scale[todo]
        if coeffs.shape[1] > k:
            ok &= np.all(coeffs[:, k:] >= -1e-12, axis=1)
        rows = np.flatnonzero(todo)[ok]
        dbeta[rows] = coeffs[ok, :k]
        for col, g in enumerate(J):
            dnorm[rows, free_index[g]] += 2.0 * signs[g] * coeffs[ok, k + col]
        accepted[rows] = True
    return accepted, dbeta, dnorm


def _raster_keys(points, cell):
    return set(map(tuple, np.floor(points / cell).astype(np.int64)))


def _dilate(keys, dim):
    out = set(keys)
    for key in keys:
        for axis in range(dim):
            for delta in (-1, 1):
                nxt = list(key)
                nxt[axis] += delta
                out.add(tuple(nxt))
    return out


def _target_cells(cone, origin_value, Q, center, radius, cell):
    """Frame cells with center in the cone and within radius of `center`"""
    r = Q.shape[1]
    R = int(np.ceil(radius / cell)) + 1
    axes = [np.arange(-R, R)] * r
    grid = np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1).reshape(-1, r)
    base = np.floor(center / cell).astype(np.int64)
    keys = grid + base
    centers = (keys + 0.5) * cell
    near = np.linalg.norm(centers - center, axis=1) <= radius
    keys, centers = keys[near], centers[near]
    inside = cone_contains_many(cone, origin_value + centers.dot(Q.T))
    return keys[inside], centers[inside]


def _coverage(cone, Q, image_frame, center, radius, cells_per_radius):
    cell = radius / float(cells_per_radius)
    keys, centers = _target_cells(cone, as_float(cone.vertex), Q, center, radius, cell)
    covered = _dilate(_raster_keys(image_frame, cell), Q.shape[1]) if len(image_frame) else set()
    missing = np.array([tuple(k) not in covered for k in keys], dtype=bool)
    points = as_float(cone.vertex) + centers[missing].dot(Q.T) if missing.any() else np.zeros((0, cone.dim))
    return len(keys), points


def check_vertex_neighborhood(m, radius=DEFAULT_VN_RADIUS, n_samples=DEFAULT_SAMPLES,
                              seed=0, sampler=None):
    """Whether the model image is a neighborhood of J(m) in its cone

    Half of the samples come uniformly from the sampler box, half are
    preimages of uniform cone points near the vertex drawn through the
    chart decomposition; preimages outside the sampler box are dropped.
    Both halves are rasterized in coordinates of the span of the cone.

    Args:
        m (LocalModel): The model
        radius (:obj:`float`, optional): Neighborhood radius. Defaults to 0.1
        n_samples (:obj:`int`, optional): Samples. Defaults to 10^5
        seed (:obj:`int`, optional): Seed of the sampling stream
        sampler (:obj:`ModelSampler`, optional): Sampling domain. Defaults to
            the standard box

    Returns:
        tuple: (bool, report dict with `total`, `covered` and `uncovered`
            cone points)

    Raises:
        InputError: n_samples < 100

    """
    if n_samples < MIN_SAMPLES:
        raise InputError("n_samples = {0} is statistically meaningless (< {1})"
                         .format(n_samples, MIN_SAMPLES))
    sampler = sampler or ModelSampler(m)
    cone = local_cone(m).as_float()
    Q = _frame(cone)
    r = Q.shape[1]
    if r == 0:
        return True, {'total': 1, 'covered': 1, 'uncovered': []}
    rng = make_rng(seed, 'vertex_neighborhood')
    half = n_samples // 2

    betas, norms = sampler.draw(rng, n_samples - half)
    values = [model_momenta(m, betas, norms)]

    signs = np.ones(m.num_weights)
    u = _uniform_ball(rng, half, r, 1.25 * radius)
    ok, dbeta, dnorm = _chart_preimages(cone, u.dot(Q.T), signs, np.arange(m.num_weights))
    dbeta, dnorm = dbeta[ok], dnorm[ok].reshape(-1, m.num_weights)
    keep = sampler.contains(dbeta, dnorm)
    values.append(model_momenta(m, dbeta[keep], dnorm[keep]))

    image = np.vstack(values) - as_float(m.base)
    image_frame = image.dot(Q)
    near = np.linalg.norm(image_frame, axis=1) <= 2 * radius
    cells = _CELLS_PER_RADIUS.get(r, _CELLS_PER_RADIUS_HIGH)
    total, uncovered = _coverage(cone, Q, image_frame[near], np.zeros(r), radius, cells)
    report = {'total': total, 'covered': total - len(uncovered),
              'uncovered': [list(p) for p in uncovered], 'radius': radius,
              'h': radius / cells}
    return len(uncovered) == 0, report


def _trial_center(rng, sampler, rho, fixed):
    k = len(sampler.beta_lo)
    beta = rng.uniform(sampler.beta_lo + rho, sampler.beta_hi - rho, size=k)
    norms = np.empty(len(sampler.norms_lo))
    snapped = np.zeros(len(norms), dtype=bool)
    for i in range(len(norms)):
        if fixed[i] or rng.uniform() < 0.5:
            norms[i] = sampler.norms_lo[i]
            snapped[i] = True
        else:
            norms[i] = rng.uniform(sampler.norms_lo[i] + rho, sampler.norms_hi[i] - rho)
    return beta, norms, snapped


def check_open_onto_cone(m, n_trials=DEFAULT_TRIALS, seed=0, sampler=None,
                         n_samples=DEFAULT_TRIAL_SAMPLES):
    """Whether the model map is open onto its cone

    Each trial picks a point x of the sampling domain, half of its norm
    coordinates on their lower face, and the box of half width rho around
    it. Preimages of uniform points near f(x) are drawn through the charts
    of the linear part, stepping both ways along weights that are free at
    x and only upwards along weights on their face. The image of the box
    must cover the cone points near f(x).

    Args:
        m (LocalModel): The model
        n_trials (:obj:`int`, optional): Number of boxes. Defaults to 20
        seed (:obj:`int`, optional): Seed of the sampling stream
        sampler (:obj:`ModelSampler`, optional): Sampling domain
        n_samples (:obj:`int`, optional): Preimages per trial

    Returns:
        tuple: (bool, witness dict of the first failing trial or None)

    """
    sampler = sampler or ModelSampler(m)
    cone = local_cone(m).as_float()
    Q = _frame(cone)
    r = Q.shape[1]
    if r == 0:
        return True, None
    fixed = sampler.fixed()
    widths = np.concatenate([sampler.beta_hi - sampler.beta_lo,
                             (sampler.norms_hi - sampler.norms_lo)[~fixed]])
    rho = 0.25 * float(widths.min()) if len(widths) else 0.25
    B = as_float(m.t0_perp_basis)
    A = as_float(m.weights)
    cells = _TRIAL_CELLS_PER_RADIUS.get(r, _TRIAL_CELLS_PER_RADIUS_HIGH)

    for trial in range(n_trials):
        rng = make_rng(seed, 'open_onto_cone', trial)
        beta, norms, snapped = _trial_center(rng, sampler, rho, fixed)
        value = model_momenta(m, beta[None, :], norms[None, :])[0]

        gens, signs, owner = [], [], []
        for i in range(m.num_weights):
            if fixed[i]:
                continue
            gens.append(A[i]); signs.append(1.0); owner.append(i)
            if not snapped[i]:
                gens.append(-A[i]); signs.append(-1.0); owner.append(i)
        if not gens and not m.dim_t1:
            local = None
        else:
            local = ConvexCone(value, list(B), gens)
        sigma = coefficient_radius(local) if local is not None else np.inf
        if not np.isfinite(sigma):
            sigma = 1.0
        sample_radius = 0.5 * rho * sigma
        target_radius = 0.5 * sample_radius

        if local is not None:
            u = _uniform_ball(rng, n_samples, r, sample_radius)
            ok, dbeta, dnorm = _chart_preimages(local, u.dot(Q.T), np.asarray(signs),
                                                np.asarray(owner, dtype=int))
            steps_norm = np.zeros((int(ok.sum()), m.num_weights))
            if dnorm.shape[1]:
                steps_norm[:, :dnorm.shape[1]] = dnorm[ok]
            betas = beta + dbeta[ok]
            norms_s = norms + steps_norm
            keep = sampler.contains(betas, norms_s)
            keep &= np.all(np.abs(dbeta[ok]) <= rho + 1e-12, axis=1)
            keep &= np.all(np.abs(steps_norm) <= rho + 1e-12, axis=1)
            image = model_momenta(m, betas[keep], norms_s[keep])
        else:
            image = value[None, :]
        center = (value - as_float(m.base)).dot(Q)
        image_frame = (image - as_float(m.base)).dot(Q)
        total, uncovered = _coverage(cone, Q, image_frame, center, target_radius, cells)
        if len(uncovered):
            witness = {'trial': trial, 'beta': list(beta), 'norms_sq': list(norms),
                       'value': list(value), 'radius': target_radius,
                       'uncovered': [list(p) for p in uncovered[:10]],
                       'uncovered_count': len(uncovered), 'total': total}
            log.info("openness fails in trial %d at %s", trial, list(value))
            return False, witness
    return True, None


def _feasible_point(M, d, k, w, bound):
    bounds = [(-bound, bound)] * k + [(0.0, bound)] * w
    res = linprog(np.zeros(k + w), A_eq=M, b_eq=d, bounds=bounds, method='highs')
    return res.x if res.status == 0 else None


def local_fiber_components(m, value, n_samples=DEFAULT_FIBER_SAMPLES, seed=0,
                           gap_factor=DEFAULT_GAP_FACTOR):
    """Number of connected components of a model fiber

    Fiber points solve iota_1(beta) + 1/2 sum norms_sq alpha = value - J(m)
    with norms_sq >= 0. They are sampled on the affine solution set inside
    a box and grouped by single linkage with a gap of `gap_factor` times
    the largest spacing expected among that many uniform samples.

    Args:
        m (LocalModel): The model
        value (sequence): Target value
        n_samples (:obj:`int`, optional): Candidate fiber samples
        seed (:obj:`int`, optional): Seed of the sampling stream
        gap_factor (:obj:`float`, optional): Clustering gap factor

    Returns:
        int: Estimated number of components (1 for any nonempty normal
            form fiber)

    Raises:
        EmptyFiberError: value outside the local cone

    """
    cone = local_cone(m)
    if not cone_contains(cone, value):
        raise EmptyFiberError("empty fiber: {0} is outside the local cone".format(list(value)))
    k, w = m.dim_t1, m.num_weights
    d = as_float(as_point(value)) - as_float(m.base)
    if k + w == 0:
        return 1
    M = np.hstack([as_float(m.t0_perp_basis).T.reshape(m.dim, k),
                   0.5 * as_float(m.weights).T.reshape(m.dim, w)])
    bound = 1.0
    x0 = None
    for _ in range(12):
        x0 = _feasible_point(M, d, k, w, bound)
        if x0 is not None:
            break
        bound *= 2.0
    if x0 is None:
        raise EmptyFiberError("no fiber point found for {0}".format(list(value)))
    N = null_space(M)
    if N.shape[1] == 0:
        return 1
    rng = make_rng(seed, 'fiber_components')
    span = 2.0 * bound * np.sqrt(k + w)
    z = rng.uniform(-span, span, size=(n_samples, N.shape[1]))
    X = x0 + z.dot(N.T)
    keep = np.all(X[:, :k] >= -bound, axis=1) & np.all(X[:, :k] <= bound, axis=1)
    keep &= np.all(X[:, k:] >= 0.0, axis=1) & np.all(X[:, k:] <= bound, axis=1)
    X = np.vstack([x0[None, :], X[keep]])
    if len(X) < 3:
        return 1
    # largest empty gap expected among uniform samples of an N.shape[1] dimensional set
    extent = max(float(np.linalg.norm(np.ptp(X, axis=0))), 1e-12)
    spacing = extent * (np.log(len(X)) / len(X)) ** (1.0 / N.shape[1])
    gap = gap_factor * spacing
    labels = fcluster(linkage(X, method='single'), t=gap, criterion='distance')
    return int(len(np.unique(labels)))
