# -*- coding: utf-8 *-*
"""Classical convexity theorems as numerical experiments

Included experiments:

    - schur_horn_experiment: diagonals of Haar conjugates of diag(lambda)
      lie in the hull of the permutations of lambda
    - toric_polytope_experiment: the sampled image of a toric scene is the
      hull of its fixed point images, and its raster is convex
    - horn_interval_experiment: spectra of A + B over two 2 x 2 orbits fill
      the Horn interval

Trials are drawn in chunks, each from its own counter stream, and merged
in chunk order.

"""
import itertools
import logging
import os

import numpy as np
from scipy.optimize import linprog

from MomentumCheck.diagnosis.openness import image_grid
from MomentumCheck.diagnosis.scene import draw_chunk
from MomentumCheck.errors import InputError
from MomentumCheck.geometry.grid import rasterize_points
from MomentumCheck.geometry.hull import convex_hull, polygon_hausdorff
from MomentumCheck.geometry.klee import klee_certify
from MomentumCheck.util.data_util import dump_points_tsv, dump_table_tsv, run_chunked
from MomentumCheck.util.linalg_util import conjugate, haar_unitaries, hermitian_spectra

log = logging.getLogger(__name__)

DEFAULT_TRIALS = 10000
DEFAULT_TOL = 1e-9
TRACE_TOL = 1e-12
DEFAULT_TORIC_SAMPLES = 100000
DEFAULT_TORIC_H = 1.0 / 128
DEFAULT_FILL_TOL = 0.02


class WeylOrbitHull(object):
    def __init__(self, lam):
        """Hull of the coordinate permutations of a spectrum

        Args:
            lam (sequence): Eigenvalues; sorted decreasingly if they are not

        """
        lam = np.asarray(lam, dtype=float).ravel()
        if lam.size == 0:
            raise InputError("empty spectrum")
        ordered = np.sort(lam)[::-1]
        if np.any(ordered != lam):
            log.warning("spectrum %s is not decreasing; sorting it", lam.tolist())
        self.lam = ordered
        self.hull_vertices = np.array(sorted(set(itertools.permutations(ordered.tolist()))))[::-1]

    @property
    def dim(self):
        return len(self.lam)

    @property
    def trace(self):
        return float(self.lam.sum())

    def violation(self, p):
        """Linear program: the smallest max norm slack of a convex combination

        Returns:
            float: The optimal slack, zero inside the hull and infinite when
                the solver gives up
        """
        p = np.asarray(p, dtype=float).ravel()
        if p.shape != (self.dim,):
            raise InputError("point of dimension {0} for a hull in R^{1}".format(p.size, self.dim))
        V = self.hull_vertices.T
        n, m = V.shape
        # variables: weights (m), slack (1)
        c = np.zeros(m + 1)
        c[-1] = 1.0
        ones = np.ones((n, 1))
        A_ub = np.vstack([np.hstack([V, -ones]), np.hstack([-V, -ones])])
        b_ub = np.concatenate([p, -p])
        A_eq = np.concatenate([np.ones(m), [0.0]])[None, :]
        result = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
                         bounds=[(0, None)] * (m + 1), method='highs')
        if result.status != 0:
            log.warning("hull membership program ended with status %d", result.status)
            return np.inf
        return float(result.x[-1])

    def violations(self, points):
        return np.array([self.violation(p) for p in np.atleast_2d(points)])

    def contains(self, p, tol=DEFAULT_TOL):
        return self.violation(p) <= tol

    def contains_many(self, points, tol=DEFAULT_TOL):
        return self.violations(points) <= tol


class ExperimentReport(object):
    def __init__(self, name, trials, failures, max_violation, artifacts=None, details=None):
        """ExperimentReport class initializer

        Args:
            name (str): Experiment name
            trials (int): Number of trials
            failures (int): Trials failing a stated tolerance
            max_violation (float): Largest violation seen
            artifacts (:obj:`list`, optional): Paths of written data files
            details (:obj:`dict`, optional): Experiment specific values

        """
        self.name = name
        self.trials = int(trials)
        self.failures = int(failures)
        self.max_violation = float(max_violation)
        self.artifacts = list(artifacts or [])
        self.details = dict(details or {})

    @property
    def passed(self):
        return self.failures == 0

    def to_dict(self):
        return {'experiment': self.name,
                'trials': self.trials,
                'failures': self.failures,
                'max_violation': self.max_violation,
                'artifacts': [os.path.basename(a) for a in self.artifacts],
                'details': self.details}


def _schur_horn_chunk(rng, start, size, lam):
    hull = WeylOrbitHull(lam)
    U = haar_unitaries(rng, len(lam), size)
    H = conjugate(U, np.diag(lam).astype(complex))
    diagonals = np.real(np.diagonal(H, axis1=1, axis2=2))
    trace_error = np.abs(diagonals.sum(axis=1) - hull.trace)
    return diagonals, trace_error, hull.violations(diagonals)


def schur_horn_experiment(lam, trials=DEFAULT_TRIALS, tol=DEFAULT_TOL, seed=None, out_dir=None):
    """Diagonals of an isospectral set against the permutation hull

    Args:
        lam (sequence): Spectrum
        trials (:obj:`int`, optional): Haar trials
        tol (:obj:`float`, optional): Membership tolerance
        seed (int): The run seed
        out_dir (:obj:`str`, optional): Directory for the TSV dump

    Returns:
        ExperimentReport: The report
    """
    if seed is None:
        raise InputError("a seed is required for sampling")
    hull = WeylOrbitHull(lam)
    parts = run_chunked(_schur_horn_chunk, trials, seed, ('schur_horn',), lam=hull.lam)
    diagonals = np.vstack([p[0] for p in parts])
    trace_error = np.concatenate([p[1] for p in parts])
    violation = np.concatenate([p[2] for p in parts])
    outside = int(np.sum(violation > tol))
    trace_failures = int(np.sum(trace_error > TRACE_TOL))
    artifacts = []
    if out_dir:
        columns = {'d{0}'.format(i): diagonals[:, i] for i in range(hull.dim)}
        columns['violation'] = violation
        artifacts.append(dump_table_tsv(os.path.join(out_dir, 'schur_horn_diagonals.tsv'), columns))
    log.info("schur-horn: %d of %d diagonals outside the hull", outside, trials)
    return ExperimentReport('schur_horn', trials, outside + trace_failures,
                            float(violation.max()) if len(violation) else 0.0, artifacts,
                            {'lambda': hull.lam.tolist(),
                             'tol': tol,
                             'hull_vertices': hull.hull_vertices.tolist(),
                             'outside_hull': outside,
                             'trace_failures': trace_failures,
                             'max_trace_error': float(trace_error.max()) if len(trace_error) else 0.0})


def toric_polytope_experiment(sc, n_samples=DEFAULT_TORIC_SAMPLES, h=DEFAULT_TORIC_H,
                              seed=None, out_dir=None):
    """Sampled image hull against the hull of the fixed point images

    Two failures are possible: a Hausdorff distance above 2h, and an image
    raster that is not certified convex.

    Args:
        sc (Scene): A scene with fixed points and a planar target
        n_samples (:obj:`int`, optional): Domain samples
        h (:obj:`float`, optional): Raster cell size
        seed (int): The run seed
        out_dir (:obj:`str`, optional): Directory for TSV dumps

    Returns:
        ExperimentReport: The report, with the sampled hull in its details
    """
    if seed is None:
        raise InputError("a seed is required for sampling")
    if not sc.fixed_points:
        raise InputError("scene '{0}' declares no fixed points".format(sc.name))
    if sc.dim_target != 2:
        raise InputError("the toric experiment needs a planar target")
    parts = run_chunked(draw_chunk, n_samples, seed, ('toric', sc.name),
                        momentum=sc.momentum, total=n_samples)
    X = np.vstack([p[0] for p in parts])
    values = np.vstack([p[1] for p in parts])
    regular = np.concatenate([p[2] for p in parts])

    sampled_hull = np.array(convex_hull(values), dtype=float)
    fixed_hull = np.array(convex_hull(sc.fixed_points), dtype=float)
    distance = polygon_hausdorff(sampled_hull, fixed_hull)

    origin, shape = image_grid(sc.box, h)
    shape = shape + 1
    certificate = klee_certify(rasterize_points(values, origin, h, shape=shape, closed=True))

    failures = int(distance > 2 * h) + int(not certificate.is_convex)
    artifacts = []
    if out_dir:
        artifacts.append(dump_points_tsv(os.path.join(out_dir, 'toric_points.tsv'), X, values, regular))
        artifacts.append(dump_table_tsv(os.path.join(out_dir, 'toric_hull.tsv'),
                                        {'j0': sampled_hull[:, 0], 'j1': sampled_hull[:, 1]}))
    log.info("toric: Hausdorff distance %.3g, raster %s", distance, certificate.verdict)
    return ExperimentReport('toric', n_samples, failures, distance, artifacts,
                            {'scene': sc.name,
                             'h': h,
                             'hausdorff': distance,
                             'hull_vertices': sampled_hull.tolist(),
                             'fixed_point_hull': fixed_hull.tolist(),
                             'certificate': certificate.to_dict()})


def _horn_chunk(rng, start, size, a, b):
    U = haar_unitaries(rng, 2, size)
    V = haar_unitaries(rng, 2, size)
    H = conjugate(U, np.diag(a).astype(complex)) + conjugate(V, np.diag(b).astype(complex))
    return hermitian_spectra(H, check=False)


def horn_interval(a, b):
    """Horn interval [max(a1 + b2, a2 + b1), a1 + b1] of the top eigenvalue"""
    return max(a[0] + b[1], a[1] + b[0]), a[0] + b[0]


def horn_interval_experiment(a, b, trials=DEFAULT_TRIALS, tol=DEFAULT_TOL, seed=None,
                             fill_tol=DEFAULT_FILL_TOL, out_dir=None):
    """Spectra of A + B for A, B on the orbits of diag(a), diag(b)

    Args:
        a (sequence): Decreasing 2-vector
        b (sequence): Decreasing 2-vector
        trials (:obj:`int`, optional): Haar trials
        tol (:obj:`float`, optional): Tolerance on the interval bounds
        seed (int): The run seed
        fill_tol (:obj:`float`, optional): Largest gap allowed between
            sampled top eigenvalues, interval ends included
        out_dir (:obj:`str`, optional): Directory for the TSV dump

    Returns:
        ExperimentReport: The report

    Raises:
        InputError: a or b not a decreasing 2-vector
    """
    if seed is None:
        raise InputError("a seed is required for sampling")
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    for name, v in (('a', a), ('b', b)):
        if v.shape != (2,):
            raise InputError("{0} must be a 2-vector".format(name))
        if v[0] < v[1]:
            raise InputError("{0} = {1} is not sorted decreasingly".format(name, v.tolist()))
    lo, hi = horn_interval(a, b)
    trace = a.sum() + b.sum()
    spectra = np.vstack(run_chunked(_horn_chunk, trials, seed, ('horn',), a=a, b=b))
    trace_error = np.abs(spectra.sum(axis=1) - trace)
    top = spectra[:, 0]
    outside = np.maximum(lo - top, 0.0) + np.maximum(top - hi, 0.0)
    grid = np.concatenate([[lo], np.sort(np.clip(top, lo, hi)), [hi]])
    gap = float(np.diff(grid).max()) if len(grid) > 1 else 0.0

    trace_failures = int(np.sum(trace_error > TRACE_TOL))
    bound_failures = int(np.sum(outside > tol))
    failures = trace_failures + bound_failures + int(gap > fill_tol)
    artifacts = []
    if out_dir:
        artifacts.append(dump_table_tsv(os.path.join(out_dir, 'horn_spectra.tsv'),
                                        {'lambda1': spectra[:, 0], 'lambda2': spectra[:, 1]}))
    log.info("horn: interval [%g, %g], max gap %.4g", lo, hi, gap)
    return ExperimentReport('horn', trials, failures, float(max(outside.max(), trace_error.max())),
                            artifacts,
                            {'a': a.tolist(), 'b': b.tolist(),
                             'interval': [lo, hi],
                             'max_gap': gap,
                             'fill_tol': fill_tol,
                             'trace_failures': trace_failures,
                             'bound_failures': bound_failures,
                             'sampled_hull': [float(top.min()), float(top.max())]})
