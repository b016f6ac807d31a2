# -*- coding: utf-8 *-*
"""Openness of a momentum map onto its image

A momentum map with connected fibers is open onto its image iff the
complement of the regular image does not disconnect any region of the
image. Without connected fibers, openness needs a locally compact image
and the condition that, over every value, either every fiber component
meets the regular stratum or none does (CCF).

Regions are approximated by test balls intersected with the image
raster, centered on the cells the regular image misses.

"""
import logging

import numpy as np
from deco import concurrent, synchronized
from scipy import ndimage

from MomentumCheck.definitions import NUM_PROCESSES
from MomentumCheck.diagnosis.scene import draw_chunk
from MomentumCheck.errors import (InputError, SamplerMismatchError,
                                  UndecidableError)
from MomentumCheck.geometry.grid import GridRegion, rasterize_points
from MomentumCheck.util.data_util import (chunkify, dump_points_tsv, make_rng,
                                          run_chunked)
from MomentumCheck.util.linalg_util import hermitian_spectra

log = logging.getLogger(__name__)

DISCONNECTION_FOUND = 'DisconnectionFound'
CCF_VIOLATED = 'CCFViolated'
NOT_LOCALLY_COMPACT = 'NotLocallyCompact'
CLEAN = 'Clean'

REASONS = [
            DISCONNECTION_FOUND,
            CCF_VIOLATED,
            NOT_LOCALLY_COMPACT,
            CLEAN,
          ]

DEFAULT_H = 1.0 / 64
DEFAULT_SAMPLES = 200000
DEFAULT_CENTERS = 32
DEFAULT_RADIUS_FACTORS = (8, 16, 32)
# A disconnection must show at this many ball radii
DEFAULT_MIN_RADII = 2
MIN_COMPONENT_CELLS = 3
MIN_ACCEPTANCE = 0.01
DEFAULT_VALUE_SAMPLES = 64
DEFAULT_ESCAPE_RADIUS = 64.0
ESCAPE_LEVELS = 4
DEFAULT_ESCAPE_SAMPLES = 200


class DiagnosisParams(object):
    def __init__(self, h=DEFAULT_H, n_samples=DEFAULT_SAMPLES, seed=None,
                 n_centers=DEFAULT_CENTERS, radius_factors=DEFAULT_RADIUS_FACTORS,
                 min_radii=DEFAULT_MIN_RADII, n_values=DEFAULT_VALUE_SAMPLES,
                 dump_path=None):
        if seed is None:
            raise InputError("a seed is required for sampling")
        if h <= 0:
            raise InputError("h must be positive, got {0}".format(h))
        if n_samples < 1:
            raise InputError("n_samples must be positive")
        if not 1 <= min_radii <= len(radius_factors):
            raise InputError("min_radii must lie in 1..{0}".format(len(radius_factors)))
        self.h = float(h)
        self.n_samples = int(n_samples)
        self.seed = int(seed)
        self.n_centers = int(n_centers)
        self.radius_factors = tuple(radius_factors)
        self.min_radii = int(min_radii)
        self.n_values = int(n_values)
        self.dump_path = dump_path


class OpennessVerdict(object):
    def __init__(self, open_onto_image, reason, witness=None, branch=None, details=None):
        """OpennessVerdict class initializer

        Args:
            open_onto_image (bool): The verdict
            reason (str): One of REASONS
            witness (:obj:`dict`, optional): Ball center, radii and removed cells,
                or the CCF counterexample
            branch (:obj:`str`, optional): 'connected_fibers' or 'ccf'
            details (:obj:`dict`, optional): Sampling and density report

        """
        if reason not in REASONS:
            raise ValueError("unknown reason {0}".format(reason))
        if reason == DISCONNECTION_FOUND and not witness:
            raise ValueError("a disconnection verdict needs a witness")
        if open_onto_image != (reason == CLEAN):
            raise ValueError("only Clean verdicts are open")
        self.open_onto_image = bool(open_onto_image)
        self.reason = reason
        self.witness = witness
        self.branch = branch
        self.details = dict(details or {})

    def to_dict(self):
        return {'open_onto_image': self.open_onto_image,
                'reason': self.reason,
                'witness': self.witness,
                'branch': self.branch,
                'details': self.details}


def image_grid(box, h):
    """Origin and shape of the raster of an image box"""
    lo, hi = np.asarray(box[0], dtype=float), np.asarray(box[1], dtype=float)
    shape = np.maximum(np.ceil((hi - lo) / h - 1e-9).astype(int), 1)
    return lo, shape


def _dense_report(image, regular):
    """Image cells farther than one cell from every regular cell"""
    if len(image) == 0:
        return []
    mask, lo = image.mask()
    reg = np.zeros(mask.shape, dtype=bool)
    if len(regular):
        idx = regular.cells - lo
        reg[tuple(idx.T)] = True
    near = ndimage.binary_dilation(reg, structure=np.ones((3,) * image.dim, dtype=bool))
    far = np.argwhere(mask & ~near) + lo
    return [tuple(int(v) for v in c) for c in far]


def rasterize_images(sc, box=None, h=DEFAULT_H, n_samples=DEFAULT_SAMPLES, seed=None,
                     dump_path=None):
    """Rasters of the image and of the regular image of a scene

    Singular samples mark their cells as singular; the regular image keeps
    the cells hit by regular samples and by no singular one.

    Args:
        sc (Scene): The scene
        box (:obj:`tuple`, optional): (lo, hi) raster box. Defaults to the
            scene box
        h (:obj:`float`, optional): Cell size
        n_samples (:obj:`int`, optional): Domain samples drawn
        seed (int): The run seed
        dump_path (:obj:`str`, optional): TSV file for the accepted samples

    Returns:
        tuple: (image, regular_image, report)

    Raises:
        SamplerMismatchError: Fewer than 1 % of the drawn points are accepted
    """
    if seed is None:
        raise InputError("a seed is required for sampling")
    box = sc.box if box is None else box
    origin, shape = image_grid(box, h)
    parts = run_chunked(draw_chunk, n_samples, seed, ('images', sc.name),
                        momentum=sc.momentum, total=n_samples)
    X = np.vstack([p[0] for p in parts])
    values = np.vstack([p[1] for p in parts])
    regular = np.concatenate([p[2] for p in parts])
    drawn = sum(p[3] for p in parts)
    acceptance = len(X) / float(drawn)
    log.info("%s: accepted %d of %d samples", sc.name, len(X), drawn)
    if acceptance < MIN_ACCEPTANCE:
        raise SamplerMismatchError("sampler mismatch: acceptance rate {0:.4f} is below {1}"
                                   .format(acceptance, MIN_ACCEPTANCE))
    if dump_path:
        dump_points_tsv(dump_path, X, values, regular)

    image = rasterize_points(values, origin, h, shape=shape)
    regular_hits = rasterize_points(values[regular], origin, h, shape=shape)
    singular_hits = rasterize_points(values[~regular], origin, h, shape=shape)
    if len(singular_hits):
        singular_keys = {tuple(c) for c in singular_hits.cells.tolist()}
        keep = [c for c in regular_hits.cells.tolist() if tuple(c) not in singular_keys]
        regular_image = regular_hits.with_cells(keep)
    else:
        regular_image = regular_hits
    sparse = _dense_report(image, regular_image)
    if sparse:
        log.warning("%s: %d image cells have no regular cell within one cell", sc.name, len(sparse))
    report = {'samples': int(drawn), 'accepted': int(len(X)), 'acceptance': acceptance,
              'image_cells': len(image), 'regular_cells': len(regular_image),
              'regular_dense': not sparse, 'sparse_cells': sparse[:16], 'h': h}
    return image, regular_image, report


def _count_components(mask):
    structure = ndimage.generate_binary_structure(mask.ndim, 1)
    labels, count = ndimage.label(mask, structure=structure)
    if count == 0:
        return 0
    sizes = np.bincount(labels.ravel())[1:]
    return int(np.sum(sizes >= MIN_COMPONENT_CELLS))


def _ball_mask(radius_cells, dim):
    R = int(np.floor(radius_cells))
    axes = [np.arange(-R, R + 1)] * dim
    grid = np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1)
    return np.sum(grid.astype(float) ** 2, axis=-1) <= radius_cells ** 2, R


def _ball_counts(image_mask, regular_mask, center, radii_cells):
    """Component counts of the image and regular parts of balls around a center"""
    counts = []
    for r in radii_cells:
        ball, R = _ball_mask(r, image_mask.ndim)
        pad = [(R, R)] * image_mask.ndim
        window = tuple(slice(c, c + 2 * R + 1) for c in center)
        image_part = np.pad(image_mask, pad)[window] & ball
        regular_part = np.pad(regular_mask, pad)[window] & ball
        counts.append((_count_components(image_part), _count_components(regular_part)))
    return counts


def _ball_counts_all(image_mask, regular_mask, centers, radii_cells):
    return [_ball_counts(image_mask, regular_mask, c, radii_cells) for c in centers]


@concurrent(processes=NUM_PROCESSES)
def _ball_counts_chunk(image_mask, regular_mask, centers, radii_cells):
    return _ball_counts_all(image_mask, regular_mask, centers, radii_cells)


@synchronized
def _ball_counts_concurrently(image_mask, regular_mask, chunks, radii_cells):
    rmap = {}
    for i, centers in enumerate(chunks):
        rmap[i] = _ball_counts_chunk(image_mask, regular_mask, centers, radii_cells)
    return [rmap[i] for i in range(len(rmap))]


def disconnection_test(image, regular_image, n_centers=DEFAULT_CENTERS,
                       radius_factors=DEFAULT_RADIUS_FACTORS, seed=0,
                       min_radii=DEFAULT_MIN_RADII):
    """Whether the missing regular cells disconnect a region of the image

    Test balls are centered on image cells missing from the regular
    image. A center disconnects when the regular part of its ball has more
    components than the image part, ignoring components of fewer than 3
    cells, at `min_radii` of the radii.

    Args:
        image (GridRegion): Image raster
        regular_image (GridRegion): Regular image raster on the same grid
        n_centers (:obj:`int`, optional): Number of ball centers
        radius_factors (:obj:`tuple`, optional): Ball radii in cells
        seed (:obj:`int`, optional): Seed for choosing ball centers
        min_radii (:obj:`int`, optional): Radii a disconnection must show at

    Returns:
        tuple: (bool, witness dict or None)
    """
    if len(image) == 0:
        return False, None
    mask, lo = image.mask()
    regular_mask = np.zeros(mask.shape, dtype=bool)
    if len(regular_image):
        idx = regular_image.cells - lo
        inside = np.all((idx >= 0) & (idx < np.asarray(mask.shape)), axis=1)
        regular_mask[tuple(idx[inside].T)] = True
    regular_mask &= mask
    removed = np.argwhere(mask & ~regular_mask)
    if len(removed) == 0:
        return False, None
    if len(removed) > n_centers:
        rng = make_rng(seed, 'centers')
        pick = np.sort(rng.choice(len(removed), size=n_centers, replace=False))
        removed = removed[pick]
    centers = [tuple(int(v) for v in c) for c in removed]
    radii = [float(k) for k in radius_factors]

    if NUM_PROCESSES == 1 or len(centers) < 2 * NUM_PROCESSES:
        results = _ball_counts_all(mask, regular_mask, centers, radii)
    else:
        chunks = [list(map(tuple, c)) for c in chunkify(np.asarray(centers), NUM_PROCESSES) if len(c)]
        results = [r for part in _ball_counts_concurrently(mask, regular_mask, chunks, radii) for r in part]

    for center, counts in zip(centers, results):
        hits = [r for r, (a, b) in zip(radius_factors, counts) if b > a]
        if len(hits) < min_radii:
            continue
        cell = np.asarray(center) + lo
        radius = hits[0]
        offsets = np.argwhere(mask & ~regular_mask) - center
        near = offsets[np.sum(offsets.astype(float) ** 2, axis=1) <= radius ** 2] + cell
        witness = {'center_cell': cell.tolist(),
                   'center': (image.origin + (cell + 0.5) * image.h).tolist(),
                   'radii': [k * image.h for k in hits],
                   'components': {str(k): {'image': a, 'regular': b}
                                  for k, (a, b) in zip(radius_factors, counts)},
                   'removed_cells': near.tolist()}
        log.info("ball at %s disconnects at radii %s", witness['center'], witness['radii'])
        return True, witness
    return False, None


def ccf_check(sc, n_values=DEFAULT_VALUE_SAMPLES, seed=0):
    """Whether every fiber over a sampled value meets the regular stratum, or none does

    Values are images of sampled domain points.

    Returns:
        tuple: (bool, counterexample dict or None)

    Raises:
        UndecidableError: The scene has no fiber component oracle
    """
    momentum = sc.momentum
    total = max(4 * n_values, 16)
    X, values, _, _ = draw_chunk(make_rng(seed, 'ccf', sc.name), 0, total, momentum, total)
    values = values[:n_values]
    if momentum.fiber_components(values[0] if len(values) else sc.box[0]) is None:
        raise UndecidableError("CCF undecidable for this scene")
    for v in values:
        components = momentum.fiber_components(v)
        flags = [c['regular'] for c in components]
        if any(flags) and not all(flags):
            log.info("%s: fiber over %s mixes regular and singular components", sc.name, v)
            return False, {'value': v.tolist(), 'components': components}
    return True, None


def prato_properness_check(sc, xi, escape_radius=DEFAULT_ESCAPE_RADIUS,
                           n_samples=DEFAULT_ESCAPE_SAMPLES, seed=0):
    """Statistical properness of the component <J, xi>

    Points are drawn at geometrically growing levels of the scene's
    exhaustion, up to `escape_radius`. The component is taken as proper
    when the smallest |<J, xi>| grows from level to level and exceeds, at
    the top level, every value seen at the bottom one.

    Args:
        sc (Scene): The scene
        xi (sequence): Direction in the target
        escape_radius (:obj:`float`, optional): Top exhaustion level
        n_samples (:obj:`int`, optional): Points per level
        seed (:obj:`int`, optional): The seed

    Returns:
        tuple: (bool, witness dict or None). Compact domains are proper.

    Raises:
        InputError: xi has the wrong dimension or is zero
    """
    xi = np.asarray(xi, dtype=float).ravel()
    if xi.shape != (sc.dim_target,):
        raise InputError("xi has dimension {0}, the target has {1}".format(xi.size, sc.dim_target))
    if not np.any(xi):
        raise InputError("xi must be nonzero")
    rng = make_rng(seed, 'properness', sc.name)
    levels = escape_radius * 2.0 ** -np.arange(ESCAPE_LEVELS - 1, -1, -1)
    lows, highs, samples = [], [], []
    for level in levels:
        X = sc.momentum.escape_points(rng, n_samples, level)
        if X is None:
            return True, None
        component = np.abs(sc.momentum.evaluate(X).dot(xi))
        lows.append(float(component.min()))
        highs.append(float(component.max()))
        samples.append((X, component))
    growing = all(b >= a for a, b in zip(lows[:-1], lows[1:]))
    if growing and lows[-1] > highs[0]:
        return True, None
    X, component = samples[-1]
    worst = np.argsort(component)[:4]
    witness = {'levels': levels.tolist(),
               'min_component': lows,
               'points': X[worst].tolist(),
               'component': component[worst].tolist()}
    log.info("%s: <J, xi> stays bounded along escaping points", sc.name)
    return False, witness


def diagnose(sc, params):
    """Openness verdict of a scene

    Fibers connected per the metadata: open iff no disconnection. Otherwise
    the image must be locally compact and CCF must hold as well.

    Args:
        sc (Scene): The scene
        params (DiagnosisParams): Resolution and seed

    Returns:
        OpennessVerdict: The verdict
    """
    image, regular_image, report = rasterize_images(sc, h=params.h, n_samples=params.n_samples,
                                                    seed=params.seed, dump_path=params.dump_path)
    if sc.metadata['fibers_connected']:
        branch = 'connected_fibers'
    else:
        branch = 'ccf'
        if not sc.metadata['locally_compact']:
            return OpennessVerdict(False, NOT_LOCALLY_COMPACT, branch=branch, details=report)
        ok, counterexample = ccf_check(sc, params.n_values, params.seed)
        if not ok:
            return OpennessVerdict(False, CCF_VIOLATED, witness=counterexample,
                                   branch=branch, details=report)
    found, witness = disconnection_test(image, regular_image, params.n_centers,
                                        params.radius_factors, params.seed, params.min_radii)
    if found:
        return OpennessVerdict(False, DISCONNECTION_FOUND, witness=witness,
                               branch=branch, details=report)
    return OpennessVerdict(True, CLEAN, branch=branch, details=report)


def sweep(sc, H):
    """Positive Weyl chamber representative of a Hermitian matrix

    Args:
        sc (Scene): A scene with group tag 'u(n)'
        H (np.ndarray): (n, n) Hermitian matrix

    Returns:
        np.ndarray: Decreasing eigenvalues

    Raises:
        InputError: Torus scenes, or H not Hermitian
    """
    if sc.group != 'u(n)':
        raise InputError("sweep needs a unitary scene, '{0}' has group {1}".format(sc.name, sc.group))
    H = np.asarray(H)
    if H.ndim != 2:
        raise InputError("sweep takes one square matrix")
    return hermitian_spectra(H, check=True)
