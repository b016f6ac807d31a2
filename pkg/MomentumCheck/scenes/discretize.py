# -*- coding: utf-8 *-*
"""Sample graphs of scenes

A scene becomes a DiscreteSpace by sampling its domain (or taking the
scene's own grid), joining every point to its k nearest neighbours in the
scene's graph coordinates and declaring the cone of the local model at
each point.

"""
import logging

import numpy as np
from scipy.spatial import cKDTree

from MomentumCheck.diagnosis.scene import draw_chunk
from MomentumCheck.errors import DisconnectedSampleGraphError, InputError
from MomentumCheck.lgp.engine import lgp_verdict
from MomentumCheck.lgp.space import DiscreteSpace
from MomentumCheck.models.local_model import local_cone
from MomentumCheck.util.data_util import run_chunked

log = logging.getLogger(__name__)

DEFAULT_NEIGHBORS = 8
DEFAULT_GRAPH_SAMPLES = 2000
DEFAULT_H = 1.0 / 64


class DiscretizationParams(object):
    def __init__(self, n_samples=DEFAULT_GRAPH_SAMPLES, k=DEFAULT_NEIGHBORS, h=DEFAULT_H, seed=None):
        if k < 1:
            raise InputError("k must be at least 1")
        if h <= 0:
            raise InputError("h must be positive")
        self.n_samples = int(n_samples)
        self.k = int(k)
        self.h = float(h)
        self.seed = seed

    def refined(self):
        """Half the cell size and twice the samples"""
        return DiscretizationParams(2 * self.n_samples, self.k, self.h / 2.0, self.seed)


def knn_edges(coords, k):
    """Symmetrized k nearest neighbour edges"""
    n = len(coords)
    k = min(k, n - 1)
    if k < 1:
        return np.zeros((0, 2), dtype=np.int64)
    _, idx = cKDTree(coords).query(coords, k=k + 1)
    rows = np.repeat(np.arange(n), k)
    cols = idx[:, 1:].ravel()
    E = np.sort(np.stack([rows, cols], axis=1), axis=1)
    E = E[E[:, 0] != E[:, 1]]
    return np.unique(E, axis=0)


def discretize_scene(sc, params=None):
    """Sample graph of a scene

    Args:
        sc (Scene): The scene
        params (:obj:`DiscretizationParams`, optional): Sample count, k,
            bucket cell size and seed. A seed is needed unless the scene
            has a grid

    Returns:
        DiscreteSpace: Values of the momentum map, cones where every point
            has a local model, closed flag from the scene metadata

    Raises:
        DisconnectedSampleGraphError: The sample graph splits
    """
    params = params or DiscretizationParams()
    momentum = sc.momentum
    X = momentum.grid()
    if X is None:
        if params.seed is None:
            raise InputError("a seed is required for sampling")
        parts = run_chunked(draw_chunk, params.n_samples, params.seed, ('graph', sc.name),
                            momentum=momentum, total=params.n_samples)
        X = np.vstack([p[0] for p in parts])
    if len(X) < 2:
        raise InputError("too few accepted samples to build a graph")
    edges = knn_edges(momentum.graph_coordinates(X), params.k)
    f = momentum.evaluate(X)

    models = [momentum.local_model(x) for x in X]
    cones = None
    if all(m is not None for m in models):
        cones = [local_cone(m) for m in models]

    space = DiscreteSpace(len(X), edges, f, cones=cones,
                          closed=sc.metadata['closed_map'], eps=params.h / 2.0)
    if not space.is_connected():
        raise DisconnectedSampleGraphError("sample graph of '{0}' is disconnected; increase samples"
                                           .format(sc.name))
    log.info("%s: sample graph with %d vertices and %d edges", sc.name, space.n_vertices, len(edges))
    return space


def scene_lgp_verdict(sc, params=None, lgp_params=None):
    """Local to global verdict of a discretized scene

    An alarm (hypotheses hold, a conclusion fails) may be an artifact of
    the resolution. The scene is then discretized again with
    `params.refined()` and the second verdict is attached to the first.
    Scenes with their own grid keep their vertices; only the fiber bucket
    shrinks.

    Args:
        sc (Scene): The scene
        params (:obj:`DiscretizationParams`, optional): First discretization
        lgp_params (:obj:`LgpParams`, optional): Radii of the check

    Returns:
        LgpVerdict: The verdict at the first resolution, with `rerun` set
            after an alarm
    """
    params = params or DiscretizationParams()
    verdict = lgp_verdict(discretize_scene(sc, params), lgp_params)
    if verdict.consistent:
        return verdict
    finer = params.refined()
    log.warning("%s: alarm at h=%g, possibly a resolution artifact; re-running at h=%g",
                sc.name, params.h, finer.h)
    rerun = lgp_verdict(discretize_scene(sc, finer), lgp_params)
    verdict.attach_rerun(rerun, {'h': finer.h, 'n_samples': finer.n_samples})
    if not rerun.consistent:
        log.warning("%s: alarm persists at h=%g", sc.name, finer.h)
    return verdict
