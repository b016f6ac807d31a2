# -*- coding: utf-8 *-*
"""Convexity certificates for grid regions

A closed, connected and locally convex region is convex. The certificate
records which of the three properties failed, or, for convex regions, the
hull of the cell centers together with a discrete cross-check: every cell
of the bounding box whose center lies in that hull must be occupied. A
region failing the cross-check is reported NotLocallyConvex with the
missing cells as witnesses.

"""
import logging

import numpy as np

from MomentumCheck.errors import HypothesisUnavailableError, InputError
from MomentumCheck.geometry.grid import (DEFAULT_RADIUS_CELLS, is_locally_convex,
                                         region_components)
from MomentumCheck.geometry.hull import convex_hull, hull_equations

log = logging.getLogger(__name__)

CONVEX = 'Convex'
NOT_LOCALLY_CONVEX = 'NotLocallyConvex'
DISCONNECTED = 'Disconnected'

VERDICTS = [
             CONVEX,
             NOT_LOCALLY_CONVEX,
             DISCONNECTED,
           ]

ORACLE_TOL = 1e-9


class ConvexityCertificate(object):
    def __init__(self, verdict, witnesses=None, hull_vertices=None,
                 oracle_checked=False, oracle_missing=None, radius=None):
        """ConvexityCertificate class initializer

        Args:
            verdict (str): One of VERDICTS
            witnesses (list of tuples): Cells where a check failed
            hull_vertices (list of np.ndarray): Hull of the cell centers,
                present for Convex verdicts
            oracle_checked (bool): Whether the hull cross-check ran
            oracle_missing (list of tuples): Unoccupied cells whose centers
                lie in the hull
            radius (float): Local convexity radius used

        """
        if verdict not in VERDICTS:
            raise ValueError("unknown verdict {0}".format(verdict))
        self.verdict = verdict
        self.witnesses = list(witnesses or [])
        self.hull_vertices = list(hull_vertices or [])
        self.oracle_checked = oracle_checked
        self.oracle_missing = list(oracle_missing or [])
        self.radius = radius
        if verdict == CONVEX and (self.witnesses or not self.hull_vertices):
            raise ValueError("a Convex certificate has no witnesses and a nonempty hull")

    @property
    def is_convex(self):
        return self.verdict == CONVEX

    def to_dict(self):
        return {'verdict': self.verdict,
                'witnesses': [list(w) for w in self.witnesses],
                'hull_vertices': [list(v) for v in self.hull_vertices],
                'oracle': {'checked': self.oracle_checked,
                           'missing_cells': [list(c) for c in self.oracle_missing]},
                'radius': self.radius}


def _hull_oracle(r, hull_vertices):
    """Unoccupied cells of the bounding box with centers inside the hull"""
    lo, hi = r.bounds()
    if r.dim == 1:
        a = float(min(hull_vertices)[0])
        b = float(max(hull_vertices)[0])
        idx = np.arange(lo[0], hi[0])
        centers = r.origin[0] + (idx + 0.5) * r.h
        inside = idx[(centers >= a - ORACLE_TOL) & (centers <= b + ORACLE_TOL)]
        missing = [(int(i),) for i in inside if not r.contains_cell((int(i),))]
        return True, missing
    equations = hull_equations(np.array([np.asarray(v, dtype=float) for v in hull_vertices]))
    if equations is None:
        return False, []
    mask, offset = r.mask()
    axes = [np.arange(l, u) for l, u in zip(lo, hi)]
    grid = np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1).reshape(-1, r.dim)
    centers = r.origin + (grid + 0.5) * r.h
    inside = np.all(centers.dot(equations[:, :-1].T) + equations[:, -1] <= ORACLE_TOL * r.h, axis=1)
    occupied = mask[tuple((grid - offset).T)]
    missing = grid[inside & ~occupied]
    return True, [tuple(int(v) for v in c) for c in missing]


def klee_certify(r, radius=None):
    """Certify convexity of a closed grid region

    Args:
        r (GridRegion): The region; its closed_flag must be set
        radius (:obj:`float`, optional): Local convexity radius. Defaults to 4h

    Returns:
        ConvexityCertificate: The certificate

    Raises:
        HypothesisUnavailableError: closed_flag is false
        InputError: empty region

    """
    if not r.closed_flag:
        raise HypothesisUnavailableError("Klee hypothesis unavailable: region is not declared closed")
    if len(r) == 0:
        raise InputError("cannot certify an empty region")
    radius = DEFAULT_RADIUS_CELLS * r.h if radius is None else float(radius)

    components = region_components(r)
    if len(components) > 1:
        log.info("region splits into %d components", len(components))
        witnesses = [tuple(int(v) for v in c.cells[0]) for c in components]
        return ConvexityCertificate(DISCONNECTED, witnesses=witnesses, radius=radius)

    violations = is_locally_convex(r, radius)
    if violations:
        log.info("%d cells violate local convexity", len(violations))
        return ConvexityCertificate(NOT_LOCALLY_CONVEX, witnesses=violations, radius=radius)

    hull_vertices = convex_hull(r.centers())
    checked, missing = _hull_oracle(r, hull_vertices)
    if missing:
        log.info("%d unoccupied cells lie inside the hull of the centers", len(missing))
        return ConvexityCertificate(NOT_LOCALLY_CONVEX, witnesses=missing, oracle_checked=checked,
                                    oracle_missing=missing, radius=radius)
    return ConvexityCertificate(CONVEX, hull_vertices=hull_vertices, oracle_checked=checked,
                                radius=radius)


def certificate_from_dict(payload):
    return ConvexityCertificate(payload['verdict'],
                                witnesses=[tuple(w) for w in payload.get('witnesses', [])],
                                hull_vertices=[np.asarray(v) for v in payload.get('hull_vertices', [])],
                                oracle_checked=payload.get('oracle', {}).get('checked', False),
                                oracle_missing=[tuple(c) for c in payload.get('oracle', {}).get('missing_cells', [])],
                                radius=payload.get('radius'))
