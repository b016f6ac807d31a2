# -*- coding: utf-8 *-*
"""Local to global checks on discrete spaces

The hypotheses (locally fiber connected, local convexity data, closed
map) and the conclusions (connected fibers, openness onto the image,
convex image) are evaluated independently; the verdict records whether
the implication between them held.

Image sets of vertex balls are represented by the images of their edges
as segments. A point counts as covered by such a set when it is within
`coverage_tol` of one of the segments: 1e-9 on the line, half the longest
edge image in higher dimension.

"""
import logging

import networkx as nx
import numpy as np
from deco import concurrent, synchronized
from scipy.spatial import cKDTree

from MomentumCheck.definitions import NUM_PROCESSES
from MomentumCheck.errors import InputError
from MomentumCheck.geometry.cone import cone_contains_many, cone_frame
from MomentumCheck.geometry.grid import (GridRegion, rasterize_convex_polygon,
                                         rasterize_points)
from MomentumCheck.geometry.hull import ccw_hull_2d
from MomentumCheck.geometry.klee import klee_certify
from MomentumCheck.lgp.space import INFINITY, build_quotient, quotient_metric
from MomentumCheck.util.data_util import chunkify

log = logging.getLogger(__name__)

DEFAULT_HOP_RADIUS = 1
DEFAULT_OPEN_RADII = (1, 2, 3)
SLO_STEPS = 3
CONE_GRID_STEPS = 5
LINE_COVERAGE_TOL = 1e-9
# Geodesics prefer, among shortest paths, those hugging the segment
TIE_BREAK = 1e-7


class LgpParams(object):
    def __init__(self, hop_radius=DEFAULT_HOP_RADIUS, rel_radius=None,
                 open_radii=DEFAULT_OPEN_RADII, klee_radius=None):
        if hop_radius < 1:
            raise InputError("hop_radius must be at least 1")
        self.hop_radius = int(hop_radius)
        self.rel_radius = rel_radius
        self.open_radii = tuple(int(k) for k in open_radii)
        self.klee_radius = klee_radius


def coverage_tol(s):
    return LINE_COVERAGE_TOL if s.dim == 1 else 0.5 * s.max_edge_length


def raster_h(s):
    """Cell size of the image raster, twice the bucket size"""
    return 2.0 * s.eps


def _ball_segments(s, vertices):
    """Deduplicated image segments of the edges inside a vertex set"""
    inside = np.zeros(s.n_vertices, dtype=bool)
    inside[list(vertices)] = True
    E = s.edges[inside[s.edges[:, 0]] & inside[s.edges[:, 1]]] if len(s.edges) else s.edges
    A = np.vstack([s.f[E[:, 0]], s.f[list(vertices)]])
    B = np.vstack([s.f[E[:, 1]], s.f[list(vertices)]])
    seg = np.round(np.hstack([A, B]), 12)
    _, keep = np.unique(seg, axis=0, return_index=True)
    return A[keep], B[keep]


def _distance_to_segments(P, A, B):
    """(m,) distance from each point to the nearest segment [A_i, B_i]"""
    if len(P) == 0:
        return np.zeros(0)
    AB = B - A
    denom = np.einsum('ij,ij->i', AB, AB)
    AP = P[:, None, :] - A[None, :, :]
    t = np.einsum('mij,ij->mi', AP, AB) / np.where(denom > 0, denom, 1.0)
    t = np.clip(np.where(denom > 0, t, 0.0), 0.0, 1.0)
    closest = A[None, :, :] + t[:, :, None] * AB[None, :, :]
    return np.linalg.norm(P[:, None, :] - closest, axis=2).min(axis=1)


def _cone_points(cone, center, radius):
    """Grid of cone points within radius of a point of the cone's span"""
    Q = cone_frame(cone)
    r = Q.shape[1]
    if r == 0:
        return center[None, :] if np.linalg.norm(center - cone.as_float().vertex) <= radius else np.zeros((0, len(center)))
    step = radius / CONE_GRID_STEPS
    axes = [np.arange(-CONE_GRID_STEPS, CONE_GRID_STEPS + 1) * step] * r
    g = np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1).reshape(-1, r)
    g = g[np.linalg.norm(g, axis=1) <= radius * (1 + 1e-12)]
    P = center + g.dot(Q.T)
    return P[cone_contains_many(cone, P)]


def check_lfc(s, hop_radius=DEFAULT_HOP_RADIUS, quotient=None):
    """Vertices whose ball meets two classes of one fiber

    Args:
        s (DiscreteSpace): The space
        hop_radius (:obj:`int`, optional): Ball radius in hops
        quotient (:obj:`FiberQuotient`, optional): Precomputed quotient

    Returns:
        list of int: Violating vertices, increasing

    Raises:
        InputError: hop_radius < 1
    """
    if hop_radius < 1:
        raise InputError("hop_radius must be at least 1, got {0}".format(hop_radius))
    q = quotient or build_quotient(s)
    violations = []
    for x in range(s.n_vertices):
        ball = np.asarray(s.hop_ball(x, hop_radius))
        classes = q.class_of[ball]
        if len(np.unique(classes)) < 2:
            continue
        values = s.f[ball]
        d = np.linalg.norm(values[:, None, :] - values[None, :, :], axis=2)
        if np.any((d <= s.eps) & (classes[:, None] != classes[None, :])):
            violations.append(x)
    return violations


def _lcd_vertex(s, x, hop_radius, rel, tol):
    cone = s.cone_at(x)
    ball = s.hop_ball(x, hop_radius)
    result = {'containment': True, 'vn': True, 'slo': True}
    if not np.all(cone_contains_many(cone, s.f[ball])):
        result['containment'] = False
    A, B = _ball_segments(s, ball)
    target = _cone_points(cone, s.f[x], rel)
    if np.any(_distance_to_segments(target, A, B) > tol):
        result['vn'] = False
    for y in ball:
        for k in range(1, SLO_STEPS + 1):
            P = _cone_points(cone, s.f[y], rel * k / float(SLO_STEPS))
            P = P[_distance_to_segments(P, A, B) <= tol]
            if not len(P):
                continue
            Ak, Bk = _ball_segments(s, s.hop_ball(y, k))
            if np.any(_distance_to_segments(P, Ak, Bk) > tol):
                result['slo'] = False
                break
        if not result['slo']:
            break
    return result


def _lcd_vertices(s, vertices, hop_radius, rel, tol):
    return [(int(x), _lcd_vertex(s, int(x), hop_radius, rel, tol)) for x in vertices]


@concurrent(processes=NUM_PROCESSES)
def _lcd_chunk(s, vertices, hop_radius, rel, tol):
    return _lcd_vertices(s, vertices, hop_radius, rel, tol)


@synchronized
def _lcd_concurrently(s, chunks, hop_radius, rel, tol):
    rmap = {}
    for i, vertices in enumerate(chunks):
        rmap[i] = _lcd_chunk(s, vertices, hop_radius, rel, tol)
    return [rmap[i] for i in range(len(rmap))]


def check_local_convexity_data(s, hop_radius=DEFAULT_HOP_RADIUS, rel_radius=None):
    """Containment, vertex neighborhood and openness onto the declared cones

    Per vertex x with ball U = hop ball of x and cone C:

        - containment: f(U) lies in C
        - vn: cone points within rel_radius of f(x) are covered by f(U)
        - slo: for y in U and k = 1, 2, 3, cone points within
          rel_radius * k / 3 of f(y) that are covered by f(U) are covered
          by the image of the k hop ball of y

    Args:
        s (DiscreteSpace): The space. A vertex without a declared cone gets
            the trivial cone at its value
        hop_radius (:obj:`int`, optional): Ball radius in hops
        rel_radius (:obj:`float`, optional): Cone neighborhood radius.
            Defaults to the shortest nonzero edge image

    Returns:
        dict: Failing vertices per condition and an overall `ok`

    Raises:
        InputError: hop_radius < 1
    """
    if hop_radius < 1:
        raise InputError("hop_radius must be at least 1, got {0}".format(hop_radius))
    rel = s.min_edge_length if rel_radius is None else float(rel_radius)
    tol = coverage_tol(s)
    vertices = np.arange(s.n_vertices)
    if NUM_PROCESSES == 1 or s.n_vertices < 64:
        results = _lcd_vertices(s, vertices, hop_radius, rel, tol)
    else:
        chunks = [c for c in chunkify(vertices, NUM_PROCESSES) if len(c)]
        results = [r for part in _lcd_concurrently(s, chunks, hop_radius, rel, tol) for r in part]
    report = {'containment': [], 'vn': [], 'slo': []}
    for x, result in results:
        for key in report:
            if not result[key]:
                report[key].append(x)
    report['ok'] = not any(report[key] for key in ('containment', 'vn', 'slo'))
    report['rel_radius'] = rel
    return report


def fibers_connected(q):
    """Levels that hold more than one fiber class"""
    levels = q.levels()
    counts = np.bincount(levels)
    split = np.flatnonzero(counts > 1)
    witnesses = [q.class_values[np.flatnonzero(levels == l)[0]].tolist() for l in split]
    return len(split) == 0, witnesses


def _image_samples(s, spacing):
    """Points along every edge image, spacing apart"""
    pieces = [s.f]
    if len(s.edges):
        A, B = s.f[s.edges[:, 0]], s.f[s.edges[:, 1]]
        lengths = np.linalg.norm(B - A, axis=1)
        for a, b, l in zip(A, B, lengths):
            k = int(np.ceil(l / spacing))
            if k > 1:
                t = np.linspace(0.0, 1.0, k + 1)[1:-1, None]
                pieces.append(a + t * (b - a))
    return np.vstack(pieces)


def open_onto_image(s, radii=DEFAULT_OPEN_RADII):
    """Whether the image of each hop ball covers an image neighborhood

    For each vertex x and hop radius k, image points within k times the
    shortest edge image of f(x) must be covered by the image of the k
    hop ball of x.

    Returns:
        tuple: (bool, failures as {vertex: [radii]}, resolution_suspect)
    """
    tol = coverage_tol(s)
    points = _image_samples(s, 0.25 * s.min_edge_length)
    tree = cKDTree(points)
    failures = {}
    for x in range(s.n_vertices):
        for k in radii:
            near = points[tree.query_ball_point(s.f[x], k * s.min_edge_length)]
            A, B = _ball_segments(s, s.hop_ball(x, k))
            if np.any(_distance_to_segments(near, A, B) > tol):
                failures.setdefault(x, []).append(k)
    smallest = min(radii)
    suspect = bool(failures) and all(ks == [smallest] for ks in failures.values())
    return not failures, failures, suspect


def _triangles(s):
    G = s.graph
    out = set()
    for u, v in s.edges:
        for w in set(G[u]) & set(G[v]):
            out.add(tuple(sorted((int(u), int(v), int(w)))))
    return sorted(out)


def _triangle_samples(V, spacing):
    """Barycentric grid on a triangle, spacing apart along the longest side"""
    longest = max(np.linalg.norm(V[i] - V[j]) for i, j in ((0, 1), (1, 2), (0, 2)))
    k = max(1, int(np.ceil(longest / spacing)))
    i, j = np.meshgrid(np.arange(k + 1), np.arange(k + 1), indexing='ij')
    keep = (i + j) <= k
    a = i[keep] / float(k)
    b = j[keep] / float(k)
    return V[0] + a[:, None] * (V[1] - V[0]) + b[:, None] * (V[2] - V[0])


def image_raster(s, h=None):
    """Closed raster of the image: edge images, and triangle images in the plane"""
    h = raster_h(s) if h is None else h
    lo = s.f.min(axis=0) - h
    hi = s.f.max(axis=0) + h
    shape = np.ceil((hi - lo) / h).astype(int) + 1
    points = _image_samples(s, 0.5 * h)
    if s.dim >= 3:
        points = np.vstack([points] + [_triangle_samples(s.f[list(t)], 0.5 * h)
                                       for t in _triangles(s)])
    region = rasterize_points(points, lo, h, shape=shape)
    cells = [region.cells]
    if s.dim == 2:
        seen = set()
        for tri in _triangles(s):
            V = s.f[list(tri)]
            key = tuple(np.round(V, 12).ravel())
            if key in seen:
                continue
            seen.add(key)
            hull = ccw_hull_2d(V)
            if len(hull) < 3:
                continue
            cells.append(rasterize_convex_polygon(hull, lo, h, shape).cells)
    return GridRegion(lo, h, np.vstack(cells), closed=True, shape=shape)


def geodesic_straightness(q, a, b, tol=None):
    """Whether a shortest class path from a to b is a straight segment

    Among shortest paths, one hugging the segment [value(a), value(b)] is
    chosen.

    Args:
        q (FiberQuotient): The quotient
        a (int): Source class
        b (int): Target class
        tol (:obj:`float`, optional): Tolerance. Defaults to 2h with h the
            image raster cell

    Returns:
        tuple: (bool, max deviation from the segment, path length)

    Raises:
        InputError: a and b are in different components of the quotient
    """
    tol = 2.0 * raster_h(q.space) if tol is None else float(tol)
    va, vb = q.class_values[a], q.class_values[b]
    if a == b:
        return True, 0.0, 0.0
    if quotient_metric(q, a)[b] == INFINITY:
        raise InputError("classes {0} and {1} are at infinite distance".format(a, b))
    ab = vb - va
    denom = float(ab.dot(ab))

    def deviation(p):
        t = 0.0 if denom == 0 else min(max((p - va).dot(ab) / denom, 0.0), 1.0)
        return float(np.linalg.norm(p - (va + t * ab)))

    def weight(u, v, data):
        mid = 0.5 * (q.class_values[u] + q.class_values[v])
        return data['weight'] * (1.0 + TIE_BREAK) + TIE_BREAK * deviation(mid)

    path = nx.shortest_path(q.graph, a, b, weight=weight)
    values = q.class_values[path]
    length = float(np.sum(np.linalg.norm(np.diff(values, axis=0), axis=1)))
    dev = max(deviation(p) for p in values)
    straight = dev <= tol and abs(length - np.sqrt(denom)) <= tol
    return straight, dev, length


class LgpVerdict(object):
    def __init__(self, hypotheses, conclusions):
        """LgpVerdict class initializer

        Args:
            hypotheses (dict): lfc_ok, lcd_ok, closed_ok and `witnesses`
            conclusions (dict): fibers_connected, open_onto_image,
                image_convex, `witnesses` and `resolution_suspect`

        """
        self.hypotheses = dict(hypotheses)
        self.conclusions = dict(conclusions)
        self.rerun = None
        self.rerun_settings = {}

    def attach_rerun(self, rerun, settings):
        """Record the verdict of a finer discretization of the same input

        An alarm that the finer run does not repeat is marked
        resolution-suspect.
        """
        self.rerun = rerun
        self.rerun_settings = dict(settings)
        if not self.consistent and rerun.consistent:
            self.conclusions['resolution_suspect'] = True

    @property
    def hypotheses_ok(self):
        return all(self.hypotheses[k] for k in ('lfc_ok', 'lcd_ok', 'closed_ok'))

    @property
    def conclusions_ok(self):
        return all(self.conclusions[k] for k in ('fibers_connected', 'open_onto_image', 'image_convex'))

    @property
    def consistent(self):
        return (not self.hypotheses_ok) or self.conclusions_ok

    def failed_hypotheses(self):
        return [k for k in ('lfc_ok', 'lcd_ok', 'closed_ok') if not self.hypotheses[k]]

    def summary(self):
        if not self.consistent:
            suspect = self.conclusions.get('resolution_suspect', False)
            text = "hypotheses hold but conclusions fail{0}".format(
                " (resolution-suspect)" if suspect else "")
            if self.rerun is not None:
                text += "; finer re-run: {0}".format(self.rerun.summary())
            return text
        if self.hypotheses_ok:
            return "all hypotheses and conclusions hold"
        lfc = self.hypotheses.get('witnesses', {}).get('lfc', [])
        parts = []
        if not self.hypotheses['lfc_ok']:
            parts.append("LFC violated at {0} vertices".format(len(lfc)))
        if not self.hypotheses['lcd_ok']:
            parts.append("local convexity data fails")
        if not self.hypotheses['closed_ok']:
            parts.append("map not declared closed")
        return "; ".join(parts)

    def to_dict(self):
        payload = {'hypotheses': self.hypotheses,
                   'conclusions': self.conclusions,
                   'consistent': self.consistent,
                   'summary': self.summary()}
        if self.rerun is not None:
            payload['rerun'] = dict(self.rerun_settings, **self.rerun.to_dict())
        return payload


def lgp_verdict(s, params=None):
    """Evaluate hypotheses and conclusions of the local to global principle

    Args:
        s (DiscreteSpace): The space
        params (:obj:`LgpParams`, optional): Radii

    Returns:
        LgpVerdict: The verdict
    """
    params = params or LgpParams()
    q = build_quotient(s)
    lfc = check_lfc(s, params.hop_radius, quotient=q)
    lcd = check_local_convexity_data(s, params.hop_radius, params.rel_radius)
    hypotheses = {'lfc_ok': not lfc,
                  'lcd_ok': lcd['ok'],
                  'closed_ok': s.closed,
                  'witnesses': {'lfc': lfc,
                                'lcd': {k: lcd[k] for k in ('containment', 'vn', 'slo')}}}

    connected, split_levels = fibers_connected(q)
    is_open, failures, suspect = open_onto_image(s, params.open_radii)
    certificate = klee_certify(image_raster(s), params.klee_radius)
    conclusions = {'fibers_connected': connected,
                   'open_onto_image': is_open,
                   'image_convex': certificate.is_convex,
                   'resolution_suspect': suspect,
                   'witnesses': {'split_levels': split_levels,
                                 'open': {str(k): v for k, v in sorted(failures.items())},
                                 'convexity': certificate.verdict}}
    verdict = LgpVerdict(hypotheses, conclusions)
    if not verdict.consistent:
        log.warning("local to global alarm: %s", verdict.summary())
    else:
        log.info("lgp verdict: %s", verdict.summary())
    return verdict


def lgp_exit_code(verdict):
    """0 when hypotheses and conclusions hold, 1 when hypotheses fail, 4 on an alarm

    A verdict with a finer re-run exits with the code of the re-run.
    """
    if verdict.rerun is not None:
        return lgp_exit_code(verdict.rerun)
    if not verdict.consistent:
        return 4
    return 0 if verdict.hypotheses_ok else 1
