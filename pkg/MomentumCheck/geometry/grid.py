# -*- coding: utf-8 *-*
"""Axis aligned grid regions

A GridRegion is a finite set of lattice cells of size h anchored at an
origin. Cells are neighbors iff they differ by one in exactly one
coordinate. Included functions:

    - rasterize_points
    - rasterize_convex_polygon
    - chord_cells
    - segment_in_region
    - is_locally_convex
    - region_components
    - polygonal_connect

Notes:
    Segments are rasterized on the lattice of cell centers. A point p of a
    segment is covered by the cells whose centers lie at max norm distance
    strictly below h from p: the 2 ** n cells around p, fewer when p sits
    on a line through centers. A segment lies in the region iff every one
    of its points is covered by an occupied cell. Crossing an unoccupied
    cell through its center always fails. This is the chord property of
    digital convexity: a connected region passes it for every pair of
    cells iff it holds every lattice cell of the hull of its centers.

"""
import itertools
import logging
from collections import deque

import numpy as np
from scipy import ndimage

from MomentumCheck.errors import InputError

log = logging.getLogger(__name__)

DEFAULT_RADIUS_CELLS = 4
_ON_LINE = 1e-9
_TIE = 1e-12


class GridRegion(object):
    def __init__(self, origin, h, cells, closed=True, shape=None):
        """GridRegion class initializer

        Args:
            origin (sequence): Lower corner of cell (0, ..., 0)
            h (float): Cell size, > 0
            cells (iterable of int sequences): Occupied cells
            closed (:obj:`bool`, optional): Whether the represented set is
                closed in its bounding box. Defaults to True
            shape (:obj:`sequence`, optional): Extent of the raster in
                cells. Defaults to the extent of the occupied cells.

        """
        self._origin = np.asarray(origin, dtype=float).ravel()
        if h <= 0:
            raise InputError("cell size h must be positive, got {0}".format(h))
        self._h = float(h)
        n = len(self._origin)
        cells = np.asarray(list(cells) if not isinstance(cells, np.ndarray) else cells, dtype=np.int64)
        if cells.size == 0:
            cells = np.zeros((0, n), dtype=np.int64)
        cells = cells.reshape(-1, n)
        if len(cells):
            cells = np.unique(cells, axis=0)
        self._cells = cells
        self._closed = bool(closed)
        self._shape = None if shape is None else tuple(int(s) for s in shape)
        self._mask = None

    @classmethod
    def from_mask(cls, mask, origin, h, offset=None, closed=True, shape=None):
        """Region from a dense boolean array whose [0,..,0] entry is cell `offset`"""
        mask = np.asarray(mask, dtype=bool)
        cells = np.argwhere(mask)
        if offset is not None:
            cells = cells + np.asarray(offset, dtype=np.int64)
        return cls(origin, h, cells, closed=closed, shape=shape)

    @property
    def dim(self):
        return len(self._origin)

    @property
    def origin(self):
        return self._origin

    @property
    def h(self):
        return self._h

    @property
    def cells(self):
        return self._cells

    @property
    def closed_flag(self):
        return self._closed

    @property
    def shape(self):
        return self._shape

    def __len__(self):
        return len(self._cells)

    def bounds(self):
        """Integer cell bounds (lo, hi) of the raster, hi exclusive"""
        n = self.dim
        if len(self._cells):
            lo = self._cells.min(axis=0)
            hi = self._cells.max(axis=0) + 1
        else:
            lo = np.zeros(n, dtype=np.int64)
            hi = np.zeros(n, dtype=np.int64)
        if self._shape is not None:
            lo = np.minimum(lo, 0)
            hi = np.maximum(hi, np.asarray(self._shape, dtype=np.int64))
        return lo, hi

    def mask(self):
        """Dense occupancy array over `bounds()` and its cell offset"""
        if self._mask is None:
            lo, hi = self.bounds()
            mask = np.zeros(tuple(hi - lo), dtype=bool)
            if len(self._cells):
                mask[tuple((self._cells - lo).T)] = True
            self._mask = (mask, lo)
        return self._mask

    def contains_cell(self, cell):
        mask, lo = self.mask()
        idx = np.asarray(cell, dtype=np.int64) - lo
        if np.any(idx < 0) or np.any(idx >= mask.shape):
            return False
        return bool(mask[tuple(idx)])

    def cell_of(self, p):
        p = np.asarray(p, dtype=float)
        return tuple(int(v) for v in np.floor((p - self._origin) / self._h))

    def center(self, cell):
        return self._origin + (np.asarray(cell, dtype=float) + 0.5) * self._h

    def centers(self):
        return self._origin + (self._cells + 0.5) * self._h

    def in_bounding_box(self, p):
        lo, hi = self.bounds()
        p = np.asarray(p, dtype=float)
        return bool(np.all(p >= self._origin + lo * self._h - _TIE) and
                    np.all(p <= self._origin + hi * self._h + _TIE))

    def with_cells(self, cells, closed=None):
        """Region on the same grid with other cells"""
        return GridRegion(self._origin, self._h, cells,
                          closed=self._closed if closed is None else closed,
                          shape=self._shape)

    def to_dict(self):
        payload = {'origin': list(self._origin), 'h': self._h,
                   'cells': self._cells.tolist(), 'closed': self._closed}
        if self._shape is not None:
            payload['shape'] = list(self._shape)
        return payload

    @classmethod
    def from_dict(cls, payload):
        try:
            return cls(payload['origin'], float(payload['h']), payload['cells'],
                       closed=bool(payload['closed']), shape=payload.get('shape'))
        except KeyError as e:
            raise InputError("grid region JSON is missing field {0}".format(e))
        except (TypeError, ValueError) as e:
            raise InputError("malformed grid region JSON: {0}".format(e))


def rasterize_points(points, origin, h, shape=None, closed=True):
    """Region of the cells hit by a point cloud

    Points outside `shape` (when given) are dropped.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    origin = np.asarray(origin, dtype=float)
    cells = np.floor((points - origin) / h).astype(np.int64)
    if shape is not None:
        keep = np.all((cells >= 0) & (cells < np.asarray(shape)), axis=1)
        cells = cells[keep]
    return GridRegion(origin, h, cells, closed=closed, shape=shape)


def rasterize_convex_polygon(vertices, origin, h, shape, closed=True):
    """Conservative raster of a convex polygon: every cell meeting it

    Args:
        vertices (np.ndarray): (k, 2) vertices in counterclockwise order
        origin (sequence): Raster origin
        h (float): Cell size
        shape (sequence): Raster extent in cells

    Returns:
        GridRegion: The raster
    """
    V = np.atleast_2d(np.asarray(vertices, dtype=float))
    origin = np.asarray(origin, dtype=float)
    grid = np.stack(np.meshgrid(np.arange(shape[0]), np.arange(shape[1]), indexing='ij'),
                    axis=-1).reshape(-1, 2)
    centers = origin + (grid + 0.5) * h
    keep = np.all(centers + h / 2.0 >= V.min(axis=0) - _TIE, axis=1)
    keep &= np.all(centers - h / 2.0 <= V.max(axis=0) + _TIE, axis=1)
    k = len(V)
    if k >= 3:
        for i in range(k):
            a, b = V[i], V[(i + 1) % k]
            normal = np.array([b[1] - a[1], a[0] - b[0]])
            length = np.hypot(normal[0], normal[1])
            if length == 0:
                continue
            normal = normal / length
            reach = h / 2.0 * (abs(normal[0]) + abs(normal[1]))
            keep &= centers.dot(normal) - reach <= normal.dot(a) + _TIE
    elif k == 2:
        a, b = V
        normal = np.array([b[1] - a[1], a[0] - b[0]])
        length = np.hypot(normal[0], normal[1])
        if length:
            normal = normal / length
            reach = h / 2.0 * (abs(normal[0]) + abs(normal[1]))
            keep &= np.abs(centers.dot(normal) - normal.dot(a)) <= reach + _TIE
    return GridRegion(origin, h, grid[keep], closed=closed, shape=shape)


def chord_cells(a, b):
    """Cell sets covering the points of a segment, in center coordinates

    Coordinates are shifted so that cell k has its center at k. Only the
    points where the segment meets a line through centers (and its
    endpoints) are listed: between two such points the covering set only
    grows.

    Args:
        a (np.ndarray): Start
        b (np.ndarray): End

    Returns:
        list of tuples: One tuple of cells per listed point, in order along
            the segment; consecutive duplicates are dropped
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = b - a
    params = {0.0, 1.0}
    for k in np.flatnonzero(np.abs(d) > _TIE):
        lo, hi = sorted((a[k], b[k]))
        for m in range(int(np.ceil(lo - _ON_LINE)), int(np.floor(hi + _ON_LINE)) + 1):
            params.add(float(np.clip((m - a[k]) / d[k], 0.0, 1.0)))
    blocks = []
    for t in sorted(params):
        p = a + t * d
        near = np.round(p)
        choices = []
        for k in range(len(p)):
            if abs(p[k] - near[k]) <= _ON_LINE:
                choices.append((int(near[k]),))
            else:
                f = int(np.floor(p[k]))
                choices.append((f, f + 1))
        block = tuple(itertools.product(*choices))
        if not blocks or blocks[-1] != block:
            blocks.append(block)
    return blocks


def segment_in_region(r, x, y):
    """Whether the rasterized segment [x, y] stays inside the region

    Args:
        r (GridRegion): The region
        x (sequence): First endpoint, inside the bounding box of r
        y (sequence): Second endpoint, inside the bounding box of r

    Returns:
        bool: True iff every point of the segment is covered by an occupied
            cell (see module notes)
    """
    if not (r.in_bounding_box(x) and r.in_bounding_box(y)):
        raise InputError("segment endpoints must lie inside the bounding box of the region")
    if len(r) == 0:
        return False
    mask, lo = r.mask()
    shift = r.origin + (lo + 0.5) * r.h
    a = (np.asarray(x, dtype=float) - shift) / r.h
    b = (np.asarray(y, dtype=float) - shift) / r.h
    for block in chord_cells(a, b):
        if not any(_occupied(mask, c) for c in block):
            return False
    return True


def _occupied(mask, cell):
    idx = np.asarray(cell)
    if np.any(idx < 0) or np.any(idx >= mask.shape):
        return False
    return bool(mask[tuple(cell)])


def _ball_offsets(radius_cells, dim):
    R = int(np.floor(radius_cells + _TIE))
    axes = [np.arange(-R, R + 1)] * dim
    grid = np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1).reshape(-1, dim)
    keep = np.sum(grid.astype(float) ** 2, axis=1) <= radius_cells ** 2 + _TIE
    return grid[keep]


def _shifted(array, pad, offset, size):
    """View array[pad + offset + c] for c in [0, size) per axis"""
    return array[tuple(slice(pad + o, pad + o + s) for o, s in zip(offset, size))]


def is_locally_convex(r, radius=None):
    """Cells whose neighborhood in the region is not convex

    For each occupied cell c, every pair of occupied cells whose centers
    lie in the ball B(c, radius) is joined by the segment between their
    centers; c is reported if one of those segments fails the segment
    test against the whole region.

    Args:
        r (GridRegion): The region
        radius (:obj:`float`, optional): Ball radius. Defaults to 4h

    Returns:
        list of tuples: Violating cells, lexicographic order

    Raises:
        InputError: radius < 2h

    """
    radius = DEFAULT_RADIUS_CELLS * r.h if radius is None else float(radius)
    if radius < 2 * r.h - _TIE:
        raise InputError("radius {0} is below 2h = {1}".format(radius, 2 * r.h))
    if len(r) <= 1:
        return []
    mask, lo = r.mask()
    size = mask.shape
    offsets = _ball_offsets(radius / r.h, r.dim)
    pad = int(np.abs(offsets).max())
    M = np.pad(mask, pad, mode='constant', constant_values=False)

    views = {}

    def occupied(t):
        if t not in views:
            views[t] = _shifted(M, pad, t, size)
        return views[t]

    chords = {}
    violation = np.zeros(size, dtype=bool)
    for i in range(len(offsets)):
        u = offsets[i]
        for j in range(i + 1, len(offsets)):
            v = offsets[j]
            if np.abs(u - v).max() <= 1:
                # every point is within distance 1 of an endpoint
                continue
            both = mask & occupied(tuple(u)) & occupied(tuple(v)) & ~violation
            if not both.any():
                continue
            key = tuple(v - u)
            if key not in chords:
                chords[key] = chord_cells(np.zeros(r.dim), v - u)[1:-1]
            covered = np.ones(size, dtype=bool)
            for block in chords[key]:
                hit = np.zeros(size, dtype=bool)
                for c in block:
                    hit |= occupied(tuple(int(w) for w in u + np.asarray(c)))
                covered &= hit
            violation |= both & ~covered
    cells = np.argwhere(violation) + lo
    return [tuple(int(v) for v in c) for c in cells]


def region_components(r):
    """Face connected components of a region

    Returns:
        list of GridRegion: Components ordered by their smallest cell
    """
    if len(r) == 0:
        return []
    mask, lo = r.mask()
    structure = ndimage.generate_binary_structure(r.dim, 1)
    labels, count = ndimage.label(mask, structure=structure)
    components = []
    for k in range(1, count + 1):
        cells = np.argwhere(labels == k) + lo
        components.append(r.with_cells(cells))
    components.sort(key=lambda c: tuple(c.cells[0]))
    return components


def _neighbors(cell):
    for axis in range(len(cell)):
        for delta in (-1, 1):
            nxt = list(cell)
            nxt[axis] += delta
            yield tuple(nxt)


def _cell_path(r, start, goal):
    parents = {start: None}
    queue = deque([start])
    while queue:
        cell = queue.popleft()
        if cell == goal:
            path = []
            while cell is not None:
                path.append(cell)
                cell = parents[cell]
            return path[::-1]
        for nxt in _neighbors(cell):
            if nxt not in parents and r.contains_cell(nxt):
                parents[nxt] = cell
                queue.append(nxt)
    return None


def polygonal_connect(r, x, y):
    """Polygonal path between two points of a region

    A breadth first cell path is straightened greedily: from each waypoint
    the path jumps to the farthest later waypoint the segment test accepts.

    Args:
        r (GridRegion): The region
        x (sequence): Start point, in an occupied cell
        y (sequence): End point, in an occupied cell

    Returns:
        list of np.ndarray or None: Path vertices from x to y, or None if
            x and y lie in different components

    Raises:
        InputError: x or y not in an occupied cell
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    cx, cy = r.cell_of(x), r.cell_of(y)
    if not r.contains_cell(cx) or not r.contains_cell(cy):
        raise InputError("polygonal_connect endpoints must lie in occupied cells")
    cells = _cell_path(r, cx, cy)
    if cells is None:
        return None
    waypoints = [x] + [r.center(c) for c in cells[1:-1]] + [y]
    if len(cells) == 1:
        waypoints = [x, y]
    path = [waypoints[0]]
    i = 0
    last = len(waypoints) - 1
    while i < last:
        j = last
        while j > i + 1 and not segment_in_region(r, waypoints[i], waypoints[j]):
            j -= 1
        path.append(waypoints[j])
        i = j
    return path
