# -*- coding: utf-8 *-*
"""Built-in discrete spaces

Included spaces:

    - circle_height_space: height on a cycle, the standard space that is
      not locally fiber connected
    - square_minus_diamond: height on a lattice square with a diamond
      removed, with local convexity data but not locally fiber connected
    - segment_space: identity on a path
    - half_open_interval_space: a path whose end carries a line cone
    - generated_space: linear images of lattice boxes, cones included

"""
import itertools
import logging

import numpy as np

from MomentumCheck.errors import InputError
from MomentumCheck.geometry.cone import ConvexCone
from MomentumCheck.lgp.space import DiscreteSpace
from MomentumCheck.util.data_util import make_rng

log = logging.getLogger(__name__)

DEFAULT_CIRCLE_VERTICES = 64
DEFAULT_CIRCLE_EPS = 0.001
DEFAULT_SQUARE_HALF_WIDTH = 5
DEFAULT_DIAMOND_RADIUS = 3
DEFAULT_PATH_VERTICES = 11

GENERATED_VARIANTS = ['diagonal', 'slab', 'segment']
SCALE_RANGE = (0.6, 1.0)


def _line_cone(value):
    return ConvexCone([value], subspace_basis=[[1.0]])


def _half_line(value, direction):
    return ConvexCone([value], generators=[[float(direction)]])


def circle_height_space(n=DEFAULT_CIRCLE_VERTICES, eps=DEFAULT_CIRCLE_EPS):
    """Height function on an n-cycle

    Vertex k sits at angle 2 pi k / n and maps to cos(2 pi k / n). The top
    (vertex 0) and bottom (vertex n / 2) carry half-line cones, every other
    vertex a line.
    """
    if n < 4 or n % 2:
        raise InputError("the circle needs an even number of at least 4 vertices")
    f = np.cos(2.0 * np.pi * np.arange(n) / n)
    edges = [(k, (k + 1) % n) for k in range(n)]
    cones = []
    for k in range(n):
        if k == 0:
            cones.append(_half_line(f[k], -1))
        elif k == n // 2:
            cones.append(_half_line(f[k], 1))
        else:
            cones.append(_line_cone(f[k]))
    return DiscreteSpace(n, edges, f, cones=cones, closed=True, eps=eps)


def square_minus_diamond_points(half_width=DEFAULT_SQUARE_HALF_WIDTH,
                                radius=DEFAULT_DIAMOND_RADIUS):
    """Lattice points (x, y) of the square with |x| + |y| >= radius, row major"""
    r = range(-half_width, half_width + 1)
    return [(x, y) for y in r for x in r if abs(x) + abs(y) >= radius]


def square_minus_diamond(half_width=DEFAULT_SQUARE_HALF_WIDTH, radius=DEFAULT_DIAMOND_RADIUS):
    """Height f(x, y) = y on a lattice square minus an open diamond

    Vertices are `square_minus_diamond_points`, joined in the king graph.
    Rows crossing the diamond split in two fiber classes, so the balls at
    the two diamond tips (0, radius) and (0, -radius) meet both halves of
    the neighbouring row.
    """
    if radius >= half_width:
        raise InputError("the diamond must fit inside the square")
    points = square_minus_diamond_points(half_width, radius)
    index = {p: i for i, p in enumerate(points)}
    edges = []
    for (x, y), i in index.items():
        for dx, dy in ((1, 0), (0, 1), (1, 1), (1, -1)):
            j = index.get((x + dx, y + dy))
            if j is not None:
                edges.append((i, j))
    f = np.array([[float(y)] for _, y in points])
    cones = []
    for _, y in points:
        if y == half_width:
            cones.append(_half_line(y, -1))
        elif y == -half_width:
            cones.append(_half_line(y, 1))
        else:
            cones.append(_line_cone(y))
    return DiscreteSpace(len(points), edges, f, cones=cones, closed=True)


def segment_space(n=DEFAULT_PATH_VERTICES, length=1.0):
    """Identity on [0, length] sampled at n vertices"""
    if n < 2:
        raise InputError("a segment needs two vertices")
    f = np.linspace(0.0, length, n)
    cones = [_line_cone(v) for v in f]
    cones[0] = _half_line(f[0], 1)
    cones[-1] = _half_line(f[-1], -1)
    return DiscreteSpace(n, [(k, k + 1) for k in range(n - 1)], f, cones=cones)


def half_open_interval_space(n=DEFAULT_PATH_VERTICES, length=1.0):
    """Path onto [0, length] that declares a line cone at 0 as well

    The declared cones are those of the half open interval (0, length], so
    the image of the ball at 0 is not a neighborhood of 0 in its cone.
    """
    if n < 2:
        raise InputError("an interval needs two vertices")
    f = np.linspace(0.0, length, n)
    cones = [_line_cone(v) for v in f]
    cones[-1] = _half_line(f[-1], -1)
    return DiscreteSpace(n, [(k, k + 1) for k in range(n - 1)], f, cones=cones, closed=False)


def _king_edges(shape):
    """Lattice box edges between points at max norm distance one"""
    points = np.array(list(itertools.product(*[range(s) for s in shape])), dtype=np.int64)
    offsets = [o for o in itertools.product((-1, 0, 1), repeat=len(shape)) if o > (0,) * len(shape)]
    edges = []
    for o in offsets:
        target = points + np.asarray(o)
        ok = np.all((target >= 0) & (target < np.asarray(shape)), axis=1)
        a = np.ravel_multi_index(points[ok].T, shape)
        b = np.ravel_multi_index(target[ok].T, shape)
        edges.append(np.stack([a, b], axis=1))
    return points, np.vstack(edges)


def _tangent_cone_images(point, shape, A, value):
    """Image under A of the tangent cone of a lattice box at a point"""
    subspace, generators = [], []
    for k in range(len(shape)):
        column = A[:, k]
        if not np.any(column):
            continue
        if 0 < point[k] < shape[k] - 1:
            subspace.append(column)
        elif point[k] == 0:
            generators.append(column)
        else:
            generators.append(-column)
    return ConvexCone(value, subspace, generators)


def box_space(shape, A, offset=None):
    """Linear image of a lattice box with king graph edges

    Args:
        shape (sequence): Points per box axis, each at least 3
        A (np.ndarray): (n, d) map; nonzero columns must be independent
        offset (:obj:`sequence`, optional): Translation of the image

    Returns:
        DiscreteSpace: The space with the tangent cone images declared
    """
    shape = tuple(int(s) for s in shape)
    if min(shape) < 3:
        raise InputError("box sides need at least 3 points, got {0}".format(shape))
    A = np.atleast_2d(np.asarray(A, dtype=float))
    offset = np.zeros(A.shape[0]) if offset is None else np.asarray(offset, dtype=float)
    points, edges = _king_edges(shape)
    f = points.dot(A.T) + offset
    cones = [_tangent_cone_images(p, shape, A, v) for p, v in zip(points, f)]
    return DiscreteSpace(len(points), edges, f, cones=cones, closed=True)


def _rotation_scaling(rng):
    theta = rng.uniform(0.0, 2.0 * np.pi)
    s = rng.uniform(SCALE_RANGE[0], SCALE_RANGE[1], size=2)
    R = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    return R * s[None, :]


def generated_space(seed):
    """One of the generated test spaces

    Variant `GENERATED_VARIANTS[seed % 3]`:

        - diagonal: a planar box, rotated and scaled
        - slab: a three dimensional box projected onto a rotated and
          scaled plane, so every fiber is a vertical column
        - segment: a path, scaled and translated

    Args:
        seed (int): Seed of the space

    Returns:
        DiscreteSpace: A closed space whose cones are tangent cone images
    """
    rng = make_rng(seed, 'generated_space')
    variant = GENERATED_VARIANTS[seed % len(GENERATED_VARIANTS)]
    if variant == 'diagonal':
        shape = tuple(rng.integers(3, 7, size=2))
        A = _rotation_scaling(rng)
    elif variant == 'slab':
        shape = tuple(rng.integers(3, 6, size=2)) + (int(rng.integers(2, 4)) + 1,)
        A = np.hstack([_rotation_scaling(rng), np.zeros((2, 1))])
    else:
        shape = (int(rng.integers(5, 13)),)
        A = np.array([[rng.uniform(SCALE_RANGE[0], SCALE_RANGE[1])]])
    offset = rng.uniform(-1.0, 1.0, size=A.shape[0])
    log.debug("generated space %d: %s box %s", seed, variant, shape)
    return box_space(shape, A, offset)


BUILTIN_SPACES = {
    'circle_height_space': circle_height_space,
    'square_minus_diamond': square_minus_diamond,
    'segment_space': segment_space,
    'half_open_interval_space': half_open_interval_space,
}
