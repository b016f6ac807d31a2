# -*- coding: utf-8 *-*
"""Finite spaces with a map into R^n and their fiber quotients

Vertices are 0 .. N - 1. Two vertices lie in the same fiber class when
they are joined by a path whose edges all move the map value by at most
the bucket size eps. The quotient carries the path length metric of the
class values.

"""
import logging

import networkx as nx
import numpy as np
from networkx.utils import UnionFind
from scipy.spatial import cKDTree

from MomentumCheck.errors import InputError
from MomentumCheck.geometry.cone import ConvexCone, cone_from_dict, cone_to_dict

log = logging.getLogger(__name__)

INFINITY = float('inf')
DEFAULT_EDGE_LENGTH = 1.0
# Default bucket size as a fraction of the shortest nonzero edge image
DEFAULT_EPS_FRACTION = 0.25
CONE_VERTEX_TOL = 1e-9


class DiscreteSpace(object):
    def __init__(self, n_vertices, edges, f, cones=None, closed=True, eps=None):
        """DiscreteSpace class initializer

        Args:
            n_vertices (int): Number of vertices
            edges (list of pairs): Undirected edges
            f (array-like): (N, n) map values
            cones (:obj:`list`, optional): One ConvexCone (or None) per
                vertex, with vertex equal to the value at that vertex
            closed (:obj:`bool`, optional): Whether the map is closed
            eps (:obj:`float`, optional): Fiber bucket size. Defaults to a
                quarter of the shortest nonzero edge image

        Raises:
            InputError: Malformed edges, values or cones, or eps <= 0

        """
        self.n_vertices = int(n_vertices)
        if self.n_vertices < 1:
            raise InputError("a discrete space needs at least one vertex")
        f = np.asarray(f, dtype=float)
        if f.ndim == 1:
            f = f.reshape(-1, 1)
        if f.shape[0] != self.n_vertices:
            raise InputError("{0} values for {1} vertices".format(f.shape[0], self.n_vertices))
        self.f = f
        E = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if len(E) and (E.min() < 0 or E.max() >= self.n_vertices):
            raise InputError("edge endpoint out of range")
        if np.any(E[:, 0] == E[:, 1]):
            raise InputError("self loops are not allowed")
        E = np.sort(E, axis=1)
        self.edges = np.unique(E, axis=0) if len(E) else E
        self.closed = bool(closed)

        if cones is not None:
            cones = list(cones)
            if len(cones) != self.n_vertices:
                raise InputError("{0} cones for {1} vertices".format(len(cones), self.n_vertices))
            for v, cone in enumerate(cones):
                if cone is None:
                    continue
                if not isinstance(cone, ConvexCone):
                    cone = cone_from_dict(cone)
                    cones[v] = cone
                if cone.dim != self.dim:
                    raise InputError("cone at vertex {0} has dimension {1}".format(v, cone.dim))
                if not np.allclose(cone.as_float().vertex, f[v], atol=CONE_VERTEX_TOL):
                    raise InputError("cone at vertex {0} is not based at its value".format(v))
        self.cones = cones

        lengths = self.edge_lengths()
        nonzero = lengths[lengths > 0]
        self.min_edge_length = float(nonzero.min()) if len(nonzero) else DEFAULT_EDGE_LENGTH
        self.max_edge_length = float(lengths.max()) if len(lengths) else DEFAULT_EDGE_LENGTH
        if eps is None:
            eps = DEFAULT_EPS_FRACTION * self.min_edge_length
        if eps <= 0:
            raise InputError("eps must be positive, got {0}".format(eps))
        self.eps = float(eps)
        self._graph = None

    @property
    def dim(self):
        return self.f.shape[1]

    @property
    def has_cones(self):
        return self.cones is not None and all(c is not None for c in self.cones)

    def cone_at(self, v):
        """Declared cone at vertex v, or the trivial cone {f(v)} when none is"""
        if self.cones is not None and self.cones[v] is not None:
            return self.cones[v]
        return ConvexCone(self.f[v], [], [])

    def edge_lengths(self):
        if not len(self.edges):
            return np.zeros(0)
        return np.linalg.norm(self.f[self.edges[:, 0]] - self.f[self.edges[:, 1]], axis=1)

    @property
    def graph(self):
        if self._graph is None:
            G = nx.Graph()
            G.add_nodes_from(range(self.n_vertices))
            G.add_edges_from(map(tuple, self.edges))
            self._graph = G
        return self._graph

    def hop_ball(self, v, radius):
        """Vertices within `radius` hops of v, sorted"""
        return sorted(nx.single_source_shortest_path_length(self.graph, v, cutoff=radius))

    def is_connected(self):
        return nx.is_connected(self.graph)

    def relabeled(self, permutation):
        """Same space with vertex v renamed permutation[v]"""
        p = np.asarray(permutation, dtype=np.int64)
        inverse = np.argsort(p)
        cones = None if self.cones is None else [self.cones[i] for i in inverse]
        return DiscreteSpace(self.n_vertices, p[self.edges], self.f[inverse], cones,
                             self.closed, self.eps)

    def to_dict(self):
        payload = {'vertices': self.n_vertices,
                   'edges': self.edges.tolist(),
                   'f': self.f.tolist(),
                   'closed': self.closed,
                   'eps': self.eps}
        if self.cones is not None:
            payload['cones'] = [None if c is None else cone_to_dict(c) for c in self.cones]
        return payload

    @classmethod
    def from_dict(cls, payload):
        try:
            return cls(payload['vertices'], payload['edges'], payload['f'],
                       cones=payload.get('cones'), closed=payload.get('closed', True),
                       eps=payload.get('eps'))
        except KeyError as e:
            raise InputError("discrete space JSON is missing field {0}".format(e))


class FiberQuotient(object):
    def __init__(self, space, class_of):
        """Fiber classes of a space

        Args:
            space (DiscreteSpace): The space
            class_of (np.ndarray): Class id per vertex, ids ordered by the
                smallest vertex of each class

        """
        self.space = space
        self.class_of = np.asarray(class_of, dtype=np.int64)
        self.n_classes = int(self.class_of.max()) + 1
        first = np.full(self.n_classes, space.n_vertices, dtype=np.int64)
        np.minimum.at(first, self.class_of, np.arange(space.n_vertices))
        self.representatives = first
        self.class_values = space.f[first]
        a = self.class_of[space.edges[:, 0]] if len(space.edges) else np.zeros(0, dtype=np.int64)
        b = self.class_of[space.edges[:, 1]] if len(space.edges) else np.zeros(0, dtype=np.int64)
        pairs = np.sort(np.stack([a, b], axis=1), axis=1)[a != b]
        self.quotient_edges = np.unique(pairs, axis=0) if len(pairs) else np.zeros((0, 2), dtype=np.int64)
        self._graph = None
        self._levels = None

    def members(self, c):
        return np.flatnonzero(self.class_of == c)

    def partition(self):
        """The classes as a set of frozensets of vertices"""
        return {frozenset(self.members(c).tolist()) for c in range(self.n_classes)}

    @property
    def graph(self):
        """Class graph weighted by the distance of class values"""
        if self._graph is None:
            G = nx.Graph()
            G.add_nodes_from(range(self.n_classes))
            for a, b in self.quotient_edges:
                w = float(np.linalg.norm(self.class_values[a] - self.class_values[b]))
                G.add_edge(int(a), int(b), weight=w)
            self._graph = G
        return self._graph

    def levels(self):
        """Level id per class: classes whose values are eps-close share a level"""
        if self._levels is None:
            uf = UnionFind(range(self.n_classes))
            tree = cKDTree(self.class_values)
            for a, b in sorted(tree.query_pairs(self.space.eps)):
                uf.union(a, b)
            roots = [uf[c] for c in range(self.n_classes)]
            order = {}
            self._levels = np.array([order.setdefault(r, len(order)) for r in roots], dtype=np.int64)
        return self._levels


def build_quotient(s):
    """Fiber quotient of a discrete space

    Vertices joined by an edge whose values differ by at most eps are
    merged, and the merging is closed under paths.

    Args:
        s (DiscreteSpace): The space

    Returns:
        FiberQuotient: The quotient
    """
    uf = UnionFind(range(s.n_vertices))
    if len(s.edges):
        close = s.edge_lengths() <= s.eps
        for u, v in s.edges[close]:
            uf.union(int(u), int(v))
    roots = [uf[v] for v in range(s.n_vertices)]
    ids = {}
    class_of = np.array([ids.setdefault(r, len(ids)) for r in roots], dtype=np.int64)
    log.debug("%d vertices fall into %d fiber classes", s.n_vertices, len(ids))
    return FiberQuotient(s, class_of)


def quotient_metric(q, source=None):
    """Path length metric on fiber classes

    Args:
        q (FiberQuotient): The quotient
        source (:obj:`int`, optional): Only distances from this class

    Returns:
        np.ndarray: (K, K) distances, or (K,) from `source`; unreachable
            classes are at distance inf
    """
    sources = range(q.n_classes) if source is None else [source]
    rows = []
    for a in sources:
        lengths = nx.single_source_dijkstra_path_length(q.graph, a, weight='weight')
        row = np.full(q.n_classes, INFINITY)
        for b, d in lengths.items():
            row[b] = d
        rows.append(row)
    D = np.vstack(rows)
    return D[0] if source is not None else D
