# -*- coding: utf-8 *-*
"""Exact rational arithmetic helpers

Points and directions come in two flavours: float64 arrays and object
arrays of `fractions.Fraction`. The two are never mixed inside one
computation. Included functions:

    - to_fraction
    - is_exact
    - as_point
    - as_float
    - elimination_matrix
    - solve_exact

"""
import numbers
from fractions import Fraction

import numpy as np

from MomentumCheck.errors import InputError


def to_fraction(value):
    """Convert an int, Fraction or 'p/q' string to a Fraction

    Raises:
        InputError: For floats and anything else inexact
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        raise InputError("boolean is not a coordinate")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise InputError("cannot parse '{0}' as a rational".format(value))
    raise InputError("{0!r} is not an exact scalar".format(value))


def _is_exact_scalar(value):
    if isinstance(value, (bool, np.bool_)):
        return False
    return isinstance(value, (Fraction, int, np.integer, str))


def is_exact(array):
    """True if every entry of `array` is an exact rational"""
    array = np.asarray(array, dtype=object)
    return all(_is_exact_scalar(v) for v in array.ravel())


def as_point(coords, exact=None):
    """Normalize coordinates into a point array

    Args:
        coords (sequence): The coordinates
        exact (:obj:`bool`, optional): Force a representation. By default a
            point is exact when every coordinate is an int, a Fraction or a
            rational string.

    Returns:
        np.ndarray: float64 array, or object array of Fractions

    """
    if isinstance(coords, np.ndarray) and coords.dtype != object:
        if exact is None:
            exact = np.issubdtype(coords.dtype, np.integer)
        if not exact:
            return coords.astype(float)
    flat = list(np.asarray(coords, dtype=object).ravel())
    shape = np.asarray(coords, dtype=object).shape
    if exact is None:
        exact = all(_is_exact_scalar(v) for v in flat)
    if exact:
        out = np.empty(len(flat), dtype=object)
        out[:] = [to_fraction(v) for v in flat]
        return out.reshape(shape)
    for v in flat:
        if isinstance(v, str):
            raise InputError("string coordinate '{0}' in float mode".format(v))
    return np.asarray([float(v) for v in flat], dtype=float).reshape(shape)


def as_float(array):
    """Float64 view of an exact or float array"""
    array = np.asarray(array)
    if array.dtype == object:
        return np.vectorize(float, otypes=[float])(array) if array.size else array.astype(float)
    return array.astype(float)


def elimination_matrix(M):
    """Exact Gauss-Jordan elimination of a rational matrix

    Args:
        M (np.ndarray): (rows, cols) object array of Fractions

    Returns:
        tuple: (E, pivots) with E an invertible (rows, rows) matrix such
            that E @ M is in reduced row echelon form and `pivots` the pivot
            column of each of the first len(pivots) rows.

    """
    M = np.asarray(M, dtype=object)
    rows, cols = M.shape
    A = [[to_fraction(M[i, j]) for j in range(cols)] for i in range(rows)]
    E = [[Fraction(int(i == j)) for j in range(rows)] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if pivot is None:
            continue
        A[r], A[pivot] = A[pivot], A[r]
        E[r], E[pivot] = E[pivot], E[r]
        scale = A[r][c]
        A[r] = [v / scale for v in A[r]]
        E[r] = [v / scale for v in E[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                factor = A[i][c]
                A[i] = [a - factor * b for a, b in zip(A[i], A[r])]
                E[i] = [a - factor * b for a, b in zip(E[i], E[r])]
        pivots.append(c)
        r += 1
    out = np.empty((rows, rows), dtype=object)
    for i in range(rows):
        out[i, :] = E[i]
    return out, pivots


def solve_with_elimination(E, pivots, cols, b):
    """Solve M x = b given the elimination data of M

    Returns:
        np.ndarray or None: A solution with free variables set to zero, or
            None when the system is inconsistent.
    """
    y = E.dot(np.asarray(b, dtype=object))
    rank = len(pivots)
    if any(v != 0 for v in y[rank:]):
        return None
    x = np.empty(cols, dtype=object)
    x[:] = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = y[i]
    return x


def solve_exact(M, b):
    """Solve M x = b over the rationals, None if inconsistent"""
    M = as_point(M, exact=True)
    E, pivots = elimination_matrix(M)
    return solve_with_elimination(E, pivots, M.shape[1], as_point(b, exact=True))


def exact_rank(M):
    """Rank of a rational matrix"""
    M = np.asarray(M, dtype=object)
    if M.size == 0:
        return 0
    return len(elimination_matrix(M)[1])
