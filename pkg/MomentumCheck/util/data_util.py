# -*- coding: utf-8 *-*
"""Helper functions for sampling and report data

This module is used to provide helper functions for the data that flows
through every check: seeded random streams, chunked parallel sampling and
report serialization. Included functions:

    - chunkify
    - make_rng
    - run_chunked
    - jsonable
    - to_json_text
    - write_json_report
    - dump_table_tsv
    - dump_points_tsv
    - stratified_unit

"""
import json
import logging
import os
import zlib
from fractions import Fraction

import numpy as np
import pandas as pd

from deco import concurrent, synchronized

from MomentumCheck.definitions import NUM_PROCESSES, SCHEMA_VERSION

log = logging.getLogger(__name__)

DEFAULT_CHUNK_SIZE = 25000


def chunkify(l, num_chunks):
    """Break a list into N different lists of near equal size

    Notes:
        Right now, this is just a wrapper for numpy's array_split
        function.

    Args:
        l (list): The list to be chunked
        num_chunks (int): The number of chunks to create

    Returns:
        list of lists: The chunkified list

    """
    return np.array_split(l, num_chunks)


def _stream_key(token):
    if isinstance(token, (int, np.integer)):
        return int(token)
    return zlib.crc32(str(token).encode('utf-8'))


def make_rng(seed, *stream):
    """Counter based generator for one named sampling stream

    The same (seed, stream) pair always yields the same numbers, whatever
    process draws them.

    Args:
        seed (int): The run seed
        *stream: Names or indices identifying the stream

    Returns:
        numpy.random.Generator: A Philox backed generator

    """
    if seed is None:
        raise ValueError("a seed is required for sampling")
    entropy = [int(seed)] + [_stream_key(token) for token in stream]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def chunk_sizes(total, chunk_size=DEFAULT_CHUNK_SIZE):
    """Sizes of the chunks a sampling job of `total` items is split into"""
    total = int(total)
    if total <= 0:
        return []
    full, rest = divmod(total, chunk_size)
    sizes = [chunk_size] * full
    if rest:
        sizes.append(rest)
    return sizes


@concurrent(processes=NUM_PROCESSES)
def _run_chunk(fn, chunk_index, start, size, seed, stream, kwargs):
    rng = make_rng(seed, *(tuple(stream) + (chunk_index,)))
    return fn(rng, start, size, **kwargs)


@synchronized
def _run_chunks_concurrently(fn, sizes, seed, stream, kwargs):
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(int)
    rmap = {}
    for i, size in enumerate(sizes):
        rmap[i] = _run_chunk(fn, i, int(starts[i]), size, seed, stream, kwargs)
    return [rmap[i] for i in range(len(rmap))]


def run_chunked(fn, total, seed, stream, /, chunk_size=DEFAULT_CHUNK_SIZE, **kwargs):
    """Run a sampling function over chunks of a job

    Each chunk gets its own counter stream `(seed, *stream, chunk_index)`,
    so the merged result does not depend on the number of workers.

    Args:
        fn (callable): Module level function `fn(rng, start, size, **kwargs)`
            drawing items start .. start + size - 1
        total (int): Number of items to draw
        seed (int): The run seed
        stream (tuple): Stream name for this job
        chunk_size (:obj:`int`, optional): Items per chunk

    Returns:
        list: Per chunk results, in chunk order

    """
    sizes = chunk_sizes(total, chunk_size)
    if NUM_PROCESSES == 1 or len(sizes) <= 1:
        starts = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(int)
        return [fn(make_rng(seed, *(tuple(stream) + (i,))), int(starts[i]), size, **kwargs)
                for i, size in enumerate(sizes)]
    log.info("running %d chunks on up to %d processes", len(sizes), NUM_PROCESSES)
    return _run_chunks_concurrently(fn, sizes, seed, tuple(stream), kwargs)


def jsonable(obj):
    """Convert numpy and Fraction values into plain JSON values"""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if np.isinf(value):
            return 'inf' if value > 0 else '-inf'
        if np.isnan(value):
            return 'nan'
        return value
    return obj


def to_json_text(payload):
    """Schema versioned, key sorted JSON text of a report"""
    body = dict(jsonable(payload))
    body['schema'] = SCHEMA_VERSION
    return json.dumps(body, sort_keys=True, indent=2) + '\n'


def write_json_report(out_dir, name, payload):
    """Write a report as `<out_dir>/<name>.json` and return the path"""
    if not os.path.exists(out_dir):
        os.makedirs(out_dir)
    path = os.path.join(out_dir, '{0}.json'.format(name))
    with open(path, 'w') as f:
        f.write(to_json_text(payload))
    return path


def dump_table_tsv(path, columns):
    """Write named columns as a tab separated file and return the path"""
    frame = pd.DataFrame(columns)
    directory = os.path.dirname(path)
    if directory and not os.path.exists(directory):
        os.makedirs(directory)
    frame.to_csv(path, sep='\t', index=False, float_format='%.12g')
    return path


def dump_points_tsv(path, sample_coords, image_coords, regular=None):
    """Dump sampled points for external plotting

    Args:
        path (str): Target file
        sample_coords (np.ndarray): (N, d) sample coordinates
        image_coords (np.ndarray): (N, n) image coordinates
        regular (:obj:`np.ndarray`, optional): (N,) regular flags

    Returns:
        str: The path written

    """
    sample_coords = np.atleast_2d(np.asarray(sample_coords, dtype=float))
    image_coords = np.atleast_2d(np.asarray(image_coords, dtype=float))
    columns = {}
    for i in range(sample_coords.shape[1]):
        columns['s{0}'.format(i)] = sample_coords[:, i]
    for i in range(image_coords.shape[1]):
        columns['j{0}'.format(i)] = image_coords[:, i]
    if regular is not None:
        columns['regular'] = np.asarray(regular, dtype=bool)
    return dump_table_tsv(path, columns)


def stratified_unit(rng, start, size, total, dim):
    """Jittered stratified points of the unit cube

    Items `start .. start + size - 1` of a run of `total` items. The first
    m ** dim items fill one jittered point per stratum of an m ** dim grid,
    the rest are uniform.

    Returns:
        np.ndarray: (size, dim) points
    """
    if dim == 0:
        return np.zeros((size, 0))
    m = max(1, int(np.floor(total ** (1.0 / dim) + 1e-9)))
    index = np.arange(start, start + size)
    out = rng.uniform(0.0, 1.0, size=(size, dim))
    strata = index < m ** dim
    if strata.any():
        cell = np.stack(np.unravel_index(index[strata], (m,) * dim), axis=1)
        out[strata] = (cell + out[strata]) / float(m)
    return out
