#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""The Age of Information explorer.

General utilities.
"""

import os
import multiprocessing

import numpy as np
import psutil
from tqdm import tqdm

from aoi_explorer import WORKERS_ENVVAR

FLOAT_FORMAT = "%.12g"  # 12 significant digits in every written table


def lineparser(line, startword, stopword=None):
    """Extract content from a line of text.

    Parameters
    ----------
    line: str
        Line of text from which we extract content

    startword: str
        Text pattern marking the begining of the content to extract

    stopword: str, optional
        Text pattern marking the end of the content to extract. If not
        provided, the function extracts up to the end of the line.


    Example
    -------
    >>> lineparser("gamma:shape=2,rate=3", "gamma:")
    'shape=2,rate=3'
    >>> lineparser("gamma:shape=2,rate=3", "shape=", ",")
    '2'
    """
    matchidx = line.index(startword)
    startidx = matchidx + len(startword)
    if stopword is not None:
        endidx = startidx + line[startidx:].index(stopword)
    else:
        endidx = len(line) + 1

    return line[startidx:endidx]


def str_to_keyvalues(strparams):
    """Convert a string of comma-separated `key=value` pairs to a dict of floats

    Keys are lower-cased, blanks are ignored.

    Examples
    --------
    >>> str_to_keyvalues("shape=2, Rate=0.5")
    {'shape': 2.0, 'rate': 0.5}
    """
    keyvalues = {}
    for item in strparams.split(","):
        item = item.strip()
        if item == "":
            continue
        if "=" not in item:
            raise ValueError(f"Could not parse the parameter '{item}' (expected key=value)")

        key, value = item.split("=", 1)
        try:
            keyvalues[key.strip().lower()] = float(value)
        except ValueError:
            raise ValueError(f"Parameter {key.strip()} is not a number: {value.strip()}")

    return keyvalues


def str_to_grid(strgrid):
    """Convert string-formatted grid to a 1d array of floats

    Covers the following formats:
        1,2,4         -> explicit values
        0.2:3:10      -> 10 values linearly spaced from 0.2 to 3 (included)
        0.5:16:x2     -> geometric progression from 0.5 to 16 with ratio 2
    Lists and arrays are returned as arrays.


    Examples
    --------
    >>> str_to_grid("0.5:16:x2")
    array([ 0.5,  1. ,  2. ,  4. ,  8. , 16. ])
    >>> str_to_grid("1:2:3")
    array([1. , 1.5, 2. ])
    """
    if not isinstance(strgrid, str):
        return np.atleast_1d(np.asarray(strgrid, dtype=float))

    if ":" not in strgrid:
        return np.array([float(v) for v in strgrid.split(",") if v.strip() != ""])

    start, stop, step = strgrid.split(":")
    start, stop = float(start), float(stop)
    if step.lower().startswith("x"):
        ratio = float(step[1:])
        if ratio <= 1 or start <= 0:
            raise ValueError(f"Geometric grid needs a positive start and a ratio > 1: {strgrid}")
        n = int(np.floor(np.log(stop / start) / np.log(ratio) + 1e-9)) + 1
        return start * ratio ** np.arange(n)
    else:
        return np.linspace(start, stop, int(step))


def check_grid(grid, name="grid"):
    """Raise ValueError if the grid is not made of positive and strictly increasing values"""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError(f"The {name} must be a non-empty 1d sequence of values")
    if np.any(grid <= 0):
        raise ValueError(f"The {name} must have positive values: {grid}")
    if np.any(np.diff(grid) <= 0):
        raise ValueError(f"The {name} must be strictly increasing: {grid}")

    return grid


def batch_ratio(numerators, denominators, n_batches=32):
    """Ratio-of-sums estimator and its standard error by batch means


    Parameters
    ----------
    numerators: array-like of shape (n,)
        Per-observation numerators (e.g. age area of each cycle)

    denominators: array-like of shape (n,)
        Per-observation denominators (e.g. length of each cycle)

    n_batches: int
        Number of contiguous batches


    Returns
    -------
    ratio: float
        sum(numerators) / sum(denominators)

    std_error: float
        Standard deviation of the batch ratios divided by sqrt(n_batches)


    Examples
    --------
    >>> batch_ratio(np.ones(64), 2 * np.ones(64))
    (0.5, 0.0)
    """
    numerators = np.asarray(numerators, dtype=float)
    denominators = np.asarray(denominators, dtype=float)
    assert numerators.shape == denominators.shape, "Numerators and denominators do not have the same shape"

    ratio = numerators.sum() / denominators.sum()
    n_batches = min(n_batches, numerators.size)
    if n_batches < 2:
        return float(ratio), np.inf

    batch_num = np.array([b.sum() for b in np.array_split(numerators, n_batches)])
    batch_den = np.array([b.sum() for b in np.array_split(denominators, n_batches)])
    return float(ratio), batch_std_error(batch_num / batch_den)


def batch_std_error(batch_values):
    """Standard error of the mean of the batch values"""
    batch_values = np.asarray(batch_values, dtype=float)
    if batch_values.size < 2:
        return np.inf

    return float(np.std(batch_values, ddof=1) / np.sqrt(batch_values.size))


def default_workers():
    """Default number of workers: environment variable, or number of physical cores"""
    if WORKERS_ENVVAR in os.environ:
        return max(int(os.environ[WORKERS_ENVVAR]), 1)

    return psutil.cpu_count(logical=False) or 1


def map_ordered(func, items, workers=1, verbose=False, desc=None):
    """Apply `func` on each item, possibly with several processes

    Results are returned in the order of `items` whatever the number of
    workers. `func` must be picklable when workers > 1 (module-level
    function or `functools.partial` of one). A progress bar is shown when
    `verbose` is True.
    """
    items = list(items)
    if workers is None:
        workers = default_workers()

    if workers <= 1 or len(items) <= 1:
        return [func(it) for it in tqdm(items, desc=desc, disable=not verbose)]

    with multiprocessing.Pool(min(workers, len(items))) as pool:
        return list(tqdm(pool.imap(func, items), total=len(items), desc=desc, disable=not verbose))


# EOF
