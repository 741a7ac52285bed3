import os

from typing import Any, Sequence

import numpy as np


# Converters
def as_vector(value: Any, dim: int | None = None) -> np.ndarray:
    """
    Converts a scalar or sequence into a read-only 1-d float array, checking its length when `dim` is given
    """

    from .errors import DimensionError

    arr = np.array(value, dtype=float).reshape(-1)

    if dim is not None and arr.shape[0] != dim:
        raise DimensionError(f"Expected a vector of dimension {dim}, got {arr.shape[0]}")

    arr.setflags(write=False)
    return arr


def frozen(arr: np.ndarray) -> np.ndarray:
    """
    Returns a read-only float copy of an array
    """

    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


# Norms
def sup_norm(v: np.ndarray) -> float:
    """
    Max-coordinate norm of a vector (or of every entry of an array)
    """

    v = np.asarray(v, dtype=float)
    return float(np.max(np.abs(v))) if v.size else 0.0


def op_norm(mat: np.ndarray) -> float:
    """
    Operator norm induced by the max-coordinate norm (maximum absolute row sum)
    """

    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    return float(np.max(np.sum(np.abs(mat), axis=-1)))


# Getters
def get_os_path(path: str, from_root: bool = False) -> str:
    """
    Returns the real path of a given path by resolving it to the root
    """

    if from_root:
        return os.path.realpath(path)

    return os.path.realpath(os.path.join(os.path.dirname(__file__), path))


def get_rng(seed: int | Sequence[int] | None) -> np.random.Generator:
    """
    Returns a numpy generator; every randomised routine takes one so that runs are reproducible.
    A sequence seed (e.g. seed, suite, case) gives independent streams per case
    """

    return np.random.default_rng(seed)
