"""Common utilities."""

import os.path as osp

import numpy as np

from .exc import UsageError


def package_root():
    """Return the path to the repository root (the directory containing the
    ``dcdrls`` package).

    """
    return osp.realpath(osp.join(osp.dirname(__file__), ".."))


def data_path():
    """Return the path containing test data."""
    return osp.join(package_root(), "tests", "data")


def config_path(name=None):
    """Return the directory holding the bundled experiment configurations or,
    if ``name`` is given, the path to one of them.

    :param str name: Configuration file name (e.g., ``mcc_sparse.ini``).

    """
    path = osp.join(osp.dirname(__file__), "configs")
    return path if name is None else osp.join(path, name)


def absjoin(*paths):
    """Join a list of paths and return the absolute path."""
    return osp.abspath(osp.join(*paths))


def as_vector(name, value, size=None):
    """Convert ``value`` to a finite 1-D float array.

    :param str name: Argument name used in error messages.
    :param value: Array-like input.
    :param int size: Required length, if any.
    :rtype: np.ndarray
    :raises UsageError: on wrong shape or non-finite entries

    """
    arr = np.asarray(value, dtype=float)
    if arr.ndim != 1:
        raise UsageError("{} must be a vector, got shape {}".format(name, arr.shape))
    if size is not None and arr.shape[0] != size:
        raise UsageError("{} has length {}, expected {}".format(name, arr.shape[0], size))
    if not np.all(np.isfinite(arr)):
        raise UsageError("{} has non-finite entries".format(name))
    return arr


def as_scalar(name, value):
    """Convert ``value`` to a finite float.

    :raises UsageError: if the value is not finite

    """
    value = float(value)
    if not np.isfinite(value):
        raise UsageError("{} must be finite, got {}".format(name, value))
    return value
