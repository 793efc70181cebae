"""Leading dichotomous coordinate descent (DCD) solver.

Solves ``R dw = b`` for symmetric ``R`` with a strictly positive diagonal using
only sign tests, comparisons, additions and power-of-two step sizes. The step
``mu`` always stays an exact power of two so every multiplication by it is
exact in binary floating point; no fixed-point datapath is modelled.

"""

import math
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from .exc import UsageError

Complexity = namedtuple("Complexity", "additions, multiplications, divisions")


@dataclass(frozen=True)
class DcdConfig:
    """DCD solver controls.

    :param float H: Amplitude bound of the solution; must be an exact power of
        two.
    :param int Mb: Number of bits representing a solution entry in
        ``[-H, H]``.
    :param int Nu: Maximum number of coordinate updates per solve.

    """
    H: float = 1.0
    Mb: int = 16
    Nu: int = 8

    def __post_init__(self):
        h = float(self.H)
        if not (np.isfinite(h) and h > 0) or math.frexp(h)[0] != 0.5:
            raise UsageError("H must be a positive power of two, got {}".format(self.H))
        if int(self.Mb) != self.Mb or self.Mb < 1:
            raise UsageError("Mb must be an integer >= 1, got {}".format(self.Mb))
        if int(self.Nu) != self.Nu or self.Nu < 0:
            raise UsageError("Nu must be an integer >= 0, got {}".format(self.Nu))

    @property
    def quantum(self):
        """Smallest representable step, ``H * 2**-Mb``."""
        return math.ldexp(self.H, -self.Mb)


@dataclass
class DcdSolution:
    """Result of a single :func:`dcd_solve` call.

    ``residual`` equals ``b - R @ delta_w`` up to round-off;
    ``additions_count`` follows the accounting of :func:`count_ops`.

    """
    delta_w: np.ndarray
    residual: np.ndarray
    updates_performed: int
    additions_count: int


def _check_system(R, b):
    R = np.asarray(R, dtype=float)
    b = np.asarray(b, dtype=float)
    if R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise UsageError("R must be square, got shape {}".format(R.shape))
    if b.ndim != 1 or b.shape[0] != R.shape[0]:
        raise UsageError("b has shape {}, expected ({},)".format(b.shape, R.shape[0]))
    if not (np.all(np.isfinite(R)) and np.all(np.isfinite(b))):
        raise UsageError("R and b must be finite")
    if np.any(np.diag(R) <= 0):
        raise UsageError("R must have a strictly positive diagonal")
    return R, b


def dcd_solve(R, b, cfg):
    """Approximately solve ``R dw = b`` with the leading DCD algorithm.

    The bit counter and step size are initialized once per call and persist
    across coordinate updates. Ties in the residual argmax go to the lowest
    index.

    Additions are counted as ``M - 1`` comparisons for the argmax, ``M`` for
    the residual update and one for the solution entry per coordinate update,
    plus one per step halving; the total never exceeds
    ``count_ops(cfg, M)``.

    :param np.ndarray R: Symmetric ``M x M`` matrix with positive diagonal.
    :param np.ndarray b: Right-hand side of length ``M``.
    :param DcdConfig cfg: Solver controls.
    :rtype: DcdSolution
    :raises UsageError: on dimension mismatch, non-finite input or a
        non-positive diagonal entry

    """
    R, b = _check_system(R, b)
    M = b.shape[0]
    diag = np.diag(R)

    delta_w = np.zeros(M)
    r = b.copy()
    y = 1
    mu = cfg.H / 2.
    updates = 0
    additions = 0

    for _ in range(cfg.Nu):
        l = int(np.argmax(np.abs(r)))
        rl = r[l]
        while abs(rl) <= (mu / 2.) * diag[l] and y <= cfg.Mb:
            y += 1
            mu /= 2.
            additions += 1
        if y > cfg.Mb:
            break
        step = mu if rl >= 0 else -mu
        delta_w[l] += step
        # R is symmetric, so row l is column l and is contiguous
        r -= step * R[l]
        updates += 1
        additions += 2 * M

    return DcdSolution(delta_w, r, updates, additions)


def count_ops(cfg, M):
    """Upper bound on the additions performed by one :func:`dcd_solve` call,
    ``2 Nu M + Mb``.

    :param DcdConfig cfg:
    :param int M: System size.
    :rtype: int

    """
    if M < 1:
        raise UsageError("M must be >= 1, got {}".format(M))
    return 2 * cfg.Nu * M + cfg.Mb


def complexity(M, cfg, structure="general"):
    """Per-sample arithmetic cost of the recursive filters.

    :param int M: Filter length.
    :param DcdConfig cfg: DCD controls; used for the DCD rows.
    :param str structure: ``general`` or ``tapped_delay`` input.
    :returns: dict mapping ``lms``, ``rls`` and ``dcd`` to :class:`Complexity`
        tuples

    """
    pa = count_ops(cfg, M)
    if structure == "tapped_delay":
        dcd = Complexity(3 * M + pa, 5 * M + 2, 0)
    elif structure == "general":
        dcd = Complexity(M * M + 2 * M + pa, 1.5 * M * M + 3.5 * M + 1, 0)
    else:
        raise UsageError("Unknown input structure: {}".format(structure))
    return {
        "lms": Complexity(2 * M, 2 * M + 1, 0),
        "rls": Complexity(3 * M * M + M, 4 * M * M + 4 * M + 1, 1),
        "dcd": dcd,
    }
