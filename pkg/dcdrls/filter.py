"""DCD-based robust RLS filters.

A single recursion covers DCD-RLS, DCD-RMCC, DCD-RLM, DCD-RLpN and DCD-CMPN;
the variant is selected by the :mod:`dcdrls.robust` strategy. Each step

1. computes the a-priori error ``e = d - x^T w``,
2. evaluates the robust weight ``f = f(e)`` and the forgetting factor,
3. updates ``R <- lam R + f x x^T`` and ``b <- lam r + f e x``,
4. solves ``R dw = b`` approximately with DCD, keeping its residual as ``r``,
5. applies ``w <- w + dw``.

"""

import json
import math
import logging
from functools import lru_cache
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from .dcd import DcdConfig, dcd_solve
from .exc import DivergenceError, UsageError
from .robust import MEstimate, PlainRLS, SigmaEstimator
from .util import as_scalar, as_vector

STRUCTURES = ("general", "tapped_delay")

StepReport = namedtuple("StepReport", "e, f, lambda_used, dcd")


@dataclass(frozen=True)
class VffConfig:
    """Variable forgetting factor controls.

    ``lambda_n = lambda_min + (1 - lambda_min) exp(-rho e2_f)`` where the
    impulse-free squared error ``e2_f`` is ``min(e^2, xi^2)`` (``clip``) or
    the robust error power estimate itself (``sigma``).

    :param float rho: Sensitivity, > 0.
    :param float lambda_min: Floor of the forgetting factor in (0, 1).
    :param float tau: Threshold multiplier for ``xi = tau * sigma``.
    :param float zeta: Weighting factor of the error power estimate.
    :param int n_w: Median window length of the error power estimate.
    :param str impulse_free: ``clip`` or ``sigma``.

    """
    rho: float = 3.0
    lambda_min: float = 0.97
    tau: float = 2.576
    zeta: float = 0.99
    n_w: int = 9
    impulse_free: str = "clip"

    def __post_init__(self):
        if not self.rho > 0:
            raise UsageError("rho must be > 0, got {}".format(self.rho))
        if not 0 < self.lambda_min < 1:
            raise UsageError("lambda_min must lie in (0, 1), got {}".format(self.lambda_min))
        if not self.tau > 0:
            raise UsageError("tau must be > 0, got {}".format(self.tau))
        if self.impulse_free not in ("clip", "sigma"):
            raise UsageError("impulse_free must be 'clip' or 'sigma', got {!r}".format(
                self.impulse_free))
        # range checks on zeta and n_w are shared with the estimator
        SigmaEstimator(self.n_w, self.zeta)


def vff_step(vff, e2_f):
    """Return the forgetting factor for an impulse-free squared error.

    :param VffConfig vff:
    :param float e2_f: Non-negative squared error.
    :returns: value in ``[lambda_min, 1]``

    """
    e2_f = float(e2_f)
    if e2_f < 0 or math.isnan(e2_f):
        raise UsageError("e2_f must be >= 0, got {}".format(e2_f))
    return vff.lambda_min + (1 - vff.lambda_min) * math.exp(-vff.rho * e2_f)


@lru_cache(maxsize=None)
def _triu(M):
    return np.triu_indices(M)


def update_R_general(R, x, f, lam, shift=0.):
    """Return ``lam R + f x x^T + shift I``.

    Only the upper triangle is computed; the lower one is its mirror image so
    the result is exactly symmetric.

    """
    M = R.shape[0]
    rows, cols = _triu(M)
    upper = lam * R[rows, cols] + f * x[rows] * x[cols]
    out = np.empty_like(R)
    out[rows, cols] = upper
    out[cols, rows] = upper
    if shift:
        out[np.diag_indices(M)] += shift
    return out


def update_R_tapped_delay(R, x, f, lam, reg_prev=0., reg=None):
    """Shifted-block update of ``R`` for tapped-delay regressors
    ``x = (x_n, x_{n-1}, ..., x_{n-M+1})``.

    The lower-right ``(M-1) x (M-1)`` block is copied from the upper-left block
    of ``R`` and only the first column is recomputed, then mirrored into the
    first row. ``reg_prev`` and ``reg`` are the regularization levels carried
    on the diagonal before and after the step; with ``reg`` omitted it decays
    with ``lam``. The result equals :func:`update_R_general` exactly when ``f``
    is constant and the regressors start from a zero pre-history.

    """
    if reg is None:
        reg = lam * reg_prev
    M = R.shape[0]
    out = np.empty_like(R)
    if M > 1:
        out[1:, 1:] = R[:-1, :-1]
        if reg != reg_prev:
            idx = np.arange(1, M)
            out[idx, idx] += reg - reg_prev
    col = lam * R[:, 0] + f * x[0] * x
    col[0] += reg - lam * reg_prev
    out[:, 0] = col
    out[0, :] = col
    return out


class DcdFilter(object):
    """Robust DCD-RLS adaptive filter.

    :param int M: Filter length.
    :param float lam: Fixed forgetting factor in ``(0, 1]``; ignored when
        ``vff`` is given.
    :param float delta0: Initial regularization, ``R_0 = delta0 I``.
    :param RobustStrategy strategy: Error weighting; defaults to
        :class:`PlainRLS`.
    :param DcdConfig dcd: DCD solver controls.
    :param str structure: ``general`` or ``tapped_delay``.
    :param VffConfig vff: Enables the variable forgetting factor.
    :param callable regularization: Optional schedule ``n -> delta_n``. By
        default ``delta_n = lam^(n+1) delta0``, for which the regularization
        terms of the recursions vanish.

    """
    def __init__(self, M, lam=0.998, delta0=0.01, strategy=None, dcd=None,
                 structure="general", vff=None, regularization=None):
        if int(M) != M or M < 1:
            raise UsageError("M must be an integer >= 1, got {}".format(M))
        if not 0 < lam <= 1:
            raise UsageError("lambda must lie in (0, 1], got {}".format(lam))
        if not delta0 > 0:
            raise UsageError("delta0 must be > 0, got {}".format(delta0))
        if structure not in STRUCTURES:
            raise UsageError("Unknown input structure: {}".format(structure))

        self.M = int(M)
        self.lam = float(lam)
        self.delta0 = float(delta0)
        self.strategy = strategy if strategy is not None else PlainRLS()
        self.dcd = dcd if dcd is not None else DcdConfig()
        self.structure = structure
        self.vff = vff
        self.regularization = regularization

        if isinstance(self.strategy, MEstimate):
            self.sigma_est = SigmaEstimator(self.strategy.n_w, self.strategy.zeta)
        elif vff is not None:
            self.sigma_est = SigmaEstimator(vff.n_w, vff.zeta)
        else:
            self.sigma_est = SigmaEstimator()

        self.w_hat = np.zeros(self.M)
        self.R = self.delta0 * np.eye(self.M)
        self.r = np.zeros(self.M)
        self.reg = self.delta0
        self.n = 0
        self.max_additions = 0

        self.logger = logging.getLogger("dcdrls.filter")
        self.logger.debug(json.dumps(dict(
            event="FILTER_INIT", M=self.M, lam=self.lam, delta0=self.delta0,
            strategy=self.strategy.kind, structure=self.structure,
            Nu=self.dcd.Nu, Mb=self.dcd.Mb, H=self.dcd.H,
            vff=self.vff is not None)))

    def _forgetting_factor(self, e):
        if self.vff is None:
            return self.lam
        sigma2 = self.sigma_est.sigma2
        if self.vff.impulse_free == "clip":
            e2_f = min(e * e, self.vff.tau ** 2 * sigma2)
        else:
            e2_f = sigma2
        return vff_step(self.vff, e2_f)

    def step(self, x, d):
        """Process one sample.

        :param np.ndarray x: Regressor of length ``M``.
        :param float d: Desired response.
        :rtype: StepReport
        :raises UsageError: on non-finite input or a dimension mismatch
        :raises DivergenceError: when the state stops being finite

        """
        x = as_vector("x", x, self.M)
        d = as_scalar("d", d)

        e = d - float(x @ self.w_hat)
        if not math.isfinite(e):
            raise DivergenceError("a-priori error is not finite at n={}".format(self.n))
        # threshold and forgetting factor use the estimate from before e
        f = self.strategy.weight(e, self.sigma_est)
        lam = self._forgetting_factor(e)

        reg_prev = self.reg
        if self.regularization is None:
            self.reg = lam * reg_prev
        else:
            self.reg = float(self.regularization(self.n))
        shift = self.reg - lam * reg_prev

        if self.structure == "tapped_delay":
            self.R = update_R_tapped_delay(self.R, x, f, lam, reg_prev, self.reg)
        else:
            self.R = update_R_general(self.R, x, f, lam, shift)
        b = lam * self.r + (f * e) * x
        if shift:
            b -= shift * self.w_hat

        if not (np.all(np.isfinite(self.R)) and np.all(np.isfinite(b))):
            raise DivergenceError("filter state is not finite at n={}".format(self.n))
        if np.any(np.diag(self.R) <= 0):
            raise DivergenceError("R lost positive diagonal at n={}".format(self.n))

        sol = dcd_solve(self.R, b, self.dcd)
        self.w_hat = self.w_hat + sol.delta_w
        self.r = sol.residual
        self.max_additions = max(self.max_additions, sol.additions_count)

        self.sigma_est.update(e)
        self.n += 1
        return StepReport(e, f, lam, sol)

    def run(self, X, d):
        """Filter a block of regressors and return the a-priori errors.

        :param np.ndarray X: ``N x M`` regressor rows.
        :param np.ndarray d: Desired responses of length ``N``.
        :rtype: np.ndarray

        """
        X = np.asarray(X, dtype=float)
        d = np.asarray(d, dtype=float)
        if X.ndim != 2 or X.shape[0] != d.shape[0]:
            raise UsageError("X and d have incompatible shapes {} and {}".format(
                X.shape, d.shape))
        return np.array([self.step(xn, dn).e for xn, dn in zip(X, d)])

    def snapshot(self):
        """Return the estimate and diagnostics as a plain dict."""
        return {
            "n": self.n,
            "w_hat": self.w_hat.tolist(),
            "lambda": self.lam,
            "regularization": self.reg,
            "sigma2": self.sigma_est.sigma2,
            "strategy": self.strategy.kind,
            "structure": self.structure,
            "max_additions": self.max_additions,
        }
