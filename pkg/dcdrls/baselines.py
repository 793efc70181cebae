"""Reference adaptive filters: exact (robust) RLS via the matrix inversion
lemma, gradient-descent MCC and LMS.

"""

from abc import ABCMeta, abstractmethod

import numpy as np

from .exc import DivergenceError, UsageError
from .robust import MCC, MEstimate, PlainRLS, SigmaEstimator
from .util import as_scalar, as_vector


class BaselineFilter(metaclass=ABCMeta):
    """Base class for reference filters. Subclasses implement :meth:`step`,
    which updates ``w`` and returns the a-priori error.

    """
    def __init__(self, M):
        if int(M) != M or M < 1:
            raise UsageError("M must be an integer >= 1, got {}".format(M))
        self.M = int(M)
        self.w = np.zeros(self.M)
        self.n = 0

    @property
    def w_hat(self):
        return self.w

    def _check(self, x, d):
        return as_vector("x", x, self.M), as_scalar("d", d)

    def _error(self, x, d):
        e = d - float(x @ self.w)
        if not np.isfinite(e):
            raise DivergenceError("{} a-priori error is not finite at n={}".format(
                type(self).__name__, self.n))
        return e

    def _check_finite(self):
        if not np.all(np.isfinite(self.w)):
            raise DivergenceError("{} estimate is not finite at n={}".format(
                type(self).__name__, self.n))

    @abstractmethod
    def step(self, x, d):
        """Process one sample and return the a-priori error."""

    def run(self, X, d):
        """Filter a block of regressors and return the a-priori errors."""
        return np.array([self.step(xn, dn) for xn, dn in zip(X, d)])

    def snapshot(self):
        return {"n": self.n, "w_hat": self.w.tolist(), "kind": type(self).__name__}


class RobustRLS(BaselineFilter):
    """Exponentially weighted RLS with the data term scaled by a robust weight
    ``f``::

        k = f P x / (lam + f x^T P x)
        w <- w + k e
        P <- (P - k x^T P) / lam

    ``P`` is re-symmetrized after every step.

    :param int M: Filter length.
    :param float lam: Forgetting factor in ``(0, 1]``.
    :param float delta0: Initial regularization, ``P_0 = I / delta0``.
    :param RobustStrategy strategy: Error weighting; defaults to
        :class:`PlainRLS`.

    """
    def __init__(self, M, lam=0.998, delta0=0.01, strategy=None):
        super(RobustRLS, self).__init__(M)
        if not 0 < lam <= 1:
            raise UsageError("lambda must lie in (0, 1], got {}".format(lam))
        if not delta0 > 0:
            raise UsageError("delta0 must be > 0, got {}".format(delta0))
        self.lam = float(lam)
        self.delta0 = float(delta0)
        self.strategy = strategy if strategy is not None else PlainRLS()
        self.P = np.eye(self.M) / self.delta0
        if isinstance(self.strategy, MEstimate):
            self.sigma_est = SigmaEstimator(self.strategy.n_w, self.strategy.zeta)
        else:
            self.sigma_est = SigmaEstimator()

    def step(self, x, d):
        x, d = self._check(x, d)
        e = self._error(x, d)
        f = self.strategy.weight(e, self.sigma_est)

        Px = self.P @ x
        k = (f * Px) / (self.lam + f * float(x @ Px))
        self.w = self.w + k * e
        P = (self.P - np.outer(k, Px)) / self.lam
        self.P = 0.5 * (P + P.T)

        self.sigma_est.update(e)
        self.n += 1
        self._check_finite()
        return e


class RLS(RobustRLS):
    """Plain exponentially weighted RLS."""
    def __init__(self, M, lam=0.998, delta0=0.01):
        super(RLS, self).__init__(M, lam, delta0, PlainRLS())


class RMCC(RobustRLS):
    """Recursive maximum correntropy filter (RLS weighted by the MCC kernel)."""
    def __init__(self, M, lam=0.998, delta0=0.01, beta2=0.03):
        super(RMCC, self).__init__(M, lam, delta0, MCC(beta2))


class GdMcc(BaselineFilter):
    """Gradient-descent MCC filter, ``w <- w + mu f e x`` with
    ``f = exp(-e^2 / (2 beta^2))``.

    """
    def __init__(self, M, mu=0.001, beta2=0.6):
        super(GdMcc, self).__init__(M)
        if not mu > 0:
            raise UsageError("mu must be > 0, got {}".format(mu))
        self.mu = float(mu)
        self.kernel = MCC(beta2)

    def step(self, x, d):
        x, d = self._check(x, d)
        e = self._error(x, d)
        self.w = self.w + (self.mu * self.kernel.weight(e) * e) * x
        self.n += 1
        self._check_finite()
        return e


class Lms(BaselineFilter):
    """Least mean squares, ``w <- w + mu e x``."""
    def __init__(self, M, mu=0.01):
        super(Lms, self).__init__(M)
        if not mu > 0:
            raise UsageError("mu must be > 0, got {}".format(mu))
        self.mu = float(mu)

    def step(self, x, d):
        x, d = self._check(x, d)
        e = self._error(x, d)
        self.w = self.w + (self.mu * e) * x
        self.n += 1
        self._check_finite()
        return e
