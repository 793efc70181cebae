"""Robust weighting functions ``f(e) = phi'(e) / e`` and the median-based
error power estimator used to set the M-estimate threshold.

"""

import math
import sys
import inspect
from collections import deque

import numpy as np

from .exc import UsageError
from .util import as_scalar

#: Cap applied to the CMPN weight where its expression diverges (e -> 0).
CMPN_MAX_WEIGHT = 1e3

#: Below this ``|ln|e||`` the CMPN weight is evaluated from its series.
_CMPN_SERIES_RADIUS = 1e-4


def correction_factor(n_w):
    """Median correction factor ``c_sigma = 1.483 (1 + 5 / (N_w - 1))``.

    A single-sample window has no finite-sample correction and uses 1.483.

    """
    if n_w < 2:
        return 1.483
    return 1.483 * (1 + 5. / (n_w - 1))


class SigmaEstimator(object):
    """Robust running estimate of the error power,
    ``sigma2 <- zeta sigma2 + c_sigma (1 - zeta) med(window)``.

    The window holds the last ``n_w`` squared errors. While it is filling the
    median is taken over the samples present, and the very first update uses
    ``zeta = 0``.

    :param int n_w: Window length.
    :param float zeta: Weighting factor in ``[0, 1)``.

    """
    def __init__(self, n_w=9, zeta=0.99):
        if int(n_w) != n_w or n_w < 1:
            raise UsageError("N_w must be an integer >= 1, got {}".format(n_w))
        if not 0 <= zeta < 1:
            raise UsageError("zeta must lie in [0, 1), got {}".format(zeta))
        self.n_w = int(n_w)
        self.zeta = float(zeta)
        self.c_sigma = correction_factor(self.n_w)
        self.window = deque(maxlen=self.n_w)
        self.sigma2 = 0.
        self.samples_seen = 0

    def update(self, e):
        """Push a new error sample and refresh ``sigma2``.

        :param float e: A-priori error.
        :returns: self

        """
        e = as_scalar("e", e)
        self.window.append(e * e)
        zeta = self.zeta if self.samples_seen > 0 else 0.
        med = float(np.median(self.window))
        self.sigma2 = zeta * self.sigma2 + self.c_sigma * (1 - zeta) * med
        self.samples_seen += 1
        return self

    def threshold(self, tau):
        """Return the rejection threshold ``xi = tau * sigma``."""
        return tau * math.sqrt(self.sigma2)


class RobustStrategy(object):
    """Base class for robust weighting strategies. Subclasses set ``kind`` and
    implement :meth:`_weight`.

    """
    kind = None

    def weight(self, e, estimator=None):
        """Return the robust weight ``f(e)``.

        :param float e: A-priori error.
        :param SigmaEstimator estimator: Error power estimate; required by
            strategies with an adaptive threshold.
        :raises UsageError: if ``e`` is not finite

        """
        return self._weight(as_scalar("e", e), estimator)

    def _weight(self, e, estimator):
        raise NotImplementedError

    def params(self):
        """Return the strategy parameters as a plain dict."""
        return {
            key: value for key, value in vars(self).items()
            if not key.startswith("_")
        }

    def __repr__(self):
        args = ", ".join("{}={!r}".format(k, v) for k, v in sorted(self.params().items()))
        return "{}({})".format(type(self).__name__, args)


class PlainRLS(RobustStrategy):
    """Unit weight; the recursion reduces to (DCD-)RLS."""
    kind = "plain"

    def _weight(self, e, estimator):
        return 1.


class MCC(RobustStrategy):
    """Maximum correntropy criterion, ``f(e) = exp(-e^2 / (2 beta^2))``.

    :param float beta2: Squared kernel width.

    """
    kind = "mcc"

    def __init__(self, beta2=0.03):
        if not beta2 > 0:
            raise UsageError("beta2 must be > 0, got {}".format(beta2))
        self.beta2 = float(beta2)

    def _weight(self, e, estimator):
        return math.exp(-e * e / (2 * self.beta2))


class MEstimate(RobustStrategy):
    """Modified Huber M-estimate: unit weight inside ``|e| <= xi`` and zero
    outside, with ``xi = tau * sigma`` taken from a :class:`SigmaEstimator`.

    :param float tau: Confidence multiplier (2.576 for 99%).
    :param float zeta: Weighting factor of the error power estimate.
    :param int n_w: Median window length.

    """
    kind = "mestimate"

    def __init__(self, tau=2.576, zeta=0.99, n_w=9):
        if not tau > 0:
            raise UsageError("tau must be > 0, got {}".format(tau))
        if not 0 <= zeta < 1:
            raise UsageError("zeta must lie in [0, 1), got {}".format(zeta))
        if int(n_w) != n_w or n_w < 1:
            raise UsageError("N_w must be an integer >= 1, got {}".format(n_w))
        self.tau = float(tau)
        self.zeta = float(zeta)
        self.n_w = int(n_w)

    def _weight(self, e, estimator):
        if estimator is None:
            raise UsageError("MEstimate weighting needs a SigmaEstimator")
        return 1. if abs(e) <= estimator.threshold(self.tau) else 0.


class LpNorm(RobustStrategy):
    """l_p-norm criterion, ``f(e) = |e|^p / (e^2 + epsilon)``.

    Convergence in alpha-stable noise needs ``p < alpha``.

    :param float p: Norm order in ``(0, 2]``.
    :param float epsilon: Regularizer bounding the weight near ``e = 0``.

    """
    kind = "lpnorm"

    def __init__(self, p=1.2, epsilon=1e-2):
        if not 0 < p <= 2:
            raise UsageError("p must lie in (0, 2], got {}".format(p))
        if not epsilon > 0:
            raise UsageError("epsilon must be > 0, got {}".format(epsilon))
        self.p = float(p)
        self.epsilon = float(epsilon)

    def _weight(self, e, estimator):
        return abs(e) ** self.p / (e * e + self.epsilon)


class CMPN(RobustStrategy):
    """Continuous mixed p-norms, ``phi(e) = int_1^2 |e|^p dp``, whose weight is

        f(e) = ((2|e| - 1) ln|e| - |e| + 1) / (|e| ln^2|e|)

    The removable singularity at ``|e| = 1`` (limit 3/2) is bridged with the
    series ``3/2 - 2L/3 + 5L^2/24`` in ``L = ln|e|``; the divergent limit at
    ``e = 0`` is capped at :data:`CMPN_MAX_WEIGHT`.

    """
    kind = "cmpn"

    def _weight(self, e, estimator):
        a = abs(e)
        if a == 0:
            return CMPN_MAX_WEIGHT
        L = math.log(a)
        if abs(L) < _CMPN_SERIES_RADIUS:
            f = 1.5 - 2. * L / 3. + 5. * L * L / 24.
        else:
            f = ((2 * a - 1) * L - a + 1) / (a * L * L)
        return min(f, CMPN_MAX_WEIGHT)


def weight(strategy, e, estimator=None):
    """Return ``strategy.weight(e, estimator)``."""
    return strategy.weight(e, estimator)


_mod = sys.modules[__name__]
strategy_types = {
    cls.kind: cls
    for _, cls in inspect.getmembers(_mod, inspect.isclass)
    if issubclass(cls, RobustStrategy) and cls.kind is not None
}


def get_strategy_type(kind):
    """Return the strategy class registered under ``kind``."""
    if kind in strategy_types:
        return strategy_types[kind]
    raise UsageError("No robust strategy named {!r}; available: {}".format(
        kind, ", ".join(sorted(strategy_types))))
