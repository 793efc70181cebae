"""Seedable experiment signals: AR(1) inputs, alpha-stable and Gaussian
noise, synthetic echo channels with abrupt shifts, and the NMSD metric.

All generators take either an integer seed or a :class:`numpy.random.Generator`
(PCG64). Monte-Carlo runs draw independent substreams with :func:`substream`.

"""

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.signal import lfilter

from .exc import UsageError
from .util import as_vector

#: Reported NMSD when the estimate matches the channel exactly.
NMSD_FLOOR_DB = -300.

#: Substream identifiers mixed into the per-run seed.
STREAM_CHANNEL = 0
STREAM_INPUT = 1
STREAM_NOISE = 2

CHANNEL_KINDS = ("sparse", "disperse", "custom")


def substream(seed, run, stream):
    """Return an independent generator for one Monte-Carlo run and purpose.

    :param int seed: Experiment seed.
    :param int run: Run index.
    :param int stream: One of the ``STREAM_*`` identifiers.
    :rtype: np.random.Generator

    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(run), int(stream)]))


@dataclass(frozen=True)
class InputModel:
    """AR(1) input ``x_k = rho x_{k-1} + theta_k`` with unit-variance
    innovations; ``rho = 0`` gives white input.

    """
    rho: float = 0.

    def __post_init__(self):
        if not -1 < self.rho < 1:
            raise UsageError("AR(1) coefficient must satisfy |rho| < 1, got {}".format(self.rho))


@dataclass(frozen=True)
class AlphaStable:
    """Symmetric alpha-stable noise with characteristic function
    ``exp(-gamma |t|^alpha)``.

    """
    alpha: float = 1.4
    gamma: float = 0.05
    kind = "alpha_stable"

    def __post_init__(self):
        if not 0 < self.alpha <= 2:
            raise UsageError("alpha must lie in (0, 2], got {}".format(self.alpha))
        if not self.gamma > 0:
            raise UsageError("gamma must be > 0, got {}".format(self.gamma))

    def sample(self, n, seed=None):
        return gen_alpha_stable(self, n, seed)


@dataclass(frozen=True)
class Gaussian:
    """Zero-mean white Gaussian noise."""
    variance: float = 1.
    kind = "gaussian"

    def __post_init__(self):
        if not self.variance >= 0:
            raise UsageError("variance must be >= 0, got {}".format(self.variance))

    def sample(self, n, seed=None):
        rng = np.random.default_rng(seed)
        return math.sqrt(self.variance) * rng.standard_normal(n)


@dataclass(frozen=True)
class NoNoise:
    kind = "none"

    def sample(self, n, seed=None):
        return np.zeros(n)


@dataclass
class Channel:
    """Unknown system to identify.

    :param np.ndarray w_o: Impulse response.
    :param str kind: ``sparse``, ``disperse`` or ``custom``.

    """
    w_o: np.ndarray
    kind: str = "custom"

    def __post_init__(self):
        self.w_o = as_vector("w_o", self.w_o)
        if self.kind not in CHANNEL_KINDS:
            raise UsageError("Unknown channel kind: {}".format(self.kind))
        if not np.linalg.norm(self.w_o) > 0:
            raise UsageError("channel impulse response must be non-zero")

    @property
    def M(self):
        return self.w_o.shape[0]


@dataclass
class Scenario:
    """Everything that defines one identification experiment apart from the
    algorithms.

    ``changes`` holds ``(time, shift)`` pairs: from sample index ``time`` on,
    the channel is the original one delayed by ``shift`` taps.

    """
    M: int
    channel_kind: str = "sparse"
    channel_file: Optional[str] = None
    input: InputModel = field(default_factory=InputModel)
    noise: object = field(default_factory=AlphaStable)
    horizon: int = 5000
    changes: Tuple[Tuple[int, int], ...] = ()
    runs: int = 1
    seed: int = 0

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 1:
            raise UsageError("M must be an integer >= 1, got {}".format(self.M))
        if self.channel_kind not in CHANNEL_KINDS:
            raise UsageError("Unknown channel kind: {}".format(self.channel_kind))
        if self.channel_kind == "custom" and self.channel_file is None:
            raise UsageError("custom channels need a channel file")
        if self.horizon < 1:
            raise UsageError("horizon must be >= 1, got {}".format(self.horizon))
        if self.runs < 1:
            raise UsageError("runs must be >= 1, got {}".format(self.runs))
        self.changes = tuple(sorted((int(t), int(k)) for t, k in self.changes))
        for t, k in self.changes:
            if not 0 <= t < self.horizon:
                raise UsageError("change time {} outside horizon {}".format(t, self.horizon))
            if not 0 <= k < self.M:
                raise UsageError("channel shift {} out of range for M={}".format(k, self.M))


def gen_ar1(model, n, seed=None):
    """Return ``n`` samples of the AR(1) process ``model``.

    :param InputModel model:
    :param int n: Number of samples.
    :param seed: Integer seed or generator.
    :rtype: np.ndarray

    """
    if n < 1:
        raise UsageError("n must be >= 1, got {}".format(n))
    theta = np.random.default_rng(seed).standard_normal(n)
    if model.rho == 0:
        return theta
    return lfilter([1.], [1., -model.rho], theta)


def gen_alpha_stable(model, n, seed=None):
    """Return ``n`` i.i.d. symmetric alpha-stable samples using the
    Chambers-Mallows-Stuck transform.

    :param AlphaStable model:
    :param int n: Number of samples.
    :param seed: Integer seed or generator.
    :rtype: np.ndarray

    """
    rng = np.random.default_rng(seed)
    alpha = model.alpha
    U = rng.uniform(-np.pi / 2, np.pi / 2, n)
    W = rng.exponential(1., n)
    if alpha == 1:
        S = np.tan(U)
    else:
        S = (np.sin(alpha * U) / np.cos(U) ** (1. / alpha)
             * (np.cos(U - alpha * U) / W) ** ((1. - alpha) / alpha))
    return model.gamma ** (1. / alpha) * S


def gen_channel(kind, M, seed=None, taps=None, normalize=True):
    """Return a synthetic echo channel.

    ``sparse`` channels carry a burst of 16 (or ``M``) exponentially decaying
    taps after a short bulk delay of ``M // 8`` samples; all other taps are
    zero. ``disperse`` channels spread their energy over every tap with a
    slowly decaying oscillatory envelope. ``custom`` wraps ``taps``.

    :param str kind: ``sparse``, ``disperse`` or ``custom``.
    :param int M: Number of taps.
    :param seed: Integer seed or generator.
    :param taps: Impulse response for ``custom`` channels.
    :param bool normalize: Scale to unit Euclidean norm.
    :rtype: Channel

    """
    if int(M) != M or M < 1:
        raise UsageError("M must be an integer >= 1, got {}".format(M))
    rng = np.random.default_rng(seed)
    k = np.arange(M)

    if kind == "sparse":
        n_active = min(16, M)
        offset = min(M // 8, M - n_active)
        burst = rng.standard_normal(n_active) * np.exp(-np.arange(n_active) / 4.)
        w_o = np.zeros(M)
        w_o[offset:offset + n_active] = burst
    elif kind == "disperse":
        envelope = np.exp(-k / (M / 3.))
        w_o = envelope * (np.cos(2 * np.pi * k / 12.) + 0.5 * rng.standard_normal(M))
    elif kind == "custom":
        if taps is None:
            raise UsageError("custom channels need explicit taps")
        w_o = as_vector("taps", taps, M).copy()
    else:
        raise UsageError("Unknown channel kind: {}".format(kind))

    if normalize:
        norm = np.linalg.norm(w_o)
        if not norm > 0:
            raise UsageError("channel impulse response must be non-zero")
        w_o = w_o / norm
    return Channel(w_o, kind)


def shift_channel(ch, k):
    """Delay a channel by ``k`` taps, zero-filling the head and truncating the
    tail. The result is not renormalized.

    :param Channel ch:
    :param int k: Shift in ``[0, M)``.
    :rtype: Channel

    """
    M = ch.M
    if int(k) != k or not 0 <= k < M:
        raise UsageError("shift must be an integer in [0, {}), got {}".format(M, k))
    k = int(k)
    w_o = np.zeros(M)
    w_o[k:] = ch.w_o[:M - k]
    return Channel(w_o, ch.kind)


def deviation(w_hat, w_o):
    """Return the normalized squared deviation ``|w_hat - w_o|^2 / |w_o|^2``."""
    w_o = np.asarray(w_o, dtype=float)
    energy = float(w_o @ w_o)
    if not energy > 0:
        raise UsageError("NMSD is undefined for a zero channel")
    diff = np.asarray(w_hat, dtype=float) - w_o
    return float(diff @ diff) / energy


def to_db(ratio):
    """Convert a deviation ratio (scalar or array) to dB, flooring at
    :data:`NMSD_FLOOR_DB`.

    """
    ratio = np.asarray(ratio, dtype=float)
    with np.errstate(divide="ignore"):
        db = 10 * np.log10(ratio)
    db = np.maximum(db, NMSD_FLOOR_DB)
    return float(db) if db.ndim == 0 else db


def nmsd(w_hat, w_o):
    """Return ``10 log10(|w_hat - w_o|^2 / |w_o|^2)`` in dB."""
    return to_db(deviation(w_hat, w_o))


def tapped_delay(x, M):
    """Return the ``N x M`` regressor rows ``(x_n, x_{n-1}, ..., x_{n-M+1})``
    of a scalar sequence, with zeros before the first sample.

    """
    x = np.asarray(x, dtype=float)
    padded = np.concatenate([np.zeros(M - 1), x])
    return sliding_window_view(padded, M)[:, ::-1]


def save_channel(ch, path):
    """Write a channel as one tap per line."""
    w_o = ch.w_o if isinstance(ch, Channel) else np.asarray(ch, dtype=float)
    np.savetxt(path, w_o, fmt="%.17g")


def load_channel(path, normalize=False):
    """Read a channel written by :func:`save_channel` (or any one-tap-per-line
    text file).

    :rtype: Channel

    """
    taps = np.loadtxt(path, ndmin=1)
    return gen_channel("custom", taps.shape[0], taps=taps, normalize=normalize)
