"""Monte-Carlo execution of an experiment.

Every (algorithm, run) pair is an independent task. Run ``r`` draws its
channel, input and noise from substreams of ``(seed, r)``, so all algorithms
see the same signals in a given run. Tasks may execute in a process pool;
results are merged in (algorithm, run) order, which keeps the averaged traces
identical for any number of workers.

"""

import json
import logging
from collections import namedtuple
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Optional

import numpy as np
import psutil

from ..dcd import count_ops
from ..exc import DivergenceError, UsageError
from ..signals import (
    STREAM_CHANNEL, STREAM_INPUT, STREAM_NOISE, deviation, gen_ar1,
    gen_channel, load_channel, shift_channel, substream, tapped_delay, to_db
)

logger = logging.getLogger("dcdrls.experiment")

RunResult = namedtuple("RunResult", "index, run, ratios, max_additions, diverged, reason")


class TraceAccumulator(object):
    """Running mean of per-run deviation ratio traces.

    Uses the incremental update ``m <- m + (x - m) / k`` so that averaging
    identical traces reproduces them exactly.

    """
    def __init__(self, horizon):
        self.mean = np.zeros(horizon)
        self.count = 0

    def add(self, ratios):
        self.count += 1
        self.mean += (ratios - self.mean) / self.count


@dataclass
class NmsdTrace:
    """Averaged learning curve of one algorithm.

    ``linear`` holds the mean normalized squared deviation at every sample and
    ``values`` its dB conversion. When every run diverged both are NaN and
    ``flagged`` is set.

    """
    name: str
    group: str
    linear: np.ndarray
    runs: int
    diverged: int = 0
    max_additions: Optional[int] = None
    additions_bound: Optional[int] = None
    decimation: int = 1
    kind: str = "dcd"
    changes: tuple = field(default_factory=tuple)

    @property
    def values(self):
        return to_db(self.linear)

    @property
    def flagged(self):
        return self.runs == 0

    @property
    def horizon(self):
        return self.linear.shape[0]

    @property
    def samples(self):
        """Sample indices kept after decimation."""
        return np.arange(0, self.horizon, self.decimation)

    @property
    def decimated(self):
        return self.values[::self.decimation]


def make_channel(scenario, rng):
    """Return the initial channel of one run."""
    if scenario.channel_kind == "custom":
        channel = load_channel(scenario.channel_file)
        if channel.M != scenario.M:
            raise UsageError("channel file has {} taps, expected {}".format(
                channel.M, scenario.M))
        return channel
    return gen_channel(scenario.channel_kind, scenario.M, rng)


def channel_schedule(scenario, channel):
    """Return ``(start, w_o)`` segments covering the horizon."""
    segments = [(0, channel.w_o)]
    for t, k in scenario.changes:
        w_o = shift_channel(channel, k).w_o
        if t == 0:
            segments[0] = (0, w_o)
        else:
            segments.append((t, w_o))
    return segments


def make_signals(scenario, run):
    """Return the regressors, desired responses and channel segments of one
    run.

    """
    seed, N, M = scenario.seed, scenario.horizon, scenario.M
    channel = make_channel(scenario, substream(seed, run, STREAM_CHANNEL))
    x = gen_ar1(scenario.input, N, substream(seed, run, STREAM_INPUT))
    noise = scenario.noise.sample(N, substream(seed, run, STREAM_NOISE))
    X = tapped_delay(x, M)

    segments = channel_schedule(scenario, channel)
    d = np.empty(N)
    bounds = [start for start, _ in segments[1:]] + [N]
    for (start, w_o), stop in zip(segments, bounds):
        d[start:stop] = X[start:stop] @ w_o
    d += noise
    return X, d, segments


def simulate(scenario, spec, run):
    """Run one algorithm over one Monte-Carlo realization.

    :returns: per-sample normalized squared deviation
    :raises DivergenceError: if the filter state or deviation stops being
        finite

    """
    X, d, segments = make_signals(scenario, run)
    flt = spec.build(scenario.M)
    ratios = np.empty(scenario.horizon)

    starts = [start for start, _ in segments]
    seg = 0
    w_o = segments[0][1]
    for n in range(scenario.horizon):
        if seg + 1 < len(starts) and n == starts[seg + 1]:
            seg += 1
            w_o = segments[seg][1]
        flt.step(X[n], d[n])
        ratios[n] = deviation(flt.w_hat, w_o)

    if not np.all(np.isfinite(ratios)):
        raise DivergenceError("non-finite deviation in run {}".format(run))
    return ratios, getattr(flt, "max_additions", None)


def _run_task(task):
    index, scenario, spec, run = task
    try:
        ratios, additions = simulate(scenario, spec, run)
    except (DivergenceError, FloatingPointError) as e:
        return RunResult(index, run, None, None, True, str(e))
    return RunResult(index, run, ratios, additions, False, None)


def run_experiment(cfg, processes=None):
    """Execute every algorithm of ``cfg`` over all Monte-Carlo runs.

    :param ExperimentConfig cfg:
    :param int processes: Worker processes; defaults to the number of physical
        cores. ``1`` runs in the calling process.
    :returns: list of :class:`NmsdTrace` in configuration order

    """
    scenario = cfg.scenario
    tasks = [
        (index, scenario, spec, run)
        for index, spec in enumerate(cfg.algorithms)
        for run in range(scenario.runs)
    ]

    if processes is None:
        processes = psutil.cpu_count(logical=False) or 1
    processes = max(1, min(int(processes), len(tasks)))

    logger.info(json.dumps(dict(
        event="EXPERIMENT_START", name=cfg.name, algorithms=len(cfg.algorithms),
        runs=scenario.runs, horizon=scenario.horizon, processes=processes)))

    accumulators = [TraceAccumulator(scenario.horizon) for _ in cfg.algorithms]
    diverged = [0] * len(cfg.algorithms)
    additions = [None] * len(cfg.algorithms)

    def collect(results):
        for result in results:
            spec = cfg.algorithms[result.index]
            if result.diverged:
                diverged[result.index] += 1
                logger.warning(json.dumps(dict(
                    event="RUN_DIVERGED", algorithm=spec.name, run=result.run,
                    reason=result.reason)))
                continue
            accumulators[result.index].add(result.ratios)
            if result.max_additions is not None:
                additions[result.index] = max(additions[result.index] or 0,
                                              result.max_additions)

    if processes == 1:
        collect(map(_run_task, tasks))
    else:
        with Pool(processes) as pool:
            collect(pool.imap(_run_task, tasks))

    traces = []
    for index, spec in enumerate(cfg.algorithms):
        acc = accumulators[index]
        linear = acc.mean if acc.count > 0 else np.full(scenario.horizon, np.nan)
        dcd = spec.dcd_config()
        trace = NmsdTrace(
            name=spec.name,
            group=spec.group,
            linear=linear,
            runs=acc.count,
            diverged=diverged[index],
            max_additions=additions[index],
            additions_bound=count_ops(dcd, scenario.M) if dcd is not None else None,
            decimation=cfg.output.decimation,
            kind=spec.kind,
            changes=scenario.changes,
        )
        traces.append(trace)
        if trace.flagged:
            logger.error(json.dumps(dict(event="ALGORITHM_DIVERGED", algorithm=spec.name)))
        else:
            logger.info(json.dumps(dict(
                event="ALGORITHM_DONE", algorithm=spec.name, runs=trace.runs,
                diverged=trace.diverged, final_nmsd=float(trace.values[-1]))))
    return traces
