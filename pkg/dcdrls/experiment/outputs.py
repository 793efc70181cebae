"""Plot-ready trace tables and the experiment summary."""

import os
import json
import math
import os.path as osp
import logging
from collections import OrderedDict

import numpy as np
import pandas as pd

from ..dcd import DcdConfig, complexity
from ..exc import UsageError
from ..signals import to_db

logger = logging.getLogger("dcdrls.experiment")

#: Re-convergence is reached when the trace is within this many dB of the
#: pre-event steady state.
RECONVERGENCE_DB = 3.

# Complexity row used for each algorithm kind
_COMPLEXITY_ROW = {
    "dcd": "dcd",
    "robust_rls": "rls",
    "rls": "rls",
    "rmcc": "rls",
    "gd_mcc": "lms",
    "lms": "lms",
}


def steady_state(linear):
    """Steady-state NMSD in dB: the mean deviation over the final 10% of the
    samples (at least one).

    """
    linear = np.asarray(linear, dtype=float)
    n = max(1, linear.shape[0] // 10)
    return to_db(np.mean(linear[-n:]))


def reconvergence_time(linear, event, previous=0):
    """Number of samples after ``event`` until the trace first comes within
    :data:`RECONVERGENCE_DB` of its pre-event steady state.

    The pre-event level is the mean deviation over the ``horizon // 10``
    samples before the event, limited to those after ``previous``.

    :param np.ndarray linear: Mean deviation ratio per sample.
    :param int event: Sample index of the change.
    :param int previous: Index of the preceding change (or 0).
    :returns: the delay in samples, or None if there is no pre-event history
        or the trace never re-converges

    """
    linear = np.asarray(linear, dtype=float)
    window = min(linear.shape[0] // 10, event - previous)
    if window < 1:
        return None
    level = to_db(np.mean(linear[event - window:event])) + RECONVERGENCE_DB
    after = to_db(linear[event:])
    hits = np.flatnonzero(after <= level)
    return int(hits[0]) if hits.size else None


def _finite_or_none(value):
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


def summarize(trace, M, spec=None):
    """Return the summary record of one trace.

    :param NmsdTrace trace:
    :param int M: Filter length.
    :param AlgorithmSpec spec: Source of the DCD controls and input structure
        used for the complexity estimate.

    """
    events = []
    previous = 0
    for t, k in trace.changes:
        delay = None if trace.flagged else reconvergence_time(trace.linear, t, previous)
        events.append(OrderedDict([("time", t), ("shift", k), ("samples", delay)]))
        previous = t

    record = OrderedDict([
        ("kind", trace.kind),
        ("group", trace.group),
        ("runs", trace.runs),
        ("diverged_runs", trace.diverged),
        ("flagged", trace.flagged),
        ("steady_state_db", None if trace.flagged else _finite_or_none(steady_state(trace.linear))),
        ("final_db", _finite_or_none(trace.values[-1])),
        ("reconvergence", events),
        ("max_additions", trace.max_additions),
        ("additions_bound", trace.additions_bound),
    ])
    dcd, structure = DcdConfig(), "general"
    if spec is not None and spec.kind == "dcd":
        dcd = spec.dcd_config()
        structure = spec.params.get("structure", "general")
    cost = complexity(M, dcd, structure)[_COMPLEXITY_ROW[trace.kind]]
    record["complexity"] = cost._asdict()
    return record


def emit_outputs(traces, cfg, directory=None):
    """Write one table per output group and ``summary.json``.

    Each table has a ``sample`` column followed by one NMSD column (dB) per
    algorithm, decimated by ``cfg.output.decimation``. Summary statistics use
    the full-resolution traces.

    :param list traces: :class:`NmsdTrace` instances.
    :param ExperimentConfig cfg:
    :param str directory: Overrides ``cfg.output.directory``.
    :returns: list of written paths
    :raises OSError: if the directory cannot be written

    """
    if len(traces) == 0:
        raise UsageError("no traces to write")
    directory = directory or cfg.output.directory
    os.makedirs(directory, exist_ok=True)

    groups = OrderedDict()
    for trace in traces:
        groups.setdefault(trace.group, []).append(trace)

    ext = "tsv" if cfg.output.delimiter == "\t" else "csv"
    paths = []
    for group, members in groups.items():
        df = pd.DataFrame(OrderedDict(
            [("sample", members[0].samples)] +
            [(trace.name, trace.decimated) for trace in members]
        ))
        path = osp.join(directory, "{}.{}".format(group, ext))
        df.to_csv(path, sep=cfg.output.delimiter, index=False, float_format="%.6f",
                  encoding="utf-8")
        paths.append(path)

    specs = {spec.name: spec for spec in cfg.algorithms}
    summary = OrderedDict([
        ("name", cfg.name),
        ("M", cfg.scenario.M),
        ("horizon", cfg.scenario.horizon),
        ("runs", cfg.scenario.runs),
        ("seed", cfg.scenario.seed),
        ("decimation", cfg.output.decimation),
        ("algorithms", OrderedDict(
            (trace.name, summarize(trace, cfg.scenario.M, specs.get(trace.name)))
            for trace in traces
        )),
    ])
    path = osp.join(directory, "summary.json")
    with open(path, "w", encoding="utf-8") as f:
        json.dump(summary, f, indent=2)
        f.write("\n")
    paths.append(path)

    logger.info(json.dumps(dict(event="OUTPUTS_WRITTEN", paths=paths)))
    return paths
