"""Experiment configuration files.

Configurations are INI files. The ``[experiment]`` section names the run and
lists the enabled algorithms one per line; each listed algorithm has its own
section with a ``kind`` and its parameters::

    [experiment]
    name = mcc_sparse
    algorithms =
        DCD-RMCC-1
        RMCC

    [scenario]
    M = 128
    channel = disperse
    rho = 0
    horizon = 20000
    runs = 100
    seed = 2017
    changes = 8000:12

    [noise]
    kind = alpha_stable
    alpha = 1.4
    gamma = 0.05

    [output]
    directory = results/mcc_sparse
    decimation = 10

    [DCD-RMCC-1]
    kind = dcd
    strategy = mcc
    beta2 = 0.03
    Nu = 1

"""

import os.path as osp
from configparser import ConfigParser, Error as ConfigParserError
from dataclasses import dataclass
from typing import List, Optional

from ..exc import ConfigError, UsageError
from ..signals import AlphaStable, Gaussian, InputModel, NoNoise, Scenario
from ..util import absjoin
from .algorithms import PARAMS, AlgorithmSpec

#: Types of algorithm parameters; anything not listed is a float.
_INT_PARAMS = {"Mb", "Nu", "n_w", "vff_n_w"}
_STR_PARAMS = {"strategy", "structure", "impulse_free", "kind", "group"}
_BOOL_PARAMS = {"vff"}


@dataclass
class OutputConfig:
    directory: str = "results"
    delimiter: str = ","
    decimation: int = 1


@dataclass
class ExperimentConfig:
    """A parsed experiment configuration.

    :param str name: Experiment name, used in the summary.
    :param Scenario scenario:
    :param list algorithms: :class:`AlgorithmSpec` instances in output order.
    :param OutputConfig output:

    """
    name: str
    scenario: Scenario
    algorithms: List[AlgorithmSpec]
    output: OutputConfig
    path: Optional[str] = None

    @classmethod
    def from_parser(cls, parser, path=None):
        """Build a config from a :class:`ConfigParser`.

        :raises ConfigError: with the ``section.key`` path of the first invalid
            entry

        """
        if not parser.has_section("experiment"):
            raise ConfigError("experiment", "missing section")
        experiment = parser["experiment"]
        name = experiment.get("name", fallback=osp.splitext(osp.basename(path or "experiment"))[0])
        names = experiment.get("algorithms", fallback="").split()
        if len(names) == 0:
            raise ConfigError("experiment.algorithms", "at least one algorithm is required")
        if len(set(names)) != len(names):
            raise ConfigError("experiment.algorithms", "algorithm names must be unique")

        base = osp.dirname(osp.abspath(path)) if path else ""
        scenario = _parse_scenario(parser, base)
        output = _parse_output(parser)
        algorithms = [_parse_algorithm(parser, algo) for algo in names]
        return cls(name, scenario, algorithms, output, path)


def _get(section, key, conv, **kwargs):
    path = "{}.{}".format(section.name, key)
    try:
        return conv(key, **kwargs)
    except (ValueError, TypeError) as e:
        raise ConfigError(path, str(e))


def _parse_changes(text):
    changes = []
    for item in text.replace(",", " ").split():
        t, sep, k = item.partition(":")
        if sep == "":
            raise ValueError("expected time:shift pairs, got {!r}".format(item))
        changes.append((int(t), int(k)))
    return tuple(changes)


def _parse_noise(parser):
    if not parser.has_section("noise"):
        return NoNoise()
    section = parser["noise"]
    kind = section.get("kind", fallback="alpha_stable")
    try:
        if kind == "alpha_stable":
            return AlphaStable(alpha=_get(section, "alpha", section.getfloat, fallback=1.4),
                               gamma=_get(section, "gamma", section.getfloat, fallback=0.05))
        elif kind == "gaussian":
            return Gaussian(variance=_get(section, "variance", section.getfloat, fallback=1.))
        elif kind == "none":
            return NoNoise()
    except UsageError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError("noise", str(e))
    raise ConfigError("noise.kind", "unknown noise kind {!r}".format(kind))


def _parse_scenario(parser, base=""):
    if not parser.has_section("scenario"):
        raise ConfigError("scenario", "missing section")
    section = parser["scenario"]
    if "M" not in section:
        raise ConfigError("scenario.M", "required")

    M = _get(section, "M", section.getint)
    channel = section.get("channel", fallback="sparse")
    channel_file = section.get("channel_file", fallback=None)
    if channel_file is not None:
        channel_file = absjoin(base, channel_file)
    try:
        input_model = InputModel(rho=_get(section, "rho", section.getfloat, fallback=0.))
    except UsageError as e:
        raise ConfigError("scenario.rho", str(e))
    try:
        changes = _parse_changes(section.get("changes", fallback=""))
    except ValueError as e:
        raise ConfigError("scenario.changes", str(e))
    try:
        return Scenario(
            M=M,
            channel_kind=channel,
            channel_file=channel_file,
            input=input_model,
            noise=_parse_noise(parser),
            horizon=_get(section, "horizon", section.getint, fallback=5000),
            changes=changes,
            runs=_get(section, "runs", section.getint, fallback=1),
            seed=_get(section, "seed", section.getint, fallback=0),
        )
    except ConfigError:
        raise
    except UsageError as e:
        raise ConfigError("scenario", str(e))


def _parse_output(parser):
    if not parser.has_section("output"):
        return OutputConfig()
    section = parser["output"]
    decimation = _get(section, "decimation", section.getint, fallback=1)
    if decimation < 1:
        raise ConfigError("output.decimation", "must be >= 1")
    delimiter = section.get("delimiter", fallback=",")
    if delimiter == "tab":
        delimiter = "\t"
    if len(delimiter) != 1:
        raise ConfigError("output.delimiter", "must be a single character or 'tab'")
    return OutputConfig(directory=section.get("directory", fallback="results"),
                        delimiter=delimiter, decimation=decimation)


def _parse_algorithm(parser, name):
    if not parser.has_section(name):
        raise ConfigError(name, "algorithm section missing")
    section = parser[name]
    if "kind" not in section:
        raise ConfigError("{}.kind".format(name), "required")
    kind = section["kind"]
    if kind not in PARAMS:
        raise ConfigError("{}.kind".format(name), "unknown algorithm kind {!r}".format(kind))

    params = {}
    for key in section:
        if key in ("kind", "group"):
            continue
        # ConfigParser lower-cases keys; map back to the canonical spelling
        canonical = {k.lower(): k for k in PARAMS[kind]}.get(key)
        if canonical is None:
            raise ConfigError("{}.{}".format(name, key), "unknown parameter for kind {}".format(kind))
        if canonical in _BOOL_PARAMS:
            params[canonical] = _get(section, key, section.getboolean)
        elif canonical in _INT_PARAMS:
            params[canonical] = _get(section, key, section.getint)
        elif canonical in _STR_PARAMS:
            params[canonical] = section[key]
        else:
            params[canonical] = _get(section, key, section.getfloat)

    spec = AlgorithmSpec(name, kind, params, group=section.get("group", fallback="nmsd"))
    try:
        # build once so parameter range errors surface at load time
        spec.build(1)
    except UsageError as e:
        raise ConfigError(name, str(e))
    return spec


def load_config(path, seed=None):
    """Load and validate an experiment configuration file.

    :param str path: INI file.
    :param int seed: Overrides ``scenario.seed`` when given.
    :rtype: ExperimentConfig
    :raises ConfigError: on invalid content
    :raises OSError: if the file cannot be read

    """
    parser = ConfigParser()
    try:
        with open(path) as f:
            parser.read_file(f)
    except ConfigParserError as e:
        raise ConfigError(path, str(e).splitlines()[0])
    cfg = ExperimentConfig.from_parser(parser, path)
    if seed is not None:
        cfg.scenario.seed = int(seed)
    return cfg
