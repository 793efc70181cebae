"""Algorithm specifications parsed from experiment configurations and the map
from algorithm kinds to filter factories.

"""

from dataclasses import dataclass, field

from ..baselines import RLS, RMCC, GdMcc, Lms, RobustRLS
from ..dcd import DcdConfig
from ..exc import UsageError
from ..filter import DcdFilter, VffConfig
from ..robust import get_strategy_type

#: Keyword arguments accepted by each strategy kind.
STRATEGY_PARAMS = {
    "plain": (),
    "mcc": ("beta2",),
    "mestimate": ("tau", "zeta", "n_w"),
    "lpnorm": ("p", "epsilon"),
    "cmpn": (),
}


def make_strategy(params):
    """Build a robust strategy from ``params["strategy"]`` and the matching
    parameter keys.

    """
    kind = params.get("strategy", "plain")
    cls = get_strategy_type(kind)
    kwargs = {key: params[key] for key in STRATEGY_PARAMS[kind] if key in params}
    return cls(**kwargs)


def _make_dcd(spec, M):
    p = spec.params
    dcd = DcdConfig(H=p.get("H", 1.), Mb=p.get("Mb", 16), Nu=p.get("Nu", 8))
    vff = None
    if p.get("vff", False):
        vff = VffConfig(rho=p.get("rho", 3.), lambda_min=p.get("lambda_min", 0.97),
                        tau=p.get("vff_tau", 2.576), zeta=p.get("vff_zeta", 0.99),
                        n_w=p.get("vff_n_w", 9),
                        impulse_free=p.get("impulse_free", "clip"))
    return DcdFilter(M, lam=p.get("lam", 0.998), delta0=p.get("delta0", 0.01),
                     strategy=make_strategy(p), dcd=dcd,
                     structure=p.get("structure", "general"), vff=vff)


def _make_robust_rls(spec, M):
    p = spec.params
    return RobustRLS(M, lam=p.get("lam", 0.998), delta0=p.get("delta0", 0.01),
                     strategy=make_strategy(p))


def _make_rls(spec, M):
    p = spec.params
    return RLS(M, lam=p.get("lam", 0.998), delta0=p.get("delta0", 0.01))


def _make_rmcc(spec, M):
    p = spec.params
    return RMCC(M, lam=p.get("lam", 0.998), delta0=p.get("delta0", 0.01),
                beta2=p.get("beta2", 0.03))


def _make_gd_mcc(spec, M):
    p = spec.params
    return GdMcc(M, mu=p.get("mu", 0.001), beta2=p.get("beta2", 0.6))


def _make_lms(spec, M):
    return Lms(M, mu=spec.params.get("mu", 0.01))


# Maps algorithm kinds to the factory that builds a fresh filter
factories = {
    "dcd": _make_dcd,
    "robust_rls": _make_robust_rls,
    "rls": _make_rls,
    "rmcc": _make_rmcc,
    "gd_mcc": _make_gd_mcc,
    "lms": _make_lms,
}

#: Parameter keys understood by each algorithm kind.
PARAMS = {
    "dcd": ("strategy", "beta2", "tau", "zeta", "n_w", "p", "epsilon", "lam",
            "delta0", "H", "Mb", "Nu", "structure", "vff", "rho", "lambda_min",
            "vff_tau", "vff_zeta", "vff_n_w", "impulse_free"),
    "robust_rls": ("strategy", "beta2", "tau", "zeta", "n_w", "p", "epsilon",
                   "lam", "delta0"),
    "rls": ("lam", "delta0"),
    "rmcc": ("lam", "delta0", "beta2"),
    "gd_mcc": ("mu", "beta2"),
    "lms": ("mu",),
}


@dataclass
class AlgorithmSpec:
    """One algorithm of an experiment.

    :param str name: Column name in the output files.
    :param str kind: Key of :data:`factories`.
    :param dict params: Factory parameters.
    :param str group: Output file the trace goes to.

    """
    name: str
    kind: str
    params: dict = field(default_factory=dict)
    group: str = "nmsd"

    def __post_init__(self):
        if self.kind not in factories:
            raise UsageError("Unknown algorithm kind {!r}; available: {}".format(
                self.kind, ", ".join(sorted(factories))))
        unknown = set(self.params) - set(PARAMS[self.kind])
        if unknown:
            raise UsageError("{}: unknown parameters {}".format(
                self.name, ", ".join(sorted(unknown))))

    def build(self, M):
        """Return a freshly initialized filter of length ``M``."""
        return factories[self.kind](self, M)

    def dcd_config(self):
        """Return the :class:`DcdConfig` of a DCD algorithm, else None."""
        if self.kind != "dcd":
            return None
        p = self.params
        return DcdConfig(H=p.get("H", 1.), Mb=p.get("Mb", 16), Nu=p.get("Nu", 8))
