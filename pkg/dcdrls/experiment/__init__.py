from .config import ExperimentConfig, load_config
from .runner import NmsdTrace, run_experiment
from .outputs import emit_outputs
