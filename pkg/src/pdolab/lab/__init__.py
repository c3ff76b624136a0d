from .config import ConfigError, ExperimentConfig, load_config, parse_config_text
from .experiments import ExperimentReport, NumericalError, audit, run_experiment, summarize
from .orders import critical_order

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "ExperimentReport",
    "NumericalError",
    "audit",
    "critical_order",
    "load_config",
    "parse_config_text",
    "run_experiment",
    "summarize",
]
