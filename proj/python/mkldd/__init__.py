"""Flow features, adaptive multiple-kernel models and the two-model detector."""

from ._mkldd import (
    Config,
    ConfigError,
    DataError,
    Model,
    Thresholds,
    arbitrate,
    check_rule,
    extract_features,
    load_model,
    metrics,
    synthetic_features,
    train,
)

NORMAL = 1
ATTACK = -1

__all__ = [
    "ATTACK",
    "NORMAL",
    "Config",
    "ConfigError",
    "DataError",
    "Model",
    "Thresholds",
    "arbitrate",
    "check_rule",
    "extract_features",
    "load_model",
    "metrics",
    "synthetic_features",
    "train",
]
