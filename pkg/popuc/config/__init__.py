from popuc.config.loader import get_config_path, load_config, save_config
from popuc.config.schema import (
    LoggingConfig,
    NumericsConfig,
    OutputConfig,
    PopucConfig,
    VerificationConfig,
)

__all__ = [
    "LoggingConfig",
    "NumericsConfig",
    "OutputConfig",
    "PopucConfig",
    "VerificationConfig",
    "get_config_path",
    "load_config",
    "save_config",
]
