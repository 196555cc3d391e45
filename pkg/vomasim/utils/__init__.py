from .config import ParamConfig, load_params, parse_param_pairs
from .tools import setup_logger, stderr_console, track

__all__ = ['ParamConfig', 'load_params', 'parse_param_pairs', 'setup_logger', 'stderr_console', 'track']
