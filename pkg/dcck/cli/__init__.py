from .config import config_value, KEYS, load_config, parse_config, RunConfig
from .main import build_parser, main

__all__ = (
    'config_value', 'KEYS', 'load_config', 'parse_config', 'RunConfig',
    'build_parser', 'main',
)
