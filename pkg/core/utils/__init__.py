"""
Configuration helpers
"""
from .config_loader import DEFAULT_CONFIG_PATH, RunConfig, build_run_config, load_config, validate_config

__all__ = ['DEFAULT_CONFIG_PATH', 'RunConfig', 'build_run_config', 'load_config', 'validate_config']
