"""Core configuration module

Provides methods for loading, setting and saving configurations.
"""
import os
from typing import Any, Dict, Union

import yaml

from hgpy import config
import hgpy.core.logger as hglogger

log = hglogger.getLogger(__name__)


def load_configuration(filepath: str) -> Union[None, Dict[str, Any]]:
    log.debug(f'Load configuration file {filepath}')

    if not os.path.exists(filepath):
        log.error('Failed to load configuration. File does not exist.')
        raise FileNotFoundError(filepath)

    with open(filepath, 'r') as f:
        _config_data = yaml.safe_load(f) or {}

    if not isinstance(_config_data, dict):
        raise ValueError(f'Configuration file {filepath} does not contain a mapping')

    # Preserve order of configuration items in file
    config.PRESERVED_ORDER = list(_config_data.keys())
    config.CONFIG_FILEPATH = filepath
    set_configuration_data(_config_data)

    return _config_data


def set_configuration_data(_config_data: Dict[str, Any]):
    for key, value in _config_data.items():
        if not hasattr(config, key):
            log.warning(f'Unknown configuration key {key}')
    config.__dict__.update(_config_data)


def get_configuration_data(full: bool = False) -> Dict[str, Any]:
    if config.PRESERVED_ORDER and not full:
        return {k: getattr(config, k) for k in config.PRESERVED_ORDER}

    return {k: v for k, v in vars(config).items()
            if k.isupper() and k not in ('PRESERVED_ORDER', 'CONFIG_FILEPATH')}


def save_configuration(filepath: str = None, _config_data: Union[None, Dict] = None) -> bool:
    if filepath is None:
        filepath = config.CONFIG_FILEPATH
    log.info(f'Save current configuration to file {filepath}')

    if not filepath.endswith('.yaml'):
        log.error('Abort saving configuration. File path may be wrong. Use .yaml extension.')
        return False

    # If _config_data is None, save currently set config
    if _config_data is None:
        _config_data = get_configuration_data()

    with open(filepath, 'w') as f:
        yaml.safe_dump(_config_data, f, sort_keys=False)

    return True


def save_run_configuration(out_path: str) -> str:
    """Write every effective setting next to a run output as <out_path>.config.yaml"""
    filepath = f'{out_path}.config.yaml'
    save_configuration(filepath, get_configuration_data(full=True))
    return filepath
