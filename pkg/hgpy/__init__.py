"""hgpy - hypergraph-product codes in Python

Quantum CSS codes built as hypergraph products of biregular bipartite
graphs, a linear-time small-set-flip decoder, brute-force reference oracles
and a command line harness for verification and decoding experiments.
"""
import importlib.metadata
import os
import sys
from typing import Any, Dict, Union

import hgpy.configuration

__author__ = 'hgpy developers'
__license__ = 'GPLv3'
__status__ = 'Alpha'

try:
    __version__ = importlib.metadata.version('hgpy')
except importlib.metadata.PackageNotFoundError:
    # Running from a source tree that was never installed
    __version__ = '0.0.0'


# Check this version is a cloned repo and add commit hash to version
def get_version() -> str:

    try:
        # Import gitpython here, it is only useful in a checkout
        import git

        path = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
        repo = git.Repo(path)

        # Get current HEAD
        commit_hash = repo.git.rev_parse('HEAD')

    except Exception:
        return __version__

    else:
        # Append to version
        return f'{__version__}-{commit_hash[:8]}'


def load_config_data_from_string(_config: Union[str, Dict[str, Any], None]) -> Union[Dict[str, Any], None]:
    """Apply configuration given as YAML file path or dictionary"""

    if _config is None:
        return None

    # If _config is a dictionary, assume it contains the configuration
    if isinstance(_config, dict):
        hgpy.configuration.set_configuration_data(_config)
        return _config

    try:
        return hgpy.configuration.load_configuration(_config)
    except FileNotFoundError:
        print(f'ERROR: configuration file {_config} does not exist', file=sys.stderr)
        raise
