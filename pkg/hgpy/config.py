"""Configuration module

Module-level settings. Values are replaced in place by
hgpy.configuration.set_configuration_data when a YAML file is loaded.
"""
from typing import List

PRESERVED_ORDER: List[str] = []
CONFIG_FILEPATH: str = ''

# Graph generation
GENERATION_MAX_ATTEMPTS: int = 1000

# Code dimension by full elimination up to this many qubits
CODE_RANK_MAX_QUBITS: int = 20000

# Expansion certification
EXPANSION_MAX_SUBSETS: int = 10**8
EXPANSION_SAMPLES: int = 1000

# Decoder
DECODER_MAX_GENERATOR_WEIGHT: int = 20
DECODER_SCORE_CHUNK: int = 2**14

# Oracles
ORACLE_MAX_ENUMERATION_BITS: int = 24
ORACLE_MAX_ENUMERATION: int = 2**24
ORACLE_MAX_COSET_RANK: int = 20

# verify
VERIFY_RANDOM_TRIALS: int = 1000
VERIFY_MAX_SUBSET_SIZE: int = 5
VERIFY_EXHAUSTIVE_WEIGHT: int = 2
VERIFY_DELTA_A: float = 0.45
VERIFY_DELTA_B: float = 0.45
VERIFY_DECODING_DELTA_A: float = 0.16
VERIFY_DECODING_DELTA_B: float = 0.16

# simulate
SIM_TRIALS_PER_WEIGHT: int = 100
SIM_THREADS: int = 1

# Logging
LOG_LEVEL: str = 'INFO'
LOG_FILE: str = ''
