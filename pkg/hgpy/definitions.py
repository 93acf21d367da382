"""Global definitions module
"""
from enum import Enum, IntEnum

# Output schema version of every JSON document written by the CLI
SCHEMA_VERSION = 1

# Default paths
PATH_PACKAGE = 'hgpy'
PATH_CONFIG = 'configurations'
PATH_LOG = 'logs'

# Commands
CMD_GEN_GRAPH = 'gen-graph'
CMD_BUILD_CODE = 'build-code'
CMD_VERIFY = 'verify'
CMD_SIMULATE = 'simulate'
CMD_BENCH = 'bench'

# Result formats
FORMAT_JSON = 'json'
FORMAT_CSV = 'csv'
FORMAT_HDF5 = 'hdf5'

# Qubit kinds
KIND_AA = 'AA'
KIND_BB = 'BB'

# Seed mixing constants (splitmix64 finalizer)
SEED_GOLDEN_GAMMA = 0x9E3779B97F4A7C15
SEED_MIX_1 = 0xBF58476D1CE4E5B9
SEED_MIX_2 = 0x94D049BB133111EB
SEED_SHIFTS = (30, 27, 31)
MASK_64 = (1 << 64) - 1


class Side(Enum):
    """Error type being decoded. X errors are seen by h_x and corrected
    with flips inside rows of h_z, Z errors the other way round."""
    X = 'X'
    Z = 'Z'

    @property
    def other(self) -> 'Side':
        return Side.Z if self is Side.X else Side.X


class GraphSide(Enum):
    """Side of the bipartite base graph"""
    LEFT = 'left'
    RIGHT = 'right'

    @property
    def other(self) -> 'GraphSide':
        return GraphSide.RIGHT if self is GraphSide.LEFT else GraphSide.LEFT


class ExpansionMode(Enum):
    EXHAUSTIVE = 'exhaustive'
    SAMPLED = 'sampled'


class ErrorModel(Enum):
    RANDOM_SUPPORT = 'adversarial-random-support'
    EXHAUSTIVE = 'exhaustive-up-to-weight'


class CheckStatus(Enum):
    PASS = 'pass'
    FAIL = 'fail'
    NOT_APPLICABLE = 'not_applicable'
    SKIPPED_INFEASIBLE = 'skipped_infeasible'


class ExitCode(IntEnum):
    SUCCESS = 0
    CHECK_FAILURE = 1
    USAGE_ERROR = 2
    INFEASIBLE = 3
