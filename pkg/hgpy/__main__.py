"""CLI utility for hgpy
"""
import argparse
import sys
from typing import List, Union

from hgpy import config
from hgpy.definitions import *
import hgpy.core.logger as hglogger
from hgpy.core.exceptions import GraphGenerationError, HgpyError, HypothesisError, InfeasibleError, OracleInvariantError

log = hglogger.getLogger('hgpy.cli')


def _add_common_arguments(parser: argparse.ArgumentParser, formats: bool = False):
    parser.add_argument('--seed', dest='seed', type=int, default=0, help='Master seed (64 bit)')
    parser.add_argument('--out', dest='out', type=str, help='Output path (stdout if omitted where supported)')
    parser.add_argument('--threads', dest='threads', type=int, default=None, help='Worker processes')
    parser.add_argument('-c', '--config', dest='config', type=str,
                        help='Path to a YAML configuration file')
    parser.add_argument('--log-file', dest='log_file', type=str, help='Also write the log to this file')
    parser.add_argument('--log-level', dest='log_level', type=str, help='Console log level')
    if formats:
        parser.add_argument('--format', dest='format', choices=[FORMAT_JSON, FORMAT_CSV, FORMAT_HDF5],
                            default=FORMAT_JSON, help='Result file format')


def get_parsed_arguments(args_in: List[str]) -> argparse.Namespace:
    import hgpy.modules.construct as hgconstruct

    parser = argparse.ArgumentParser(prog='hgpy', description='hgpy CLI')
    commands = parser.add_subparsers(dest='command', metavar='command', required=True)

    # gen-graph
    p = commands.add_parser(CMD_GEN_GRAPH, help='Generate a random biregular bipartite graph')
    _add_common_arguments(p)
    hgconstruct.add_graph_arguments(p)

    # build-code
    p = commands.add_parser(CMD_BUILD_CODE, help='Build the hypergraph-product code of a graph')
    _add_common_arguments(p)
    hgconstruct.add_graph_arguments(p)

    # verify
    p = commands.add_parser(CMD_VERIFY, help='Run the oracle verification suite')
    _add_common_arguments(p)
    hgconstruct.add_graph_arguments(p)
    p.add_argument('--checks', dest='checks', type=str, help='Comma separated checks to run')
    p.add_argument('--delta-a', dest='delta_a', type=float, help='Left delta of the distance family')
    p.add_argument('--delta-b', dest='delta_b', type=float, help='Right delta of the distance family')
    p.add_argument('--decoding-delta-a', dest='decoding_delta_a', type=float,
                   help='Left delta of the decoding family (below 1/6)')
    p.add_argument('--decoding-delta-b', dest='decoding_delta_b', type=float,
                   help='Right delta of the decoding family (below 1/6)')
    p.add_argument('--max-subset-size', dest='max_subset_size', type=int, help='Expansion enumeration cap')
    p.add_argument('--random-trials', dest='random_trials', type=int, help='Random errors per suite')
    p.add_argument('--exhaustive-weight', dest='exhaustive_weight', type=int,
                   help='Largest exhaustively enumerated error weight')

    # simulate
    p = commands.add_parser(CMD_SIMULATE, help='Run decoding trials')
    _add_common_arguments(p, formats=True)
    hgconstruct.add_graph_arguments(p)
    p.add_argument('--weights', dest='weights', type=str, default='1-5',
                   help="Error weights, e.g. '0,1,2' or '1-10' or '2-20:2'")
    p.add_argument('--trials', dest='trials', type=int, help='Trials per weight (random model)')
    p.add_argument('--error-model', dest='error_model', default=ErrorModel.RANDOM_SUPPORT.value,
                   choices=[m.value for m in ErrorModel])
    p.add_argument('--side', dest='side', default=Side.X.value, choices=[Side.X.value, Side.Z.value, 'both'])
    p.add_argument('--gamma-a', dest='gamma_a', type=float, help='Asserted left gamma')
    p.add_argument('--gamma-b', dest='gamma_b', type=float, help='Asserted right gamma')
    p.add_argument('--delta-a', dest='delta_a', type=float, help='Left delta (asserted or certified)')
    p.add_argument('--delta-b', dest='delta_b', type=float, help='Right delta (asserted or certified)')
    p.add_argument('--certify-size', dest='certify_size', type=int,
                   help='Certify gamma by exhaustive enumeration of subsets up to this size')

    # bench
    p = commands.add_parser(CMD_BENCH, help='Benchmark decoding across code sizes')
    _add_common_arguments(p)
    p.add_argument('--sizes', dest='sizes', type=str, default='40,80,160,320', help='Comma separated n_A values')
    p.add_argument('--da', dest='degree_a', type=int, default=3, help='Left degree')
    p.add_argument('--db', dest='degree_b', type=int, default=4, help='Right degree')
    p.add_argument('--weight', dest='weight', type=int, default=5, help='Fixed error weight')
    p.add_argument('--sqrt-factor', dest='sqrt_factor', type=float, default=0.25,
                   help='Second error weight is sqrt-factor * sqrt(n)')
    p.add_argument('--trials', dest='trials', type=int, default=20, help='Decodes per size and weight')

    return parser.parse_args(args_in)


def _setup(parsed_args: argparse.Namespace):
    import hgpy

    if parsed_args.config is not None:
        hgpy.load_config_data_from_string(parsed_args.config)

    hglogger.setup_console(parsed_args.log_level or config.LOG_LEVEL)
    log_file = parsed_args.log_file or config.LOG_FILE
    if log_file:
        hglogger.setup_log_to_file(log_file)

    if parsed_args.threads is None and parsed_args.command != CMD_SIMULATE:
        parsed_args.threads = 1


def run_command(parsed_args: argparse.Namespace) -> int:
    import hgpy.modules as hgmodules

    commands = {
        CMD_GEN_GRAPH: hgmodules.cmd_gen_graph,
        CMD_BUILD_CODE: hgmodules.cmd_build_code,
        CMD_VERIFY: hgmodules.cmd_verify,
        CMD_SIMULATE: hgmodules.cmd_simulate,
        CMD_BENCH: hgmodules.cmd_bench,
    }
    return int(commands[parsed_args.command](parsed_args))


def main(args: Union[List[str], None] = None) -> int:
    """Entry point; returns the exit code (0 success, 1 check failure, 2 usage error, 3 infeasible)"""
    try:
        parsed_args = get_parsed_arguments(sys.argv[1:] if args is None else args)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors and 0 on --help
        return int(exc.code or 0)

    try:
        _setup(parsed_args)
        return run_command(parsed_args)

    except InfeasibleError as exc:
        log.error(f'Infeasible request: {exc}')
        return ExitCode.INFEASIBLE

    except (OracleInvariantError, HypothesisError) as exc:
        log.error(f'{exc.__class__.__name__}: {exc}')
        return ExitCode.CHECK_FAILURE

    except GraphGenerationError as exc:
        log.error(f'{exc} after {exc.attempts} attempts')
        return ExitCode.CHECK_FAILURE

    except (HgpyError, ValueError, FileNotFoundError) as exc:
        log.error(f'{exc.__class__.__name__}: {exc}')
        return ExitCode.USAGE_ERROR


if __name__ == '__main__':
    sys.exit(main())
