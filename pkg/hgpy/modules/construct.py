"""Graph and code construction commands
"""
import argparse
import json
import sys

import hgpy
from hgpy.definitions import *
import hgpy.core.code as hgcode
import hgpy.core.graph as hggraph
import hgpy.core.logger as hglogger
from hgpy.core.exceptions import InvalidInputError

log = hglogger.getLogger(__name__)


def add_graph_arguments(parser: argparse.ArgumentParser):
    """Graph source options shared by build-code, verify and simulate"""
    group = parser.add_argument_group('graph')
    group.add_argument('--graph', dest='graph', type=str, help='Path to a graph file')
    group.add_argument('--na', dest='n_a', type=int, help='Number of left vertices')
    group.add_argument('--nb', dest='n_b', type=int, help='Number of right vertices')
    group.add_argument('--da', dest='degree_a', type=int, help='Left degree')
    group.add_argument('--db', dest='degree_b', type=int, help='Right degree')


def load_graph(args: argparse.Namespace, check: bool = True) -> hggraph.BipartiteGraph:
    """Read the graph file given with --graph or generate one from --na/--nb/--da/--db"""
    if args.graph is not None:
        log.info(f'Read graph from {args.graph}')
        return hggraph.read_graph(args.graph, check=check)

    params = (args.n_a, args.n_b, args.degree_a, args.degree_b)
    if any(p is None for p in params):
        raise InvalidInputError('Either --graph or all of --na, --nb, --da, --db are required')

    return hggraph.generate_biregular(*params, seed=args.seed)


def cmd_gen_graph(args: argparse.Namespace) -> int:
    G = load_graph(args)
    log.info(f'Generated {G} from seed {args.seed}')

    if args.out is None:
        sys.stdout.write(hggraph.format_graph(G))
    else:
        hggraph.write_graph(G, args.out)

    return ExitCode.SUCCESS


def cmd_build_code(args: argparse.Namespace) -> int:
    G = load_graph(args)
    C = hgcode.build_hypergraph_product(G)
    header = {'schema': SCHEMA_VERSION, 'version': hgpy.get_version()}
    header.update(hgcode.code_header(C))
    log.info(f'Built {C} with k={header["k"]}')

    if args.out is not None:
        hgcode.write_code(C, args.out, k=header['k'])
    else:
        sys.stdout.write(json.dumps(header) + '\n')

    return ExitCode.SUCCESS
