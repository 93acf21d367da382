"""Decoding simulation command

Runs one decoding trial per generated error and streams the records into
the selected result container, followed by a summary with per-weight
success rates and the guaranteed weight w0.
"""
import argparse
import os

import hgpy
from hgpy import config
from hgpy.definitions import *
import hgpy.configuration as hgconfiguration
import hgpy.core.code as hgcode
import hgpy.core.container as hgcontainer
import hgpy.core.logger as hglogger
import hgpy.core.process as hgprocess
import hgpy.core.trial as hgtrial
import hgpy.modules.construct as hgconstruct
from hgpy.core.exceptions import InvalidInputError
from hgpy.oracle.critical import ExpansionBounds

log = hglogger.getLogger(__name__)


def parse_weights(text: str) -> tuple:
    """'0,1,2' or '1-5' or '1-9:2' into a tuple of weights"""
    weights = []
    for part in text.split(','):
        part = part.strip()
        if not part:
            continue
        step = 1
        if ':' in part:
            part, step = part.split(':')
            step = int(step)
        if '-' in part:
            lo, hi = part.split('-')
            weights.extend(range(int(lo), int(hi) + 1, step))
        else:
            weights.append(int(part))
    if not weights:
        raise InvalidInputError(f'No error weights in {text!r}')
    return tuple(weights)


def expansion_bounds(args: argparse.Namespace, G) -> ExpansionBounds:
    """Certified bounds (--certify-size), asserted bounds (--gamma/--delta) or None"""
    if args.certify_size is not None:
        if args.delta_a is None or args.delta_b is None:
            raise InvalidInputError('--certify-size needs --delta-a and --delta-b')
        return hgtrial.certify_bounds(G, args.delta_a, args.delta_b, args.certify_size)

    asserted = (args.gamma_a, args.delta_a, args.gamma_b, args.delta_b)
    if all(v is None for v in asserted):
        return None
    if any(v is None for v in asserted):
        raise InvalidInputError('Asserted expansion needs all of --gamma-a, --delta-a, --gamma-b, --delta-b')

    log.warning('Using asserted expansion parameters, w0 is reported as assumed')
    return ExpansionBounds.create(*asserted, n_a=G.n_A, n_b=G.n_B, certified=False)


def cmd_simulate(args: argparse.Namespace) -> int:
    G = hgconstruct.load_graph(args)
    C = hgcode.build_hypergraph_product(G)
    k = hgcode.code_dimension(C)

    weights = parse_weights(args.weights)
    trials_per_weight = config.SIM_TRIALS_PER_WEIGHT if args.trials is None else args.trials
    cfg = hgtrial.TrialConfig(weights=weights, error_model=args.error_model, trials_per_weight=trials_per_weight,
                              seed=args.seed, side=args.side, bounds=expansion_bounds(args, G))
    cfg.validate(C.n)

    if k == 0:
        log.warning(f'{C} has k=0; running syndrome-zeroing trials only, no decoding-success verdicts')

    total = hgtrial.trial_count(cfg, C.n)
    log.info(f'Simulate {total} trials ({cfg.error_model.value}) on {C} with k={k}')

    threads = config.SIM_THREADS if args.threads is None else args.threads
    records = hgprocess.run_trials(C, cfg, hgtrial.generate_trials(cfg, C.n), threads=threads, k=k)

    summary = {'schema': SCHEMA_VERSION, 'version': hgpy.get_version()}
    summary.update(hgtrial.summarize(records, cfg, C, k))
    summary['config'] = cfg.to_dict()

    out = args.out
    if out is None:
        out = os.path.join(os.getcwd(), f'simulate_{args.seed}.{args.format}')
    hgcontainer.new(args.format, out)
    try:
        for r in records:
            hgcontainer.add_record(r.to_dict())
        hgcontainer.set_summary(summary)
    finally:
        hgcontainer.close()
    hgconfiguration.save_run_configuration(out)

    if summary['guaranteed_failures'] or summary['flip_budget_violations']:
        log.error(f'{summary["guaranteed_failures"]} guaranteed trials failed, '
                  f'{summary["flip_budget_violations"]} exceeded the flip budget')
        return ExitCode.CHECK_FAILURE
    return ExitCode.SUCCESS
