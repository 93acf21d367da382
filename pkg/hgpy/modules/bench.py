"""Scaling benchmark

For a sequence of left sizes at fixed degrees, builds a code per size and
times decoding of X errors of a fixed weight and of weight proportional to
sqrt(n). Generator evaluations are counted by the decoder and reported per
unit of initial syndrome weight, which stays flat when decoding is linear.
"""
import argparse
import json
import math
import sys
import time
from typing import Any, Dict, List, Sequence

import numpy as np

import hgpy
from hgpy.definitions import *
import hgpy.core.code as hgcode
import hgpy.core.container as hgcontainer
import hgpy.core.decoder as hgdecoder
import hgpy.core.gf2 as hggf2
import hgpy.core.graph as hggraph
import hgpy.core.logger as hglogger
import hgpy.core.trial as hgtrial
from hgpy.core.exceptions import InvalidInputError

log = hglogger.getLogger(__name__)

# Decodes per size compared against the full-rescan decoder
SHADOW_TRIALS = 5

WEIGHT_FIXED = 'fixed'
WEIGHT_SQRT = 'sqrt'


def _decode_stats(C: hgcode.CssCode, decoder: hgdecoder.SmallSetFlipDecoder, weight: int, trials: int,
                  rng: np.random.Generator) -> Dict[str, Any]:
    times, evaluations, syndromes, successes = [], [], [], 0
    for _ in range(trials):
        support = rng.choice(C.n, size=weight, replace=False)
        s = hgcode.syndrome_x(C, hggf2.Gf2Vector.from_support(C.n, support))

        t0 = time.perf_counter()
        result = decoder.decode(s)
        times.append(time.perf_counter() - t0)

        evaluations.append(result.evaluations)
        syndromes.append(result.initial_syndrome_weight)
        successes += int(result.success)

    total_syndrome = sum(syndromes)
    return {
        'weight': weight,
        'trials': trials,
        'mean_decode_time': float(np.mean(times)) if times else 0.0,
        'mean_evaluations': float(np.mean(evaluations)) if evaluations else 0.0,
        'mean_syndrome_weight': float(np.mean(syndromes)) if syndromes else 0.0,
        'evaluations_per_syndrome_unit': sum(evaluations) / total_syndrome if total_syndrome else None,
        'success_rate': successes / trials if trials else None,
    }


def _equivalence_flags(C: hgcode.CssCode, decoder: hgdecoder.SmallSetFlipDecoder, weight: int,
                       rng: np.random.Generator) -> Dict[str, bool]:
    """Incremental vs full-rescan flip sequences and trace-on vs trace-off corrections"""
    full = hgdecoder.SmallSetFlipDecoder(C, Side.X, incremental=False, shadow=True)
    shadow_equal = trace_equal = True
    for _ in range(SHADOW_TRIALS):
        support = rng.choice(C.n, size=weight, replace=False)
        s = hgcode.syndrome_x(C, hggf2.Gf2Vector.from_support(C.n, support))
        traced = decoder.decode(s, trace_on=True)
        plain = decoder.decode(s)
        reference = full.decode(s, trace_on=True)
        trace_equal &= traced.correction == plain.correction
        shadow_equal &= [(t.generator, t.flip) for t in traced.trace] == \
            [(t.generator, t.flip) for t in reference.trace]
    return {'shadow_equal': bool(shadow_equal), 'trace_equal': bool(trace_equal)}


def run_bench(sizes: Sequence[int], delta_a: int, delta_b: int, weight: int, sqrt_factor: float,
              trials: int, seed: int) -> List[Dict[str, Any]]:
    rows = []
    for ordinal, n_a in enumerate(sizes):
        if (n_a * delta_a) % delta_b:
            raise InvalidInputError(f'n_A={n_a} does not give an integer n_B for degrees ({delta_a}, {delta_b})')
        n_b = n_a * delta_a // delta_b

        t0 = time.perf_counter()
        G = hggraph.generate_biregular(n_a, n_b, delta_a, delta_b, seed=hgtrial.mix_seed(seed, ordinal))
        C = hgcode.build_hypergraph_product(G)
        decoder = hgdecoder.SmallSetFlipDecoder(C, Side.X)
        construction = time.perf_counter() - t0

        rng = np.random.default_rng(hgtrial.mix_seed(seed, len(sizes) + ordinal))
        sqrt_weight = max(1, min(C.n, round(sqrt_factor * math.sqrt(C.n))))
        row = {'n_A': n_a, 'n_B': n_b, 'n': C.n, 'construction_time': construction,
               WEIGHT_FIXED: _decode_stats(C, decoder, min(weight, C.n), trials, rng),
               WEIGHT_SQRT: _decode_stats(C, decoder, sqrt_weight, trials, rng)}
        row.update(_equivalence_flags(C, decoder, min(weight, C.n), rng))

        log.info(f'n={C.n}: {row[WEIGHT_FIXED]["mean_evaluations"]:.1f} evaluations at weight {weight}, '
                 f'{row[WEIGHT_SQRT]["mean_evaluations"]:.1f} at weight {sqrt_weight}')
        rows.append(row)
    return rows


def cmd_bench(args: argparse.Namespace) -> int:
    sizes = [int(s) for s in args.sizes.split(',') if s.strip()]
    if not sizes:
        raise InvalidInputError('No sizes given')
    if args.degree_a is None or args.degree_b is None:
        raise InvalidInputError('bench needs --da and --db')

    rows = run_bench(sizes, args.degree_a, args.degree_b, args.weight, args.sqrt_factor, args.trials, args.seed)
    document = {'schema': SCHEMA_VERSION, 'version': hgpy.get_version(), 'kind': 'bench',
                'delta_A': args.degree_a, 'delta_B': args.degree_b, 'seed': args.seed, 'sizes': rows}

    if args.out is None:
        sys.stdout.write(json.dumps(hgcontainer.to_jsonable(document), indent=2) + '\n')
    else:
        hgcontainer.write_document(args.out, document)

    if not all(r['shadow_equal'] and r['trace_equal'] for r in rows):
        log.error('Incremental and full-rescan decoding disagree')
        return ExitCode.CHECK_FAILURE
    return ExitCode.SUCCESS
