# -*- coding: utf-8 -*-
"""Decoding trials

A trial draws (or enumerates) an error, decodes its syndrome and checks the
correction against the error up to stabilizers. Errors are fixed in the
parent process from the master seed, so records do not depend on how trials
are distributed over workers.
"""
from __future__ import annotations

import hashlib
import itertools
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterator, Sequence, Tuple, Union

import numpy as np

from hgpy.definitions import *
import hgpy.core.code as hgcode
import hgpy.core.decoder as hgdecoder
import hgpy.core.gf2 as hggf2
import hgpy.core.graph as hggraph
import hgpy.core.logger as hglogger
import hgpy.oracle.distance as hgdistance
from hgpy.core.exceptions import InvalidInputError
from hgpy.oracle.critical import ExpansionBounds

log = hglogger.getLogger(__name__)

SIDE_BOTH = 'both'

# Pauli type of a support qubit when both error types are drawn
_PAULI = ('X', 'Z', 'Y')


def mix_seed(master: int, ordinal: int) -> int:
    """Per-trial seed, splitmix64 finalizer of master + (ordinal + 1) * golden gamma"""
    z = (master + (ordinal + 1) * SEED_GOLDEN_GAMMA) & MASK_64
    z = ((z ^ (z >> SEED_SHIFTS[0])) * SEED_MIX_1) & MASK_64
    z = ((z ^ (z >> SEED_SHIFTS[1])) * SEED_MIX_2) & MASK_64
    return z ^ (z >> SEED_SHIFTS[2])


def sides_of(side: str) -> Tuple[Side, ...]:
    if side == SIDE_BOTH:
        return Side.X, Side.Z
    return (Side(side),)


@dataclass
class TrialConfig:
    weights: Tuple[int, ...]
    error_model: ErrorModel = ErrorModel.RANDOM_SUPPORT
    trials_per_weight: int = 100
    seed: int = 0
    side: str = Side.X.value
    bounds: Union[ExpansionBounds, None] = None
    trace: bool = False

    def __post_init__(self):
        self.error_model = ErrorModel(self.error_model)
        self.weights = tuple(int(w) for w in self.weights)
        if self.side != SIDE_BOTH:
            Side(self.side)
        if any(w < 0 for w in self.weights):
            raise InvalidInputError(f'Negative error weight in {self.weights}')

    def validate(self, n: int):
        if any(w > n for w in self.weights):
            raise InvalidInputError(f'Error weights {self.weights} exceed n={n}')

    def to_dict(self) -> Dict[str, Any]:
        return {'weights': list(self.weights), 'error_model': self.error_model.value,
                'trials_per_weight': self.trials_per_weight, 'seed': self.seed, 'side': self.side,
                'bounds': None if self.bounds is None else self.bounds.to_dict()}


@dataclass(frozen=True)
class TrialSpec:
    trial_id: int
    weight: int
    x_support: Tuple[int, ...]
    z_support: Tuple[int, ...]

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.x_support) | set(self.z_support)))


@dataclass
class TrialRecord:
    trial_id: int
    weight: int
    support_hash: str
    success: bool
    correctly_decoded: Union[bool, None]
    iterations: int
    flipped_total: int
    syndrome_weight: int
    evaluations: int
    guaranteed: bool
    flip_budget_ok: bool
    wall_time: float = field(default=0.0, compare=False)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def support_hash(spec: TrialSpec) -> str:
    text = 'x:' + ','.join(map(str, spec.x_support)) + ';z:' + ','.join(map(str, spec.z_support))
    return hashlib.blake2b(text.encode(), digest_size=8).hexdigest()


def _split_paulis(support: Sequence[int], paulis: Sequence[int], side: str) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    if side == Side.X.value:
        return tuple(support), ()
    if side == Side.Z.value:
        return (), tuple(support)
    x = tuple(q for q, p in zip(support, paulis) if _PAULI[p] in ('X', 'Y'))
    z = tuple(q for q, p in zip(support, paulis) if _PAULI[p] in ('Z', 'Y'))
    return x, z


def trial_count(cfg: TrialConfig, n: int) -> int:
    if cfg.error_model is ErrorModel.RANDOM_SUPPORT:
        return cfg.trials_per_weight * len(cfg.weights)
    types = 3 if cfg.side == SIDE_BOTH else 1
    return sum(math.comb(n, w) * types ** w for w in cfg.weights)


def generate_trials(cfg: TrialConfig, n: int) -> Iterator[TrialSpec]:
    """Trial errors in id order

    Exhaustive mode walks all supports of each weight (and all Pauli types
    per qubit when both sides are decoded). Random mode draws uniform
    supports from the per-trial seed.
    """
    cfg.validate(n)
    ordinal = 0

    if cfg.error_model is ErrorModel.EXHAUSTIVE:
        for w in cfg.weights:
            paulis = itertools.product(range(3), repeat=w) if cfg.side == SIDE_BOTH else [()]
            paulis = list(paulis)
            for support in itertools.combinations(range(n), w):
                for p in paulis:
                    x, z = _split_paulis(support, p, cfg.side)
                    yield TrialSpec(ordinal, w, x, z)
                    ordinal += 1
        return

    for w in cfg.weights:
        for _ in range(cfg.trials_per_weight):
            rng = np.random.default_rng(mix_seed(cfg.seed, ordinal))
            support = sorted(int(q) for q in rng.choice(n, size=w, replace=False))
            paulis = rng.integers(0, 3, size=w).tolist() if cfg.side == SIDE_BOTH else ()
            x, z = _split_paulis(support, paulis, cfg.side)
            yield TrialSpec(ordinal, w, x, z)
            ordinal += 1


class TrialRunner:
    """Decoders and code for running trials, one instance per worker"""

    def __init__(self, C: hgcode.CssCode, cfg: TrialConfig, k: int = None):
        self.code = C
        self.config = cfg
        self.k = hgcode.code_dimension(C) if k is None else k
        self.sides = sides_of(cfg.side)
        self.decoders = {side: hgdecoder.SmallSetFlipDecoder(C, side) for side in self.sides}
        self.w0 = None if cfg.bounds is None else cfg.bounds.w0(C.delta_B)

    def run(self, spec: TrialSpec) -> TrialRecord:
        t0 = time.perf_counter()
        C = self.code

        success, correct = True, self.k > 0
        iterations = flipped = syndrome_weight = evaluations = 0
        flip_budget_ok = True

        for side in self.sides:
            e = hggf2.Gf2Vector.from_support(C.n, spec.x_support if side is Side.X else spec.z_support)
            result = self.decoders[side].decode(hgcode.syndrome(C, side, e), trace_on=self.config.trace)

            success &= result.success
            if self.k > 0:
                correct &= result.success and hgdistance.is_correctly_decoded(C, e, result.correction, side)

            iterations += result.iterations
            flipped += result.flipped_total
            syndrome_weight += result.initial_syndrome_weight
            evaluations += result.evaluations
            flip_budget_ok &= result.flipped_total <= 3 * result.initial_syndrome_weight and \
                result.iterations <= result.initial_syndrome_weight

        guaranteed = self.w0 is not None and spec.weight < self.w0
        verdict = correct if self.k > 0 else success
        if guaranteed and not (verdict and flip_budget_ok):
            log.error(f'Trial {spec.trial_id} of weight {spec.weight} below w0={float(self.w0):.3f} '
                      f'violates the decoding guarantee')

        return TrialRecord(trial_id=spec.trial_id, weight=spec.weight, support_hash=support_hash(spec),
                           success=bool(success), correctly_decoded=bool(correct) if self.k > 0 else None,
                           iterations=iterations, flipped_total=flipped, syndrome_weight=syndrome_weight,
                           evaluations=evaluations, guaranteed=guaranteed, flip_budget_ok=bool(flip_budget_ok),
                           wall_time=time.perf_counter() - t0)


def certify_bounds(G: hggraph.BipartiteGraph, delta_a, delta_b, max_subset_size: int) -> ExpansionBounds:
    """Measure gamma on both sides by exhaustive enumeration up to the size cap"""
    left = hggraph.measure_expansion(G, GraphSide.LEFT, delta_a, max_subset_size)
    right = hggraph.measure_expansion(G, GraphSide.RIGHT, delta_b, max_subset_size)
    log.info(f'Measured gamma_A={left.gamma} ({left.max_size} vertices), '
             f'gamma_B={right.gamma} ({right.max_size} vertices)')
    return ExpansionBounds(left.gamma, left.delta, right.gamma, right.delta, G.n_A, G.n_B, certified=True)


def summarize(records: Sequence[TrialRecord], cfg: TrialConfig, C: hgcode.CssCode, k: int) -> Dict[str, Any]:
    per_weight: Dict[int, Dict[str, Any]] = {}
    for r in records:
        entry = per_weight.setdefault(r.weight, {'trials': 0, 'success': 0, 'correct': 0})
        entry['trials'] += 1
        entry['success'] += int(r.success)
        entry['correct'] += int(bool(r.correctly_decoded))

    weights = []
    for w in sorted(per_weight):
        entry = per_weight[w]
        weights.append({'weight': w, 'trials': entry['trials'],
                        'success_rate': entry['success'] / entry['trials'],
                        'correct_rate': entry['correct'] / entry['trials'] if k > 0 else None})

    guaranteed = [r for r in records if r.guaranteed]
    bounds = cfg.bounds
    if bounds is None:
        w0, w0_status = None, 'unknown'
    else:
        w0 = float(bounds.w0(C.delta_B))
        w0_status = 'certified' if bounds.certified else 'assumed'

    return {
        'kind': 'summary',
        'n': C.n, 'k': k, 'n_A': C.n_A, 'n_B': C.n_B, 'delta_A': C.delta_A, 'delta_B': C.delta_B,
        'error_model': cfg.error_model.value,
        'error_model_note': ('all supports of each weight' if cfg.error_model is ErrorModel.EXHAUSTIVE
                             else 'uniform random supports, not a worst-case search'),
        'side': cfg.side,
        'decoding_success_trials': k > 0,
        'trials': len(records),
        'per_weight': weights,
        'w0': w0,
        'w0_status': w0_status,
        'bounds': None if bounds is None else bounds.to_dict(),
        'guaranteed_trials': len(guaranteed),
        'guaranteed_failures': sum(1 for r in guaranteed
                                   if not (r.success if r.correctly_decoded is None else r.correctly_decoded)),
        'flip_budget_violations': sum(1 for r in guaranteed if not r.flip_budget_ok),
    }
