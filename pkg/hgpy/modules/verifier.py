"""Verification suite

Runs the oracle checks on one graph and its code and reports a status per
check. Expansion is measured by exhaustive enumeration at two targets: the
distance family (delta < 1/2) and the decoding family (delta < 1/6, the
regime of critical generators and the decoding guarantee).
"""
from __future__ import annotations

import argparse
import functools
import itertools
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterator, List, Sequence, Tuple, Union

import numpy as np

import hgpy
from hgpy import config
from hgpy.definitions import *
import hgpy.configuration as hgconfiguration
import hgpy.core.code as hgcode
import hgpy.core.container as hgcontainer
import hgpy.core.decoder as hgdecoder
import hgpy.core.gf2 as hggf2
import hgpy.core.graph as hggraph
import hgpy.core.logger as hglogger
import hgpy.core.process as hgprocess
import hgpy.core.trial as hgtrial
import hgpy.modules.construct as hgconstruct
import hgpy.oracle.classical as hgclassical
import hgpy.oracle.critical as hgcritical
import hgpy.oracle.distance as hgdistance
from hgpy.core.exceptions import HypothesisError, InfeasibleError, InvalidInputError, OracleInvariantError

log = hglogger.getLogger(__name__)

CHECK_GRAPH_INVARIANTS = 'graph_invariants'
CHECK_UNIQUE_NEIGHBORS = 'unique_neighbor_expansion'
CHECK_EDGE_COUNT = 'edge_count_identity'
CHECK_CLASSICAL_DISTANCE = 'classical_distance'
CHECK_QUANTUM_DISTANCE = 'quantum_distance'
CHECK_CRITICAL_GENERATOR = 'critical_generator'
CHECK_SYNDROME_PARTITION = 'syndrome_partition'
CHECK_CRITICAL_FLIP = 'critical_flip'
CHECK_ROBUSTNESS = 'syndrome_robustness'
CHECK_DECODING = 'decoding_guarantee'
CHECK_FLIP_BUDGET = 'flip_budget'
CHECK_CLASSICAL_BASELINE = 'classical_baseline'
CHECK_INCREMENTAL = 'incremental_equivalence'

CHECKS = (CHECK_GRAPH_INVARIANTS, CHECK_UNIQUE_NEIGHBORS, CHECK_EDGE_COUNT, CHECK_CLASSICAL_DISTANCE,
          CHECK_QUANTUM_DISTANCE, CHECK_CRITICAL_GENERATOR, CHECK_SYNDROME_PARTITION, CHECK_CRITICAL_FLIP,
          CHECK_ROBUSTNESS, CHECK_DECODING, CHECK_FLIP_BUDGET, CHECK_CLASSICAL_BASELINE, CHECK_INCREMENTAL)

# Witnesses kept per check
MAX_WITNESSES = 10

# Trials of the incremental/full-rescan comparison
INCREMENTAL_TRIALS = 100


@dataclass
class CheckResult:
    name: str
    status: CheckStatus = CheckStatus.PASS
    detail: Dict[str, Any] = field(default_factory=dict)
    witnesses: List[Any] = field(default_factory=list)

    def fail(self, witness: Any):
        self.status = CheckStatus.FAIL
        if len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append(witness)

    def skip(self, reason: str):
        if self.status is CheckStatus.PASS:
            self.status = CheckStatus.SKIPPED_INFEASIBLE
        self.detail['reason'] = reason

    def not_applicable(self, reason: str):
        if self.status is CheckStatus.PASS:
            self.status = CheckStatus.NOT_APPLICABLE
        self.detail['reason'] = reason

    def to_dict(self) -> Dict[str, Any]:
        return {'check': self.name, 'status': self.status.value, 'detail': self.detail, 'witnesses': self.witnesses}


@dataclass
class Certification:
    family: str
    delta_a: Fraction
    delta_b: Fraction
    left: Union[hggraph.ExpansionMeasurement, None] = None
    right: Union[hggraph.ExpansionMeasurement, None] = None
    bounds: Union[hgcritical.ExpansionBounds, None] = None
    reason: str = ''

    def to_dict(self) -> Dict[str, Any]:
        return {'family': self.family, 'delta_a': float(self.delta_a), 'delta_b': float(self.delta_b),
                'left': None if self.left is None else self.left.to_dict(),
                'right': None if self.right is None else self.right.to_dict(),
                'bounds': None if self.bounds is None else self.bounds.to_dict(),
                'reason': self.reason or None}


def exit_code(results: Sequence[CheckResult]) -> ExitCode:
    statuses = {r.status for r in results}
    if CheckStatus.FAIL in statuses:
        return ExitCode.CHECK_FAILURE
    if CheckStatus.SKIPPED_INFEASIBLE in statuses:
        return ExitCode.INFEASIBLE
    return ExitCode.SUCCESS


def _exhaustive_supports(n: int, max_weight: int) -> Iterator[Tuple[int, ...]]:
    max_weight = min(max_weight, n)
    required = sum(math.comb(n, w) for w in range(1, max_weight + 1))
    if required > config.ORACLE_MAX_ENUMERATION:
        raise InfeasibleError(f'Enumerating {required} errors exceeds the ceiling of {config.ORACLE_MAX_ENUMERATION}',
                              required=required, limit=config.ORACLE_MAX_ENUMERATION)
    for w in range(1, max_weight + 1):
        yield from itertools.combinations(range(n), w)


def _random_support(rng: np.random.Generator, n: int, weight: int) -> Tuple[int, ...]:
    return tuple(sorted(int(q) for q in rng.choice(n, size=weight, replace=False)))


def _unique_neighbor_count(masks: Sequence[int], S: Sequence[int]) -> int:
    once = twice = 0
    for v in S:
        twice |= once & masks[v]
        once |= masks[v]
    return hggf2.popcount(once & ~twice)


class Verifier:

    def __init__(self, G: hggraph.BipartiteGraph, delta_a=None, delta_b=None,
                 decoding_delta_a=None, decoding_delta_b=None, max_subset_size: int = None,
                 seed: int = 0, threads: int = 1, random_trials: int = None, exhaustive_weight: int = None):
        self.graph = G
        self.seed = seed
        self.threads = threads
        self.max_subset_size = config.VERIFY_MAX_SUBSET_SIZE if max_subset_size is None else max_subset_size
        self.random_trials = config.VERIFY_RANDOM_TRIALS if random_trials is None else random_trials
        self.exhaustive_weight = config.VERIFY_EXHAUSTIVE_WEIGHT if exhaustive_weight is None else exhaustive_weight

        targets = [config.VERIFY_DELTA_A if delta_a is None else delta_a,
                   config.VERIFY_DELTA_B if delta_b is None else delta_b,
                   config.VERIFY_DECODING_DELTA_A if decoding_delta_a is None else decoding_delta_a,
                   config.VERIFY_DECODING_DELTA_B if decoding_delta_b is None else decoding_delta_b]
        targets = [hggraph.exact(d) for d in targets]
        for d in targets:
            if not 0 <= d < 1:
                raise InvalidInputError(f'Expansion targets must lie in [0, 1), got {d}')
        self.delta_a, self.delta_b, self.decoding_delta_a, self.decoding_delta_b = targets

        self.code: Union[hgcode.CssCode, None] = None
        self.k: Union[int, None] = None
        self.certifications: List[Certification] = []
        self._distances: Dict[str, Any] = {}
        self._records: Union[List[Tuple[str, hgtrial.TrialRecord]], None] = None

        self._checks: Dict[str, Callable[[CheckResult], None]] = {
            CHECK_UNIQUE_NEIGHBORS: self._check_unique_neighbors,
            CHECK_EDGE_COUNT: self._check_edge_count,
            CHECK_CLASSICAL_DISTANCE: self._check_classical_distance,
            CHECK_QUANTUM_DISTANCE: self._check_quantum_distance,
            CHECK_CRITICAL_GENERATOR: self._check_critical_generator,
            CHECK_SYNDROME_PARTITION: self._check_syndrome_partition,
            CHECK_CRITICAL_FLIP: self._check_critical_flip,
            CHECK_ROBUSTNESS: self._check_robustness,
            CHECK_DECODING: self._check_decoding,
            CHECK_FLIP_BUDGET: self._check_flip_budget,
            CHECK_CLASSICAL_BASELINE: self._check_classical_baseline,
            CHECK_INCREMENTAL: self._check_incremental,
        }

    @property
    def distance_family(self) -> Certification:
        return self.certifications[0]

    @property
    def decoding_family(self) -> Certification:
        return self.certifications[1]

    def _rng(self, name: str) -> np.random.Generator:
        return np.random.default_rng(hgtrial.mix_seed(self.seed, CHECKS.index(name)))

    def _certify(self, family: str, delta_a: Fraction, delta_b: Fraction) -> Certification:
        cert = Certification(family, delta_a, delta_b)
        try:
            cert.left = hggraph.measure_expansion(self.graph, GraphSide.LEFT, delta_a, self.max_subset_size)
            cert.right = hggraph.measure_expansion(self.graph, GraphSide.RIGHT, delta_b, self.max_subset_size)
        except InfeasibleError as exc:
            cert.reason = str(exc)
            log.warning(f'Expansion of the {family} family not certified: {exc}')
            return cert

        cert.bounds = hgcritical.ExpansionBounds(cert.left.gamma, delta_a, cert.right.gamma, delta_b,
                                                 self.graph.n_A, self.graph.n_B, certified=True)
        log.info(f'Certified {family} expansion: gamma_A n_A={cert.left.max_size} at delta_A={delta_a}, '
                 f'gamma_B n_B={cert.right.max_size} at delta_B={delta_b}')
        return cert

    def run(self, names: Sequence[str] = CHECKS) -> List[CheckResult]:
        unknown = [n for n in names if n not in CHECKS]
        if unknown:
            raise InvalidInputError(f'Unknown checks {unknown}, available: {", ".join(CHECKS)}')
        names = [n for n in CHECKS if n in names or n == CHECK_GRAPH_INVARIANTS]

        invariants = CheckResult(CHECK_GRAPH_INVARIANTS)
        for violation in self.graph.invariant_violations():
            invariants.fail(violation)
        results = [invariants]

        if invariants.status is CheckStatus.FAIL:
            log.error(f'Graph violates its invariants, first witness: {invariants.witnesses[0]}')
            for name in names[1:]:
                result = CheckResult(name)
                result.not_applicable('graph invariants violated')
                results.append(result)
            return results

        self.code = hgcode.build_hypergraph_product(self.graph)
        self.k = hgcode.code_dimension(self.code)
        self.certifications = [self._certify('distance', self.delta_a, self.delta_b),
                               self._certify('decoding', self.decoding_delta_a, self.decoding_delta_b)]

        for name in names[1:]:
            result = CheckResult(name)
            log.info(f'Run check {name}')
            try:
                self._checks[name](result)
            except InfeasibleError as exc:
                result.skip(str(exc))
            except (OracleInvariantError, HypothesisError) as exc:
                result.fail({'error': str(exc), 'witness': repr(getattr(exc, 'witness', None))})
            log.info(f'Check {name}: {result.status.value}')
            results.append(result)

        return results

    # Expansion

    def _certified_subsets(self, side: GraphSide) -> Iterator[Tuple[int, ...]]:
        measurement = self.distance_family.left if side is GraphSide.LEFT else self.distance_family.right
        for size in range(1, measurement.max_size + 1):
            yield from itertools.combinations(range(self.graph.size(side)), size)

    def _require_distance_family(self, result: CheckResult) -> bool:
        if self.distance_family.bounds is None:
            result.skip(self.distance_family.reason)
            return False
        return True

    def _check_unique_neighbors(self, result: CheckResult):
        if not self._require_distance_family(result):
            return

        checked = 0
        for side in GraphSide:
            delta = self.distance_family.delta_a if side is GraphSide.LEFT else self.distance_family.delta_b
            degree = self.graph.degree(side)
            masks = self.graph.neighbor_masks(side)
            for S in self._certified_subsets(side):
                checked += 1
                unique = _unique_neighbor_count(masks, S)
                if unique < (1 - 2 * delta) * degree * len(S):
                    result.fail({'side': side.value, 'subset': list(S), 'unique_neighbors': unique,
                                 'bound': float((1 - 2 * delta) * degree * len(S))})

        result.detail['subsets_checked'] = checked
        if checked == 0:
            result.not_applicable('no certified subset')

    def _check_edge_count(self, result: CheckResult):
        if not self._require_distance_family(result):
            return

        checked = 0
        for side in GraphSide:
            for S in self._certified_subsets(side):
                checked += 1
                defect = hggraph.edge_count_defect(self.graph, S, side)
                if defect != 0:
                    result.fail({'side': side.value, 'subset': list(S), 'defect': defect})

        result.detail['subsets_checked'] = checked
        if checked == 0:
            result.not_applicable('no certified subset')

    # Distances

    def _classical_distances(self) -> Dict[str, Any]:
        """Exact d and d^T where enumerable, capped searches against the certified bounds otherwise"""
        if self._distances:
            return self._distances

        H = hggraph.incidence_matrix(self.graph)
        bounds = self.distance_family.bounds
        for name, M, size, gamma in (('d', H, self.graph.n_A, None if bounds is None else bounds.gamma_a),
                                     ('d_T', H.transpose(), self.graph.n_B, None if bounds is None else bounds.gamma_b)):
            if M.cols <= config.ORACLE_MAX_ENUMERATION_BITS:
                self._distances[name] = hgdistance.classical_min_distance(M)
                self._distances[f'{name}_exact'] = True
            elif gamma is not None and math.ceil(gamma * size) > 1:
                self._distances[name] = hgdistance.classical_min_distance(M, math.ceil(gamma * size) - 1)
                self._distances[f'{name}_exact'] = False
            else:
                self._distances[name] = None
                self._distances[f'{name}_exact'] = False
        return self._distances

    def _check_classical_distance(self, result: CheckResult):
        distances = self._classical_distances()
        result.detail.update({k: hgdistance.to_json(v) if not isinstance(v, bool) and v is not None else v
                              for k, v in distances.items()})

        bounds = self.distance_family.bounds
        if bounds is None:
            result.skip(self.distance_family.reason)
            return

        applicable = 0
        for name, gamma, delta, size in (('d', bounds.gamma_a, bounds.delta_a, self.graph.n_A),
                                         ('d_T', bounds.gamma_b, bounds.delta_b, self.graph.n_B)):
            value = distances[name]
            if delta >= Fraction(1, 2) or gamma == 0 or value is None:
                continue
            applicable += 1
            bound = gamma * size
            if value is not hgdistance.INFINITY and value < bound:
                result.fail({'distance': name, 'value': value, 'bound': float(bound)})

        if applicable == 0:
            result.not_applicable('expansion too weak for a distance bound')

    def _check_quantum_distance(self, result: CheckResult):
        C = self.code
        if self.k == 0:
            result.not_applicable('k = 0, no logical operators')
            return

        required = []
        distances = self._classical_distances()
        if distances['d_exact'] and distances['d_T_exact']:
            required.append(min(distances['d'], distances['d_T']))
        bounds = self.distance_family.bounds
        if bounds is not None and bounds.delta_a < Fraction(1, 2) and bounds.delta_b < Fraction(1, 2):
            required.append(math.ceil(bounds.radius))
        required = [r for r in required if r is not hgdistance.INFINITY]

        if C.n <= config.ORACLE_MAX_ENUMERATION_BITS:
            distance = hgdistance.quantum_min_distance(C)
            result.detail['distance'] = hgdistance.to_json(distance)
            for bound in required:
                if distance < bound:
                    logical = min((hgdistance.find_logical_operator(C, side, distance) for side in Side),
                                  key=lambda v: v.weight() if v is not None else C.n + 1)
                    result.fail({'distance': distance, 'bound': bound,
                                 'logical': None if logical is None else list(logical.support())})
            if not required:
                result.detail['reason'] = 'no bound to compare against'
            return

        if not required or max(required) <= 1:
            result.not_applicable('no bound above 1 to verify')
            return

        target = max(required)
        result.detail['distance_at_least'] = target
        for side in Side:
            logical = hgdistance.find_logical_operator(C, side, target - 1)
            if logical is not None:
                result.fail({'side': side.value, 'bound': target, 'logical': list(logical.support())})

    # Critical generators

    def _decoding_bounds(self, result: CheckResult, minimum_radius: Fraction = Fraction(1)) -> Union[hgcritical.ExpansionBounds, None]:
        bounds = self.decoding_family.bounds
        if bounds is None:
            result.skip(self.decoding_family.reason)
            return None
        if bounds.delta_a >= Fraction(1, 6) or bounds.delta_b >= Fraction(1, 6):
            result.not_applicable('decoding family needs delta_A, delta_B < 1/6')
            return None
        if bounds.radius < minimum_radius:
            result.not_applicable(f'min(gamma_A n_A, gamma_B n_B)={bounds.radius} is too small')
            return None
        return bounds

    def _error_supports(self, name: str, max_weight: int) -> List[Tuple[int, ...]]:
        """Exhaustive errors up to the exhaustive weight, then random errors of weight <= max_weight"""
        n = self.code.n
        supports = list(_exhaustive_supports(n, min(self.exhaustive_weight, max_weight)))
        rng = self._rng(name)
        for _ in range(self.random_trials):
            supports.append(_random_support(rng, n, int(rng.integers(1, max_weight + 1))))
        return supports

    @functools.cached_property
    def _critical_cases(self) -> List[Tuple[Tuple[int, ...], Union[hgcritical.CriticalDecomposition, None]]]:
        bounds = self.decoding_family.bounds
        cases = []
        for E in self._error_supports(CHECK_CRITICAL_GENERATOR, math.floor(bounds.radius)):
            D = hgcritical.find_critical_generator(self.code, E, bounds.gamma_a, bounds.delta_a,
                                                   bounds.gamma_b, bounds.delta_b)
            cases.append((E, D))
        return cases

    def _check_critical_generator(self, result: CheckResult):
        if self._decoding_bounds(result) is None:
            return

        constructed = 0
        for E, D in self._critical_cases:
            if D is None:
                result.fail({'error': list(E), 'reason': 'no critical generator'})
                continue
            violations = hgcritical.validate_decomposition(self.code, D)
            if violations:
                result.fail({'error': list(E), 'generator': list(D.label), 'violations': violations})
            try:
                hgcritical.proof_critical_generator(self.code, E, D.delta_a, D.delta_b)
                constructed += 1
            except HypothesisError as exc:
                log.debug(f'Explicit construction failed for {E}: {exc}')

        result.detail['errors'] = len(self._critical_cases)
        result.detail['explicit_constructions'] = constructed

    def _check_syndrome_partition(self, result: CheckResult):
        if self._decoding_bounds(result) is None:
            return

        checked = 0
        for E, D in self._critical_cases:
            if D is None:
                continue
            checked += 1
            partition = hgcritical.syndrome_partition(self.code, D)
            grid = hgcritical.generator_grid(self.code, D.side, D.generator)
            cells = frozenset(c for row in grid.cells for c in row)
            if not partition.is_disjoint() or partition.union() != cells:
                result.fail({'error': list(E), 'generator': list(D.label),
                             'sizes': {k: len(v) for k, v in partition.sets().items()}})

        result.detail['partitions'] = checked
        if checked == 0:
            result.not_applicable('no critical generator found')

    def _check_critical_flip(self, result: CheckResult):
        bounds = self._decoding_bounds(result)
        if bounds is None:
            return

        C = self.code
        checked = not_reduced = infeasible = 0
        cases = {1: 0, 2: 0, 3: 0, 4: 0}
        for E, D in self._critical_cases:
            if D is None:
                continue
            e = hggf2.Gf2Vector.from_support(C.n, E)
            try:
                w_r = hgdistance.reduced_weight(C, e, Side.X)
            except InfeasibleError:
                infeasible += 1
                continue
            if w_r < e.weight():
                not_reduced += 1
                continue

            checked += 1
            witness = {'error': list(E), 'generator': list(D.label)}
            if not hgcritical.chi_bounds_hold(D):
                result.fail(dict(witness, reason='chi parts too large', z=str(D.z), t=str(D.t)))
                continue
            if not hgcritical.errors_reduced_in_generator(D):
                result.fail(dict(witness, reason='more than half of the generator in error'))
                continue

            hgcritical.check_partial_bounds(C, D)
            flip = hgcritical.lemma8_flip(C, e, D, bounds)
            cases[hgcritical.flip_case(D)] += 1

            after = e ^ hggf2.Gf2Vector.from_support(C.n, flip.flip)
            try:
                if hgdistance.reduced_weight(C, after, Side.X) > w_r:
                    result.fail(dict(witness, reason='reduced weight increased', flip=list(flip.flip)))
            except InfeasibleError:
                infeasible += 1

        result.detail.update({'checked': checked, 'not_reduced': not_reduced, 'infeasible': infeasible,
                              'cases': cases})
        if checked == 0:
            if infeasible:
                result.skip('reduced weight out of reach for every error')
            else:
                result.not_applicable('no reduced error with a critical generator')

    def _check_robustness(self, result: CheckResult):
        bounds = self._decoding_bounds(result)
        if bounds is None:
            return
        if bounds.radius <= 1:
            result.not_applicable('no nonzero reduced weight below min(gamma_A n_A, gamma_B n_B)')
            return

        C = self.code
        checked = infeasible = 0
        max_weight = math.ceil(bounds.radius) - 1
        for E in self._error_supports(CHECK_ROBUSTNESS, max_weight):
            e = hggf2.Gf2Vector.from_support(C.n, E)
            try:
                w_r = hgdistance.reduced_weight(C, e, Side.X)
            except InfeasibleError:
                infeasible += 1
                continue
            if w_r >= bounds.radius:
                continue
            checked += 1
            syndrome_weight = hgcode.syndrome_x(C, e).weight()
            if 3 * syndrome_weight < w_r:
                result.fail({'error': list(E), 'reduced_weight': w_r, 'syndrome_weight': syndrome_weight})

        result.detail.update({'checked': checked, 'infeasible': infeasible})
        if checked == 0 and infeasible:
            result.skip('reduced weight out of reach for every error')

    # Decoding

    def _decoding_records(self) -> List[Tuple[str, hgtrial.TrialRecord]]:
        if self._records is not None:
            return self._records

        C = self.code
        bounds = self.decoding_family.bounds
        if bounds is not None and (bounds.delta_a >= Fraction(1, 6) or bounds.delta_b >= Fraction(1, 6)):
            bounds = None
        weights = tuple(range(1, min(self.exhaustive_weight, C.n) + 1))

        configs = [hgtrial.TrialConfig(weights=weights, error_model=ErrorModel.EXHAUSTIVE, seed=self.seed,
                                       side=side.value, bounds=bounds) for side in Side]
        if bounds is not None and bounds.w0(C.delta_B) > 1:
            random_weights = tuple(range(1, math.ceil(bounds.w0(C.delta_B))))
            configs.append(hgtrial.TrialConfig(weights=random_weights, error_model=ErrorModel.RANDOM_SUPPORT,
                                               trials_per_weight=max(1, self.random_trials // len(random_weights)),
                                               seed=self.seed, side=hgtrial.SIDE_BOTH, bounds=bounds))

        required = sum(hgtrial.trial_count(cfg, C.n) for cfg in configs)
        if required > config.ORACLE_MAX_ENUMERATION:
            raise InfeasibleError(f'{required} decoding trials exceed the ceiling of {config.ORACLE_MAX_ENUMERATION}',
                                  required=required, limit=config.ORACLE_MAX_ENUMERATION)

        self._records = []
        for cfg in configs:
            records = hgprocess.run_trials(C, cfg, hgtrial.generate_trials(cfg, C.n), threads=self.threads, k=self.k)
            self._records.extend((cfg.side, r) for r in records)
        return self._records

    def _check_decoding(self, result: CheckResult):
        if self.k == 0:
            result.not_applicable('k = 0, decoding success has no logical content')
            return

        records = self._decoding_records()
        guaranteed = beyond = 0
        beyond_per_weight: Dict[int, Dict[str, int]] = {}
        for side, r in records:
            if r.guaranteed:
                guaranteed += 1
                if not r.correctly_decoded:
                    result.fail({'side': side, 'trial_id': r.trial_id, 'weight': r.weight,
                                 'support_hash': r.support_hash})
            elif not r.correctly_decoded:
                beyond += 1
                per_side = beyond_per_weight.setdefault(r.weight, {})
                per_side[side] = per_side.get(side, 0) + 1

        bounds = self.decoding_family.bounds
        result.detail.update({'trials': len(records), 'guaranteed_trials': guaranteed,
                              'beyond_guarantee_failures': beyond,
                              'beyond_guarantee_failures_per_weight': {
                                  w: dict(sorted(beyond_per_weight[w].items())) for w in sorted(beyond_per_weight)},
                              'w0': None if bounds is None else float(bounds.w0(self.code.delta_B))})
        for w in sorted(beyond_per_weight):
            log.warning(f'{sum(beyond_per_weight[w].values())} trials of weight {w} above w0 were not decoded '
                        f'correctly ({", ".join(f"{s}: {c}" for s, c in sorted(beyond_per_weight[w].items()))})')

    def _check_flip_budget(self, result: CheckResult):
        records = self._decoding_records()
        guaranteed = [(side, r) for side, r in records if r.guaranteed and r.success]
        for side, r in guaranteed:
            if not r.flip_budget_ok:
                result.fail({'side': side, 'trial_id': r.trial_id, 'weight': r.weight,
                             'flipped_total': r.flipped_total, 'syndrome_weight': r.syndrome_weight,
                             'iterations': r.iterations})

        result.detail.update({'guaranteed_trials': len(guaranteed),
                              'violations_beyond_guarantee': sum(1 for _, r in records
                                                                 if r.success and not r.guaranteed
                                                                 and not r.flip_budget_ok)})
        if not guaranteed:
            result.not_applicable('no trial below w0')

    def _check_classical_baseline(self, result: CheckResult):
        cert = self.decoding_family
        if cert.bounds is None:
            result.skip(cert.reason)
            return
        if cert.delta_a >= Fraction(1, 4):
            result.not_applicable('bit-flip guarantee needs delta_A < 1/4')
            return

        max_weight = math.floor(cert.bounds.gamma_a * self.graph.n_A / 2)
        if max_weight < 1:
            result.not_applicable('gamma_A n_A / 2 < 1')
            return

        G = self.graph
        H = hggraph.incidence_matrix(G)
        checked = 0
        for support in _exhaustive_supports(G.n_A, max_weight):
            checked += 1
            e = hggf2.Gf2Vector.from_support(G.n_A, support)
            correction = hgclassical.classical_flip_decode(G, hggf2.mat_vec(H, e))
            if correction != e:
                result.fail({'error': list(support),
                             'correction': None if correction is None else list(correction.support())})

        result.detail.update({'max_weight': max_weight, 'checked': checked})

    def _check_incremental(self, result: CheckResult):
        C = self.code
        rng = self._rng(CHECK_INCREMENTAL)
        evaluations = {'incremental': 0, 'full': 0}
        decoders = {side: (hgdecoder.SmallSetFlipDecoder(C, side),
                           hgdecoder.SmallSetFlipDecoder(C, side, incremental=False, shadow=True))
                    for side in Side}

        trials = min(INCREMENTAL_TRIALS, self.random_trials)
        for i in range(trials):
            side = Side.X if i % 2 == 0 else Side.Z
            support = _random_support(rng, C.n, int(rng.integers(1, min(C.n, 2 * C.row_weight) + 1)))
            s = hgcode.syndrome(C, side, hggf2.Gf2Vector.from_support(C.n, support))
            fast, full = (d.decode(s, trace_on=True) for d in decoders[side])
            evaluations['incremental'] += fast.evaluations
            evaluations['full'] += full.evaluations
            if [(t.generator, t.flip) for t in fast.trace] != [(t.generator, t.flip) for t in full.trace]:
                result.fail({'side': side.value, 'error': list(support),
                             'incremental': [list(t.flip) for t in fast.trace],
                             'full': [list(t.flip) for t in full.trace]})

        result.detail.update({'trials': trials, 'evaluations': evaluations})


def report(verifier: Verifier, results: Sequence[CheckResult]) -> Dict[str, Any]:
    G = verifier.graph
    return {
        'schema': SCHEMA_VERSION,
        'version': hgpy.get_version(),
        'kind': 'verify',
        'graph': {'n_A': G.n_A, 'n_B': G.n_B, 'delta_A': G.delta_A, 'delta_B': G.delta_B},
        'code': None if verifier.code is None else hgcode.code_header(verifier.code, verifier.k),
        'seed': verifier.seed,
        'certification': [c.to_dict() for c in verifier.certifications],
        'checks': [r.to_dict() for r in results],
        'exit_code': int(exit_code(results)),
    }


def cmd_verify(args: argparse.Namespace) -> int:
    G = hgconstruct.load_graph(args, check=False)
    verifier = Verifier(G, delta_a=args.delta_a, delta_b=args.delta_b,
                        decoding_delta_a=args.decoding_delta_a, decoding_delta_b=args.decoding_delta_b,
                        max_subset_size=args.max_subset_size, seed=args.seed, threads=args.threads,
                        random_trials=args.random_trials, exhaustive_weight=args.exhaustive_weight)

    names = CHECKS if args.checks is None else [n.strip() for n in args.checks.split(',') if n.strip()]
    results = verifier.run(names)
    document = report(verifier, results)

    if args.out is None:
        sys.stdout.write(json.dumps(hgcontainer.to_jsonable(document), indent=2) + '\n')
    else:
        hgcontainer.write_document(args.out, document)
        hgconfiguration.save_run_configuration(args.out)

    code = exit_code(results)
    if code is ExitCode.CHECK_FAILURE:
        failed = [r.name for r in results if r.status is CheckStatus.FAIL]
        log.error(f'Failed checks: {", ".join(failed)}')
    return code
