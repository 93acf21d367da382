# -*- coding: utf-8 -*-
"""Small-set-flip decoder

Each iteration flips a pattern of qubits inside the support of a single
generator that strictly lowers the syndrome weight, choosing the pattern
with the largest weight decrease per flipped qubit over all generators.
Candidates are cached per generator and only generators next to a changed
syndrome bit are re-evaluated after a flip.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, NamedTuple, Set, Tuple, Union

import numpy as np

from hgpy import config
from hgpy.definitions import *
import hgpy.core.code as hgcode
import hgpy.core.gf2 as hggf2
import hgpy.core.logger as hglogger
from hgpy.core.exceptions import DimensionError, InvalidInputError, OracleInvariantError

log = hglogger.getLogger(__name__)

# Toggle tables shared by all decoders, keyed by the local incidence pattern
_toggle_tables: Dict[bytes, ToggleTable] = {}


@dataclass(frozen=True)
class FlipCandidate:
    generator: int
    mask: int
    flip: Tuple[int, ...]
    decrease: int
    size: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.decrease, self.size)


class TraceEntry(NamedTuple):
    generator: int
    flip: Tuple[int, ...]
    weight_before: int
    weight_after: int


@dataclass
class DecodeResult:
    side: Side
    success: bool
    correction: hggf2.Gf2Vector
    iterations: int
    residual_syndrome_weight: int
    trace: Union[List[TraceEntry], None] = None
    evaluations: int = 0
    flipped_total: int = 0
    initial_syndrome_weight: int = 0


class ToggleTable:
    """Syndrome changes of all 2^m flip masks of one generator

    Row `mask` holds the local checks toggled by flipping the qubits selected
    by `mask` (bit i = i-th qubit of the sorted generator support). Large
    tables are not stored and are recomputed block by block instead.
    """

    _max_stored_bytes = 2 ** 26

    def __init__(self, incidence: np.ndarray):
        self.m, self.checks = incidence.shape
        self.incidence = incidence.astype(np.int32)
        self.mask_count = 1 << self.m
        self.sizes = np.array([hggf2.popcount(mask) for mask in range(self.mask_count)], dtype=np.int64)

        self._table = None
        if self.mask_count * self.checks <= self._max_stored_bytes:
            self._table = self._block(0, self.mask_count)

    def _block(self, start: int, stop: int) -> np.ndarray:
        masks = np.arange(start, stop, dtype=np.int64)
        bits = ((masks[:, None] >> np.arange(self.m, dtype=np.int64)) & 1).astype(np.int32)
        return ((bits @ self.incidence) & 1).astype(np.int8)

    def decreases(self, local_syndrome: np.ndarray) -> np.ndarray:
        """|s| - |s'| for every mask, given the syndrome restricted to the local checks"""
        signs = 2 * local_syndrome.astype(np.int32) - 1
        if self._table is not None:
            return self._table @ signs

        out = np.empty(self.mask_count, dtype=np.int32)
        chunk = config.DECODER_SCORE_CHUNK
        for start in range(0, self.mask_count, chunk):
            stop = min(start + chunk, self.mask_count)
            out[start:stop] = self._block(start, stop) @ signs
        return out


def _toggle_table(incidence: np.ndarray) -> ToggleTable:
    key = repr(incidence.shape).encode() + np.packbits(incidence).tobytes()
    table = _toggle_tables.get(key)
    if table is None:
        table = ToggleTable(incidence)
        _toggle_tables[key] = table
    return table


class _LocalView(NamedTuple):
    support: Tuple[int, ...]
    checks: np.ndarray
    table: ToggleTable


def _local_view(checks: hggf2.Gf2SparseMatrix, generators: hggf2.Gf2SparseMatrix, g: int) -> _LocalView:
    support = generators.row_supports[g]
    local = sorted({c for q in support for c in checks.col_supports[q]})
    position = {c: j for j, c in enumerate(local)}
    incidence = np.zeros((len(support), len(local)), dtype=np.uint8)
    for i, q in enumerate(support):
        for c in checks.col_supports[q]:
            incidence[i, position[c]] = 1
    return _LocalView(support, np.array(local, dtype=np.int64), _toggle_table(incidence))


def _best_candidate(view: _LocalView, syndrome: np.ndarray, g: int, lcm: int) -> Union[FlipCandidate, None]:
    table = view.table
    decrease = table.decreases(syndrome[view.checks])
    improving = decrease > 0
    if not improving.any():
        return None

    # decrease/size compared exactly as decrease * (lcm / size)
    keys = np.where(improving, decrease.astype(np.int64) * (lcm // np.maximum(table.sizes, 1)), -1)
    tied = keys == keys.max()
    best_decrease = decrease[tied].max()
    mask = int(np.flatnonzero(tied & (decrease == best_decrease))[0])

    flip = tuple(q for i, q in enumerate(view.support) if mask >> i & 1)
    return FlipCandidate(generator=g, mask=mask, flip=flip, decrease=int(best_decrease), size=len(flip))


def _flip_lcm(m: int) -> int:
    return math.lcm(*range(1, m + 1)) if m > 0 else 1


def best_flip_in_generator(C: hgcode.CssCode, s: hggf2.Gf2Vector, g: int, side: Side) -> Union[FlipCandidate, None]:
    """Best strictly improving flip inside generator `g`, or None"""
    side = Side(side)
    checks, generators = C.check_matrix(side), C.generator_matrix(side)
    if s.length != checks.rows:
        raise DimensionError(f'Syndrome of length {s.length} does not match {checks.rows} checks')
    if not 0 <= g < generators.rows:
        raise InvalidInputError(f'Generator {g} out of range [0, {generators.rows})')

    view = _local_view(checks, generators, g)
    return _best_candidate(view, s.to_bits(), g, _flip_lcm(len(view.support)))


class SmallSetFlipDecoder:
    """Decoder for one error type of a CSS code

    An instance keeps mutable working state and must not be shared between
    threads. With `incremental=False` every generator is re-evaluated after
    each flip. With `shadow=True` the cached candidates are compared against
    a full recomputation after every flip.
    """

    def __init__(self, C: hgcode.CssCode, side: Side, incremental: bool = True, shadow: bool = False):
        self.code = C
        self.side = Side(side)
        self.incremental = incremental
        self.shadow = shadow

        self.checks = C.check_matrix(self.side)
        self.generators = C.generator_matrix(self.side)

        weights = {len(r) for r in self.generators.row_supports}
        self.max_generator_weight = max(weights) if weights else 0
        if self.max_generator_weight > config.DECODER_MAX_GENERATOR_WEIGHT:
            raise InvalidInputError(f'Generator weight {self.max_generator_weight} exceeds the limit of '
                                    f'{config.DECODER_MAX_GENERATOR_WEIGHT} for exhaustive flip enumeration')

        self._lcm = _flip_lcm(self.max_generator_weight)
        self._views: Dict[int, _LocalView] = {}

        # Buckets ordered by (ratio key, decrease), highest last
        max_column = max((len(c) for c in self.checks.col_supports), default=0)
        max_decrease = min(self.checks.rows, self.max_generator_weight * max_column)
        pairs = sorted({(d * (self._lcm // size), d)
                        for d in range(1, max_decrease + 1)
                        for size in range(1, self.max_generator_weight + 1)})
        self._bucket_index: Dict[Tuple[int, int], int] = {pair: i for i, pair in enumerate(pairs)}

        self._reset(hggf2.Gf2Vector.zeros(self.checks.rows))

    def _reset(self, s: hggf2.Gf2Vector):
        self._syndrome = s.to_bits().astype(np.uint8)
        self._weight = int(self._syndrome.sum())
        self._best: Dict[int, FlipCandidate] = {}
        self._bucket_of: Dict[int, int] = {}
        self._buckets: List[List[int]] = [[] for _ in range(len(self._bucket_index))]
        self._top = -1
        self._evaluations = 0

    def _view(self, g: int) -> _LocalView:
        view = self._views.get(g)
        if view is None:
            view = _local_view(self.checks, self.generators, g)
            self._views[g] = view
        return view

    def _evaluate(self, g: int) -> Union[FlipCandidate, None]:
        return _best_candidate(self._view(g), self._syndrome, g, self._lcm)

    def _update(self, g: int):
        self._evaluations += 1
        candidate = self._evaluate(g)

        if candidate is None:
            self._best.pop(g, None)
            self._bucket_of.pop(g, None)
            return

        bucket = self._bucket_index[(candidate.decrease * (self._lcm // candidate.size), candidate.decrease)]
        self._best[g] = candidate
        if self._bucket_of.get(g) != bucket:
            self._bucket_of[g] = bucket
            heapq.heappush(self._buckets[bucket], g)
            self._top = max(self._top, bucket)

    def _select(self) -> Union[FlipCandidate, None]:
        while self._top >= 0:
            heap = self._buckets[self._top]
            # Drop entries of generators that moved to another bucket
            while heap and self._bucket_of.get(heap[0]) != self._top:
                heapq.heappop(heap)
            if heap:
                return self._best[heap[0]]
            self._top -= 1
        return None

    def generators_near(self, changed: Set[int]) -> List[int]:
        """Generators with a qubit adjacent to one of the given checks"""
        checks, generators = self.checks, self.generators
        return sorted({g for c in changed for q in checks.row_supports[c] for g in generators.col_supports[q]})

    def refresh_candidates(self, changed: Set[int]) -> int:
        """Re-evaluate the generators affected by a change of the given syndrome bits"""
        if not self.incremental:
            self._best.clear()
            self._bucket_of.clear()
            self._buckets = [[] for _ in range(len(self._bucket_index))]
            self._top = -1
            dirty = range(self.generators.rows)
        else:
            dirty = self.generators_near(changed)

        count = 0
        for g in dirty:
            self._update(g)
            count += 1
        return count

    def _check_shadow(self):
        for g in range(self.generators.rows):
            fresh = self._evaluate(g)
            if fresh != self._best.get(g):
                raise OracleInvariantError(f'Cached candidate of generator {g} differs from recomputation',
                                           witness=(g, self._best.get(g), fresh))

    def _apply(self, candidate: FlipCandidate) -> Set[int]:
        changed: Set[int] = set()
        for q in candidate.flip:
            for c in self.checks.col_supports[q]:
                changed ^= {c}
        for c in changed:
            self._syndrome[c] ^= 1
        return changed

    def decode(self, s: hggf2.Gf2Vector, trace_on: bool = False) -> DecodeResult:
        if s.length != self.checks.rows:
            raise DimensionError(f'Syndrome of length {s.length} does not match {self.checks.rows} checks')

        self._reset(s)
        initial_weight = self._weight
        correction = np.zeros(self.code.n, dtype=np.uint8)
        trace: Union[List[TraceEntry], None] = [] if trace_on else None
        iterations = 0
        flipped_total = 0

        self.refresh_candidates({int(c) for c in np.flatnonzero(self._syndrome)})
        if self.shadow:
            self._check_shadow()

        while True:
            candidate = self._select()
            if candidate is None:
                break

            before = self._weight
            changed = self._apply(candidate)
            after = int(self._syndrome.sum()) if self.shadow else before - candidate.decrease
            if after != before - candidate.decrease or after >= before:
                raise OracleInvariantError(f'Flip {candidate} changed the syndrome weight from {before} to {after}',
                                           witness=candidate)

            self._weight = after
            correction[list(candidate.flip)] ^= 1
            iterations += 1
            flipped_total += candidate.size
            if trace is not None:
                trace.append(TraceEntry(candidate.generator, candidate.flip, before, after))
            log.debug(f'{self.side.value}-decode iteration {iterations}: generator {candidate.generator} '
                      f'flip {candidate.flip}, syndrome weight {before} -> {after}')

            self.refresh_candidates(changed)
            if self.shadow:
                self._check_shadow()

        return DecodeResult(side=self.side,
                            success=self._weight == 0,
                            correction=hggf2.Gf2Vector.from_bits(correction),
                            iterations=iterations,
                            residual_syndrome_weight=self._weight,
                            trace=trace,
                            evaluations=self._evaluations,
                            flipped_total=flipped_total,
                            initial_syndrome_weight=initial_weight)


def decode_side(C: hgcode.CssCode, s: hggf2.Gf2Vector, side: Side, trace_on: bool = False) -> DecodeResult:
    return SmallSetFlipDecoder(C, side).decode(s, trace_on=trace_on)


def decode(C: hgcode.CssCode, s_x: hggf2.Gf2Vector, s_z: hggf2.Gf2Vector,
           trace_on: bool = False) -> Tuple[DecodeResult, DecodeResult]:
    """Decode X and Z errors independently from their syndromes"""
    return decode_side(C, s_x, Side.X, trace_on), decode_side(C, s_z, Side.Z, trace_on)
