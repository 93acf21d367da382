# -*- coding: utf-8 -*-
"""Minimum distances, reduced weight and decoding verdicts
"""
from __future__ import annotations

import functools
import itertools
import math
import weakref
from typing import Dict, Iterator, List, Tuple, Union

from hgpy import config
from hgpy.definitions import *
import hgpy.core.code as hgcode
import hgpy.core.gf2 as hggf2
import hgpy.core.logger as hglogger
from hgpy.core.exceptions import DimensionError, InfeasibleError

log = hglogger.getLogger(__name__)


@functools.total_ordering
class _Infinity:
    """Distance of a code without nonzero codewords"""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash('inf')

    def __repr__(self):
        return 'INFINITY'

    def __str__(self):
        return 'inf'

    def __reduce__(self):
        return _Infinity, ()


INFINITY = _Infinity()

Distance = Union[int, _Infinity]


def to_json(value: Distance) -> Union[int, str]:
    return str(value) if value is INFINITY else int(value)


# Echelon forms of generator matrices per code and side
_echelon_cache: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()


def generator_echelon(C: hgcode.CssCode, side: Side) -> hggf2.EchelonForm:
    per_code: Dict[Side, hggf2.EchelonForm] = _echelon_cache.setdefault(C, {})
    side = Side(side)
    if side not in per_code:
        per_code[side] = hggf2.EchelonForm.from_matrix(C.generator_matrix(side))
    return per_code[side]


def _column_masks(M: hggf2.Gf2SparseMatrix) -> List[int]:
    return [functools.reduce(lambda m, i: m | (1 << i), col, 0) for col in M.col_supports]


def _search_limit(cols: int, weight_cap: Union[int, None]) -> int:
    """Largest weight to enumerate, raising if the search would exceed the ceilings"""
    if weight_cap is None:
        if cols > config.ORACLE_MAX_ENUMERATION_BITS:
            raise InfeasibleError(f'Full enumeration over {cols} bits exceeds the ceiling of '
                                  f'{config.ORACLE_MAX_ENUMERATION_BITS} bits',
                                  required=cols, limit=config.ORACLE_MAX_ENUMERATION_BITS)
        return cols

    weight_cap = min(weight_cap, cols)
    required = sum(math.comb(cols, w) for w in range(1, weight_cap + 1))
    if required > config.ORACLE_MAX_ENUMERATION:
        raise InfeasibleError(f'Weight-{weight_cap} search visits {required} vectors, above the ceiling of '
                              f'{config.ORACLE_MAX_ENUMERATION}', required=required, limit=config.ORACLE_MAX_ENUMERATION)
    return weight_cap


def _kernel_supports(masks: List[int], limit: int) -> Iterator[Tuple[int, ...]]:
    """Supports of kernel vectors by increasing weight, then lexicographically"""
    for w in range(1, limit + 1):
        for combo in itertools.combinations(range(len(masks)), w):
            if functools.reduce(lambda acc, j: acc ^ masks[j], combo, 0) == 0:
                yield combo


def classical_min_distance(H: hggf2.Gf2SparseMatrix, weight_cap: int = None) -> Distance:
    """Minimum number of columns of H summing to zero

    INFINITY if no nonzero kernel vector exists (or none within `weight_cap`).
    """
    if hggf2.rank(H) == H.cols:
        return INFINITY

    limit = _search_limit(H.cols, weight_cap)
    for support in _kernel_supports(_column_masks(H), limit):
        return len(support)
    return INFINITY


def transpose_min_distance(H: hggf2.Gf2SparseMatrix, weight_cap: int = None) -> Distance:
    """Minimum number of rows of H summing to zero"""
    return classical_min_distance(H.transpose(), weight_cap)


def find_logical_operator(C: hgcode.CssCode, side: Side, weight_cap: int = None) -> Union[hggf2.Gf2Vector, None]:
    """Minimum weight vector with zero syndrome that is not a sum of generators

    For side X that is v with h_x v = 0 and v outside the row space of h_z.
    """
    side = Side(side)
    if hgcode.code_dimension(C) == 0:
        return None

    checks = C.check_matrix(side)
    echelon = generator_echelon(C, side)
    limit = _search_limit(C.n, weight_cap)

    for support in _kernel_supports(_column_masks(checks), limit):
        value = functools.reduce(lambda acc, q: acc | (1 << q), support, 0)
        if not echelon.contains(value):
            return hggf2.Gf2Vector.from_support(C.n, support)
    return None


def quantum_min_distance(C: hgcode.CssCode, weight_cap: int = None) -> Distance:
    """Minimum weight of a nontrivial logical operator of either type"""
    if hgcode.code_dimension(C) == 0:
        return INFINITY

    best: Distance = INFINITY
    for side in (Side.X, Side.Z):
        cap = weight_cap if best is INFINITY else (best - 1 if weight_cap is None else min(weight_cap, best - 1))
        if cap is not None and cap < 1:
            continue
        logical = find_logical_operator(C, side, cap)
        if logical is not None:
            best = min(best, logical.weight())
    return best


def _coset_enumeration_weight(e: int, basis: List[int]) -> int:
    # Gray code walk over all 2^rank sums of basis rows
    best = hggf2.popcount(e)
    current = e
    for i in range(1, 1 << len(basis)):
        current ^= basis[(i & -i).bit_length() - 1]
        best = min(best, hggf2.popcount(current))
    return best


def _coset_leader_weight(e: int, n: int, echelon: hggf2.EchelonForm) -> int:
    target = echelon.reduce(e)
    if target == 0:
        return 0
    # Reduced images of unit vectors, so that r(v) is the XOR over the support
    units = [echelon.reduce(1 << q) for q in range(n)]
    weight = hggf2.popcount(e)
    for w in range(1, weight):
        for combo in itertools.combinations(range(n), w):
            if functools.reduce(lambda acc, q: acc ^ units[q], combo, 0) == target:
                return w
    return weight


def reduced_weight(C: hgcode.CssCode, e: hggf2.Gf2Vector, side: Side) -> int:
    """Smallest Hamming weight in the coset of e modulo the generators of `side`

    Uses coset enumeration (2^rank sums) or a weight-ordered search for a
    coset leader, whichever visits fewer vectors.
    """
    side = Side(side)
    if e.length != C.n:
        raise DimensionError(f'Error of length {e.length} does not match n={C.n}')

    echelon = generator_echelon(C, side)
    value = e.to_int()
    if value == 0:
        return 0

    weight = e.weight()
    coset_cost = 1 << echelon.rank if echelon.rank <= config.ORACLE_MAX_COSET_RANK else None
    leader_cost = sum(math.comb(C.n, w) for w in range(1, weight))
    if leader_cost > config.ORACLE_MAX_ENUMERATION:
        leader_cost = None

    if coset_cost is None and leader_cost is None:
        raise InfeasibleError(f'Reduced weight of a weight-{weight} error on {C} is out of reach '
                              f'(rank {echelon.rank})', limit=config.ORACLE_MAX_ENUMERATION)

    if leader_cost is None or (coset_cost is not None and coset_cost <= leader_cost):
        return _coset_enumeration_weight(value, echelon.basis())
    return _coset_leader_weight(value, C.n, echelon)


def is_correctly_decoded(C: hgcode.CssCode, e: hggf2.Gf2Vector, correction: hggf2.Gf2Vector, side: Side) -> bool:
    """True iff e and the correction differ by a sum of generators"""
    if e.length != C.n or correction.length != C.n:
        raise DimensionError(f'Expected vectors of length {C.n}, got {e.length} and {correction.length}')
    return generator_echelon(C, side).contains((e ^ correction).to_int())
