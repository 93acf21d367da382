# -*- coding: utf-8 -*-
"""Biregular bipartite base graphs

Vertices are dense integer ids per side: 0..n_A-1 on the left (A),
0..n_B-1 on the right (B).
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Sequence, Tuple, Union

import numpy as np

from hgpy import config
from hgpy.definitions import *
import hgpy.core.gf2 as hggf2
import hgpy.core.logger as hglogger
from hgpy.core.exceptions import GraphFormatError, GraphGenerationError, InfeasibleError, InvalidInputError

log = hglogger.getLogger(__name__)


class Vertex(NamedTuple):
    side: GraphSide
    index: int


def exact(value: Union[int, float, Fraction]) -> Fraction:
    """Exact rational for a user supplied fraction (0.1 -> 1/10, 1/6 as float -> 1/6)"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(value).limit_denominator(10**9)


class BipartiteGraph:
    """Simple biregular bipartite graph G = (A u B, E)

    Built from the left adjacency lists; the right lists are derived. With
    check=False an invalid graph is kept as is so its defects can be
    reported by `invariant_violations`.
    """

    def __init__(self, n_A: int, n_B: int, delta_A: int, delta_B: int,
                 adjacency_A: Sequence[Iterable[int]], check: bool = True):
        if min(n_A, n_B) < 1 or min(delta_A, delta_B) < 0:
            raise InvalidInputError(f'Invalid graph parameters n_A={n_A} n_B={n_B} '
                                    f'delta_A={delta_A} delta_B={delta_B}')
        if len(adjacency_A) != n_A:
            raise InvalidInputError(f'Expected {n_A} left adjacency lists, got {len(adjacency_A)}')

        self.n_A = n_A
        self.n_B = n_B
        self.delta_A = delta_A
        self.delta_B = delta_B

        adjacency_B: List[List[int]] = [[] for _ in range(n_B)]
        left = []
        for a, nbrs in enumerate(adjacency_A):
            nbrs = tuple(sorted(int(b) for b in nbrs))
            for b in nbrs:
                if not 0 <= b < n_B:
                    raise InvalidInputError(f'Neighbor {b} of left vertex {a} out of range [0, {n_B})')
                adjacency_B[b].append(a)
            left.append(nbrs)

        self.adjacency_A: Tuple[Tuple[int, ...], ...] = tuple(left)
        self.adjacency_B: Tuple[Tuple[int, ...], ...] = tuple(tuple(sorted(r)) for r in adjacency_B)

        self._masks: Dict[GraphSide, Tuple[int, ...]] = {}

        if check:
            violations = self.invariant_violations()
            if violations:
                raise InvalidInputError(f'Graph violates {len(violations)} invariant(s), first: {violations[0]}')

    @classmethod
    def from_adjacency(cls, n_B: int, adjacency_A: Sequence[Iterable[int]], check: bool = True) -> BipartiteGraph:
        """Infer degrees from the adjacency lists"""
        adjacency_A = [sorted(r) for r in adjacency_A]
        n_A = len(adjacency_A)
        delta_A = len(adjacency_A[0]) if n_A > 0 else 0
        edges = sum(len(r) for r in adjacency_A)
        delta_B = edges // n_B if n_B > 0 else 0
        return cls(n_A, n_B, delta_A, delta_B, adjacency_A, check=check)

    def invariant_violations(self) -> List[Dict[str, Any]]:
        violations = []

        if self.n_A * self.delta_A != self.n_B * self.delta_B:
            violations.append({'kind': 'edge_count', 'left': self.n_A * self.delta_A,
                               'right': self.n_B * self.delta_B})

        for side, lists, degree in ((GraphSide.LEFT, self.adjacency_A, self.delta_A),
                                    (GraphSide.RIGHT, self.adjacency_B, self.delta_B)):
            for v, nbrs in enumerate(lists):
                if len(nbrs) != degree:
                    violations.append({'kind': 'degree', 'side': side.value, 'vertex': v,
                                       'expected': degree, 'observed': len(nbrs)})
                if len(set(nbrs)) != len(nbrs):
                    violations.append({'kind': 'multi_edge', 'side': side.value, 'vertex': v,
                                       'neighbors': list(nbrs)})

        return violations

    def is_valid(self) -> bool:
        return not self.invariant_violations()

    def size(self, side: GraphSide) -> int:
        return self.n_A if side is GraphSide.LEFT else self.n_B

    def degree(self, side: GraphSide) -> int:
        return self.delta_A if side is GraphSide.LEFT else self.delta_B

    def adjacency(self, side: GraphSide) -> Tuple[Tuple[int, ...], ...]:
        return self.adjacency_A if side is GraphSide.LEFT else self.adjacency_B

    @property
    def edge_count(self) -> int:
        return sum(len(r) for r in self.adjacency_A)

    def neighbor_masks(self, side: GraphSide) -> Tuple[int, ...]:
        """Neighborhoods of the vertices on `side` as integer bit masks over the other side"""
        if side not in self._masks:
            self._masks[side] = tuple(reduce(lambda m, u: m | (1 << u), nbrs, 0)
                                      for nbrs in self.adjacency(side))
        return self._masks[side]

    def __eq__(self, other):
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (self.n_A, self.n_B, self.delta_A, self.delta_B, self.adjacency_A) == \
            (other.n_A, other.n_B, other.delta_A, other.delta_B, other.adjacency_A)

    def __hash__(self):
        return hash((self.n_A, self.n_B, self.delta_A, self.delta_B, self.adjacency_A))

    def __repr__(self):
        return (f'{self.__class__.__name__}(n_A={self.n_A}, n_B={self.n_B}, '
                f'delta_A={self.delta_A}, delta_B={self.delta_B})')


def generate_biregular(n_A: int, n_B: int, delta_A: int, delta_B: int, seed: int) -> BipartiteGraph:
    """Sample a simple biregular graph from the configuration model

    Right-hand edge stubs are matched to left-hand stubs by a uniform random
    permutation. Samples with a repeated edge are rejected and the whole
    matching is drawn again.
    """
    if min(n_A, n_B, delta_A, delta_B) < 1:
        raise InvalidInputError('Vertex counts and degrees must be positive')
    if n_A * delta_A != n_B * delta_B:
        raise InvalidInputError(f'Inconsistent degrees: n_A*delta_A={n_A * delta_A} != n_B*delta_B={n_B * delta_B}')
    if delta_A > delta_B:
        raise InvalidInputError(f'Require delta_A <= delta_B, got {delta_A} > {delta_B}')
    if n_B > n_A:
        raise InvalidInputError(f'Require n_B <= n_A, got {n_B} > {n_A}')
    if delta_B > n_A or delta_A > n_B:
        raise InvalidInputError('Degree exceeds the size of the opposite side, no simple graph exists')

    rng = np.random.default_rng(seed)
    right_stubs = np.repeat(np.arange(n_B, dtype=np.int64), delta_B)
    max_attempts = config.GENERATION_MAX_ATTEMPTS

    for attempt in range(1, max_attempts + 1):
        matching = rng.permutation(right_stubs).reshape(n_A, delta_A)
        matching.sort(axis=1)
        if delta_A > 1 and np.any(np.diff(matching, axis=1) == 0):
            continue

        log.debug(f'Found simple ({n_A},{n_B},{delta_A},{delta_B}) graph after {attempt} attempt(s)')
        return BipartiteGraph(n_A, n_B, delta_A, delta_B, matching.tolist())

    raise GraphGenerationError(f'No simple ({n_A},{n_B},{delta_A},{delta_B}) graph after {max_attempts} attempts',
                               attempts=max_attempts)


def _as_vertex(v: Union[Vertex, Tuple[GraphSide, int]]) -> Vertex:
    side, index = v
    if not isinstance(side, GraphSide):
        side = GraphSide(side)
    return Vertex(side, int(index))


def neighbors(G: BipartiteGraph, v: Union[Vertex, Tuple[GraphSide, int]]) -> List[int]:
    """Sorted neighbor ids (on the opposite side) of a side-tagged vertex"""
    side, index = _as_vertex(v)
    if not 0 <= index < G.size(side):
        raise InvalidInputError(f'{side.value} vertex {index} out of range [0, {G.size(side)})')
    return list(G.adjacency(side)[index])


def _subset_ids(G: BipartiteGraph, S: Iterable[Union[int, Vertex]], side: GraphSide) -> List[int]:
    ids = []
    for v in S:
        if isinstance(v, tuple):
            v_side, v = _as_vertex(v)
            if v_side is not side:
                raise InvalidInputError(f'Subset mixes {v_side.value} vertex {v} into a {side.value} set')
        if not 0 <= v < G.size(side):
            raise InvalidInputError(f'{side.value} vertex {v} out of range [0, {G.size(side)})')
        ids.append(int(v))
    return sorted(set(ids))


def neighbor_counts(G: BipartiteGraph, S: Iterable[Union[int, Vertex]], side: GraphSide) -> Dict[int, int]:
    """deg_S(v) for every v in Gamma(S)"""
    counts: Dict[int, int] = {}
    adjacency = G.adjacency(side)
    for v in _subset_ids(G, S, side):
        for u in adjacency[v]:
            counts[u] = counts.get(u, 0) + 1
    return counts


def unique_and_multiple_neighbors(G: BipartiteGraph, S: Iterable[Union[int, Vertex]],
                                  side: GraphSide) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    counts = neighbor_counts(G, S, side)
    unique = frozenset(u for u, c in counts.items() if c == 1)
    multiple = frozenset(u for u, c in counts.items() if c > 1)
    return unique, multiple


def edge_count_defect(G: BipartiteGraph, S: Iterable[Union[int, Vertex]], side: GraphSide) -> int:
    """Delta*|S| - |unique| - sum of deg_S over multiple neighbors, zero on every simple biregular graph"""
    ids = _subset_ids(G, S, side)
    counts = neighbor_counts(G, ids, side)
    unique = sum(1 for c in counts.values() if c == 1)
    multiple = sum(c for c in counts.values() if c > 1)
    return G.degree(side) * len(ids) - unique - multiple


def incidence_matrix(G: BipartiteGraph) -> hggf2.Gf2SparseMatrix:
    """n_B x n_A matrix H with H[b, a] = 1 iff a ~ b"""
    return hggf2.Gf2SparseMatrix(G.n_B, G.n_A, G.adjacency_B)


@dataclass
class ExpansionReport:
    side: GraphSide
    gamma: Fraction
    delta: Fraction
    mode: ExpansionMode
    max_subset_size: int
    verified: bool
    witness: Union[Tuple[int, ...], None] = None
    subsets_checked: int = 0
    size_limit: int = 0

    @property
    def certifying(self) -> bool:
        """Only an exhaustive pass proves expansion"""
        return self.mode is ExpansionMode.EXHAUSTIVE and self.verified

    def to_dict(self) -> Dict[str, Any]:
        return {'side': self.side.value, 'gamma': float(self.gamma), 'delta': float(self.delta),
                'mode': self.mode.value, 'max_subset_size': self.max_subset_size,
                'size_limit': self.size_limit, 'verified': self.verified,
                'certifying': self.certifying,
                'witness': None if self.witness is None else list(self.witness),
                'subsets_checked': self.subsets_checked}


def expands(G: BipartiteGraph, S: Sequence[int], side: GraphSide, delta: Union[float, Fraction]) -> bool:
    """|Gamma(S)| >= (1 - delta) * Delta * |S|"""
    masks = G.neighbor_masks(side)
    gamma_size = hggf2.popcount(reduce(lambda m, v: m | masks[v], S, 0))
    return gamma_size >= (1 - exact(delta)) * G.degree(side) * len(S)


def subset_size_limit(G: BipartiteGraph, side: GraphSide, gamma: Union[float, Fraction], max_subset_size: int) -> int:
    return min(math.floor(exact(gamma) * G.size(side)), max_subset_size)


def _exhaustive_count(n: int, limit: int) -> int:
    return sum(math.comb(n, k) for k in range(1, limit + 1))


def _require_feasible(n: int, limit: int):
    required = _exhaustive_count(n, limit)
    if required > config.EXPANSION_MAX_SUBSETS:
        raise InfeasibleError(f'Exhaustive enumeration of {required} subsets exceeds the '
                              f'ceiling of {config.EXPANSION_MAX_SUBSETS}',
                              required=required, limit=config.EXPANSION_MAX_SUBSETS)


def _neighborhood_sizes(G: BipartiteGraph, side: GraphSide, size: int) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """All subsets of one size in lexicographic order with |Gamma(S)|"""
    masks = G.neighbor_masks(side)
    for S in itertools.combinations(range(G.size(side)), size):
        yield S, hggf2.popcount(reduce(lambda m, v: m | masks[v], S, 0))


def check_expansion(G: BipartiteGraph, side: GraphSide, gamma: Union[float, Fraction], delta: Union[float, Fraction],
                    max_subset_size: int, mode: ExpansionMode = ExpansionMode.EXHAUSTIVE,
                    samples: int = None, seed: int = 0) -> ExpansionReport:
    """Test |Gamma(S)| >= (1 - delta) Delta |S| for all S with |S| <= min(gamma n, max_subset_size)

    Subsets are visited in increasing size, so an exhaustive witness has
    minimum size (lexicographically smallest among those).
    """
    gamma, delta = exact(gamma), exact(delta)
    if not 0 < gamma <= 1:
        raise InvalidInputError(f'gamma must lie in (0, 1], got {gamma}')
    if not 0 <= delta < 1:
        raise InvalidInputError(f'delta must lie in [0, 1), got {delta}')
    if max_subset_size < 0:
        raise InvalidInputError(f'Negative subset size cap {max_subset_size}')

    mode = ExpansionMode(mode)
    n = G.size(side)
    limit = subset_size_limit(G, side, gamma, max_subset_size)
    bound = (1 - delta) * G.degree(side)
    report = ExpansionReport(side=side, gamma=gamma, delta=delta, mode=mode, max_subset_size=max_subset_size,
                             verified=True, size_limit=limit)

    if mode is ExpansionMode.EXHAUSTIVE:
        _require_feasible(n, limit)
        for k in range(1, limit + 1):
            for S, gamma_size in _neighborhood_sizes(G, side, k):
                report.subsets_checked += 1
                if gamma_size < bound * k:
                    report.verified = False
                    report.witness = S
                    log.debug(f'Expansion witness on {side.value} side: {S} with |Gamma(S)|={gamma_size}')
                    return report
        return report

    samples = config.EXPANSION_SAMPLES if samples is None else samples
    rng = np.random.default_rng(seed)
    masks = G.neighbor_masks(side)
    for k in range(1, limit + 1):
        for _ in range(samples):
            S = tuple(sorted(int(v) for v in rng.choice(n, size=k, replace=False)))
            report.subsets_checked += 1
            gamma_size = hggf2.popcount(reduce(lambda m, v: m | masks[v], S, 0))
            if gamma_size < bound * k:
                report.verified = False
                report.witness = S
                return report

    log.warning(f'Sampled expansion check on {side.value} side found no counterexample '
                f'in {report.subsets_checked} subsets; this does not certify expansion')
    return report


def minimum_delta(G: BipartiteGraph, side: GraphSide, max_subset_size: int) -> Fraction:
    """Smallest delta for which every subset up to the size cap expands"""
    n = G.size(side)
    limit = min(n, max_subset_size)
    _require_feasible(n, limit)

    degree = G.degree(side)
    worst = Fraction(0)
    for k in range(1, limit + 1):
        smallest = min(gamma_size for _, gamma_size in _neighborhood_sizes(G, side, k))
        worst = max(worst, 1 - Fraction(smallest, degree * k))
    return worst


@dataclass
class ExpansionMeasurement:
    side: GraphSide
    delta: Fraction
    max_size: int
    gamma: Fraction
    witness: Union[Tuple[int, ...], None] = field(default=None)

    def to_dict(self) -> Dict[str, Any]:
        return {'side': self.side.value, 'delta': float(self.delta), 'max_size': self.max_size,
                'gamma': float(self.gamma), 'witness': None if self.witness is None else list(self.witness)}


def measure_expansion(G: BipartiteGraph, side: GraphSide, delta: Union[float, Fraction],
                      max_subset_size: int) -> ExpansionMeasurement:
    """Largest s such that every subset of size <= s expands with the given delta"""
    delta = exact(delta)
    n = G.size(side)
    limit = min(n, max_subset_size)
    _require_feasible(n, limit)

    bound = (1 - delta) * G.degree(side)
    for k in range(1, limit + 1):
        for S, gamma_size in _neighborhood_sizes(G, side, k):
            if gamma_size < bound * k:
                return ExpansionMeasurement(side, delta, k - 1, Fraction(k - 1, n), S)

    return ExpansionMeasurement(side, delta, limit, Fraction(limit, n))


def format_graph(G: BipartiteGraph) -> str:
    lines = [f'{G.n_A} {G.n_B} {G.delta_A} {G.delta_B}']
    lines.extend(' '.join(str(b) for b in nbrs) for nbrs in G.adjacency_A)
    return '\n'.join(lines) + '\n'


def parse_graph(text: str, check: bool = True) -> BipartiteGraph:
    lines = text.split('\n')
    if lines and lines[-1] == '':
        lines = lines[:-1]
    if not lines:
        raise GraphFormatError('Empty graph file')

    try:
        header = [int(v) for v in lines[0].split()]
    except ValueError as exc:
        raise GraphFormatError(f'Malformed header line: {lines[0]!r}') from exc
    if len(header) != 4:
        raise GraphFormatError(f'Header needs 4 integers, got {len(header)}')

    n_A, n_B, delta_A, delta_B = header
    if len(lines) - 1 != n_A:
        raise GraphFormatError(f'Expected {n_A} adjacency lines, got {len(lines) - 1}')

    adjacency = []
    for i, line in enumerate(lines[1:], start=2):
        try:
            adjacency.append([int(v) for v in line.split()])
        except ValueError as exc:
            raise GraphFormatError(f'Malformed adjacency on line {i}: {line!r}') from exc

    try:
        return BipartiteGraph(n_A, n_B, delta_A, delta_B, adjacency, check=check)
    except InvalidInputError as exc:
        raise GraphFormatError(str(exc)) from exc


def write_graph(G: BipartiteGraph, path: Union[str, os.PathLike]):
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(format_graph(G))
    log.info(f'Wrote graph to {path}')


def read_graph(path: Union[str, os.PathLike], check: bool = True) -> BipartiteGraph:
    with open(path, 'r', encoding='utf-8', newline='') as f:
        return parse_graph(f.read(), check=check)
