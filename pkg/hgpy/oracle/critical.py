# -*- coding: utf-8 -*-
"""Critical generators and the flip accounting inside them

A generator g is critical for an error support E if it splits into six
parts x_a, xbar_a, chi_a (its AA qubits) and x_b, xbar_b, chi_b (its BB
qubits) such that
  * x_a, x_b lie inside E and xbar_a, xbar_b outside E,
  * every check next to x_a and x_b has exactly two neighbors in E,
  * every check next to xbar_a and xbar_b has none,
  * every check next to x_a and xbar_b (or xbar_a and x_b) has exactly one,
  * x_a u x_b is nonempty, |chi_a| <= 2 delta_B Delta_B, |chi_b| <= 2 delta_A Delta_A.

Every local check of a generator is adjacent to exactly one of its AA
qubits and one of its BB qubits, so the local checks form a grid indexed
by (AA qubit, BB qubit) and all conditions are statements about cells.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, FrozenSet, Iterable, List, NamedTuple, Tuple, Union

from hgpy.definitions import *
import hgpy.core.code as hgcode
import hgpy.core.decoder as hgdecoder
import hgpy.core.gf2 as hggf2
import hgpy.core.graph as hggraph
import hgpy.core.logger as hglogger
import hgpy.oracle.distance as hgdistance
from hgpy.core.exceptions import HypothesisError, InvalidInputError, OracleInvariantError

log = hglogger.getLogger(__name__)


@dataclass(frozen=True)
class ExpansionBounds:
    """Expansion parameters of both sides of the base graph"""
    gamma_a: Fraction
    delta_a: Fraction
    gamma_b: Fraction
    delta_b: Fraction
    n_a: int
    n_b: int
    certified: bool = False

    @classmethod
    def create(cls, gamma_a, delta_a, gamma_b, delta_b, n_a: int, n_b: int, certified: bool = False) -> ExpansionBounds:
        return cls(hggraph.exact(gamma_a), hggraph.exact(delta_a), hggraph.exact(gamma_b), hggraph.exact(delta_b),
                   n_a, n_b, certified)

    @property
    def radius(self) -> Fraction:
        """min(gamma_A n_A, gamma_B n_B)"""
        return min(self.gamma_a * self.n_a, self.gamma_b * self.n_b)

    def w0(self, delta_b_degree: int) -> Fraction:
        """Guaranteed correctable weight radius / (3 (1 + Delta_B))"""
        return self.radius / (3 * (1 + delta_b_degree))

    def to_dict(self) -> Dict[str, Any]:
        return {'gamma_a': float(self.gamma_a), 'delta_a': float(self.delta_a),
                'gamma_b': float(self.gamma_b), 'delta_b': float(self.delta_b),
                'radius': float(self.radius), 'certified': self.certified}


class GeneratorGrid(NamedTuple):
    side: Side
    row: int
    aa: Tuple[int, ...]
    bb: Tuple[int, ...]
    # cells[i][j] = local check adjacent to aa[i] and bb[j]
    cells: Tuple[Tuple[int, ...], ...]


def generator_grid(C: hgcode.CssCode, side: Side, row: int) -> GeneratorGrid:
    side = Side(side)
    support = C.generator_support(side, row)
    aa = tuple(q for q in support if q < C.offset)
    bb = tuple(q for q in support if q >= C.offset)
    bb_position = {q: j for j, q in enumerate(bb)}
    checks = C.check_matrix(side)

    cells = [[-1] * len(bb) for _ in aa]
    for i, q in enumerate(aa):
        for c in checks.col_supports[q]:
            partners = [bb_position[p] for p in checks.row_supports[c] if p in bb_position]
            if len(partners) != 1:
                raise OracleInvariantError(f'Check {c} meets {len(partners)} BB qubits of generator {row}',
                                           witness=(row, c))
            cells[i][partners[0]] = c

    if any(c < 0 for r in cells for c in r):
        raise OracleInvariantError(f'Local checks of generator {row} do not form a full grid', witness=row)
    return GeneratorGrid(side, row, aa, bb, tuple(tuple(r) for r in cells))


def _error_counts(C: hgcode.CssCode, side: Side, grid: GeneratorGrid, E: FrozenSet[int]) -> List[List[int]]:
    checks = C.check_matrix(side)
    return [[sum(1 for q in checks.row_supports[c] if q in E) for c in r] for r in grid.cells]


@dataclass(frozen=True)
class CriticalDecomposition:
    side: Side
    generator: int
    label: Tuple[int, int]
    error: FrozenSet[int]
    x_a: FrozenSet[int]
    xbar_a: FrozenSet[int]
    chi_a: FrozenSet[int]
    x_b: FrozenSet[int]
    xbar_b: FrozenSet[int]
    chi_b: FrozenSet[int]
    delta_a: Fraction
    delta_b: Fraction

    @property
    def size_a(self) -> int:
        """Number of AA qubits of the generator (Delta_B)"""
        return len(self.x_a) + len(self.xbar_a) + len(self.chi_a)

    @property
    def size_b(self) -> int:
        """Number of BB qubits of the generator (Delta_A)"""
        return len(self.x_b) + len(self.xbar_b) + len(self.chi_b)

    @property
    def x(self) -> Fraction:
        return Fraction(len(self.x_a), self.size_a)

    @property
    def z(self) -> Fraction:
        return Fraction(len(self.chi_a), self.size_a)

    @property
    def xbar(self) -> Fraction:
        return 1 - self.x - self.z

    @property
    def y(self) -> Fraction:
        return Fraction(len(self.x_b), self.size_b)

    @property
    def t(self) -> Fraction:
        return Fraction(len(self.chi_b), self.size_b)

    @property
    def ybar(self) -> Fraction:
        return 1 - self.y - self.t

    @property
    def errors_in_generator(self) -> FrozenSet[int]:
        return self.x_a | self.x_b

    @property
    def clean_in_generator(self) -> FrozenSet[int]:
        return self.xbar_a | self.xbar_b

    @property
    def support(self) -> FrozenSet[int]:
        return self.x_a | self.xbar_a | self.chi_a | self.x_b | self.xbar_b | self.chi_b

    def reduced(self) -> Dict[str, Fraction]:
        return {'x': self.x, 'xbar': self.xbar, 'z': self.z, 'y': self.y, 'ybar': self.ybar, 't': self.t}

    def to_dict(self) -> Dict[str, Any]:
        out = {'side': self.side.value, 'generator': self.generator, 'label': list(self.label)}
        for name in ('x_a', 'xbar_a', 'chi_a', 'x_b', 'xbar_b', 'chi_b'):
            out[name] = sorted(getattr(self, name))
        out.update({k: str(v) for k, v in self.reduced().items()})
        return out


def _chi_limits(grid: GeneratorGrid, delta_a: Fraction, delta_b: Fraction) -> Tuple[int, int]:
    return (min(len(grid.aa), math.floor(2 * delta_b * len(grid.aa))),
            min(len(grid.bb), math.floor(2 * delta_a * len(grid.bb))))


def _error_set(C: hgcode.CssCode, E: Iterable[int]) -> FrozenSet[int]:
    E = frozenset(int(q) for q in E)
    if not E:
        raise InvalidInputError('Error support must be nonempty')
    for q in E:
        if not 0 <= q < C.n:
            raise InvalidInputError(f'Qubit {q} out of range [0, {C.n})')
    return E


def _decomposition(C: hgcode.CssCode, grid: GeneratorGrid, E: FrozenSet[int], chi_a: Iterable[int],
                   chi_b: Iterable[int], delta_a: Fraction, delta_b: Fraction) -> CriticalDecomposition:
    chi_a, chi_b = frozenset(chi_a), frozenset(chi_b)
    rest_a = frozenset(grid.aa) - chi_a
    rest_b = frozenset(grid.bb) - chi_b
    return CriticalDecomposition(side=grid.side, generator=grid.row, label=C.generator_label(grid.side, grid.row),
                                 error=E, x_a=rest_a & E, xbar_a=rest_a - E, chi_a=chi_a,
                                 x_b=rest_b & E, xbar_b=rest_b - E, chi_b=chi_b,
                                 delta_a=delta_a, delta_b=delta_b)


def _critical_in_generator(C: hgcode.CssCode, grid: GeneratorGrid, E: FrozenSet[int],
                           delta_a: Fraction, delta_b: Fraction) -> Union[CriticalDecomposition, None]:
    counts = _error_counts(C, grid.side, grid, E)
    in_a = [q in E for q in grid.aa]
    in_b = [q in E for q in grid.bb]

    # Outside the chi rows and columns a cell must see exactly the E qubits among its two generator qubits
    bad = [(i, j) for i in range(len(grid.aa)) for j in range(len(grid.bb))
           if counts[i][j] != in_a[i] + in_b[j]]

    max_a, max_b = _chi_limits(grid, delta_a, delta_b)
    for total in range(max_a + max_b + 1):
        for size_a in range(max(0, total - max_b), min(total, max_a) + 1):
            size_b = total - size_a
            for rows in itertools.combinations(range(len(grid.aa)), size_a):
                rows = set(rows)
                open_bad = [j for i, j in bad if i not in rows]
                for cols in itertools.combinations(range(len(grid.bb)), size_b):
                    if any(j not in cols for j in open_bad):
                        continue
                    if not any(in_a[i] for i in range(len(grid.aa)) if i not in rows) and \
                            not any(in_b[j] for j in range(len(grid.bb)) if j not in cols):
                        continue
                    return _decomposition(C, grid, E, (grid.aa[i] for i in rows), (grid.bb[j] for j in cols),
                                          delta_a, delta_b)
    return None


def find_critical_generator(C: hgcode.CssCode, E: Iterable[int], gamma_a, delta_a, gamma_b, delta_b,
                            side: Side = Side.X) -> Union[CriticalDecomposition, None]:
    """First critical generator in row order for the error support E, or None

    Within a generator the chi parts are chosen with the smallest total
    size, then the smallest chi_a, then lexicographically.
    """
    side = Side(side)
    E = _error_set(C, E)
    delta_a, delta_b = hggraph.exact(delta_a), hggraph.exact(delta_b)

    if gamma_a is not None and gamma_b is not None:
        radius = min(hggraph.exact(gamma_a) * C.n_A, hggraph.exact(gamma_b) * C.n_B)
        if len(E) > radius:
            log.debug(f'|E|={len(E)} exceeds min(gamma_A n_A, gamma_B n_B)={radius}, existence is not guaranteed')

    generators = C.generator_matrix(side)
    rows = sorted({g for q in E for g in generators.col_supports[q]})
    for row in rows:
        D = _critical_in_generator(C, generator_grid(C, side, row), E, delta_a, delta_b)
        if D is not None:
            return D
    return None


def validate_decomposition(C: hgcode.CssCode, D: CriticalDecomposition) -> List[str]:
    """All violated conditions of a decomposition, empty if it is valid"""
    violations = []
    grid = generator_grid(C, D.side, D.generator)

    if D.x_a | D.xbar_a | D.chi_a != frozenset(grid.aa) or \
            len(D.x_a) + len(D.xbar_a) + len(D.chi_a) != len(grid.aa):
        violations.append('x_a, xbar_a, chi_a do not partition the AA part')
    if D.x_b | D.xbar_b | D.chi_b != frozenset(grid.bb) or \
            len(D.x_b) + len(D.xbar_b) + len(D.chi_b) != len(grid.bb):
        violations.append('x_b, xbar_b, chi_b do not partition the BB part')
    if not (D.x_a | D.x_b) <= D.error:
        violations.append('x_a u x_b is not contained in E')
    if (D.xbar_a | D.xbar_b) & D.error:
        violations.append('xbar_a u xbar_b meets E')
    if not D.x_a | D.x_b:
        violations.append('x_a u x_b is empty')

    max_a, max_b = _chi_limits(grid, D.delta_a, D.delta_b)
    if len(D.chi_a) > max_a:
        violations.append(f'|chi_a|={len(D.chi_a)} exceeds {max_a}')
    if len(D.chi_b) > max_b:
        violations.append(f'|chi_b|={len(D.chi_b)} exceeds {max_b}')

    if violations:
        return violations

    counts = _error_counts(C, D.side, grid, D.error)
    required = {('x', 'x'): 2, ('xbar', 'xbar'): 0, ('x', 'xbar'): 1, ('xbar', 'x'): 1}
    kind_a = [_kind(q, D.x_a, D.xbar_a) for q in grid.aa]
    kind_b = [_kind(q, D.x_b, D.xbar_b) for q in grid.bb]
    for i, j in itertools.product(range(len(grid.aa)), range(len(grid.bb))):
        expected = required.get((kind_a[i], kind_b[j]))
        if expected is not None and counts[i][j] != expected:
            violations.append(f'check {grid.cells[i][j]} in {kind_a[i]}/{kind_b[j]} has '
                              f'{counts[i][j]} neighbors in E, expected {expected}')
    return violations


def _kind(q: int, x: FrozenSet[int], xbar: FrozenSet[int]) -> str:
    if q in x:
        return 'x'
    if q in xbar:
        return 'xbar'
    return 'chi'


def _require_valid(C: hgcode.CssCode, D: CriticalDecomposition):
    violations = validate_decomposition(C, D)
    if violations:
        raise InvalidInputError(f'Invalid critical decomposition of generator {D.generator}: {violations[0]}')


def proof_critical_generator(C: hgcode.CssCode, E: Iterable[int], delta_a, delta_b) -> CriticalDecomposition:
    """Critical Z-generator for an X error built along the existence argument

    A column a of the AA errors with the most unique neighbors is picked
    first and, if BB errors sit on those unique neighbors, a row b the same
    way. Raises HypothesisError if the result is not a valid decomposition,
    which happens when the graph does not expand enough for E.
    """
    E = _error_set(C, E)
    delta_a, delta_b = hggraph.exact(delta_a), hggraph.exact(delta_b)
    G = C.graph
    error_a = sorted((C.qubit(q).first, C.qubit(q).second) for q in E if q < C.offset)
    error_b = sorted((C.qubit(q).first, C.qubit(q).second) for q in E if q >= C.offset)

    def best_vertex(S: List[int], side: GraphSide) -> Tuple[int, FrozenSet[int]]:
        unique, _ = hggraph.unique_and_multiple_neighbors(G, S, side)
        adjacency = G.adjacency(side)
        v = max(S, key=lambda u: (len(unique.intersection(adjacency[u])), -u))
        return v, unique.intersection(adjacency[v])

    a = unique_a = None
    error_b_at_a: List[Tuple[int, int]] = []
    if error_a:
        a, unique_a = best_vertex(sorted({second for _, second in error_a}), GraphSide.LEFT)
        error_b_at_a = [(b, beta) for b, beta in error_b if beta in unique_a]

    if error_a and not error_b_at_a:
        alpha = min(first for first, second in error_a if second == a)
        b = G.adjacency_A[alpha][0]
        row = C.z_generator_row(b, a)
        grid = generator_grid(C, Side.X, row)
        chi_b = [C.qubit_flat(KIND_BB, b, beta) for beta in G.adjacency_A[a] if beta not in unique_a]
        D = _decomposition(C, grid, E, (), chi_b, delta_a, delta_b)

    elif not error_a:
        b, unique_b = best_vertex(sorted({first for first, _ in error_b}), GraphSide.RIGHT)
        beta = min(second for first, second in error_b if first == b)
        a = G.adjacency_B[beta][0]
        row = C.z_generator_row(b, a)
        grid = generator_grid(C, Side.X, row)
        chi_a = [C.qubit_flat(KIND_AA, alpha, a) for alpha in G.adjacency_B[b] if alpha not in unique_b]
        D = _decomposition(C, grid, E, chi_a, (), delta_a, delta_b)

    else:
        b, unique_b = best_vertex(sorted({first for first, _ in error_b_at_a}), GraphSide.RIGHT)
        row = C.z_generator_row(b, a)
        grid = generator_grid(C, Side.X, row)
        chi_a = [C.qubit_flat(KIND_AA, alpha, a) for alpha in G.adjacency_B[b] if alpha not in unique_b]
        chi_b = [C.qubit_flat(KIND_BB, b, beta) for beta in G.adjacency_A[a] if beta not in unique_a]
        D = _decomposition(C, grid, E, chi_a, chi_b, delta_a, delta_b)

    violations = validate_decomposition(C, D)
    if violations:
        raise HypothesisError(f'Constructed decomposition of generator {D.label} is not critical: {violations[0]}')
    return D


@dataclass(frozen=True)
class SyndromePartition:
    """Local checks of a critical generator by the parts of their AA and BB qubit"""
    s_a: FrozenSet[int]
    s_b: FrozenSet[int]
    s_abar: FrozenSet[int]
    s_bbar: FrozenSet[int]
    s_ab: FrozenSet[int]
    s_abbar: FrozenSet[int]
    s_abarb: FrozenSet[int]
    s_abarbbar: FrozenSet[int]
    s_bar: FrozenSet[int]

    def sets(self) -> Dict[str, FrozenSet[int]]:
        return {name: getattr(self, name) for name in self.__dataclass_fields__}

    def union(self) -> FrozenSet[int]:
        return frozenset().union(*self.sets().values())

    def is_disjoint(self) -> bool:
        return sum(len(s) for s in self.sets().values()) == len(self.union())


_PARTITION_CELLS = {
    ('x', 'chi'): 's_a', ('chi', 'x'): 's_b', ('xbar', 'chi'): 's_abar', ('chi', 'xbar'): 's_bbar',
    ('x', 'x'): 's_ab', ('x', 'xbar'): 's_abbar', ('xbar', 'x'): 's_abarb', ('xbar', 'xbar'): 's_abarbbar',
    ('chi', 'chi'): 's_bar',
}


def syndrome_partition(C: hgcode.CssCode, D: CriticalDecomposition) -> SyndromePartition:
    _require_valid(C, D)
    grid = generator_grid(C, D.side, D.generator)
    parts: Dict[str, set] = {name: set() for name in _PARTITION_CELLS.values()}
    for i, qa in enumerate(grid.aa):
        for j, qb in enumerate(grid.bb):
            cell = (_kind(qa, D.x_a, D.xbar_a), _kind(qb, D.x_b, D.xbar_b))
            parts[_PARTITION_CELLS[cell]].add(grid.cells[i][j])
    partition = SyndromePartition(**{name: frozenset(s) for name, s in parts.items()})

    s = hgcode.syndrome(C, D.side, hggf2.Gf2Vector.from_support(C.n, D.error))
    for c in partition.s_ab | partition.s_abarbbar:
        if s[c]:
            raise OracleInvariantError(f'Syndrome is 1 on check {c} of S_ab u S_abarbbar', witness=c)
    for c in partition.s_abbar | partition.s_abarb:
        if not s[c]:
            raise OracleInvariantError(f'Syndrome is 0 on check {c} of S_abbar u S_abarb', witness=c)
    return partition


def _flip_decrease(C: hgcode.CssCode, side: Side, e: hggf2.Gf2Vector, flip: Iterable[int]) -> int:
    before = hgcode.syndrome(C, side, e).weight()
    after = hgcode.syndrome(C, side, e ^ hggf2.Gf2Vector.from_support(C.n, flip)).weight()
    return before - after


def partial_decreases(C: hgcode.CssCode, D: CriticalDecomposition) -> Tuple[int, int]:
    """Exact syndrome decreases of flipping x_a u x_b and of flipping xbar_a u xbar_b"""
    e = hggf2.Gf2Vector.from_support(C.n, D.error)
    partial = _flip_decrease(C, D.side, e, D.errors_in_generator)
    partial_bar = _flip_decrease(C, D.side, e, D.clean_in_generator)
    completed = _flip_decrease(C, D.side, e, D.errors_in_generator | D.chi_a | D.chi_b)
    if completed != partial_bar:
        raise OracleInvariantError(f'Flipping xbar_a u xbar_b and its complement in the generator '
                                   f'decrease the syndrome by {partial_bar} and {completed}', witness=D)
    return partial, partial_bar


def partial_bounds(D: CriticalDecomposition) -> Tuple[Fraction, Fraction]:
    """Lower bounds on the two decreases from the part sizes"""
    scale = D.size_a * D.size_b
    x, xbar, z, y, ybar, t = D.x, D.xbar, D.z, D.y, D.ybar, D.t
    return (scale * (x * ybar + xbar * y - x * t - y * z),
            scale * (x * ybar + xbar * y - xbar * t - ybar * z))


def check_partial_bounds(C: hgcode.CssCode, D: CriticalDecomposition) -> Tuple[int, int]:
    partial, partial_bar = partial_decreases(C, D)
    bound, bound_bar = partial_bounds(D)
    if partial < bound or partial_bar < bound_bar:
        raise OracleInvariantError(f'Decreases ({partial}, {partial_bar}) below the bounds '
                                   f'({bound}, {bound_bar})', witness=D)
    return partial, partial_bar


def chi_bounds_hold(D: CriticalDecomposition) -> bool:
    """z <= 1/3 - 1/(3 Delta_B) and t <= 1/3 - 1/(3 Delta_A)"""
    return D.z <= Fraction(1, 3) - Fraction(1, 3 * D.size_a) and \
        D.t <= Fraction(1, 3) - Fraction(1, 3 * D.size_b)


def errors_reduced_in_generator(D: CriticalDecomposition) -> bool:
    """|x_a u x_b| <= (Delta_A + Delta_B) / 2"""
    return 2 * len(D.errors_in_generator) <= D.size_a + D.size_b


def flip_case(D: CriticalDecomposition) -> int:
    """Case of the flip choice: 1 and 2 flip the errors, 3 flips the clean part, 4 decides by the decreases"""
    x, xbar, y, ybar = D.x, D.xbar, D.y, D.ybar
    if x + y <= Fraction(2, 3):
        return 1
    if x <= xbar and y <= ybar:
        return 2
    if x > xbar and y > ybar:
        return 3
    return 4


def lemma8_flip(C: hgcode.CssCode, e: hggf2.Gf2Vector, D: CriticalDecomposition,
                bounds: ExpansionBounds = None) -> hgdecoder.FlipCandidate:
    """Flip inside a critical generator that lowers the syndrome by at least a third of its size

    Raises HypothesisError if the error is not small or not reduced enough,
    and OracleInvariantError if an asserted inequality fails on exact
    recomputation.
    """
    if frozenset(e.support()) != D.error:
        raise InvalidInputError('Decomposition was built for a different error support')
    _require_valid(C, D)

    if bounds is not None and e.weight() > bounds.radius:
        w_r = hgdistance.reduced_weight(C, e, D.side)
        if w_r > bounds.radius:
            raise HypothesisError(f'Reduced weight {w_r} exceeds min(gamma_A n_A, gamma_B n_B)={bounds.radius}')
    if not chi_bounds_hold(D):
        raise HypothesisError(f'chi parts too large: z={D.z}, t={D.t}')
    if not errors_reduced_in_generator(D):
        raise HypothesisError(f'{len(D.errors_in_generator)} errors inside a generator of weight '
                              f'{D.size_a + D.size_b}, error is not reduced')

    partial, partial_bar = check_partial_bounds(C, D)

    case = flip_case(D)
    if case in (1, 2):
        flip = D.errors_in_generator
    elif case == 3:
        flip = D.clean_in_generator
    elif partial >= partial_bar:
        flip = D.errors_in_generator
    elif 2 * len(D.clean_in_generator) <= D.size_a + D.size_b:
        flip = D.clean_in_generator
    else:
        flip = D.errors_in_generator | D.chi_a | D.chi_b

    decrease = _flip_decrease(C, D.side, e, flip)
    if not flip or 3 * decrease < len(flip):
        raise OracleInvariantError(f'Case {case} flip of size {len(flip)} decreases the syndrome by {decrease}',
                                   witness=(D, sorted(flip)))

    support = C.generator_support(D.side, D.generator)
    mask = sum(1 << i for i, q in enumerate(support) if q in flip)
    log.debug(f'Case {case} flip in generator {D.label}: size {len(flip)}, decrease {decrease}')
    return hgdecoder.FlipCandidate(generator=D.generator, mask=mask, flip=tuple(sorted(flip)),
                                   decrease=decrease, size=len(flip))
