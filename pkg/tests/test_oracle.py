import pickle
from fractions import Fraction

import numpy as np
import pytest

from hgpy.definitions import *
import hgpy.core.code as hgcode
import hgpy.core.gf2 as hggf2
import hgpy.core.graph as hggraph
import hgpy.oracle.classical as hgclassical
import hgpy.oracle.critical as hgcritical
import hgpy.oracle.distance as hgdistance
from hgpy.core.exceptions import HypothesisError, InfeasibleError, InvalidInputError

# Decoding family of the K4 incidence graph at delta = 4/25 on both sides
K4_DECODING = dict(gamma_a=Fraction(1, 6), delta_a=Fraction(4, 25), gamma_b=Fraction(1, 4), delta_b=Fraction(4, 25))


def _error(C, support):
    return hggf2.Gf2Vector.from_support(C.n, support)


# Distances

@pytest.mark.parametrize('fixture, d, d_t', [
    ('four_cycle', 2, 2),
    ('k32', 2, 2),
    ('c6', 3, 3),
    ('k4_incidence', 3, 4),
])
def test_classical_distances(request, fixture, d, d_t):
    H = hggraph.incidence_matrix(request.getfixturevalue(fixture))
    assert hgdistance.classical_min_distance(H) == d
    assert hgdistance.transpose_min_distance(H) == d_t


def test_classical_distance_of_trivial_kernel():
    assert hgdistance.classical_min_distance(hggf2.Gf2SparseMatrix.identity(4)) is hgdistance.INFINITY


def test_classical_distance_with_weight_cap(k4_incidence):
    H = hggraph.incidence_matrix(k4_incidence)
    assert hgdistance.classical_min_distance(H, weight_cap=2) is hgdistance.INFINITY
    assert hgdistance.classical_min_distance(H, weight_cap=3) == 3


def test_infinity_sentinel():
    inf = hgdistance.INFINITY
    assert inf > 10 ** 9
    assert not inf < 3
    assert min(inf, 4) == 4
    assert pickle.loads(pickle.dumps(inf)) is inf
    assert hgdistance.to_json(inf) == 'inf'
    assert hgdistance.to_json(5) == 5


def test_quantum_distance_of_four_cycle_code(four_cycle_code):
    assert hgdistance.quantum_min_distance(four_cycle_code) == 2
    logical = hgdistance.find_logical_operator(four_cycle_code, Side.X)
    assert logical.support() == (0, 1)


def test_quantum_distance_bounded_by_classical(c6):
    C = hgcode.build_hypergraph_product(c6)
    H = hggraph.incidence_matrix(c6)
    bound = min(hgdistance.classical_min_distance(H), hgdistance.transpose_min_distance(H))
    assert hgdistance.quantum_min_distance(C) >= bound


def test_no_light_logical_operator(k4_code):
    for side in Side:
        assert hgdistance.find_logical_operator(k4_code, side, weight_cap=2) is None


def test_quantum_distance_of_k0_code(single_edge):
    C = hgcode.build_hypergraph_product(single_edge)
    assert hgdistance.quantum_min_distance(C) is hgdistance.INFINITY
    assert hgdistance.find_logical_operator(C, Side.X) is None


def test_uncapped_search_is_infeasible_on_large_codes(k4_code):
    with pytest.raises(InfeasibleError):
        hgdistance.quantum_min_distance(k4_code)


def test_reduced_weight(four_cycle_code, k4_code):
    C = four_cycle_code
    assert hgdistance.reduced_weight(C, hggf2.Gf2Vector.zeros(C.n), Side.X) == 0
    assert hgdistance.reduced_weight(C, _error(C, [3]), Side.X) == 1
    assert hgdistance.reduced_weight(C, C.h_z.row_vector(2), Side.X) == 0

    # A stabilizer plus one qubit of it reduces to the rest of the stabilizer
    g = k4_code.h_z.row_supports[0]
    e = _error(k4_code, g[1:])
    assert hgdistance.reduced_weight(k4_code, e, Side.X) == 1


def test_is_correctly_decoded(k4_code):
    C = k4_code
    e = _error(C, [0, 40])
    assert hgdistance.is_correctly_decoded(C, e, e, Side.X)
    assert hgdistance.is_correctly_decoded(C, e, e ^ C.h_z.row_vector(3), Side.X)
    assert not hgdistance.is_correctly_decoded(C, e, hggf2.Gf2Vector.zeros(C.n), Side.X)

    logical = hgdistance.find_logical_operator(C, Side.X, weight_cap=3)
    assert logical is not None
    assert not hgdistance.is_correctly_decoded(C, e, e ^ logical, Side.X)


# Expansion bounds

def test_expansion_bounds():
    bounds = hgcritical.ExpansionBounds.create(Fraction(1, 6), 0.16, Fraction(1, 4), 0.16, n_a=6, n_b=4)
    assert bounds.delta_a == Fraction(4, 25)
    assert bounds.radius == 1
    assert bounds.w0(3) == Fraction(1, 12)
    assert not bounds.certified
    assert bounds.to_dict()['radius'] == 1.0


# Critical generators

def test_generator_grid(k4_code):
    C = k4_code
    grid = hgcritical.generator_grid(C, Side.X, C.z_generator_row(1, 2))
    assert len(grid.aa) == C.delta_B
    assert len(grid.bb) == C.delta_A
    cells = [c for row in grid.cells for c in row]
    assert len(set(cells)) == C.delta_A * C.delta_B
    for i, qa in enumerate(grid.aa):
        for j, qb in enumerate(grid.bb):
            assert {qa, qb} <= set(C.h_x.row_supports[grid.cells[i][j]])


@pytest.mark.parametrize('q', [0, 17, 36, 51])
def test_critical_generator_of_single_qubit(k4_code, q):
    C = k4_code
    D = hgcritical.find_critical_generator(C, [q], **K4_DECODING)
    assert D is not None
    assert q in C.generator_support(Side.X, D.generator)
    assert D.errors_in_generator == frozenset({q})
    assert not D.chi_a and not D.chi_b
    assert hgcritical.validate_decomposition(C, D) == []


def test_explicit_construction_of_single_qubit(k4_code):
    C = k4_code
    for q in (5, 44):
        D = hgcritical.proof_critical_generator(C, [q], Fraction(4, 25), Fraction(4, 25))
        assert hgcritical.validate_decomposition(C, D) == []
        assert D.errors_in_generator == frozenset({q})


def test_find_critical_generator_rejects_empty_error(k4_code):
    with pytest.raises(InvalidInputError):
        hgcritical.find_critical_generator(k4_code, [], **K4_DECODING)


def test_validate_decomposition_reports_violations(k4_code):
    C = k4_code
    D = hgcritical.find_critical_generator(C, [0], **K4_DECODING)
    broken = hgcritical.CriticalDecomposition(
        side=D.side, generator=D.generator, label=D.label, error=D.error,
        x_a=frozenset(), xbar_a=D.xbar_a | D.x_a, chi_a=D.chi_a,
        x_b=D.x_b, xbar_b=D.xbar_b, chi_b=D.chi_b, delta_a=D.delta_a, delta_b=D.delta_b)
    violations = hgcritical.validate_decomposition(C, broken)
    assert violations
    with pytest.raises(InvalidInputError):
        hgcritical.syndrome_partition(C, broken)


def test_syndrome_partition_of_single_qubit(k4_code):
    C = k4_code
    q = C.qubit_flat(KIND_AA, 2, 4)
    D = hgcritical.find_critical_generator(C, [q], **K4_DECODING)
    partition = hgcritical.syndrome_partition(C, D)
    assert partition.is_disjoint()

    grid = hgcritical.generator_grid(C, Side.X, D.generator)
    assert partition.union() == frozenset(c for row in grid.cells for c in row)

    s = hgcode.syndrome_x(C, _error(C, [q]))
    assert partition.s_abbar | partition.s_abarb == frozenset(s.support())
    assert not partition.s_ab


@pytest.mark.parametrize('kind, first, second, decrease', [
    (KIND_AA, 3, 1, 2),
    (KIND_BB, 2, 0, 3),
])
def test_critical_flip_of_single_qubit(k4_code, kind, first, second, decrease):
    C = k4_code
    q = C.qubit_flat(kind, first, second)
    e = _error(C, [q])
    D = hgcritical.find_critical_generator(C, [q], **K4_DECODING)
    bounds = hgcritical.ExpansionBounds.create(n_a=6, n_b=4, **K4_DECODING)

    assert hgcritical.flip_case(D) == 1
    assert hgcritical.chi_bounds_hold(D)
    assert hgcritical.errors_reduced_in_generator(D)

    partial, partial_bar = hgcritical.check_partial_bounds(C, D)
    assert partial == partial_bar == decrease
    bound, bound_bar = hgcritical.partial_bounds(D)
    assert bound == bound_bar == decrease

    flip = hgcritical.lemma8_flip(C, e, D, bounds)
    assert flip.flip == (q,)
    assert flip.decrease == decrease
    assert 3 * flip.decrease >= flip.size
    assert hgdistance.reduced_weight(C, e ^ _error(C, flip.flip), Side.X) == 0


def test_critical_flip_rejects_other_error(k4_code):
    C = k4_code
    D = hgcritical.find_critical_generator(C, [0], **K4_DECODING)
    with pytest.raises(InvalidInputError):
        hgcritical.lemma8_flip(C, _error(C, [1]), D)


def test_critical_flip_rejects_large_error(k4_code):
    C = k4_code
    support = [0, 8, 40]
    D = hgcritical.find_critical_generator(C, support, **K4_DECODING)
    if D is None:
        pytest.skip('no critical generator for this error')
    bounds = hgcritical.ExpansionBounds.create(n_a=6, n_b=4, **K4_DECODING)
    with pytest.raises(HypothesisError):
        hgcritical.lemma8_flip(C, _error(C, support), D, bounds)

# Critical generators on the projective plane code

# Decoding family of the projective plane of order 3 at delta = 4/25: pairs of points
# (and of lines) have 7 neighbors, triples at most 10 < 3 * 4 * 21/25
PLANE_DECODING = dict(gamma_a=Fraction(2, 13), delta_a=Fraction(4, 25), gamma_b=Fraction(2, 13), delta_b=Fraction(4, 25))


def _plane_bounds():
    return hgcritical.ExpansionBounds.create(n_a=13, n_b=13, **PLANE_DECODING)


def test_plane_decoding_family(projective_plane):
    for side in GraphSide:
        measured = hggraph.measure_expansion(projective_plane, side, Fraction(4, 25), 5)
        assert measured.max_size == 2
        assert measured.gamma == Fraction(2, 13)
        assert len(measured.witness) == 3

    bounds = _plane_bounds()
    assert bounds.radius == 2
    assert bounds.w0(4) == Fraction(2, 15)


def _check_small_error(C, support, side, bounds):
    D = hgcritical.find_critical_generator(C, support, side=side, **PLANE_DECODING)
    assert D is not None, support
    assert hgcritical.validate_decomposition(C, D) == []
    assert D.errors_in_generator <= frozenset(support)
    assert hgcritical.chi_bounds_hold(D)
    assert hgcritical.errors_reduced_in_generator(D)

    partition = hgcritical.syndrome_partition(C, D)
    grid = hgcritical.generator_grid(C, side, D.generator)
    assert partition.is_disjoint()
    assert partition.union() == frozenset(c for row in grid.cells for c in row)

    # At most two errors among 4 AA and 4 BB qubits keep x + y <= 1/2
    assert hgcritical.flip_case(D) == 1
    flip = hgcritical.lemma8_flip(C, _error(C, support), D, bounds)
    assert set(flip.flip) == D.errors_in_generator
    assert flip.decrease > 0
    assert 3 * flip.decrease >= flip.size


@pytest.mark.parametrize('side', list(Side))
def test_critical_generators_of_all_small_errors(projective_plane_code, plane_small_errors, side):
    bounds = _plane_bounds()
    for support in plane_small_errors:
        _check_small_error(projective_plane_code, support, side, bounds)


def test_critical_generators_of_random_small_errors(projective_plane_code):
    C = projective_plane_code
    bounds = _plane_bounds()
    rng = np.random.default_rng(8)
    for _ in range(1000):
        weight = int(rng.integers(1, 3))
        support = sorted(int(q) for q in rng.choice(C.n, size=weight, replace=False))
        side = Side.X if rng.integers(0, 2) == 0 else Side.Z
        _check_small_error(C, support, side, bounds)


def _sized_decomposition(x_a, xbar_a, chi_a, x_b, xbar_b, chi_b) -> hgcritical.CriticalDecomposition:
    qubits = iter(range(x_a + xbar_a + chi_a + x_b + xbar_b + chi_b))
    parts = [frozenset(next(qubits) for _ in range(size)) for size in (x_a, xbar_a, chi_a, x_b, xbar_b, chi_b)]
    return hgcritical.CriticalDecomposition(
        side=Side.X, generator=0, label=(0, 0), error=parts[0] | parts[3],
        x_a=parts[0], xbar_a=parts[1], chi_a=parts[2], x_b=parts[3], xbar_b=parts[4], chi_b=parts[5],
        delta_a=Fraction(4, 25), delta_b=Fraction(4, 25))


@pytest.mark.parametrize('sizes, case', [
    ((1, 3, 0, 1, 3, 0), 1),
    ((1, 2, 1, 1, 3, 0), 1),
    ((2, 2, 0, 2, 2, 0), 2),
    ((1, 2, 1, 2, 2, 0), 2),
    ((3, 1, 0, 3, 1, 0), 3),
    ((2, 1, 1, 2, 1, 1), 3),
    ((3, 1, 0, 1, 3, 0), 4),
    ((2, 1, 1, 2, 2, 0), 4),
])
def test_flip_case(sizes, case):
    assert hgcritical.flip_case(_sized_decomposition(*sizes)) == case


# Classical bit-flip decoding

def test_classical_flip_decode_corrects_single_bits(k4_incidence):
    G = k4_incidence
    H = hggraph.incidence_matrix(G)
    for a in range(G.n_A):
        e = hggf2.Gf2Vector.from_support(G.n_A, [a])
        assert hgclassical.classical_flip_decode(G, hggf2.mat_vec(H, e)) == e


def test_classical_flip_decode_zero_syndrome(k4_incidence):
    correction = hgclassical.classical_flip_decode(k4_incidence, hggf2.Gf2Vector.zeros(4))
    assert correction.is_zero()


def test_classical_flip_decode_gets_stuck(c6):
    # One unsatisfied check leaves every bit with at most one of its two checks unsatisfied
    s = hggf2.Gf2Vector.from_support(3, [0])
    assert hgclassical.classical_flip_decode(c6, s) is None
