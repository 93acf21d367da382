# -*- coding: utf-8 -*-
"""Hypergraph-product CSS codes

Qubits are the pairs A x A (kind AA) followed by B x B (kind BB). The AA
qubit (alpha, a) has flat index alpha*n_A + a, the BB qubit (b, beta) has
flat index n_A^2 + b*n_B + beta. Rows of h_x are the X-checks (alpha, beta)
in row-major order, rows of h_z the Z-generators (b, a) in row-major order.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Iterable, NamedTuple, Tuple, Union

import hgpy
from hgpy import config
from hgpy.definitions import *
import hgpy.core.gf2 as hggf2
import hgpy.core.graph as hggraph
import hgpy.core.logger as hglogger
from hgpy.core.exceptions import DimensionError, InvalidInputError, OracleInvariantError

log = hglogger.getLogger(__name__)


class QubitIndex(NamedTuple):
    kind: str
    first: int
    second: int
    flat: int


class CssCode:
    """Hypergraph product Q_G of a bipartite graph with itself"""

    def __init__(self, graph: hggraph.BipartiteGraph):
        if not graph.is_valid():
            raise InvalidInputError(f'Cannot build a code from an invalid graph: {graph.invariant_violations()[0]}')

        self.graph = graph
        self.n_A = n_A = graph.n_A
        self.n_B = n_B = graph.n_B
        self.delta_A = graph.delta_A
        self.delta_B = graph.delta_B
        self.offset = n_A * n_A
        self.n = n_A * n_A + n_B * n_B
        self.row_weight = graph.delta_A + graph.delta_B

        adj_A, adj_B = graph.adjacency_A, graph.adjacency_B
        offset = self.offset

        # X-check (alpha, beta): AA qubits (alpha, a) with a ~ beta, BB qubits (b, beta) with b ~ alpha
        x_rows = []
        for alpha in range(n_A):
            for beta in range(n_B):
                x_rows.append(tuple(alpha * n_A + a for a in adj_B[beta])
                              + tuple(offset + b * n_B + beta for b in adj_A[alpha]))

        # Z-generator (b, a): AA qubits (alpha, a) with alpha ~ b, BB qubits (b, beta) with beta ~ a
        z_rows = []
        for b in range(n_B):
            for a in range(n_A):
                z_rows.append(tuple(alpha * n_A + a for alpha in adj_B[b])
                              + tuple(offset + b * n_B + beta for beta in adj_A[a]))

        self.h_x = hggf2.Gf2SparseMatrix(n_A * n_B, self.n, x_rows, check=False)
        self.h_z = hggf2.Gf2SparseMatrix(n_B * n_A, self.n, z_rows, check=False)

        if not (self.h_x @ self.h_z.transpose()).is_zero():
            raise OracleInvariantError('h_x h_z^T != 0 for the constructed code')

        self._dimension: Union[int, None] = None

    def __repr__(self):
        return (f'{self.__class__.__name__}(n_A={self.n_A}, n_B={self.n_B}, '
                f'delta_A={self.delta_A}, delta_B={self.delta_B}, n={self.n})')

    # Index maps

    def qubit_flat(self, kind: str, first: int, second: int) -> int:
        if kind == KIND_AA:
            if not (0 <= first < self.n_A and 0 <= second < self.n_A):
                raise InvalidInputError(f'AA qubit ({first}, {second}) out of range')
            return first * self.n_A + second
        if kind == KIND_BB:
            if not (0 <= first < self.n_B and 0 <= second < self.n_B):
                raise InvalidInputError(f'BB qubit ({first}, {second}) out of range')
            return self.offset + first * self.n_B + second
        raise InvalidInputError(f'Unknown qubit kind {kind!r}')

    def qubit(self, flat: int) -> QubitIndex:
        if not 0 <= flat < self.n:
            raise InvalidInputError(f'Qubit {flat} out of range [0, {self.n})')
        if flat < self.offset:
            return QubitIndex(KIND_AA, flat // self.n_A, flat % self.n_A, flat)
        rest = flat - self.offset
        return QubitIndex(KIND_BB, rest // self.n_B, rest % self.n_B, flat)

    def x_check_row(self, alpha: int, beta: int) -> int:
        if not (0 <= alpha < self.n_A and 0 <= beta < self.n_B):
            raise InvalidInputError(f'X-check ({alpha}, {beta}) out of range')
        return alpha * self.n_B + beta

    def x_check_label(self, row: int) -> Tuple[int, int]:
        if not 0 <= row < self.h_x.rows:
            raise InvalidInputError(f'X-check row {row} out of range')
        return divmod(row, self.n_B)

    def z_generator_row(self, b: int, a: int) -> int:
        if not (0 <= b < self.n_B and 0 <= a < self.n_A):
            raise InvalidInputError(f'Z-generator ({b}, {a}) out of range')
        return b * self.n_A + a

    def z_generator_label(self, row: int) -> Tuple[int, int]:
        if not 0 <= row < self.h_z.rows:
            raise InvalidInputError(f'Z-generator row {row} out of range')
        return divmod(row, self.n_A)

    # Side dependent views

    def check_matrix(self, side: Side) -> hggf2.Gf2SparseMatrix:
        """Matrix producing the syndrome of errors of type `side`"""
        return self.h_x if Side(side) is Side.X else self.h_z

    def generator_matrix(self, side: Side) -> hggf2.Gf2SparseMatrix:
        """Stabilizers that act trivially on errors of type `side`, flips live in their rows"""
        return self.h_z if Side(side) is Side.X else self.h_x

    def generator_support(self, side: Side, row: int) -> Tuple[int, ...]:
        M = self.generator_matrix(side)
        if not 0 <= row < M.rows:
            raise InvalidInputError(f'Generator row {row} out of range [0, {M.rows})')
        return M.row_supports[row]

    def generator_label(self, side: Side, row: int) -> Tuple[int, int]:
        return self.z_generator_label(row) if Side(side) is Side.X else self.x_check_label(row)


@dataclass(frozen=True)
class ErrorPattern:
    e_x: hggf2.Gf2Vector
    e_z: hggf2.Gf2Vector

    def __post_init__(self):
        if self.e_x.length != self.e_z.length:
            raise DimensionError(f'e_x has length {self.e_x.length}, e_z has length {self.e_z.length}')

    @classmethod
    def from_supports(cls, n: int, x_support: Iterable[int] = (), z_support: Iterable[int] = ()) -> ErrorPattern:
        return cls(hggf2.Gf2Vector.from_support(n, x_support), hggf2.Gf2Vector.from_support(n, z_support))

    @classmethod
    def zeros(cls, n: int) -> ErrorPattern:
        return cls(hggf2.Gf2Vector.zeros(n), hggf2.Gf2Vector.zeros(n))

    @property
    def n(self) -> int:
        return self.e_x.length

    def support(self) -> FrozenSet[int]:
        return frozenset(self.e_x.support()) | frozenset(self.e_z.support())

    @property
    def weight(self) -> int:
        return (self.e_x | self.e_z).weight()

    def component(self, side: Side) -> hggf2.Gf2Vector:
        return self.e_x if Side(side) is Side.X else self.e_z


def build_hypergraph_product(G: hggraph.BipartiteGraph) -> CssCode:
    C = CssCode(G)
    log.debug(f'Built {C}')
    return C


def z_generator_support(C: CssCode, b: int, a: int) -> FrozenSet[QubitIndex]:
    """g_ba = {alpha a : alpha ~ b} u {b beta : beta ~ a}"""
    return frozenset(C.qubit(q) for q in C.h_z.row_supports[C.z_generator_row(b, a)])


def x_check_support(C: CssCode, alpha: int, beta: int) -> FrozenSet[QubitIndex]:
    """g_alpha beta = {alpha a : a ~ beta} u {b beta : b ~ alpha}"""
    return frozenset(C.qubit(q) for q in C.h_x.row_supports[C.x_check_row(alpha, beta)])


def syndrome_x(C: CssCode, e_x: hggf2.Gf2Vector) -> hggf2.Gf2Vector:
    return hggf2.mat_vec(C.h_x, e_x)


def syndrome_z(C: CssCode, e_z: hggf2.Gf2Vector) -> hggf2.Gf2Vector:
    return hggf2.mat_vec(C.h_z, e_z)


def syndrome(C: CssCode, side: Side, e: hggf2.Gf2Vector) -> hggf2.Gf2Vector:
    return hggf2.mat_vec(C.check_matrix(side), e)


def _dimension_by_rank(C: CssCode) -> int:
    return C.n - hggf2.rank(C.h_x) - hggf2.rank(C.h_z)


def _dimension_by_base(C: CssCode) -> int:
    # k = dim ker(H)^2 + dim ker(H^T)^2
    r = hggf2.rank(hggraph.incidence_matrix(C.graph))
    return (C.n_A - r) ** 2 + (C.n_B - r) ** 2


def code_dimension(C: CssCode, method: str = None) -> int:
    """Number of logical qubits k = n - rank(h_x) - rank(h_z)

    `method` is 'rank' (eliminate h_x and h_z) or 'base' (ranks of the
    incidence matrix only). By default 'rank' is used up to
    CODE_RANK_MAX_QUBITS qubits.
    """
    if method is None:
        if C._dimension is not None:
            return C._dimension
        method = 'rank' if C.n <= config.CODE_RANK_MAX_QUBITS else 'base'

    if method == 'rank':
        k = _dimension_by_rank(C)
    elif method == 'base':
        k = _dimension_by_base(C)
    else:
        raise InvalidInputError(f'Unknown dimension method {method!r}')

    if k < (C.n_A - C.n_B) ** 2:
        raise OracleInvariantError(f'k={k} below the lower bound (n_A-n_B)^2={(C.n_A - C.n_B) ** 2}', witness=k)

    if k == 0:
        log.warning(f'{C} encodes no logical qubit')

    C._dimension = k
    return k


def code_header(C: CssCode, k: int = None) -> Dict[str, Any]:
    return {'n_A': C.n_A, 'n_B': C.n_B, 'delta_A': C.delta_A, 'delta_B': C.delta_B,
            'n': C.n, 'k': code_dimension(C) if k is None else k, 'row_weight': C.row_weight}


def write_code(C: CssCode, path: Union[str, os.PathLike], k: int = None) -> Tuple[str, str]:
    """Write <path>.graph.txt (authoritative) and the <path>.json header"""
    graph_path = f'{path}.graph.txt'
    header_path = f'{path}.json'
    hggraph.write_graph(C.graph, graph_path)

    header = {'schema': SCHEMA_VERSION, 'version': hgpy.get_version()}
    header.update(code_header(C, k))
    header['graph'] = os.path.basename(graph_path)
    with open(header_path, 'w', encoding='utf-8') as f:
        json.dump(header, f, indent=2)
        f.write('\n')

    log.info(f'Wrote code header to {header_path}')
    return graph_path, header_path


def read_code(path: Union[str, os.PathLike]) -> CssCode:
    """Rebuild a code from a dump written by `write_code` (or a bare graph file)"""
    path = str(path)
    graph_path = path if path.endswith('.txt') else f'{path}.graph.txt'
    return build_hypergraph_product(hggraph.read_graph(graph_path))
