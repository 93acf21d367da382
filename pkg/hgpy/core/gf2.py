"""Bit-packed linear algebra over GF(2)

Vectors are stored packed into uint8 words (little bit order), sparse matrices
as sorted row/column support lists with a lazily built scipy CSR copy for
products. Elimination works on dense copies where every row is a Python
integer used as an arbitrary-width bit field.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

import hgpy.core.logger as hglogger
from hgpy.core.exceptions import DimensionError, InvalidInputError

log = hglogger.getLogger(__name__)

_POPCOUNT = np.array([bin(i).count('1') for i in range(256)], dtype=np.uint16)


def popcount(value: int) -> int:
    return bin(value).count('1')


def bits_of(value: int) -> List[int]:
    """Indices of the set bits of an integer, ascending"""
    out = []
    while value:
        low = value & -value
        out.append(low.bit_length() - 1)
        value ^= low
    return out


class Gf2Vector:
    """Immutable binary vector of fixed length"""

    __slots__ = ('_length', '_words')

    def __init__(self, length: int, words: np.ndarray = None):
        if length < 0:
            raise InvalidInputError(f'Negative vector length {length}')

        nbytes = (length + 7) // 8
        if words is None:
            words = np.zeros(nbytes, dtype=np.uint8)
        else:
            words = np.ascontiguousarray(words, dtype=np.uint8).copy()
            if words.shape != (nbytes,):
                raise DimensionError(f'Expected {nbytes} packed bytes for length {length}, got {words.shape}')

            # Padding bits past the end must stay clear
            if length % 8 and nbytes > 0:
                words[-1] &= (1 << (length % 8)) - 1

        words.setflags(write=False)
        self._length = length
        self._words = words

    @classmethod
    def zeros(cls, length: int) -> Gf2Vector:
        return cls(length)

    @classmethod
    def from_bits(cls, bits: Union[Sequence[int], np.ndarray]) -> Gf2Vector:
        bits = np.asarray(bits).astype(np.uint8) & 1
        if bits.ndim != 1:
            raise DimensionError(f'Expected a 1d bit sequence, got shape {bits.shape}')
        return cls(bits.shape[0], np.packbits(bits, bitorder='little'))

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> Gf2Vector:
        bits = np.zeros(length, dtype=np.uint8)
        for i in support:
            if not 0 <= i < length:
                raise InvalidInputError(f'Index {i} out of range for length {length}')
            bits[i] ^= 1
        return cls.from_bits(bits)

    @classmethod
    def from_int(cls, length: int, value: int) -> Gf2Vector:
        if value < 0 or value >> length:
            raise DimensionError(f'Integer does not fit into {length} bits')
        nbytes = (length + 7) // 8
        return cls(length, np.frombuffer(value.to_bytes(nbytes, 'little'), dtype=np.uint8))

    @property
    def length(self) -> int:
        return self._length

    @property
    def words(self) -> np.ndarray:
        return self._words

    def __len__(self):
        return self._length

    def __getitem__(self, item: int) -> int:
        if not -self._length <= item < self._length:
            raise IndexError(item)
        item %= self._length
        return int(self._words[item >> 3] >> (item & 7)) & 1

    def weight(self) -> int:
        return int(_POPCOUNT[self._words].sum())

    def is_zero(self) -> bool:
        return not self._words.any()

    def to_bits(self) -> np.ndarray:
        return np.unpackbits(self._words, count=self._length, bitorder='little')

    def to_int(self) -> int:
        return int.from_bytes(self._words.tobytes(), 'little')

    def support(self) -> Tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.to_bits()))

    def __xor__(self, other: Gf2Vector) -> Gf2Vector:
        if not isinstance(other, Gf2Vector):
            return NotImplemented
        if other.length != self._length:
            raise DimensionError(f'Cannot add vectors of length {self._length} and {other.length}')
        return Gf2Vector(self._length, np.bitwise_xor(self._words, other.words))

    __add__ = __xor__

    def __and__(self, other: Gf2Vector) -> Gf2Vector:
        if other.length != self._length:
            raise DimensionError(f'Cannot intersect vectors of length {self._length} and {other.length}')
        return Gf2Vector(self._length, np.bitwise_and(self._words, other.words))

    def __or__(self, other: Gf2Vector) -> Gf2Vector:
        if other.length != self._length:
            raise DimensionError(f'Cannot unite vectors of length {self._length} and {other.length}')
        return Gf2Vector(self._length, np.bitwise_or(self._words, other.words))

    def __eq__(self, other):
        if not isinstance(other, Gf2Vector):
            return NotImplemented
        return self._length == other.length and np.array_equal(self._words, other.words)

    def __hash__(self):
        return hash((self._length, self._words.tobytes()))

    def __repr__(self):
        return f'{self.__class__.__name__}(length={self._length}, support={list(self.support())})'


class Gf2SparseMatrix:
    """Binary matrix stored as sorted row and column support lists"""

    def __init__(self, rows: int, cols: int, row_supports: Sequence[Sequence[int]], check: bool = True):
        if rows < 0 or cols < 0:
            raise InvalidInputError(f'Invalid shape ({rows}, {cols})')
        if len(row_supports) != rows:
            raise DimensionError(f'Got {len(row_supports)} row supports for {rows} rows')

        self.rows = rows
        self.cols = cols
        self.row_supports: Tuple[Tuple[int, ...], ...] = tuple(tuple(r) for r in row_supports)

        if check:
            for i, support in enumerate(self.row_supports):
                for k, j in enumerate(support):
                    if not 0 <= j < cols:
                        raise InvalidInputError(f'Column index {j} out of range in row {i}')
                    if k > 0 and support[k - 1] >= j:
                        raise InvalidInputError(f'Row {i} support is not sorted and duplicate-free')

        col_lists: List[List[int]] = [[] for _ in range(cols)]
        for i, support in enumerate(self.row_supports):
            for j in support:
                col_lists[j].append(i)
        self.col_supports: Tuple[Tuple[int, ...], ...] = tuple(tuple(c) for c in col_lists)

        self._csr: Union[sp.csr_matrix, None] = None

    @classmethod
    def from_dense(cls, array: Union[np.ndarray, Sequence[Sequence[int]]]) -> Gf2SparseMatrix:
        array = np.asarray(array, dtype=np.int64) & 1
        if array.ndim != 2:
            raise DimensionError(f'Expected a 2d array, got shape {array.shape}')
        rows, cols = array.shape
        return cls(rows, cols, [tuple(int(j) for j in np.flatnonzero(r)) for r in array], check=False)

    @classmethod
    def identity(cls, size: int) -> Gf2SparseMatrix:
        return cls(size, size, [(i,) for i in range(size)], check=False)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Gf2SparseMatrix:
        return cls(rows, cols, [() for _ in range(rows)], check=False)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.row_supports)

    @property
    def csr(self) -> sp.csr_matrix:
        if self._csr is None:
            indptr = np.zeros(self.rows + 1, dtype=np.int64)
            indptr[1:] = np.cumsum([len(r) for r in self.row_supports])
            indices = np.fromiter((j for r in self.row_supports for j in r), dtype=np.int64, count=int(indptr[-1]))
            data = np.ones(indices.shape[0], dtype=np.int64)
            self._csr = sp.csr_matrix((data, indices, indptr), shape=(self.rows, self.cols))
        return self._csr

    def row_weight(self, i: int) -> int:
        return len(self.row_supports[i])

    def col_weight(self, j: int) -> int:
        return len(self.col_supports[j])

    def row_vector(self, i: int) -> Gf2Vector:
        return Gf2Vector.from_support(self.cols, self.row_supports[i])

    def row_as_int(self, i: int) -> int:
        value = 0
        for j in self.row_supports[i]:
            value |= 1 << j
        return value

    def rows_as_ints(self) -> List[int]:
        return [self.row_as_int(i) for i in range(self.rows)]

    def transpose(self) -> Gf2SparseMatrix:
        return Gf2SparseMatrix(self.cols, self.rows, self.col_supports, check=False)

    @property
    def T(self) -> Gf2SparseMatrix:
        return self.transpose()

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for i, support in enumerate(self.row_supports):
            out[i, list(support)] = 1
        return out

    def __matmul__(self, other: Gf2SparseMatrix) -> Gf2SparseMatrix:
        if self.cols != other.rows:
            raise DimensionError(f'Cannot multiply {self.shape} by {other.shape}')
        product = (self.csr @ other.csr).tocsr()
        product.data %= 2
        product.eliminate_zeros()
        product.sort_indices()
        supports = [tuple(int(j) for j in product.indices[product.indptr[i]:product.indptr[i + 1]])
                    for i in range(self.rows)]
        return Gf2SparseMatrix(self.rows, other.cols, supports, check=False)

    def is_zero(self) -> bool:
        return all(len(r) == 0 for r in self.row_supports)

    def __eq__(self, other):
        if not isinstance(other, Gf2SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.row_supports == other.row_supports

    def __repr__(self):
        return f'{self.__class__.__name__}(rows={self.rows}, cols={self.cols}, nnz={self.nnz})'


class EchelonForm:
    """Reduced row echelon form of a set of rows over GF(2)

    Pivot of a row is its lowest set column. After construction every stored
    row is zero on all pivot columns except its own, which makes `reduce`
    return the canonical coset representative that is zero on all pivots.
    """

    def __init__(self, cols: int, rows: Iterable[int] = ()):
        self.cols = cols
        self._rows: Dict[int, int] = {}
        self._pivot_mask = 0

        for row in rows:
            self._insert(row)
        self._back_substitute()

    @classmethod
    def from_matrix(cls, M: Gf2SparseMatrix) -> EchelonForm:
        return cls(M.cols, M.rows_as_ints())

    def _insert(self, row: int):
        while row:
            p = (row & -row).bit_length() - 1
            pivot_row = self._rows.get(p)
            if pivot_row is None:
                self._rows[p] = row
                self._pivot_mask |= 1 << p
                return
            row ^= pivot_row

    def _back_substitute(self):
        for p in sorted(self._rows, reverse=True):
            row = self._rows[p]
            others = row & self._pivot_mask & ~(1 << p)
            while others:
                q = (others & -others).bit_length() - 1
                row ^= self._rows[q]
                others = row & self._pivot_mask & ~(1 << p)
            self._rows[p] = row

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> List[int]:
        return sorted(self._rows)

    @property
    def pivot_mask(self) -> int:
        return self._pivot_mask

    def basis(self) -> List[int]:
        return [self._rows[p] for p in self.pivots]

    def reduce(self, value: int) -> int:
        hits = value & self._pivot_mask
        while hits:
            q = (hits & -hits).bit_length() - 1
            value ^= self._rows[q]
            hits = value & self._pivot_mask
        return value

    def contains(self, value: int) -> bool:
        return self.reduce(value) == 0

    def nullspace(self) -> List[int]:
        """Basis of the vectors orthogonal to every row"""
        out = []
        for f in range(self.cols):
            if self._pivot_mask >> f & 1:
                continue
            v = 1 << f
            for p, row in self._rows.items():
                if row >> f & 1:
                    v |= 1 << p
            out.append(v)
        return out


def _check_length(M: Gf2SparseMatrix, v: Gf2Vector):
    if v.length != M.cols:
        raise DimensionError(f'Vector of length {v.length} does not match matrix with {M.cols} columns')


def mat_vec(M: Gf2SparseMatrix, v: Gf2Vector) -> Gf2Vector:
    """Compute M v^T over GF(2)"""
    _check_length(M, v)
    if M.rows == 0:
        return Gf2Vector.zeros(0)
    result = (M.csr @ v.to_bits().astype(np.int64)) & 1
    return Gf2Vector.from_bits(result)


def rank(M: Gf2SparseMatrix) -> int:
    return EchelonForm.from_matrix(M).rank


def in_rowspace(M: Gf2SparseMatrix, v: Gf2Vector) -> bool:
    """True iff v is a sum of rows of M"""
    _check_length(M, v)
    return EchelonForm.from_matrix(M).contains(v.to_int())


def nullspace_basis(M: Gf2SparseMatrix) -> List[Gf2Vector]:
    """Basis of {v : M v^T = 0}"""
    return [Gf2Vector.from_int(M.cols, v) for v in EchelonForm.from_matrix(M).nullspace()]
