"""Dense bit-packed linear algebra over GF(2)."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import DimensionMismatchError, IndexOutOfRangeError, check_probability
from .kernels import nwords, pack_bits, popcount_rows, unpack_bits


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _index_array(idx: Iterable[int], bound: int) -> np.ndarray:
    arr = np.asarray(list(idx) if not isinstance(idx, np.ndarray) else idx, dtype=np.int64).reshape(-1)
    if arr.size and (arr.min() < 0 or arr.max() >= bound):
        raise IndexOutOfRangeError(f"index outside [0, {bound})")
    return arr


class BitVector:
    """Immutable packed vector in F_2^length."""

    __slots__ = ("length", "words")

    def __init__(self, length: int, words: np.ndarray):
        words = np.asarray(words, dtype=np.uint64).reshape(-1)
        if words.size != nwords(length):
            raise DimensionMismatchError("payload size does not match length")
        if length % 64 and words.size and words[-1] >> np.uint64(length % 64):
            raise ValueError("bits beyond length must be zero")
        self.length = int(length)
        self.words = _frozen(words.copy())

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(length, np.zeros(nwords(length), dtype=np.uint64))

    @classmethod
    def from_bits(cls, bits: Sequence[int] | np.ndarray | str) -> BitVector:
        if isinstance(bits, str):
            bits = [int(ch) for ch in bits]
        bits = np.asarray(bits, dtype=np.uint8).reshape(-1) & 1
        return cls(bits.size, pack_bits(bits))

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> BitVector:
        bits = np.zeros(length, dtype=np.uint8)
        bits[_index_array(support, length)] = 1
        return cls.from_bits(bits)

    def to_bits(self) -> np.ndarray:
        return unpack_bits(self.words, self.length)

    def support(self) -> list[int]:
        return np.flatnonzero(self.to_bits()).tolist()

    def weight(self) -> int:
        return int(np.bitwise_count(self.words).sum())

    def dot(self, other: BitVector) -> int:
        self._check(other)
        return int(np.bitwise_count(self.words & other.words).sum()) & 1

    def _check(self, other: BitVector) -> None:
        if self.length != other.length:
            raise DimensionMismatchError(f"lengths differ: {self.length} vs {other.length}")

    def __xor__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.length, self.words ^ other.words)

    __add__ = __xor__

    def __and__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.length, self.words & other.words)

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexOutOfRangeError(i)
        return int(self.words[i >> 6] >> np.uint64(i & 63)) & 1

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and np.array_equal(self.words, other.words)

    def __hash__(self) -> int:
        return hash((self.length, self.words.tobytes()))

    def __str__(self) -> str:
        return "".join(map(str, self.to_bits()))

    def __repr__(self) -> str:
        return f"BitVector('{self}')"

    def any(self) -> bool:
        return bool(self.words.any())


class BitMatrix:
    """Immutable packed matrix over GF(2); row ``i`` occupies ``words[i]``."""

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray):
        words = np.asarray(words, dtype=np.uint64).reshape(rows, nwords(cols))
        self.rows = int(rows)
        self.cols = int(cols)
        self.words = _frozen(np.ascontiguousarray(words).copy())

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols, np.zeros((rows, nwords(cols)), dtype=np.uint64))

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_dense(cls, a: np.ndarray | Sequence[Sequence[int]]) -> BitMatrix:
        a = np.asarray(a, dtype=np.uint8)
        if a.ndim != 2:
            raise DimensionMismatchError("expected a 2-D array")
        return cls(a.shape[0], a.shape[1], pack_bits(a & 1))

    @classmethod
    def from_rows(cls, rows: Sequence[BitVector | str], cols: int | None = None) -> BitMatrix:
        vecs = [BitVector.from_bits(r) if isinstance(r, str) else r for r in rows]
        if not vecs:
            return cls.zeros(0, cols or 0)
        width = vecs[0].length
        if any(v.length != width for v in vecs) or (cols is not None and cols != width):
            raise DimensionMismatchError("rows have unequal length")
        return cls(len(vecs), width, np.stack([v.words for v in vecs]))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_dense(self) -> np.ndarray:
        return unpack_bits(self.words, self.cols).reshape(self.rows, self.cols)

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.words[i])

    def row_list(self) -> list[BitVector]:
        return [self.row(i) for i in range(self.rows)]

    def row_weights(self) -> np.ndarray:
        return popcount_rows(self.words)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return int(self.words[i, j >> 6] >> np.uint64(j & 63)) & 1

    @property
    def T(self) -> BitMatrix:
        return BitMatrix.from_dense(self.to_dense().T)

    def transpose(self) -> BitMatrix:
        return self.T

    def select_rows(self, idx: Iterable[int]) -> BitMatrix:
        arr = _index_array(idx, self.rows)
        return BitMatrix(arr.size, self.cols, self.words[arr])

    def select_cols(self, idx: Iterable[int]) -> BitMatrix:
        arr = _index_array(idx, self.cols)
        return BitMatrix.from_dense(self.to_dense()[:, arr])

    def matvec(self, v: BitVector) -> BitVector:
        if v.length != self.cols:
            raise DimensionMismatchError("vector length must equal column count")
        par = popcount_rows(self.words & v.words) & 1
        return BitVector.from_bits(par.astype(np.uint8))

    def vecmat(self, v: BitVector) -> BitVector:
        """Row vector times matrix: XOR of the rows selected by ``v``."""
        if v.length != self.rows:
            raise DimensionMismatchError("vector length must equal row count")
        sel = self.words[np.flatnonzero(v.to_bits())]
        if sel.shape[0] == 0:
            return BitVector.zeros(self.cols)
        return BitVector(self.cols, np.bitwise_xor.reduce(sel, axis=0))

    def __matmul__(self, other: BitMatrix | BitVector):
        if isinstance(other, BitVector):
            return self.matvec(other)
        return matmul(self, other)

    def __add__(self, other: BitMatrix) -> BitMatrix:
        if self.shape != other.shape:
            raise DimensionMismatchError("shapes differ")
        return BitMatrix(self.rows, self.cols, self.words ^ other.words)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.words, other.words)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.words.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        lines += ["".join(map(str, r)) for r in self.to_dense()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> BitMatrix:
        lines = [ln.strip() for ln in text.strip().splitlines()]
        rows, cols = (int(t) for t in lines[0].split())
        body = lines[1 : 1 + rows]
        if len(body) != rows or any(len(ln) != cols or set(ln) - {"0", "1"} for ln in body):
            raise ValueError("malformed matrix text")
        dense = np.array([[int(ch) for ch in ln] for ln in body], dtype=np.uint8).reshape(rows, cols)
        return cls.from_dense(dense)


# ----------------------------------------------------------------------------


def matmul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.cols != b.rows:
        raise DimensionMismatchError(f"cannot multiply {a.shape} by {b.shape}")
    out = kernels.matmul_words(a.words, a.cols, b.words)
    return BitMatrix(a.rows, b.cols, out)


def hstack(blocks: Sequence[BitMatrix]) -> BitMatrix:
    rows = {m.rows for m in blocks}
    if len(rows) > 1:
        raise DimensionMismatchError("row counts differ")
    return BitMatrix.from_dense(np.concatenate([m.to_dense() for m in blocks], axis=1))


def vstack(blocks: Sequence[BitMatrix]) -> BitMatrix:
    cols = {m.cols for m in blocks}
    if len(cols) > 1:
        raise DimensionMismatchError("column counts differ")
    (c,) = cols
    return BitMatrix(sum(m.rows for m in blocks), c, np.concatenate([m.words for m in blocks], axis=0))


def rank(m: BitMatrix) -> int:
    """Row rank over GF(2)."""
    if m.rows == 0 or m.cols == 0:
        return 0
    R = m.words.copy()
    piv = kernels.eliminate(R, np.zeros((m.rows, 0), dtype=np.uint64), m.cols, False)
    return int(piv.size)


class RREF(NamedTuple):
    R: BitMatrix
    pivots: list[int]
    T: BitMatrix


def rref(m: BitMatrix, with_transform: bool = True) -> RREF:
    """Reduced row-echelon form with ``R = T @ m`` and invertible ``T``.

    Pivot rule: lowest column first, first qualifying row. With
    ``with_transform=False`` the returned ``T`` is a 0-column placeholder.
    """
    R = m.words.copy()
    if with_transform:
        T = BitMatrix.identity(m.rows).words.copy()
    else:
        T = np.zeros((m.rows, 0), dtype=np.uint64)
    piv = kernels.eliminate(R, T, m.cols, True) if m.cols else np.zeros(0, np.int64)
    tcols = m.rows if with_transform else 0
    return RREF(BitMatrix(m.rows, m.cols, R), [int(p) for p in piv], BitMatrix(m.rows, tcols, T))


def _kernel_from_rref(R: np.ndarray, pivots: Sequence[int], cols: int) -> np.ndarray:
    """Dense null-space basis (one row per free column) from unpacked RREF rows."""
    r = len(pivots)
    free = np.setdiff1d(np.arange(cols), np.asarray(pivots, dtype=np.int64))
    basis = np.zeros((free.size, cols), dtype=np.uint8)
    basis[np.arange(free.size), free] = 1
    if r:
        basis[:, np.asarray(pivots)] = R[:r][:, free].T
    return basis


def nullspace(m: BitMatrix) -> BitMatrix:
    """Basis of ``{x : m x = 0}`` as rows, one per non-pivot column."""
    red = rref(m, with_transform=False)
    return BitMatrix.from_dense(_kernel_from_rref(red.R.to_dense(), red.pivots, m.cols))


class Solution(NamedTuple):
    x0: BitVector
    kernel_basis: list[BitVector]


def solve(a: BitMatrix, b: BitVector) -> Solution | None:
    """Solve ``a x = b``; ``None`` when inconsistent.

    All solutions are ``x0`` plus the span of ``kernel_basis``.
    """
    if b.length != a.rows:
        raise DimensionMismatchError(f"b has length {b.length}, A has {a.rows} rows")
    red = rref(a)
    tb = red.T.matvec(b).to_bits()
    r = len(red.pivots)
    if tb[r:].any():
        return None
    x0 = np.zeros(a.cols, dtype=np.uint8)
    if r:
        x0[np.asarray(red.pivots)] = tb[:r]
    kern = _kernel_from_rref(red.R.to_dense(), red.pivots, a.cols)
    return Solution(BitVector.from_bits(x0), [BitVector.from_bits(row) for row in kern])


def sample_bernoulli_matrix(rows: int, cols: int, q: float, seed: int, row_offset: int = 0) -> BitMatrix:
    """I.i.d. Bernoulli(q) entries; entry (i, j) is a pure function of (seed, i, j).

    ``row_offset`` shifts the row counter, so consecutive calls with offsets
    ``0, r, 2r, ...`` tile one larger matrix.
    """
    q = check_probability(q)
    bits = kernels.bernoulli_bits(kernels.seed_key(seed), row_offset, rows, cols, kernels.bernoulli_threshold(q))
    return BitMatrix.from_dense(bits)


def sample_bernoulli_bits(rows: int, cols: int, q: float, seed: int, row_offset: int = 0) -> np.ndarray:
    """Same stream as :func:`sample_bernoulli_matrix`, returned unpacked."""
    q = check_probability(q)
    return kernels.bernoulli_bits(kernels.seed_key(seed), row_offset, rows, cols, kernels.bernoulli_threshold(q))
