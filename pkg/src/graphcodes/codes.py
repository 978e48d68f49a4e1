"""Classical binary linear codes given by a parity-check matrix."""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DegenerateCodeError, IndexOutOfRangeError, SizeLimitError
from .f2la import BitMatrix, BitVector, nullspace, rref

#: enumeration guard: at most 2**MAX_ENUM_BITS candidate words
MAX_ENUM_BITS = 28


@dataclass(frozen=True)
class ParityCheckCode:
    """The code ``{c : H c = 0}`` together with a deterministic generator basis."""

    H: BitMatrix
    generators: BitMatrix = field(repr=False)

    @property
    def n(self) -> int:
        return self.H.cols

    @property
    def k(self) -> int:
        return self.generators.rows

    def contains(self, c: BitVector) -> bool:
        return not self.H.matvec(c).any()

    def encode(self, message: BitVector) -> BitVector:
        return self.generators.vecmat(message)

    def codewords(self) -> list[BitVector]:
        """All ``2**k`` codewords; small codes only."""
        if self.k > 20:
            raise SizeLimitError(f"refusing to list 2**{self.k} codewords")
        return [
            self.encode(BitVector.from_bits([(m >> t) & 1 for t in range(self.k)]))
            for m in range(1 << self.k)
        ]

    def to_text(self) -> str:
        return "parity-check\n" + self.H.to_text()

    @classmethod
    def from_text(cls, text: str) -> ParityCheckCode:
        head, _, body = text.lstrip().partition("\n")
        if head.strip() != "parity-check":
            raise ValueError("expected a 'parity-check' header line")
        return from_parity_check(BitMatrix.from_text(body))


@dataclass(frozen=True)
class RestrictedCode:
    parent: ParityCheckCode
    kept: tuple[int, ...]
    restricted_generators: BitMatrix = field(repr=False)


def from_parity_check(H: BitMatrix) -> ParityCheckCode:
    return ParityCheckCode(H, nullspace(H))


def restrict(code: ParityCheckCode, kept: Iterable[int]) -> RestrictedCode:
    kept = tuple(int(i) for i in kept)
    if any(not 0 <= i < code.n for i in kept):
        raise IndexOutOfRangeError(f"kept positions must lie in [0, {code.n})")
    return RestrictedCode(code, kept, code.generators.select_cols(kept))


def dual_sparse_generators(code: ParityCheckCode) -> list[BitVector]:
    """Greedy maximal independent subset of the rows of H, lowest index first.

    The pivot columns of RREF(H^T) are exactly the rows the greedy scan keeps.
    """
    H = code.H
    if H.rows == 0:
        return []
    piv = rref(H.T, with_transform=False).pivots if H.cols else []
    return [H.row(i) for i in piv]


# ----------------------------------------------------------------------------
# minimum distance


def _row_basis(m: BitMatrix) -> BitMatrix:
    red = rref(m, with_transform=False)
    return red.R.select_rows(range(len(red.pivots)))


def _min_weight_from_basis(basis: BitMatrix) -> int:
    if basis.rows > MAX_ENUM_BITS:
        raise SizeLimitError(f"2**{basis.rows} messages exceed the enumeration guard")
    return int(kernels.span_min_weight(np.ascontiguousarray(basis.words)))


def _min_weight_from_checks(H: BitMatrix, n: int) -> int:
    """Smallest set of columns of ``H`` summing to zero, by increasing size.

    Meet-in-the-middle on the last column: for each (w-1)-subset, look up a
    later column carrying the same syndrome.
    """
    dense = H.to_dense()
    syn = [int("".join(map(str, dense[::-1, j])) or "0", 2) for j in range(n)]
    where: dict[int, list[int]] = {}
    for j, s in enumerate(syn):
        where.setdefault(s, []).append(j)
    if 0 in where:
        return 1
    budget = 1 << MAX_ENUM_BITS
    for w in range(2, n + 1):
        budget -= math.comb(n, w - 1)
        if budget < 0:
            raise SizeLimitError("coset-leader enumeration exceeds the guard")
        for combo in itertools.combinations(range(n), w - 1):
            s = 0
            for j in combo:
                s ^= syn[j]
            later = where.get(s)
            if later and later[-1] > combo[-1]:
                return w
    raise DegenerateCodeError("code has no nonzero words")


def _min_weight(basis: BitMatrix) -> int:
    """Minimum nonzero weight in the row span of an independent ``basis``."""
    k, n = basis.shape
    if k == 0:
        raise DegenerateCodeError("span is {0}")
    if min(k, n - k) > MAX_ENUM_BITS:
        raise SizeLimitError(f"min(k, n-k) = {min(k, n - k)} exceeds {MAX_ENUM_BITS}")
    if k <= n - k:
        return _min_weight_from_basis(basis)
    return _min_weight_from_checks(nullspace(basis), n)


def min_distance_exact(code: ParityCheckCode) -> int:
    if code.k == 0:
        raise DegenerateCodeError("k = 0: no nonzero codewords")
    return _min_weight(code.generators)


def min_distance_restricted(rc: RestrictedCode) -> int:
    basis = _row_basis(rc.restricted_generators)
    if basis.rows == 0:
        raise DegenerateCodeError("punctured code is {0}")
    return _min_weight(basis)
