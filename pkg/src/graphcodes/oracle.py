"""Exact small-n statevectors for graph states and their Z-labeled relatives.

Every state handled here has amplitudes ``s * 2**(-e/2)`` with ``s`` in
``{-1, 0, +1}`` and one shared exponent ``e``, so an :class:`ExactState` is a
sign vector plus that exponent and every comparison is exact. Basis index
``b`` has qubit ``i`` in bit ``i``.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DimensionMismatchError, PhaseEscapeError, SizeLimitError
from .erasure import build_F, identify_coset, is_recoverable
from .f2la import BitVector
from .gcode import GraphCode, PauliOp, graph_stabilizer
from .graphs import Graph, adjacency_top, complement, cut_matrix, induced_subgraph

MAX_STATE_QUBITS = 16


def _guard(n: int, limit: int) -> None:
    if n > limit:
        raise SizeLimitError(f"n = {n} exceeds the exact-simulation guard of {limit}")


def _basis_bits(n: int) -> np.ndarray:
    """``(2**n, n)`` array: row ``b`` holds the bits of basis index ``b``."""
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(np.int64)


def _mask(v: BitVector | Iterable[int], n: int) -> int:
    bits = v.to_bits() if isinstance(v, BitVector) else np.asarray(list(v), dtype=np.int64)
    return int(sum(int(b) << i for i, b in enumerate(bits)))


def _parity(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a.astype(np.uint64)) & 1


@dataclass(frozen=True, eq=False)
class ExactState:
    n: int
    signs: np.ndarray
    exponent: int

    def __post_init__(self):
        _guard(self.n, MAX_STATE_QUBITS)
        if self.signs.shape != (1 << self.n,):
            raise DimensionMismatchError("sign vector must have 2**n entries")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactState):
            return NotImplemented
        return self.n == other.n and self.exponent == other.exponent and np.array_equal(self.signs, other.signs)

    def norm_squared(self) -> Fraction:
        return Fraction(int(np.count_nonzero(self.signs)), 2**self.exponent)

    def amplitudes(self) -> np.ndarray:
        """Floating-point view, for display only."""
        return self.signs * 2.0 ** (-self.exponent / 2)


def inner(a: ExactState, b: ExactState) -> Fraction:
    """``<a|b>`` for real states whose exponents sum to an even number."""
    if a.n != b.n:
        raise DimensionMismatchError("qubit counts differ")
    tot = a.exponent + b.exponent
    if tot % 2:
        raise ValueError("inner product is irrational for odd exponent sum")
    s = int(np.dot(a.signs.astype(np.int64), b.signs.astype(np.int64)))
    return Fraction(s, 2 ** (tot // 2))


def plus_state(n: int) -> ExactState:
    _guard(n, MAX_STATE_QUBITS)
    return ExactState(n, np.ones(1 << n, dtype=np.int8), n)


def graph_state_vector(G: Graph) -> ExactState:
    """Amplitude form: ``(-1)**(x^T A_top x) / 2**(n/2)``."""
    _guard(G.n, MAX_STATE_QUBITS)
    X = _basis_bits(G.n)
    A = adjacency_top(G).to_dense().astype(np.int64)
    quad = ((X @ A) * X).sum(axis=1) & 1
    return ExactState(G.n, (1 - 2 * quad).astype(np.int8), G.n)


def controlled_phase(state: ExactState, i: int, j: int) -> ExactState:
    idx = np.arange(1 << state.n)
    both = ((idx >> i) & (idx >> j) & 1).astype(bool)
    signs = state.signs.copy()
    signs[both] *= -1
    return ExactState(state.n, signs, state.exponent)


def graph_state_circuit(G: Graph) -> ExactState:
    """Circuit form: CP on every edge applied to ``|+>^n``."""
    state = plus_state(G.n)
    for i, j in G.edges():
        state = controlled_phase(state, i, j)
    return state


def _apply_int(vec: np.ndarray, n: int, P: PauliOp) -> np.ndarray:
    """``i**phase X_x Z_z`` on an integer vector; even phases only."""
    if P.phase % 2:
        raise PhaseEscapeError("odd power of i on a real state")
    idx = np.arange(1 << n)
    zsign = 1 - 2 * _parity(idx & _mask(P.z, n)).astype(np.int64)
    out = np.empty_like(vec)
    out[idx ^ _mask(P.x, n)] = vec * zsign
    return -out if P.phase == 2 else out


def graph_state_stabilized(G: Graph) -> ExactState:
    """Stabilizer form: the common +1 eigenvector of all ``S_i``.

    ``prod_i (I + S_i) |0...0>`` equals ``2**(n/2) |G>`` since ``<G|0...0> = 2**(-n/2)``,
    so the integer result is exactly the sign vector.
    """
    _guard(G.n, MAX_STATE_QUBITS)
    vec = np.zeros(1 << G.n, dtype=np.int64)
    vec[0] = 1
    for i in range(G.n):
        vec = vec + _apply_int(vec, G.n, graph_stabilizer(G, i))
    if not np.all(np.abs(vec) == 1):
        raise AssertionError("projected vector is not a uniform-magnitude state")
    return ExactState(G.n, vec.astype(np.int8), G.n)


def apply_pauli(state: ExactState, P: PauliOp) -> ExactState:
    if P.n != state.n:
        raise DimensionMismatchError("operator and state sizes differ")
    out = _apply_int(state.signs.astype(np.int64), state.n, P)
    return ExactState(state.n, out.astype(np.int8), state.exponent)


def z_label(n: int, v: BitVector) -> PauliOp:
    return PauliOp(BitVector.zeros(n), v)


def check_orthogonality(G: Graph) -> bool:
    """``<G|Z_x|G> = 0`` for every nonzero ``x``, exhaustively."""
    _guard(G.n, 12)
    g = graph_state_vector(G)
    weights = g.signs.astype(np.int64) ** 2
    idx = np.arange(1 << G.n, dtype=np.uint64)
    for x in range(1, 1 << G.n):
        zs = 1 - 2 * _parity(idx & np.uint64(x)).astype(np.int64)
        if int(np.dot(weights, zs)) != 0:
            return False
    return True


def project(state: ExactState, K: Iterable[int], y: BitVector | Iterable[int]) -> ExactState:
    """Unnormalized ``<y|_K |state>`` on the sorted complement of ``K``.

    Amplitudes are carried over unchanged, so the exponent stays that of ``state``.
    """
    Ks = sorted(set(int(k) for k in K))
    ybits = y.to_bits() if isinstance(y, BitVector) else np.asarray(list(y))
    if len(ybits) != len(Ks):
        raise DimensionMismatchError("outcome length must equal |K|")
    rest = complement(Ks, state.n)
    m = rest.size
    # basis index of the full register for each index over the survivors
    sub = np.arange(1 << m)
    full = np.zeros(1 << m, dtype=np.int64)
    for pos, q in enumerate(rest):
        full |= ((sub >> pos) & 1) << int(q)
    for yb, q in zip(ybits, Ks):
        full |= int(yb) << q
    return ExactState(m, state.signs[full].copy(), state.exponent)


def check_measure_lemma(G: Graph, K: Iterable[int], y: BitVector | Iterable[int]) -> bool:
    """Compare ``<y|_K|G>`` with ``2**(-|K|/2) (-1)**(y^T A_K y) Z_{A_cut y} |G'>`` exactly."""
    _guard(G.n, 14)
    Ks = sorted(set(int(k) for k in K))
    yv = y if isinstance(y, BitVector) else BitVector.from_bits(list(y))
    lhs = project(graph_state_vector(G), Ks, yv)

    A_K = adjacency_top(G).to_dense()[np.ix_(Ks, Ks)].astype(np.int64)
    yb = yv.to_bits().astype(np.int64)
    sign = -1 if int(yb @ A_K @ yb) % 2 else 1
    g_rest = graph_state_vector(induced_subgraph(G, complement(Ks, G.n)))
    label = cut_matrix(G, Ks).matvec(yv)
    rhs_state = apply_pauli(g_rest, z_label(g_rest.n, label))
    # 2**(-|K|/2) * 2**(-(n-|K|)/2) = 2**(-n/2)
    rhs = ExactState(rhs_state.n, (sign * rhs_state.signs).astype(np.int8), rhs_state.exponent + len(Ks))
    return lhs == rhs


def _rank_exact(M: list[list[int]]) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    A = [row[:] for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    r = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(r + 1, rows):
            for jj in range(c + 1, cols):
                A[i][jj] = (A[r][c] * A[i][jj] - A[i][c] * A[r][jj]) // prev
            A[i][c] = 0
        prev = A[r][c]
        r += 1
        if r == rows:
            break
    return r


def schmidt_rank_log2(state: ExactState, K: Iterable[int]) -> int:
    """``log2`` of the Schmidt rank across ``(K, V \\ K)``, computed exactly."""
    _guard(state.n, 14)
    Ks = sorted(set(int(k) for k in K))
    rest = complement(Ks, state.n).tolist()
    if not Ks or not rest:
        return 0
    coeff = []
    for yk in itertools.product((0, 1), repeat=len(Ks)):
        coeff.append(project(state, Ks, yk).signs.astype(int).tolist())
    if len(coeff) > len(coeff[0]):
        coeff = [list(col) for col in zip(*coeff)]
    r = _rank_exact(coeff)
    e = r.bit_length() - 1
    if r != 1 << e:
        raise ValueError(f"Schmidt rank {r} is not a power of two")
    return e


def end_to_end_recovery_check(gc: GraphCode, K: Iterable[int]) -> bool:
    """Measure ``K`` on every ``Z_c|G>`` for every outcome ``y``, read the Z-label of
    the post-measurement state and check that coset identification returns
    exactly ``(y, c)``.
    """
    _guard(gc.n, 12)
    Ks = sorted(set(int(k) for k in K))
    dp = build_F(gc, Ks)
    if not is_recoverable(dp):
        raise ValueError("instance is not recoverable")
    n = gc.n
    G = gc.graph
    g = graph_state_vector(G)
    g_rest = graph_state_vector(induced_subgraph(G, complement(Ks, n)))
    for c in gc.code.codewords():
        coded = apply_pauli(g, z_label(n, c))
        for yk in itertools.product((0, 1), repeat=len(Ks)):
            post = project(coded, Ks, yk)
            u = read_z_label(post, g_rest)
            if u is None:
                return False
            dec = identify_coset(dp, u)
            if dec.codeword != c or dec.j != BitVector.from_bits(list(yk)):
                return False
    return True


def read_z_label(state: ExactState, reference: ExactState) -> BitVector | None:
    """``u`` with ``state = +-2**(...) Z_u |reference>``, or ``None`` if no such label exists."""
    if state.n != reference.n:
        raise DimensionMismatchError("qubit counts differ")
    n = state.n
    ratio = state.signs.astype(np.int64) * reference.signs.astype(np.int64)
    if np.any(ratio == 0):
        return None
    glob = ratio[0]
    u = BitVector.from_bits([(1 - glob * ratio[1 << i]) // 2 for i in range(n)]) if n else BitVector.zeros(0)
    expect = glob * (1 - 2 * _parity(np.arange(1 << n) & _mask(u, n)).astype(np.int64))
    return u if np.array_equal(ratio, expect) else None


def basis_states(gc: GraphCode) -> list[ExactState]:
    g = graph_state_vector(gc.graph)
    return [apply_pauli(g, z_label(gc.n, c)) for c in gc.code.codewords()]


def stabilizes(P: PauliOp, state: ExactState) -> bool:
    return apply_pauli(state, P) == state
