"""Symplectic Pauli operators and quantum graph codes ``(G, C)``.

A :class:`PauliOp` stands for ``i**phase * X_x * Z_z`` with every X factor to
the left of every Z factor. Moving ``Z_z`` past ``X_x`` costs
``(-1)**(z . x)``, which fixes the phase of any product.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .codes import ParityCheckCode, dual_sparse_generators
from .errors import DimensionMismatchError, IndexOutOfRangeError
from .f2la import BitMatrix, BitVector, matmul
from .graphs import Graph, adjacency_top

_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}


@dataclass(frozen=True)
class PauliOp:
    x: BitVector
    z: BitVector
    phase: int = 0

    def __post_init__(self):
        if self.x.length != self.z.length:
            raise DimensionMismatchError("x and z supports differ in length")
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @property
    def n(self) -> int:
        return self.x.length

    @classmethod
    def identity(cls, n: int) -> PauliOp:
        return cls(BitVector.zeros(n), BitVector.zeros(n))

    @classmethod
    def from_supports(cls, n: int, x=(), z=(), phase: int = 0) -> PauliOp:
        return cls(BitVector.from_support(n, x), BitVector.from_support(n, z), phase)

    def weight(self) -> int:
        return BitVector(self.n, self.x.words | self.z.words).weight()

    def __mul__(self, other: PauliOp) -> PauliOp:
        return pauli_mul(self, other)

    def __str__(self) -> str:
        return f"{_PHASE_PREFIX[self.phase]} X{self.x} Z{self.z}"

    def label(self) -> str:
        """Per-qubit letters; ``Y`` marks a qubit carrying both X and Z, phase left as stored."""
        letters = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
        body = "".join(letters[(a, b)] for a, b in zip(self.x.to_bits(), self.z.to_bits()))
        return f"{_PHASE_PREFIX[self.phase]} {body}"

    def to_symplectic(self) -> str:
        return f"{self.x}|{self.z}|{self.phase}"

    @classmethod
    def from_symplectic(cls, text: str) -> PauliOp:
        x, z, phase = text.strip().split("|")
        return cls(BitVector.from_bits(x), BitVector.from_bits(z), int(phase))


def pauli_mul(P: PauliOp, Q: PauliOp) -> PauliOp:
    if P.n != Q.n:
        raise DimensionMismatchError("operators act on different qubit counts")
    return PauliOp(P.x ^ Q.x, P.z ^ Q.z, P.phase + Q.phase + 2 * P.z.dot(Q.x))


def commutes(P: PauliOp, Q: PauliOp) -> bool:
    if P.n != Q.n:
        raise DimensionMismatchError("operators act on different qubit counts")
    return (P.x.dot(Q.z) ^ P.z.dot(Q.x)) == 0


def graph_stabilizer(G: Graph, i: int) -> PauliOp:
    """``S_i = X_i prod_{j in N(i)} Z_j``."""
    if not 0 <= i < G.n:
        raise IndexOutOfRangeError(i)
    return PauliOp(BitVector.from_support(G.n, [i]), G.adjacency.row(i))


def stabilizer_product(G: Graph, h: BitVector) -> PauliOp:
    """Ordered product ``S_{i1} S_{i2} ...`` over the support of ``h``, one multiply at a time."""
    acc = PauliOp.identity(G.n)
    for i in h.support():
        acc = pauli_mul(acc, graph_stabilizer(G, i))
    return acc


@dataclass(frozen=True)
class GraphCode:
    """The span of ``Z_c |G>`` over ``c`` in ``code``.

    ``checks`` are the dual generators ``h_j``; the stabilizer generators
    ``g_j = prod_{i in h_j} S_i`` are materialized on first access.
    """

    graph: Graph
    code: ParityCheckCode

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def k(self) -> int:
        return self.code.k

    @cached_property
    def checks(self) -> BitMatrix:
        hs = dual_sparse_generators(self.code)
        return BitMatrix.from_rows(hs, cols=self.n) if hs else BitMatrix.zeros(0, self.n)

    @cached_property
    def _symplectic(self) -> tuple[BitMatrix, BitMatrix, np.ndarray]:
        hx = self.checks
        hz = matmul(hx, self.graph.adjacency)
        # each pair i < j of the support adjacent in G contributes z_P . x_Q = 1
        lower = matmul(hx, adjacency_top(self.graph))
        pairs = np.bitwise_count(lower.words & hx.words).sum(axis=1) & 1
        # symplectic Gram X Z^T + Z X^T must vanish
        gram = matmul(hx, hz.T) + matmul(hz, hx.T)
        if gram.words.any():
            raise AssertionError("stabilizer generators fail to commute")
        return hx, hz, (2 * pairs) % 4

    @cached_property
    def stabilizer_generators(self) -> list[PauliOp]:
        hx, hz, phases = self._symplectic
        return [PauliOp(hx.row(j), hz.row(j), int(phases[j])) for j in range(hx.rows)]

    def generator_weights(self) -> np.ndarray:
        hx, hz, _ = self._symplectic
        return np.bitwise_count(hx.words | hz.words).sum(axis=1)


def build_graph_code(G: Graph, C: ParityCheckCode, materialize: bool = True) -> GraphCode:
    if G.n != C.n:
        raise DimensionMismatchError(f"graph has {G.n} vertices, code has length {C.n}")
    gc = GraphCode(G, C)
    if materialize:
        gc._symplectic
    return gc


def max_generator_weight(gc: GraphCode) -> int:
    w = gc.generator_weights()
    return int(w.max()) if w.size else 0


def distance_upper_bound(gc: GraphCode) -> int:
    """Minimum vertex degree; an upper bound on the adversarial distance only."""
    return gc.graph.min_degree()


def weight_audit(gc: GraphCode) -> dict:
    """Generator weights against ``|h_j| (K_max + 1)`` and the tighter ``w K_max`` statistic."""
    gw = gc.generator_weights()
    hw = gc.checks.row_weights()
    kmax = gc.graph.max_degree()
    w = int(hw.max()) if hw.size else 0
    return {
        "max_generator_weight": int(gw.max()) if gw.size else 0,
        "max_check_weight": w,
        "max_degree": kmax,
        "relaxed_bound_holds": bool(np.all(gw <= hw * (kmax + 1))),
        "w_times_kmax": w * kmax,
        "within_w_times_kmax": bool(gw.size == 0 or gw.max() <= w * kmax),
    }
