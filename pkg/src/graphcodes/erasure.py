"""Erasure channel simulation, the decoding matrix F and coset identification.

After the erased qubits ``K`` are implicitly measured with outcome ``j``, the
surviving state carries the Z-label ``u = c|_{V\\K} + A_cut j``. Recovery needs
``(j, c)`` back from ``u``. Writing ``c = m G`` for the generator matrix ``G``,

    u = [m, j] F,    F = [ G restricted to V\\K ; A_cut^T ],

so ``(m, j)`` is determined exactly when ``F`` has full row rank.
"""

from __future__ import annotations

import logging
import math
import warnings
from collections import Counter
from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .codes import from_parity_check
from .errors import (
    DecoderDisagreementError,
    InconsistentInputError,
    NotRecoverableError,
    check_probability,
)
from .f2la import BitMatrix, BitVector, rank, sample_bernoulli_bits, sample_bernoulli_matrix, solve, vstack
from .gcode import GraphCode, build_graph_code
from .graphs import complement, cut_matrix, sample_er
from .stats import MonteCarloEstimate, trial_seeds

log = logging.getLogger(__name__)

SHAPE_INFEASIBLE = "shape-infeasible"
RANK_DEFICIENT = "F-rank-deficient"


@dataclass(frozen=True)
class ErasureSample:
    n: int
    erased: tuple[int, ...]
    p: float

    @property
    def kept(self) -> tuple[int, ...]:
        return tuple(complement(self.erased, self.n).tolist())


def sample_erasure(n: int, p: float, seed: int) -> ErasureSample:
    p = check_probability(p, "p")
    bits = sample_bernoulli_bits(1, n, p, seed)[0]
    return ErasureSample(n, tuple(np.flatnonzero(bits).tolist()), p)


@dataclass(frozen=True)
class DecodeProblem:
    graph_code: GraphCode
    erased: tuple[int, ...]
    kept: tuple[int, ...]
    F: BitMatrix
    A_cut: BitMatrix
    restricted_generators: BitMatrix


def build_F(gc: GraphCode, K: Iterable[int]) -> DecodeProblem:
    Ks = tuple(sorted(set(int(i) for i in K)))
    A_cut = cut_matrix(gc.graph, Ks)
    kept = tuple(complement(Ks, gc.n).tolist())
    Gr = gc.code.generators.select_cols(kept)
    F = vstack([Gr, A_cut.T])
    return DecodeProblem(gc, Ks, kept, F, A_cut, Gr)


def is_recoverable(dp: DecodeProblem) -> bool:
    """Full row rank of F."""
    F = dp.F
    if F.rows > F.cols:
        return False
    return rank(F) == F.rows


class CosetDecoding(NamedTuple):
    j: BitVector
    c_restricted: BitVector
    codeword: BitVector


def label(dp: DecodeProblem, j: BitVector, c: BitVector) -> BitVector:
    """Z-label ``c|_{V\\K} + A_cut j`` left on the surviving qubits."""
    c_kept = BitVector.from_bits(c.to_bits()[list(dp.kept)]) if dp.kept else BitVector.zeros(0)
    return c_kept ^ dp.A_cut.matvec(j)


def _split(dp: DecodeProblem, x: BitVector) -> tuple[BitVector, BitVector]:
    bits = x.to_bits()
    k = dp.restricted_generators.rows
    return BitVector.from_bits(bits[:k]), BitVector.from_bits(bits[k:])


def identify_coset(dp: DecodeProblem, u: BitVector) -> CosetDecoding:
    """Unique ``(j, c)`` with ``u = A_cut j + c|_{V\\K}``; requires full-rank F."""
    sol = solve(dp.F.T, u)
    if sol is None:
        raise InconsistentInputError("label lies outside span(restricted code) + range(A_cut)")
    if sol.kernel_basis:
        raise NotRecoverableError(f"F is rank deficient ({len(sol.kernel_basis)}-dimensional ambiguity)")
    m, j = _split(dp, sol.x0)
    return CosetDecoding(j, dp.restricted_generators.vecmat(m), dp.graph_code.code.generators.vecmat(m))


def failure_events(dp: DecodeProblem) -> dict[str, bool]:
    """Which of the three rank-failure events of F occur.

    A1: restricted generator rows dependent; A2: rows of A_cut^T dependent;
    A3: some combination of A_cut^T rows lands in the restricted code.
    """
    r_gen = rank(dp.restricted_generators)
    r_cut = rank(dp.A_cut)
    r_f = rank(dp.F)
    return {
        "A1": r_gen < dp.restricted_generators.rows,
        "A2": r_cut < dp.A_cut.cols,
        "A3": r_f < r_gen + r_cut,
    }


class TrialOutcome(NamedTuple):
    success: bool
    cause: str | None
    disagreement: bool
    erased: int
    events: dict | None


def run_trial(gc: GraphCode, p: float, seed: int, diagnose: bool = True) -> TrialOutcome:
    """One channel use: erase, pick the implicit outcome and the logical word, decode."""
    s_erase, s_rng = trial_seeds(seed, 0, 2)
    erasure = sample_erasure(gc.n, p, int(s_erase))
    rng = np.random.default_rng(int(s_rng))
    dp = build_F(gc, erasure.erased)
    k = gc.k
    m = BitVector.from_bits(rng.integers(0, 2, k, dtype=np.uint8))
    j = BitVector.from_bits(rng.integers(0, 2, len(dp.erased), dtype=np.uint8))
    c = gc.code.generators.vecmat(m)
    u = label(dp, j, c)

    predicate = is_recoverable(dp)
    sol = solve(dp.F.T, u)
    if sol is None:
        raise InconsistentInputError("forward-constructed label failed to solve")
    unique = not sol.kernel_basis
    recovered = False
    if unique:
        m2, j2 = _split(dp, sol.x0)
        recovered = j2 == j and gc.code.generators.vecmat(m2) == c
    disagreement = predicate != unique or (unique and not recovered)
    success = predicate and recovered
    cause = None
    events = None
    if not success:
        cause = SHAPE_INFEASIBLE if dp.F.rows > dp.F.cols else RANK_DEFICIENT
        if diagnose:
            events = failure_events(dp)
    return TrialOutcome(success, cause, disagreement, len(dp.erased), events)


# ----------------------------------------------------------------------------
# ensembles and Monte Carlo


def edge_probability(n: int, w: float) -> float:
    """``w ln(n) / n``, capped at 1."""
    q = w * math.log(n) / n
    if q > 1.0:
        warnings.warn(f"w ln(n)/n = {q:.3g} > 1 at n={n}; capping at 1", stacklevel=2)
        q = 1.0
    return q


@dataclass(frozen=True)
class EnsembleParams:
    """Random ``(G, C)``: H is ``round((1-R) n) x n`` Bernoulli(q), G is G(n, q)."""

    n: int
    rate: float
    w: float

    @property
    def checks(self) -> int:
        return int(round((1.0 - self.rate) * self.n))

    @property
    def q(self) -> float:
        return edge_probability(self.n, self.w)

    def sample(self, seed_code: int, seed_graph: int, materialize: bool = False) -> GraphCode:
        H = sample_bernoulli_matrix(self.checks, self.n, self.q, seed_code)
        G = sample_er(self.n, self.q, seed_graph)
        return build_graph_code(G, from_parity_check(H), materialize=materialize)

    def sample_trial(self, seed: int, trial: int, materialize: bool = False) -> GraphCode:
        s_code, s_graph, _ = trial_seeds(seed, trial, 3)
        return self.sample(int(s_code), int(s_graph), materialize)


def _one(source, p: float, seed: int, t: int, diagnose: bool) -> TrialOutcome:
    s_code, s_graph, s_trial = trial_seeds(seed, t, 3)
    if isinstance(source, EnsembleParams):
        gc = source.sample(int(s_code), int(s_graph))
    else:
        gc = source
    return run_trial(gc, p, int(s_trial), diagnose)


def monte_carlo(
    source: EnsembleParams | GraphCode,
    p: float,
    trials: int,
    seed: int,
    threads: int = 1,
    strict: bool = True,
    diagnose: bool = True,
) -> MonteCarloEstimate:
    """Failure rate of the recovery scheme.

    With :class:`EnsembleParams` every trial draws a fresh ``(H, G)`` as well
    as a fresh erasure; with a :class:`GraphCode` the code stays fixed.
    Trial ``t`` depends only on ``(seed, t)``, so ``threads`` never changes
    the result.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    p = check_probability(p, "p")

    def work(ts):
        return [_one(source, p, seed, t, diagnose) for t in ts]

    chunks = [range(i, min(i + 64, trials)) for i in range(0, trials, 64)]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            outcomes = [o for part in pool.map(work, chunks) for o in part]
    else:
        outcomes = work(range(trials))

    failures = sum(not o.success for o in outcomes)
    disagreements = sum(o.disagreement for o in outcomes)
    causes = Counter(o.cause for o in outcomes if o.cause)
    events = Counter(e for o in outcomes if o.events for e, hit in o.events.items() if hit)
    if isinstance(source, EnsembleParams):
        params = {"n": source.n, "p": p, "R": source.rate, "w": source.w, "mode": "ensemble"}
    else:
        params = {"n": source.n, "p": p, "R": source.k / source.n, "w": None, "mode": "fixed"}
    est = MonteCarloEstimate.from_counts(
        failures,
        trials,
        seed,
        params=params,
        causes={SHAPE_INFEASIBLE: causes[SHAPE_INFEASIBLE], RANK_DEFICIENT: causes[RANK_DEFICIENT]},
        events={e: events[e] for e in ("A1", "A2", "A3")},
        disagreements=disagreements,
    )
    if disagreements and strict:
        raise DecoderDisagreementError(f"{disagreements} trials where rank predicate and decoder disagree")
    log.debug("monte_carlo %s -> %d/%d failures", params, failures, trials)
    return est
