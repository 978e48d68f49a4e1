"""Analytic quantities and statistical experiments for the random code ensemble.

Logarithm bases follow each formula: base 2 inside the binary entropy and
the feasibility function, natural log for the Bernoulli parameter
``w ln(n) / n`` and the first-moment sum.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import optimize
from scipy.special import gammaln, logsumexp

from .codes import from_parity_check, min_distance_exact, min_distance_restricted, restrict
from .errors import DegenerateCodeError, check_probability
from .erasure import EnsembleParams, edge_probability
from .f2la import rank, sample_bernoulli_bits, sample_bernoulli_matrix
from .gcode import weight_audit
from .graphs import entanglement_entropy, sample_er
from .stats import MonteCarloEstimate, trial_seeds, wilson_ci

__all__ = [
    "FeasibilityReport",
    "binary_entropy",
    "coset_hit_prob",
    "distance_experiment",
    "entropy_experiment",
    "entropy_inverse",
    "expected_low_weight_words",
    "g_of_p",
    "g_of_p_highprec",
    "kolchin_experiment",
    "low_weight_word_experiment",
    "parity_sum_prob",
    "weight_statistics",
    "wilson_ci",
]


def binary_entropy(x: float) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy needs x in [0, 1], got {x}")
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def entropy_inverse(y: float) -> float:
    """The unique ``e`` in ``(0, 1/2]`` with ``h(e) = y``, by bisection."""
    y = float(y)
    if not 0.0 < y <= 1.0:
        raise ValueError(f"entropy inverse needs y in (0, 1], got {y}")
    if y == 1.0:
        return 0.5
    return optimize.bisect(lambda e: binary_entropy(e) - y, 1e-300, 0.5, xtol=1e-15, maxiter=2000)


@dataclass(frozen=True)
class FeasibilityReport:
    p: float
    epsilon_prime: float
    g_value: float
    rate: float
    rate_below_capacity: bool
    erased_distance_condition: bool
    full_distance_condition: bool

    @property
    def negative(self) -> bool:
        return self.g_value < 0


def _g_formula(p, eps, log2):
    return (
        1 - 2 * p - eps
        + log2(1 - eps / (1 - p)) * ((1 - p) - eps)
        + log2(2 * eps / (1 - p)) * eps
    )


def g_of_p(p: float, rate: float | None = None) -> FeasibilityReport:
    """Feasibility function at ``e' = h^{-1}(p)`` plus the two distance conditions.

    The conditions use ``beta = p`` and ``alpha = 1 - rate``; without a rate
    they are taken at the capacity limit ``alpha = 2p``.
    """
    p = float(p)
    if not 0.0 < p < 0.5:
        raise ValueError(f"g(p) is defined for 0 < p < 1/2, got {p}")
    eps = entropy_inverse(p)
    assert eps < 1 - p
    g = _g_formula(p, eps, math.log2)
    alpha = 2 * p if rate is None else 1.0 - rate
    beta = p
    return FeasibilityReport(
        p=p,
        epsilon_prime=eps,
        g_value=g,
        rate=1.0 - alpha,
        rate_below_capacity=True if rate is None else rate < 1 - 2 * p,
        erased_distance_condition=(1 - beta) * binary_entropy(eps / (1 - beta)) < alpha - beta,
        full_distance_condition=binary_entropy(eps) < alpha,
    )


def g_of_p_highprec(p: float | str, dps: int = 50):
    """Independent evaluation of g(p) in ``dps``-digit arithmetic (returns an mpf)."""
    with mpmath.workdps(dps):
        p = mpmath.mpf(p)

        def h(x):
            return -x * mpmath.log(x, 2) - (1 - x) * mpmath.log(1 - x, 2)

        lo, hi = mpmath.mpf(0), mpmath.mpf("0.5")
        tol = mpmath.mpf(10) ** (-dps + 5)
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if h(mid) < p:
                lo = mid
            else:
                hi = mid
        eps = (lo + hi) / 2
        return +_g_formula(p, eps, lambda x: mpmath.log(x, 2))


def parity_sum_prob(k: int, p_bit: float) -> float:
    """Probability that ``k`` independent Bernoulli(p) bits sum to 1 mod 2."""
    if k < 1:
        raise ValueError("k must be >= 1")
    p_bit = check_probability(p_bit, "p_bit")
    return (1.0 - (1.0 - 2.0 * p_bit) ** k) / 2.0


def _xlog(count: float, base: float) -> float:
    if count == 0:
        return 0.0
    return -math.inf if base <= 0.0 else count * math.log(base)


def coset_hit_prob(n_cols: int, k: int, g: int, p_bit: float) -> float:
    """Probability that the sum of ``k`` Bernoulli(p) vectors in F_2^n equals a fixed weight-``g`` word."""
    if k < 1 or not 0 <= g <= n_cols:
        raise ValueError("need k >= 1 and 0 <= g <= n_cols")
    p_bit = check_probability(p_bit, "p_bit")
    t = (1.0 - 2.0 * p_bit) ** k
    logp = math.fsum([-n_cols * math.log(2.0), _xlog(n_cols - g, 1.0 + t), _xlog(g, 1.0 - t)])
    return math.exp(logp)


def expected_low_weight_words(n: int, alpha: float, w: float, eps: float) -> float:
    """First-moment count ``sum_{k=1}^{floor(eps n)} C(n,k) ((1 + a^k)/2)^(alpha n)``, ``a = 1 - 2 w ln(n)/n``."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    a = 1.0 - 2.0 * w * math.log(n) / n
    if a <= 0.0:
        raise ValueError(f"a = 1 - 2w ln(n)/n = {a:.4g} must be positive")
    kmax = math.floor(eps * n)
    if kmax < 1:
        return 0.0
    k = np.arange(1, kmax + 1, dtype=np.float64)
    log_binom = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
    log_terms = log_binom + alpha * n * (np.log1p(a**k) - math.log(2.0))
    return float(np.exp(logsumexp(log_terms)))


def low_weight_word_experiment(
    n: int, alpha: float, w: float, eps: float, trials: int, seed: int, batch: int = 1000
) -> tuple[float, float]:
    """Mean and standard error of the number of nonzero codewords of weight <= eps n
    over sampled ``floor(alpha n) x n`` Bernoulli(w ln n / n) parity-check matrices."""
    m = math.floor(alpha * n)
    if m > 62:
        raise ValueError("syndromes are packed into int64; need floor(alpha n) <= 62")
    q = edge_probability(n, w)
    kmax = math.floor(eps * n)
    combos = [np.array(list(itertools.combinations(range(n), k)), dtype=np.int64) for k in range(1, kmax + 1)]
    shifts = (np.int64(1) << np.arange(m, dtype=np.int64))[None, :, None]
    counts = np.zeros(trials, dtype=np.int64)
    for start in range(0, trials, batch):
        b = min(batch, trials - start)
        bits = sample_bernoulli_bits(b * m, n, q, seed, row_offset=start * m).reshape(b, m, n)
        syn = (bits.astype(np.int64) * shifts).sum(axis=1)
        tally = np.zeros(b, dtype=np.int64)
        for idx in combos:
            tally += (np.bitwise_xor.reduce(syn[:, idx], axis=-1) == 0).sum(axis=1)
        counts[start : start + b] = tally
    mean = float(counts.mean())
    se = float(counts.std(ddof=1) / math.sqrt(trials)) if trials > 1 else math.inf
    return mean, se


def kolchin_experiment(n: int, alpha: float, w: float, trials: int, seed: int, threads: int = 1) -> MonteCarloEstimate:
    """Fraction of ``floor(alpha n) x n`` Bernoulli(w ln n / n) matrices without full row rank.

    Trial ``t`` uses rows ``t*m .. (t+1)*m - 1`` of one seeded stream.
    """
    if not alpha < 1:
        raise ValueError("alpha must be < 1")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    m = math.floor(alpha * n)
    q = edge_probability(n, w)

    def deficient(t: int) -> bool:
        return rank(sample_bernoulli_matrix(m, n, q, seed, row_offset=t * m)) < m

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            fails = sum(pool.map(deficient, range(trials)))
    else:
        fails = sum(deficient(t) for t in range(trials))
    return MonteCarloEstimate.from_counts(
        fails, trials, seed, params={"n": n, "alpha": alpha, "w": w, "rows": m, "q": q}
    )


def weight_statistics(n: int, w: float, zeta: float, rate: float, samples: int, seed: int) -> dict:
    """Per-sample maximum H-row weight, maximum degree and maximum generator weight
    against ``ln(n)^(1+zeta)`` and ``ln(n)^(2+2 zeta)``."""
    ens = EnsembleParams(n, rate, w)
    t1 = math.log(n) ** (1 + zeta)
    t2 = math.log(n) ** (2 + 2 * zeta)
    rows = []
    for s in range(samples):
        gc = ens.sample_trial(seed, s, materialize=True)
        audit = weight_audit(gc)
        h_max = int(gc.code.H.row_weights().max())
        rows.append(
            {
                "sample": s,
                "max_h_row_weight": h_max,
                "max_degree": audit["max_degree"],
                "max_generator_weight": audit["max_generator_weight"],
                "relaxed_bound_holds": audit["relaxed_bound_holds"],
                "within_w_times_kmax": audit["within_w_times_kmax"],
            }
        )
    frac = lambda pred: sum(pred(r) for r in rows) / samples  # noqa: E731
    return {
        "n": n,
        "w": w,
        "zeta": zeta,
        "rate": rate,
        "row_threshold": t1,
        "generator_threshold": t2,
        "frac_h_rows_within": frac(lambda r: r["max_h_row_weight"] <= t1),
        "frac_degree_within": frac(lambda r: r["max_degree"] <= t1),
        "frac_generators_within": frac(lambda r: r["max_generator_weight"] <= t2),
        "frac_relaxed_bound": frac(lambda r: r["relaxed_bound_holds"]),
        "samples": rows,
    }


def _max_eps(alpha: float, beta: float) -> float:
    """Largest ``e`` with ``(1-b) h(e/(1-b)) < a - b`` and ``h(e) < a`` (both increasing on the range used)."""

    def ok(e):
        return (1 - beta) * binary_entropy(min(e / (1 - beta), 0.5)) < alpha - beta and binary_entropy(e) < alpha

    lo, hi = 0.0, 0.5 * (1 - beta)
    if ok(hi):
        return hi
    for _ in range(200):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if ok(mid) else (lo, mid)
    return lo


def distance_experiment(n: int, alpha: float, beta: float, w: float, samples: int, seed: int) -> list[dict]:
    """Exact distance of small sampled codes before and after deleting the first ``beta n`` positions."""
    m = math.floor(alpha * n)
    cut = math.floor(beta * n)
    q = edge_probability(n, w)
    eps = _max_eps(alpha, beta)
    out = []
    for s in range(samples):
        s_code = int(trial_seeds(seed, s, 1)[0])
        code = from_parity_check(sample_bernoulli_matrix(m, n, q, s_code))
        try:
            d = min_distance_exact(code)
        except DegenerateCodeError:
            d = None
        try:
            d_r = min_distance_restricted(restrict(code, range(cut, n)))
        except DegenerateCodeError:
            d_r = None
        out.append(
            {
                "sample": s,
                "n": n,
                "k": code.k,
                "d": d,
                "d_restricted": d_r,
                "eps_prime": eps,
                "eps_prime_n": eps * n,
                "restricted_exceeds": d_r is not None and d_r > eps * n,
            }
        )
    return out


def entropy_experiment(n: int, w: float, cut_fraction: float, samples: int, seed: int) -> list[dict]:
    """Cut-rank entropy of G(n, w ln n / n) graph states across random cuts of size ``cut_fraction * n``."""
    q = edge_probability(n, w)
    size = math.floor(cut_fraction * n)
    out = []
    for s in range(samples):
        s_graph, s_cut = (int(v) for v in trial_seeds(seed, s, 2))
        G = sample_er(n, q, s_graph)
        K = np.sort(np.random.default_rng(s_cut).choice(n, size=size, replace=False))
        e = entanglement_entropy(G, K.tolist())
        bound = min(size, n - size)
        out.append({"sample": s, "n": n, "cut": size, "entropy": e, "max_possible": bound, "maximal": e == bound})
    return out
