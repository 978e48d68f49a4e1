import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphcodes import analysis as A

# frozen oracle values
H_011 = 0.499915958164528
EPS_035 = 0.06578670635458028
G_040 = -0.13823447924215657


def test_binary_entropy_examples():
    assert A.binary_entropy(0.5) == 1.0
    assert A.binary_entropy(0.0) == 0.0 == A.binary_entropy(1.0)
    with mpmath.workdps(40):
        x = mpmath.mpf("0.11")
        ref = float(-x * mpmath.log(x, 2) - (1 - x) * mpmath.log(1 - x, 2))
    assert A.binary_entropy(0.11) == pytest.approx(ref, abs=1e-12)
    assert A.binary_entropy(0.11) == pytest.approx(0.49992, abs=1e-4)
    assert A.binary_entropy(0.11) == pytest.approx(H_011, abs=1e-14)
    for bad in (-0.1, 1.1):
        with pytest.raises(ValueError):
            A.binary_entropy(bad)


def test_entropy_symmetric_and_concave_on_grid():
    xs = np.linspace(0, 1, 2001)
    h = np.array([A.binary_entropy(x) for x in xs])
    assert np.allclose(h, h[::-1], atol=1e-12)
    assert np.all(np.diff(h, 2) <= 1e-12)


def test_entropy_inverse_examples():
    assert A.entropy_inverse(1.0) == 0.5
    for y in np.arange(0.1, 0.95, 0.1):
        assert A.binary_entropy(A.entropy_inverse(y)) == pytest.approx(y, abs=1e-10)
    with pytest.raises(ValueError):
        A.entropy_inverse(0.0)


def test_entropy_inverse_grid_scan_oracle():
    grid = np.linspace(0, 0.5, 1_000_001)[1:]
    h = -grid * np.log2(grid) - (1 - grid) * np.log2(1 - grid)
    scan = grid[np.argmin(np.abs(h - 0.35))]
    assert A.entropy_inverse(0.35) == pytest.approx(scan, abs=1e-6)
    assert A.entropy_inverse(0.35) == pytest.approx(EPS_035, abs=1e-12)


@given(st.floats(1e-6, 0.5))
def test_entropy_inverse_roundtrip(x):
    assert A.entropy_inverse(A.binary_entropy(x)) == pytest.approx(x, abs=1e-9)


@given(st.floats(0.01, 0.99), st.floats(0.01, 0.99))
def test_entropy_inverse_monotone(a, b):
    lo, hi = sorted((a, b))
    assert A.entropy_inverse(lo) <= A.entropy_inverse(hi)


def test_g_dual_implementation():
    rep = A.g_of_p(0.40)
    assert rep.g_value == pytest.approx(G_040, abs=1e-12)
    assert abs(float(A.g_of_p_highprec("0.40")) - rep.g_value) < 1e-9
    assert A.binary_entropy(rep.epsilon_prime) == pytest.approx(0.40, abs=1e-10)
    assert 0 < rep.epsilon_prime <= 0.5


def test_g_report_conditions_and_domain():
    rep = A.g_of_p(0.4, rate=0.1)
    assert rep.rate_below_capacity
    assert not A.g_of_p(0.4, rate=0.3).rate_below_capacity
    assert A.g_of_p(0.4).full_distance_condition
    for bad in (0.0, 0.5, 0.7):
        with pytest.raises(ValueError):
            A.g_of_p(bad)


def test_g_near_lower_edge_reports_without_assertion():
    rep = A.g_of_p(0.33)
    assert math.isfinite(rep.g_value)


def test_parity_sum_prob_examples():
    assert A.parity_sum_prob(1, 0.3) == pytest.approx(0.3)
    assert all(A.parity_sum_prob(k, 0.5) == 0.5 for k in range(1, 10))
    brute = sum(p for a, b in itertools.product((0, 1), repeat=2)
                if (a + b) % 2 for p in [(0.1 if a else 0.9) * (0.1 if b else 0.9)])
    assert A.parity_sum_prob(2, 0.1) == pytest.approx(brute, abs=1e-15)
    assert brute == pytest.approx(0.18)


@given(st.integers(1, 60), st.floats(0, 0.4999))
def test_parity_sum_prob_bounded_and_increasing(k, p):
    v = A.parity_sum_prob(k, p)
    assert 0 <= v <= 0.5
    assert A.parity_sum_prob(k + 1, p) >= v - 1e-15


def _coset_hit_bruteforce(n, k, g, p):
    target = tuple([1] * g + [0] * (n - g))
    total = 0.0
    vecs = list(itertools.product((0, 1), repeat=n))
    for combo in itertools.product(vecs, repeat=k):
        s = tuple(sum(c) % 2 for c in zip(*combo))
        if s == target:
            pr = 1.0
            for v in combo:
                w = sum(v)
                pr *= p**w * (1 - p) ** (n - w)
            total += pr
    return total


def test_coset_hit_prob_examples():
    assert A.coset_hit_prob(5, 3, 0, 0.0) == 1.0
    assert A.coset_hit_prob(5, 3, 2, 0.0) == 0.0
    ref = _coset_hit_bruteforce(4, 2, 1, 0.25)
    assert A.coset_hit_prob(4, 2, 1, 0.25) == pytest.approx(ref, abs=1e-15)
    assert A.coset_hit_prob(4, 2, 1, 0.25) == pytest.approx(0.091552734375, abs=1e-15)


@pytest.mark.parametrize("n", [1, 4, 7, 10])
@pytest.mark.parametrize("k", [1, 2, 5])
@pytest.mark.parametrize("p", [0.0, 0.05, 0.3, 0.5, 0.9])
def test_coset_hit_total_probability(n, k, p):
    total = math.fsum(math.comb(n, g) * A.coset_hit_prob(n, k, g, p) for g in range(n + 1))
    assert total == pytest.approx(1.0, abs=1e-10)


def test_coset_hit_underflow_safe():
    v = A.coset_hit_prob(5000, 3, 100, 0.01)
    assert v >= 0.0 and math.isfinite(v)


def test_expected_low_weight_words_basic():
    assert A.expected_low_weight_words(16, 0.5, 1, 0.05) == 0.0
    vals = [A.expected_low_weight_words(64, 0.5, 1, e) for e in np.linspace(0.02, 0.5, 20)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        A.expected_low_weight_words(4, 0.5, 2, 0.5)  # a < 0


def test_expected_low_weight_words_direct_sum():
    n, alpha, w, eps = 40, 0.5, 1.5, 0.2
    a = 1 - 2 * w * math.log(n) / n
    ref = math.fsum(math.comb(n, k) * ((1 + a**k) / 2) ** (alpha * n) for k in range(1, 9))
    assert A.expected_low_weight_words(n, alpha, w, eps) == pytest.approx(ref, rel=1e-10)


def test_low_weight_experiment_small_agrees_with_enumeration():
    from graphcodes.erasure import edge_probability
    from graphcodes.f2la import sample_bernoulli_matrix

    n, alpha, w, eps, trials, seed = 10, 0.5, 1, 0.3, 40, 5
    mean, _ = A.low_weight_word_experiment(n, alpha, w, eps, trials, seed, batch=7)
    m, q = 5, edge_probability(n, w)
    counts = []
    for t in range(trials):
        H = sample_bernoulli_matrix(m, n, q, seed, row_offset=t * m).to_dense()
        c = 0
        for k in range(1, 4):
            for S in itertools.combinations(range(n), k):
                c += not H[:, list(S)].sum(axis=1).__mod__(2).any()
        counts.append(c)
    assert mean == pytest.approx(np.mean(counts))


def test_kolchin_dense_and_reproducible():
    # w chosen so that q = w ln(n)/n is about 1/2: dense uniform rows
    est = A.kolchin_experiment(64, 0.5, 32 / math.log(64), 200, seed=3)
    assert 0 <= est.ci_low <= est.point <= est.ci_high <= 1
    assert est.point < 0.02
    a = A.kolchin_experiment(128, 0.5, 2, 50, seed=9)
    b = A.kolchin_experiment(128, 0.5, 2, 50, seed=9, threads=3)
    assert a == b
    with pytest.raises(ValueError):
        A.kolchin_experiment(64, 1.0, 2, 10, seed=0)


def test_kolchin_point_within_unit_interval_when_capped():
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        est = A.kolchin_experiment(4, 0.5, 50, 20, seed=1)
    # q capped at 1: every row equals all-ones, so two rows are always dependent
    assert est.point == 1.0 and est.ci_high <= 1.0


def test_weight_statistics_shape():
    st_ = A.weight_statistics(128, 2, 0.25, 0.25, 3, seed=4)
    assert len(st_["samples"]) == 3
    assert st_["row_threshold"] == pytest.approx(math.log(128) ** 1.25)
    assert 0 <= st_["frac_generators_within"] <= 1


def test_distance_and_entropy_experiments():
    rows = A.distance_experiment(16, 0.5, 0.2, 2, 3, seed=1)
    assert len(rows) == 3 and all(r["k"] >= 8 for r in rows)
    rows = A.entropy_experiment(10, 2, 0.5, 4, seed=1)
    assert all(r["entropy"] <= r["max_possible"] for r in rows)


def test_wilson_reexport():
    lo, hi = A.wilson_ci(0, 20)
    assert lo == 0.0 and hi > 0
