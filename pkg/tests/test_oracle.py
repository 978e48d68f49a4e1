import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphcodes import oracle
from graphcodes.codes import from_parity_check
from graphcodes.erasure import build_F, is_recoverable
from graphcodes.errors import PhaseEscapeError, SizeLimitError
from graphcodes.f2la import BitMatrix, BitVector, sample_bernoulli_matrix
from graphcodes.gcode import PauliOp, build_graph_code, graph_stabilizer
from graphcodes.graphs import Graph, entanglement_entropy, sample_er

graphs = st.builds(lambda n, q, s: sample_er(n, q, s), st.integers(1, 10), st.floats(0, 1), st.integers(0, 2**32))


def test_small_states():
    plus = oracle.graph_state_vector(Graph.empty(1))
    assert plus.signs.tolist() == [1, 1] and plus.exponent == 1
    edge = oracle.graph_state_vector(Graph.from_edges(2, [(0, 1)]))
    assert edge.signs.tolist() == [1, 1, 1, -1] and edge.exponent == 2


@given(graphs)
def test_three_constructions_agree_and_normalized(G):
    a = oracle.graph_state_vector(G)
    assert a == oracle.graph_state_circuit(G) == oracle.graph_state_stabilized(G)
    assert a.norm_squared() == 1
    assert np.all(np.abs(a.signs) == 1)


def test_apply_pauli_examples():
    plus = oracle.plus_state(1)
    assert oracle.apply_pauli(plus, PauliOp.identity(1)) == plus
    minus = oracle.apply_pauli(plus, PauliOp.from_supports(1, z=[0]))
    assert minus.signs.tolist() == [1, -1]
    with pytest.raises(PhaseEscapeError):
        oracle.apply_pauli(plus, PauliOp.from_supports(1, x=[0], phase=1))


@given(graphs)
def test_graph_stabilizers_fix_state(G):
    g = oracle.graph_state_vector(G)
    assert all(oracle.stabilizes(graph_stabilizer(G, i), g) for i in range(G.n))


def test_orthogonality_examples():
    assert oracle.check_orthogonality(Graph.empty(1))
    assert oracle.check_orthogonality(Graph.from_edges(2, [(0, 1)]))


def test_measure_lemma_examples():
    G = Graph.from_edges(2, [(0, 1)])
    proj = oracle.project(oracle.graph_state_vector(G), [0], [1])
    # 2**(-1/2) Z|+> written over the 2**(-1) grid
    assert proj.signs.tolist() == [1, -1] and proj.exponent == 2
    assert oracle.check_measure_lemma(G, [0], [1])
    P = Graph.path(4)
    assert oracle.check_measure_lemma(P, [1, 2], [0, 0])


@given(graphs, st.data())
def test_measure_lemma_random(G, data):
    K = sorted(data.draw(st.sets(st.integers(0, G.n - 1), max_size=min(3, G.n))))
    y = data.draw(st.lists(st.integers(0, 1), min_size=len(K), max_size=len(K)))
    assert oracle.check_measure_lemma(G, K, y)


@given(st.builds(lambda n, q, s: sample_er(n, q, s), st.integers(2, 8), st.floats(0, 1), st.integers(0, 2**32)),
       st.data())
def test_outcomes_uniform(G, data):
    K = sorted(data.draw(st.sets(st.integers(0, G.n - 1), min_size=1, max_size=3)))
    g = oracle.graph_state_vector(G)
    total = Fraction(0)
    for y in itertools.product((0, 1), repeat=len(K)):
        p = oracle.project(g, K, y).norm_squared()
        assert p == Fraction(1, 2 ** len(K))
        total += p
    assert total == 1


def test_schmidt_examples():
    assert oracle.schmidt_rank_log2(oracle.plus_state(4), [0, 1]) == 0
    edge = oracle.graph_state_vector(Graph.from_edges(2, [(0, 1)]))
    assert oracle.schmidt_rank_log2(edge, [0]) == 1


@given(graphs, st.data())
def test_schmidt_equals_cut_rank(G, data):
    K = sorted(data.draw(st.sets(st.integers(0, G.n - 1))))
    assert oracle.schmidt_rank_log2(oracle.graph_state_vector(G), K) == entanglement_entropy(G, K)


def test_code_basis_orthonormal():
    G = sample_er(7, 0.5, 3)
    gc = build_graph_code(G, from_parity_check(sample_bernoulli_matrix(3, 7, 0.5, 4)))
    states = oracle.basis_states(gc)
    assert len(states) == 2**gc.k
    for i, a in enumerate(states):
        for j, b in enumerate(states):
            assert oracle.inner(a, b) == (1 if i == j else 0)


def test_end_to_end_examples():
    gc = build_graph_code(Graph.path(3), from_parity_check(BitMatrix.from_rows(["110", "011"])))
    assert oracle.end_to_end_recovery_check(gc, [])
    assert oracle.end_to_end_recovery_check(gc, [0])


@given(st.integers(2, 8), st.integers(0, 2**31), st.data())
def test_end_to_end_random(n, seed, data):
    G = sample_er(n, data.draw(st.floats(0.1, 0.9)), seed)
    gc = build_graph_code(G, from_parity_check(sample_bernoulli_matrix((n + 1) // 2, n, 0.5, seed + 1)))
    K = sorted(data.draw(st.sets(st.integers(0, n - 1), max_size=n // 2)))
    if is_recoverable(build_F(gc, K)):
        assert oracle.end_to_end_recovery_check(gc, K)
    else:
        with pytest.raises(ValueError):
            oracle.end_to_end_recovery_check(gc, K)


def test_read_z_label():
    G = sample_er(5, 0.5, 1)
    g = oracle.graph_state_vector(G)
    u = BitVector.from_bits("10110")
    assert oracle.read_z_label(oracle.apply_pauli(g, oracle.z_label(5, u)), g) == u
    # S_0 fixes |G>, so X_0 |G> = Z_{N(0)} |G>
    X = oracle.apply_pauli(g, PauliOp.from_supports(5, x=[0]))
    assert oracle.read_z_label(X, g) == G.adjacency.row(0)
    zero = np.zeros(32, dtype=np.int8)
    zero[0] = 1
    assert oracle.read_z_label(oracle.ExactState(5, zero, 0), g) is None


def test_size_guards():
    with pytest.raises(SizeLimitError):
        oracle.plus_state(17)
    with pytest.raises(SizeLimitError):
        oracle.check_orthogonality(Graph.empty(13))
