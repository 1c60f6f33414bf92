import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qldpc_ids import _engine
from qldpc_ids.gf2 import SparseBinaryMatrix
from qldpc_ids.kernels import (
    MessageState,
    TannerGraph,
    c2v_exact,
    c2v_min_sum,
    check_convergence,
    exact_rule,
    marginal_and_decide,
    min_sum_rule,
    prior_llr,
    v2c,
)
from qldpc_ids.named import HAMMING_7_4, steane
from qldpc_ids.schedulers import decode_flooding

CLIP = _engine.LLR_CLIP
PAIR = TannerGraph.from_matrix(SparseBinaryMatrix.from_dense([[1, 1, 0], [0, 1, 1]]))
TRIPLE = TannerGraph.from_matrix(SparseBinaryMatrix.from_dense([[1, 1, 1]]))


def test_prior_llr():
    assert prior_llr(0.05) == pytest.approx(math.log(0.95 / 0.05))
    assert prior_llr(0.0) == CLIP
    for bad in (-0.1, 0.5, 0.9):
        with pytest.raises(ValueError):
            prior_llr(bad)


def test_graph_layout():
    g = TannerGraph.from_matrix(HAMMING_7_4)
    assert g.n_edges == 12
    assert g.check_degrees.tolist() == [4, 4, 4]
    assert g.var_degrees.tolist() == [2, 3, 2, 2, 1, 1, 1]
    # check-major numbering: edges of a check are contiguous and sorted by variable
    for c in range(3):
        vs = [int(g.edge_var[e]) for e in g.check_edges(c)]
        assert vs == sorted(vs) == list(HAMMING_7_4.row_support[c])
    for v in range(7):
        assert all(g.edge_var[e] == v for e in g.var_edge_list(v))
    with pytest.raises(KeyError):
        g.edge(0, 3)


@pytest.mark.parametrize("s_i, sign", [(0, 1), (1, -1)])
def test_exact_degree_two(s_i, sign):
    st_ = MessageState.initial(PAIR, 0.05)
    assert c2v_exact(st_, s_i, 0, 1) == pytest.approx(sign * st_.l0)


def test_exact_degree_three_against_high_precision():
    st_ = MessageState.initial(TRIPLE, 0.05)
    mpmath.mp.dps = 50
    l0 = mpmath.log(mpmath.mpf("0.95") / mpmath.mpf("0.05"))
    want = 2 * mpmath.atanh(mpmath.tanh(l0 / 2) ** 2)
    assert c2v_exact(st_, 0, 0, 2) == pytest.approx(float(want), rel=1e-12)


def test_min_sum_examples():
    assert min_sum_rule([3.2, -1.5], 0) == -1.5
    assert min_sum_rule([3.2, -1.5], 1) == 1.5
    l0 = prior_llr(0.02)
    for d in range(1, 8):
        assert min_sum_rule([l0] * d, 0) == pytest.approx(l0)
    st_ = MessageState.initial(TRIPLE, 0.02)
    assert c2v_min_sum(st_, 0, 0, 0) == pytest.approx(st_.l0)


def test_degree_one_check_hits_clip():
    assert exact_rule([], 0) == CLIP
    assert exact_rule([], 1) == -CLIP
    assert min_sum_rule([], 1) == -CLIP


def test_v2c_examples():
    g = TannerGraph.from_matrix(SparseBinaryMatrix.from_dense([[1, 1], [1, 0]]))
    st_ = MessageState.initial(g, 0.1)
    assert v2c(st_, 0, 0) == pytest.approx(st_.l0)
    st_.c2v[g.edge(1, 0)] = -2 * st_.l0
    assert v2c(st_, 0, 0) == pytest.approx(-st_.l0)


def test_v2c_random_against_resummation():
    g = TannerGraph.from_matrix(HAMMING_7_4)
    rng = np.random.default_rng(0)
    st_ = MessageState.initial(g, 0.03)
    for _ in range(50):
        st_.c2v[:] = rng.normal(0, 5, g.n_edges)
        for e in range(g.n_edges):
            c, v = int(g.edge_chk[e]), int(g.edge_var[e])
            others = [st_.c2v[f] for f in g.var_edge_list(v) if g.edge_chk[f] != c]
            assert v2c(st_, v, c) == pytest.approx(st_.l0 + sum(others))


def test_marginal_and_decide():
    g = TannerGraph.from_matrix(HAMMING_7_4)
    st_ = MessageState.initial(g, 0.05)
    _, e_hat = marginal_and_decide(st_)
    assert not e_hat.any()
    e = g.var_edge_list(1)[0]
    st_.c2v[e] = -st_.l0 - 1.0
    _, e_hat = marginal_and_decide(st_)
    assert e_hat.tolist() == [0, 1, 0, 0, 0, 0, 0]
    st_.c2v[e] = -st_.l0  # exact tie decides 1
    marg, e_hat = marginal_and_decide(st_)
    assert marg[1] == 0.0 and e_hat[1] == 1


def test_check_convergence():
    code = steane()
    z = np.zeros(3, dtype=np.uint8)
    assert check_convergence(code, np.zeros(7, dtype=np.uint8), z)
    e = np.eye(7, dtype=np.uint8)[0]
    assert check_convergence(code, e, code.tanner.syndrome(e))
    wrong = np.eye(7, dtype=np.uint8)[4]  # touches only check 0
    assert not check_convergence(code, wrong, code.tanner.syndrome(e))


def test_min_sum_dominance():
    rng = np.random.default_rng(123)
    for _ in range(100_000 // 50):
        batch = rng.normal(0, 4, size=(50, 6))
        for row in batch:
            d = rng.integers(1, 7)
            vals = row[:d]
            s_i = int(rng.integers(2))
            a, b = exact_rule(vals, s_i), min_sum_rule(vals, s_i)
            assert abs(b) >= abs(a) * (1 - 1e-9)
            assert a == 0 or np.sign(a) == np.sign(b)


def test_zero_syndrome_converges_immediately():
    code = steane()
    out = decode_flooding(code, np.zeros(3, dtype=np.uint8), 0.05)
    assert out.converged and out.iterations == 0 and not out.e_hat.any()


@settings(max_examples=300, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=0, max_size=12), st.integers(0, 1))
def test_messages_stay_within_clip(vals, s_i):
    for rule in (exact_rule, min_sum_rule):
        out = rule(vals, s_i)
        assert math.isfinite(out) and abs(out) <= CLIP
