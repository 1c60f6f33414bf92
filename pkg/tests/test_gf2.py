import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qldpc_ids.gf2 import (
    DimensionError,
    SparseBinaryMatrix,
    format_alist,
    in_row_space,
    mat_vec_mod2,
    parse_alist,
    rank_mod2,
    read_alist,
    write_alist,
)

HAMMING = SparseBinaryMatrix.from_dense(
    [[1, 1, 1, 0, 1, 0, 0], [0, 1, 1, 1, 0, 1, 0], [1, 1, 0, 1, 0, 0, 1]]
)
H2 = SparseBinaryMatrix.from_dense([[1, 1, 0], [0, 1, 1]])


def random_matrix(rng, max_rows=12, max_cols=20, density=0.3):
    m, n = rng.integers(1, max_rows + 1), rng.integers(1, max_cols + 1)
    return (rng.random((m, n)) < density).astype(np.uint8)


def span_brute_force(a):
    """Every GF(2) combination of the rows of ``a``, as a set of tuples."""
    out = set()
    for coeffs in itertools.product([0, 1], repeat=a.shape[0]):
        v = (np.array(coeffs, dtype=np.int64) @ a.astype(np.int64)) % 2
        out.add(tuple(v))
    return out


@pytest.mark.parametrize(
    "x, expected",
    [([1, 0, 0], [1, 0]), ([0, 0, 0], [0, 0]), ([1, 1, 1], [0, 0])],
)
def test_mat_vec_examples(x, expected):
    assert mat_vec_mod2(H2, x).tolist() == expected


def test_mat_vec_dimension_mismatch():
    with pytest.raises(DimensionError):
        mat_vec_mod2(H2, [1, 0])


def test_rank_examples():
    assert rank_mod2(SparseBinaryMatrix.from_dense(np.eye(3))) == 3
    assert rank_mod2(SparseBinaryMatrix.from_dense(np.zeros((3, 4)))) == 0
    assert rank_mod2(HAMMING) == 3


def test_rank_does_not_modify_input():
    before = HAMMING.to_dense().copy()
    rank_mod2(HAMMING)
    assert np.array_equal(before, HAMMING.to_dense())


def test_in_row_space_examples():
    for row in HAMMING.to_dense():
        assert in_row_space(HAMMING, row)
    assert in_row_space(HAMMING, np.zeros(7))
    assert not in_row_space(HAMMING, np.ones(7))


def test_in_row_space_dimension_mismatch():
    with pytest.raises(DimensionError):
        in_row_space(HAMMING, np.zeros(6))


def test_transpose_consistency_random():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        a = random_matrix(rng, 15, 30, rng.uniform(0.05, 0.5))
        h = SparseBinaryMatrix.from_dense(a)
        rebuilt = [[] for _ in range(h.n_cols)]
        for i, r in enumerate(h.row_support):
            for j in r:
                rebuilt[j].append(i)
        assert tuple(map(tuple, rebuilt)) == h.col_support
        assert np.array_equal(h.to_dense(), a)


def test_inconsistent_supports_rejected():
    with pytest.raises(ValueError):
        SparseBinaryMatrix(2, 2, [[0], [1]], [[1], [0]])
    with pytest.raises(ValueError):
        SparseBinaryMatrix(1, 2, [[1, 0]])
    with pytest.raises(ValueError):
        SparseBinaryMatrix(1, 2, [[0, 2]])


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 8), st.integers(1, 16), st.data())
def test_mat_vec_linearity(m, n, data):
    bits = st.lists(st.integers(0, 1), min_size=n, max_size=n)
    a = np.array(data.draw(st.lists(bits, min_size=m, max_size=m)), dtype=np.uint8)
    h = SparseBinaryMatrix.from_dense(a)
    x = np.array(data.draw(bits), dtype=np.uint8)
    y = np.array(data.draw(bits), dtype=np.uint8)
    assert np.array_equal(mat_vec_mod2(h, x ^ y), mat_vec_mod2(h, x) ^ mat_vec_mod2(h, y))
    assert np.array_equal(mat_vec_mod2(h, x), (a.astype(int) @ x) % 2)


def test_row_space_matches_enumeration():
    rng = np.random.default_rng(11)
    for _ in range(150):
        a = random_matrix(rng, 12, 10, rng.uniform(0.1, 0.6))
        h = SparseBinaryMatrix.from_dense(a)
        span = span_brute_force(a)
        assert rank_mod2(h) == int(np.log2(len(span)))
        for v in itertools.product([0, 1], repeat=a.shape[1]):
            assert in_row_space(h, np.array(v)) == (v in span)


ALIST_PADDED = """7 3
3 4
2 3 2 2 1 1 1
4 4 4
1 3 0
1 2 3
1 2 0
2 3 0
1 0 0
2 0 0
3 0 0
1 2 3 5
2 3 4 6
1 2 4 7
"""


def test_parse_alist_padded():
    h = parse_alist(ALIST_PADDED)
    assert h == HAMMING


def test_alist_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    for i in range(20):
        h = SparseBinaryMatrix.from_dense(random_matrix(rng))
        path = tmp_path / f"m{i}.alist"
        write_alist(h, path)
        assert read_alist(path) == h
    assert parse_alist(format_alist(HAMMING)) == HAMMING


def test_alist_unpadded_lists():
    text = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n"
    h = parse_alist(text)
    assert h.to_dense().tolist() == [[1, 1, 0], [0, 1, 1]]
    unpadded = "3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n"
    assert parse_alist(unpadded) == h


def test_alist_errors():
    with pytest.raises(ValueError):
        parse_alist("3 2\n2 2\n1 2")
    with pytest.raises(ValueError):
        parse_alist("3 x\n")
