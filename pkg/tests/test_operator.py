import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncho import (
    BandedSymmetricMatrix,
    BasisIndex,
    DomainError,
    Params,
    Parity,
    apply_number,
    apply_V,
    assemble_sector,
    matrix_element,
)
from ncho.eigensolve import sturm_count, tridiagonalize
from ncho.operator import swap_vector

from oracles import pauli_form, sector_from_dense, tensor_form

positive = st.floats(min_value=0.05, max_value=50.0, allow_nan=False)


@given(positive, positive)
def test_params_gate(a, b):
    if a * b > 1:
        p = Params(a, b)
        assert p.canonical().beta >= p.canonical().alpha
        assert p.swapped().swapped() == p
    else:
        with pytest.raises(DomainError, match="requires alpha\\*beta>1"):
            Params(a, b)


@pytest.mark.parametrize("a,b", [(0.0, 5.0), (-2.0, -3.0), (float("nan"), 2.0), (float("inf"), 2.0)])
def test_params_rejects_bad_values(a, b):
    with pytest.raises(DomainError):
        Params(a, b)


def test_matrix_element_examples():
    p = Params(2, 3)
    ev = Parity.EVEN
    assert matrix_element(p, BasisIndex(0, 1, ev), BasisIndex(0, 1, ev)) == 1.0
    assert matrix_element(p, BasisIndex(0, 2, ev), BasisIndex(0, 2, ev)) == 1.5
    # row (spin 1, n=0), column (spin 2, n=2)
    val = matrix_element(p, BasisIndex(0, 1, ev), BasisIndex(1, 2, ev))
    assert val == pytest.approx(-math.sqrt(2) / 2, abs=1e-15)


def test_matrix_element_cross_parity_rejected():
    p = Params(2, 3)
    with pytest.raises(DomainError):
        matrix_element(p, BasisIndex(0, 1, Parity.EVEN), BasisIndex(0, 1, Parity.ODD))


@given(
    st.floats(min_value=0.3, max_value=10), st.floats(min_value=0.3, max_value=10),
    st.integers(0, 6), st.integers(1, 2), st.integers(0, 6), st.integers(1, 2), st.sampled_from(Parity),
)
def test_matrix_element_symmetry_and_selection(a, b, l1, s1, l2, s2, par):
    if a * b <= 1:
        return
    p = Params(a, b)
    r, c = BasisIndex(l1, s1, par), BasisIndex(l2, s2, par)
    assert matrix_element(p, r, c) == matrix_element(p, c, r)
    if abs(r.n - c.n) not in (0, 2):
        assert matrix_element(p, r, c) == 0.0


def test_assemble_even_L2():
    m = assemble_sector(Params(2, 2), Parity.EVEN, 2).to_dense()
    np.testing.assert_array_equal(np.diag(m), [1, 1, 5, 5])
    s = math.sqrt(2) / 2
    # (level 0, spin s) couples to (level 1, spin 3-s) only
    expected = np.array([[1, 0, 0, -s], [0, 1, s, 0], [0, s, 5, 0], [-s, 0, 0, 5]])
    np.testing.assert_allclose(m, expected, atol=1e-15)


def test_assemble_odd_L3_diagonal():
    m = assemble_sector(Params(2, 3), Parity.ODD, 3)
    assert m.dim == 6 and m.half_bandwidth == 3
    np.testing.assert_allclose(np.diag(m.to_dense()), [3, 4.5, 7, 10.5, 11, 16.5])


def test_assemble_matches_matrix_element():
    p = Params(1.7, 4.2)
    for par in Parity:
        m = assemble_sector(p, par, 7).to_dense()
        ref = np.array(
            [[matrix_element(p, BasisIndex.from_flat(i, par), BasisIndex.from_flat(j, par)) for j in range(14)]
             for i in range(14)]
        )
        np.testing.assert_array_equal(m, ref)


def test_assemble_rejects_tiny_L():
    with pytest.raises(DomainError):
        assemble_sector(Params(2, 3), Parity.EVEN, 1)


@pytest.mark.parametrize("L", [2, 5, 16, 40])
@pytest.mark.parametrize("ab", [(2.0, 3.0), (0.5, 3.0), (7.0, 1.2)])
def test_form_equivalence(L, ab):
    # tensor and Pauli forms differ from the sector assembly only by rounding
    # in sqrt(n) sqrt(n-1) versus sqrt(n (n-1))
    N = 2 * L
    t, pf = tensor_form(*ab, N), pauli_form(*ab, N)
    scale = np.max(np.abs(t))
    for par in Parity:
        m = assemble_sector(Params(*ab), par, L).to_dense()
        np.testing.assert_allclose(sector_from_dense(t, N, par.value), m, rtol=0, atol=1e-15 * scale)
        np.testing.assert_allclose(sector_from_dense(pf, N, par.value), m, rtol=0, atol=1e-15 * scale)
    # and no coupling between parities in the dense forms
    even = np.concatenate([np.arange(0, N, 2), N + np.arange(0, N, 2)])
    odd = np.concatenate([np.arange(1, N, 2), N + np.arange(1, N, 2)])
    assert np.all(t[np.ix_(even, odd)] == 0)


@pytest.mark.parametrize("ab", [(2.0, 3.0), (0.5, 2.5), (1.01, 1.0)])
def test_positive_at_truncation(ab):
    for par in Parity:
        m = assemble_sector(Params(*ab), par, 30)
        t = tridiagonalize(m, want_transform=False)
        assert sturm_count(t.diagonal, t.offdiagonal, 0.0) == 0


def test_banded_roundtrip_and_matvec(tmp_path):
    rng = np.random.default_rng(3)
    dense = rng.normal(size=(9, 9))
    dense = np.tril(np.triu(dense + dense.T, -3), 3)
    m = BandedSymmetricMatrix.from_dense(dense, 3)
    np.testing.assert_array_equal(m.to_dense(), dense)
    v = rng.normal(size=(9, 4))
    np.testing.assert_allclose(m.matvec(v), dense @ v, atol=1e-13)
    path = tmp_path / "m.txt"
    m.write_triplets(path)
    back = np.zeros((9, 9))
    for line in path.read_text().splitlines():
        r, c, val = line.split()
        back[int(r), int(c)] = float(val)
    np.testing.assert_array_equal(back, dense)


def test_banded_rejects_wide_input():
    with pytest.raises(DomainError):
        BandedSymmetricMatrix.from_dense(np.ones((5, 5)), 1)


def _unit(dim, level, spin):
    v = np.zeros(dim)
    v[2 * level + spin - 1] = 1.0
    return v


def test_apply_number_examples():
    np.testing.assert_array_equal(apply_number(Parity.EVEN, _unit(8, 0, 1)), 0)
    np.testing.assert_array_equal(apply_number(Parity.ODD, _unit(8, 0, 2)), _unit(8, 0, 2))
    np.testing.assert_array_equal(apply_number(Parity.EVEN, _unit(8, 3, 1)), 6 * _unit(8, 3, 1))


def test_apply_V_examples():
    np.testing.assert_array_equal(apply_V(Parity.EVEN, _unit(8, 0, 1)), 0)
    np.testing.assert_array_equal(apply_V(Parity.EVEN, _unit(8, 0, 2)), 0.5 * _unit(8, 0, 2))
    np.testing.assert_array_equal(apply_V(Parity.ODD, _unit(8, 2, 2)), 5.5 * _unit(8, 2, 2))


def test_odd_length_vector_rejected():
    with pytest.raises(DomainError):
        apply_number(Parity.EVEN, np.ones(5))


@settings(max_examples=25, deadline=None)
@given(st.floats(0.4, 6.0), st.floats(0.4, 6.0), st.sampled_from(Parity))
def test_swap_vector_intertwines(a, b, par):
    # swap_vector maps Q(a, b) to Q(b, a) exactly at every truncation
    if a * b <= 1:
        return
    L = 12
    m1 = assemble_sector(Params(a, b), par, L).to_dense()
    m2 = assemble_sector(Params(b, a), par, L).to_dense()
    U = swap_vector(par, np.eye(2 * L))
    np.testing.assert_allclose(U.T @ U, np.eye(2 * L), atol=1e-15)
    np.testing.assert_allclose(U @ m1 @ U.T, m2, atol=1e-12 * np.max(np.abs(m1)))
