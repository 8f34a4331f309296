import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncho import (
    BandedSymmetricMatrix,
    DomainError,
    Params,
    Parity,
    SolverError,
    assemble_sector,
    converged_spectrum,
    eigen_tridiagonal,
    sturm_bisection,
    tridiagonalize,
)
from ncho.certificates import iw_bounds, th3_gap_certificate, Lambda2Source
from ncho.eigensolve import lowest_eigenpairs, sturm_count

from oracles import dense_eigenvalues, position_form_eigenvalues, random_band

# [DERIVED] dense tensor-form oracle (numpy eigvalsh, 2x700 Fock states), frozen
ORACLE = {
    (2.0, 3.0): [0.919210883694361, 1.3523361885622516, 2.7874924810690374, 3.9309707532023084],
    (3.0, 20.0): [1.4896393136435826, 4.476960170225652],
    (2.0, 2.01): [0.8668918589879848, 0.8709265012521354],
    (1.5, 4.0): [0.6930833407470897, 1.7263751846744382, 2.1138180812602503, 3.794781482769638],
    (0.5, 3.0): [0.15832184460971563, 0.45310691625792066, 0.5292816533324368, 0.8561931920784509],
}


def test_tridiagonalize_trivial_inputs():
    m = BandedSymmetricMatrix.from_dense([[2.0, 0.5], [0.5, 1.0]], 1)
    t = tridiagonalize(m)
    np.testing.assert_array_equal(t.diagonal, [2.0, 1.0])
    np.testing.assert_array_equal(t.offdiagonal, [0.5])
    np.testing.assert_array_equal(t.transform, np.eye(2))
    d = BandedSymmetricMatrix.from_dense(np.diag([3.0, 1.0, 2.0, 5.0]), 3)
    t = tridiagonalize(d)
    np.testing.assert_array_equal(t.diagonal, [3.0, 1.0, 2.0, 5.0])
    np.testing.assert_array_equal(t.offdiagonal, 0.0)
    np.testing.assert_array_equal(t.transform, np.eye(4))


@pytest.mark.parametrize("seed", range(5))
def test_tridiagonalize_reconstructs(seed):
    rng = np.random.default_rng(seed)
    dense = random_band(rng, 50, 3)
    t = tridiagonalize(BandedSymmetricMatrix.from_dense(dense, 3))
    T = np.diag(t.diagonal) + np.diag(t.offdiagonal, 1) + np.diag(t.offdiagonal, -1)
    q = t.transform
    np.testing.assert_allclose(q @ q.T, np.eye(50), atol=1e-13)
    np.testing.assert_allclose(q.T @ T @ q, dense, atol=1e-13)


def test_eigen_tridiagonal_2x2():
    vals = eigen_tridiagonal([1.0, 5.0], [math.sqrt(2) / 2])
    r = math.sqrt(4.5)
    np.testing.assert_allclose(vals, [3 - r, 3 + r], atol=1e-14)
    low = sturm_bisection([1.0, 5.0], [math.sqrt(2) / 2], 1, 1e-13)
    assert abs(low[0] - (3 - r)) < 1e-13


def test_eigen_tridiagonal_zero_offdiagonal_sorts():
    np.testing.assert_array_equal(eigen_tridiagonal([3.0, -1.0, 2.0], [0.0, 0.0]), [-1.0, 2.0, 3.0])


def test_eigen_tridiagonal_vectors():
    rng = np.random.default_rng(11)
    d, e = rng.normal(size=30), rng.normal(size=29)
    vals, vecs = eigen_tridiagonal(d, e, want_vectors=True)
    T = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    np.testing.assert_allclose(T @ vecs, vecs * vals, atol=1e-12)
    np.testing.assert_allclose(vecs.T @ vecs, np.eye(30), atol=1e-12)


def test_eigen_tridiagonal_shape_check():
    with pytest.raises(DomainError):
        eigen_tridiagonal([1.0, 2.0], [1.0, 1.0])


@pytest.mark.parametrize("seed", range(3))
def test_ql_matches_sturm_random_100(seed):
    rng = np.random.default_rng(100 + seed)
    d, e = rng.normal(size=100), rng.normal(size=99)
    ql = eigen_tridiagonal(d, e)
    st_ = sturm_bisection(d, e, 100, 1e-14)
    assert np.max(np.abs(ql - st_)) <= 1e-11
    np.testing.assert_allclose(ql, np.linalg.eigvalsh(np.diag(d) + np.diag(e, 1) + np.diag(e, -1)), atol=1e-12)


def test_sturm_count_gershgorin_extremes():
    rng = np.random.default_rng(5)
    d, e = rng.normal(size=40), rng.normal(size=39)
    radius = np.abs(np.r_[0, e]) + np.abs(np.r_[e, 0])
    assert sturm_count(d, e, np.min(d - radius) - 1e-9) == 0
    assert sturm_count(d, e, np.max(d + radius) + 1e-9) == 40


def test_sturm_bisection_rejects_bad_tol():
    with pytest.raises(DomainError):
        sturm_bisection([1.0], [], 1, 0.0)


def test_lowest_eigenpairs_orthonormal():
    m = assemble_sector(Params(2.0, 3.0), Parity.EVEN, 80)
    vals, vecs = lowest_eigenpairs(m, 12)
    assert np.max(np.abs(vecs.T @ vecs - np.eye(12))) <= 1e-10
    res = np.linalg.norm(m.matvec(vecs) - vecs * vals, axis=0)
    assert np.max(res) < 1e-10


def test_lowest_eigenpairs_degenerate_cluster():
    # alpha = beta: exact pairs inside one sector
    m = assemble_sector(Params(2.0, 2.0), Parity.EVEN, 64)
    vals, vecs = lowest_eigenpairs(m, 4)
    assert abs(vals[0] - vals[1]) < 1e-12
    assert np.max(np.abs(vecs.T @ vecs - np.eye(4))) <= 1e-10


def test_converged_spectrum_diagonal_example():
    spec = converged_spectrum(Params(2, 2), 4, 1e-10)
    w = math.sqrt(3)
    np.testing.assert_allclose(spec.eigenvalues, [w / 2, w / 2, 1.5 * w, 1.5 * w], rtol=1e-12)
    # ties broken even-first; the second pair of levels is odd
    assert spec.parities == (Parity.EVEN, Parity.EVEN, Parity.ODD, Parity.ODD)
    # compare eigenspace projectors, not vectors
    g = np.array(spec.eigenvectors[:2]).T
    P = g @ g.T
    np.testing.assert_allclose(P @ P, P, atol=1e-10)


def test_converged_spectrum_iw_example():
    spec = converged_spectrum(Params(2, 3), 2)
    lo, hi = 0.9128709, 1.3693064
    assert all(lo <= v <= hi for v in spec.eigenvalues)


@pytest.mark.parametrize("key", sorted(ORACLE))
def test_against_dense_oracle(key):
    ref = np.array(ORACLE[key])
    spec = converged_spectrum(Params(*key), len(ref), 1e-10)
    np.testing.assert_allclose(spec.eigenvalues, ref, rtol=0, atol=1e-9)


def test_dense_oracle_freeze_is_current():
    # guards the frozen table above against a stale oracle
    np.testing.assert_allclose(dense_eigenvalues(2.0, 3.0, 4, N=700), ORACLE[(2.0, 3.0)], atol=1e-12)


def test_position_form_agrees_loosely():
    # finite differences are second order; 1e-3 is ample at h = 0.02
    fd = position_form_eigenvalues(2.0, 3.0, 4)
    np.testing.assert_allclose(fd, ORACLE[(2.0, 3.0)], atol=1e-3)


def test_gap_exceeds_th3_bound():
    spec = converged_spectrum(Params(2, 2.01), 2)
    cert = th3_gap_certificate(Params(2, 2.01), Lambda2Source.NUMERIC, float(spec.eigenvalues[1]))
    assert cert.certified
    assert spec.gap >= cert.details["bound"]


def test_monotone_in_L():
    p = Params(1.5, 4.0)
    prev = None
    for L in (16, 32, 64, 128):
        vals, _ = lowest_eigenpairs(assemble_sector(p, Parity.EVEN, L), 6)
        if prev is not None:
            assert np.all(vals <= prev + 1e-12)
        prev = vals


@settings(max_examples=15, deadline=None)
@given(st.floats(1.1, 6.0), st.floats(1.1, 6.0))
def test_iw_sandwich_and_operator_monotonicity(a, b):
    p = Params(a, b)
    tol = 1e-10
    spec = converged_spectrum(p, 6, tol)
    for j in range(1, 4):
        lo, hi = iw_bounds(p, j)
        for v in spec.eigenvalues[2 * j - 2: 2 * j]:
            assert lo - 10 * tol <= v <= hi + 10 * tol
    lo_spec = converged_spectrum(Params(p.lo, p.lo), 6, tol).eigenvalues
    hi_spec = converged_spectrum(Params(p.hi, p.hi), 6, tol).eigenvalues
    assert np.all(lo_spec <= spec.eigenvalues + 10 * tol)
    assert np.all(spec.eigenvalues <= hi_spec + 10 * tol)


def test_cap_raises_solver_error():
    with pytest.raises(SolverError) as info:
        converged_spectrum(Params(2, 3), 4, tol=1e-10, L_init=4, L_max=8)
    assert info.value.bracket is not None


def test_bad_arguments():
    with pytest.raises(DomainError):
        converged_spectrum(Params(2, 3), 0)
    with pytest.raises(DomainError):
        converged_spectrum(Params(2, 3), 2, tol=-1.0)


def test_large_k_converges():
    spec = converged_spectrum(Params(2, 2), 200)
    m = np.arange(1, 101) - 0.5
    np.testing.assert_allclose(spec.eigenvalues, np.repeat(math.sqrt(3) * m, 2), rtol=1e-11)
