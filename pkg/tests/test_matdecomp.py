import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qlim.errors import NonFinite, NotHermitian, NotPSD
from qlim.matdecomp import eigh_fixed, pinv, qr_positive, sqrtm_psd, svd_fixed

from conftest import random_complex

SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])


def gram_schmidt(a):
    """Classical Gram-Schmidt, the hand method, for full-column-rank a."""
    q = np.zeros_like(a, dtype=complex)
    t = np.zeros((a.shape[1], a.shape[1]), dtype=complex)
    for j in range(a.shape[1]):
        v = a[:, j].astype(complex)
        for i in range(j):
            t[i, j] = np.vdot(q[:, i], a[:, j])
            v = v - t[i, j] * q[:, i]
        t[j, j] = np.linalg.norm(v)
        q[:, j] = v / t[j, j]
    return q, t


def pivot(col):
    mags = np.abs(col)
    return col[np.flatnonzero(mags >= mags.max() * (1 - 1e-12))[0]]


class TestQrPositive:
    def test_identity(self):
        q, t = qr_positive(np.eye(2))
        np.testing.assert_allclose(q, np.eye(2), atol=1e-15)
        np.testing.assert_allclose(t, np.eye(2), atol=1e-15)

    def test_negative_diagonal_flips_sign_into_q(self):
        q, t = qr_positive(np.diag([-2.0, 1.0]))
        np.testing.assert_allclose(q, np.diag([-1.0, 1.0]), atol=1e-15)
        np.testing.assert_allclose(t, np.diag([2.0, 1.0]), atol=1e-15)

    def test_swap_matches_gram_schmidt(self):
        q_ref, t_ref = gram_schmidt(SWAP)
        q, t = qr_positive(SWAP)
        np.testing.assert_allclose(q, q_ref, atol=1e-15)
        np.testing.assert_allclose(t, t_ref, atol=1e-15)
        np.testing.assert_allclose(q, SWAP, atol=1e-15)

    def test_tall_matrix(self):
        rng = np.random.default_rng(3)
        a = random_complex(rng, 5, 3)
        q, t = qr_positive(a)
        assert q.shape == (5, 5) and t.shape == (5, 3)
        np.testing.assert_allclose(q @ t, a, atol=1e-13)
        assert np.allclose(np.tril(t, -1), 0)
        q_ref, t_ref = gram_schmidt(a)
        np.testing.assert_allclose(t[:3], t_ref, atol=1e-12)

    def test_nonfinite(self):
        with pytest.raises(NonFinite):
            qr_positive([[np.nan, 0], [0, 1]])


class TestSvdFixed:
    def test_identity(self):
        u, s, v = svd_fixed(np.eye(2))
        np.testing.assert_allclose(s, [1, 1])
        np.testing.assert_allclose(u, np.eye(2), atol=1e-15)
        np.testing.assert_allclose(v, np.eye(2), atol=1e-15)

    def test_diagonal_rank_one(self):
        np.testing.assert_allclose(svd_fixed(np.diag([3.0, 0.0])).sigma, [3, 0])

    def test_hand_example(self):
        m = np.array([[0.0, 2.0], [1.0, 0.0]])
        # oracle: M^H M = diag(1, 4); eigenvectors e2 (4), e1 (1); U = M V / sigma
        v_ref = np.array([[0.0, 1.0], [1.0, 0.0]])
        s_ref = np.array([2.0, 1.0])
        u_ref = (m @ v_ref) / s_ref
        u, s, v = svd_fixed(m)
        np.testing.assert_allclose(s, s_ref, atol=1e-15)
        np.testing.assert_allclose(u, u_ref, atol=1e-15)
        np.testing.assert_allclose(v, v_ref, atol=1e-15)

    def test_rectangular(self):
        rng = np.random.default_rng(1)
        for shape in [(2, 5), (5, 2)]:
            m = random_complex(rng, *shape)
            res = svd_fixed(m)
            np.testing.assert_allclose(res.reconstruct(), m, atol=1e-13)


class TestEighFixed:
    def test_identity(self):
        np.testing.assert_allclose(eigh_fixed(np.eye(2))[1], [1, 1])

    def test_swap(self):
        w, lam = eigh_fixed(SWAP)
        np.testing.assert_allclose(lam, [1, -1], atol=1e-15)
        np.testing.assert_allclose(w[:, 0], np.array([1, 1]) / np.sqrt(2), atol=1e-15)

    def test_reordering(self):
        w, lam = eigh_fixed(np.diag([0.2, 0.9]))
        np.testing.assert_allclose(lam, [0.9, 0.2])
        np.testing.assert_allclose(w, SWAP, atol=1e-15)

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            eigh_fixed([[0, 1], [0, 0]])


class TestPinv:
    def test_diagonal(self):
        np.testing.assert_allclose(pinv(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]), atol=1e-15)

    def test_identity(self):
        np.testing.assert_allclose(pinv(np.eye(3)), np.eye(3), atol=1e-15)

    def test_rank_one_formula(self):
        a = np.ones((2, 2))
        u = v = np.ones(2) / np.sqrt(2)
        ref = np.outer(v, u.conj()) / 2.0
        np.testing.assert_allclose(pinv(a), ref, atol=1e-15)
        np.testing.assert_allclose(ref, np.ones((2, 2)) / 4)

    def test_rtol_drops_small_singular_values(self):
        a = np.diag([1.0, 1e-8])
        np.testing.assert_allclose(pinv(a, rtol=1e-6), np.diag([1.0, 0.0]))
        np.testing.assert_allclose(pinv(a), np.diag([1.0, 1e8]))

    def test_bad_rtol(self):
        with pytest.raises(ValueError):
            pinv(np.eye(2), rtol=0.0)


class TestSqrtmPsd:
    def test_diagonal(self):
        np.testing.assert_allclose(sqrtm_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14)

    def test_scaled_identity(self):
        np.testing.assert_allclose(sqrtm_psd(np.eye(2) / 2), np.eye(2) / np.sqrt(2), atol=1e-15)

    def test_projector(self):
        p = np.ones((2, 2)) / 2
        np.testing.assert_allclose(sqrtm_psd(p / 2), p / np.sqrt(2), atol=1e-15)

    def test_tiny_negative_clamped(self):
        out = sqrtm_psd(np.diag([1.0, -1e-12]))
        np.testing.assert_allclose(out, np.diag([1.0, 0.0]), atol=1e-15)

    def test_not_psd(self):
        with pytest.raises(NotPSD):
            sqrtm_psd(np.diag([1.0, -1e-3]))


seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=1, max_value=6)


@settings(max_examples=60, deadline=None)
@given(seed=seeds, m=dims, n=dims)
def test_reconstructions(seed, m, n):
    rng = np.random.default_rng(seed)
    a = random_complex(rng, max(m, n), min(m, n))
    q, t = qr_positive(a)
    assert np.linalg.norm(q @ t - a) <= 1e-11 * np.linalg.norm(a)
    assert np.linalg.norm(q.conj().T @ q - np.eye(len(q))) <= 1e-12
    assert np.all(np.abs(np.diagonal(t).imag) == 0) and np.all(np.diagonal(t).real >= 0)

    b = random_complex(rng, m, n)
    res = svd_fixed(b)
    assert np.linalg.norm(res.reconstruct() - b) <= 1e-11 * np.linalg.norm(b)
    assert np.all(np.diff(res.sigma) <= 0) and np.all(res.sigma >= 0)

    h = b @ b.conj().T
    w, lam = eigh_fixed(h)
    assert np.linalg.norm((w * lam) @ w.conj().T - h) <= 1e-11 * np.linalg.norm(h)
    assert np.all(np.diff(lam) <= 0)


@settings(max_examples=60, deadline=None)
@given(seed=seeds, m=dims)
def test_phase_convention(seed, m):
    rng = np.random.default_rng(seed)
    b = random_complex(rng, m, m)
    for w in (svd_fixed(b).u, eigh_fixed(b + b.conj().T)[0]):
        for k in range(m):
            piv = pivot(w[:, k])
            assert abs(piv.imag) <= 1e-12 and piv.real >= 0


@settings(max_examples=60, deadline=None)
@given(seed=seeds, m=dims, n=dims)
def test_moore_penrose_conditions(seed, m, n):
    rng = np.random.default_rng(seed)
    a = random_complex(rng, m, n)
    x = pinv(a)
    scale = max(1.0, np.linalg.norm(a) * np.linalg.norm(x))
    tol = 1e-10 * scale
    assert np.linalg.norm(a @ x @ a - a) <= tol * np.linalg.norm(a)
    assert np.linalg.norm(x @ a @ x - x) <= tol * np.linalg.norm(x)
    assert np.linalg.norm(a @ x - (a @ x).conj().T) <= tol
    assert np.linalg.norm(x @ a - (x @ a).conj().T) <= tol


@settings(max_examples=40, deadline=None)
@given(seed=seeds, m=dims)
def test_pinv_involution_full_rank(seed, m):
    rng = np.random.default_rng(seed)
    a = random_complex(rng, m, m) + 3 * np.eye(m)
    assert np.linalg.norm(pinv(pinv(a)) - a) <= 1e-9


@settings(max_examples=40, deadline=None)
@given(seed=seeds, m=dims)
def test_sqrtm_squares_back(seed, m):
    rng = np.random.default_rng(seed)
    b = random_complex(rng, m, m)
    h = b @ b.conj().T
    root = sqrtm_psd(h)
    assert np.linalg.norm(root @ root - h) <= 1e-10 * np.linalg.norm(h)
    assert np.linalg.eigvalsh(root).min() >= -1e-12


def test_determinism():
    rng = np.random.default_rng(11)
    a = random_complex(rng, 4, 4)
    h = a + a.conj().T
    pairs = [(svd_fixed(a), svd_fixed(a)), (eigh_fixed(h), eigh_fixed(h)),
             (qr_positive(a), qr_positive(a)), ((pinv(a),), (pinv(a),))]
    for first, second in pairs:
        for x, y in zip(first, second):
            assert np.array_equal(x, y)
