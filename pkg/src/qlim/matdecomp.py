"""Dense complex decompositions with fixed sign, phase and ordering conventions.

Every routine returns a canonical factorisation: singular values and
eigenvalues in descending order, and each returned eigen/singular vector
rotated so that its largest-magnitude entry is real and nonnegative (ties go
to the lowest row index).  That removes the gauge freedom LAPACK leaves open,
so downstream results are reproducible and diffable.
"""

from typing import NamedTuple

import numpy as np

from .errors import NonFinite, NotHermitian, NotPSD

EPS = np.finfo(float).eps

# Relative slack used when deciding that two entries tie for the largest magnitude.
_TIE_RTOL = 1e-12


class SvdResult(NamedTuple):
    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    def reconstruct(self):
        k = self.sigma.size
        return (self.u[:, :k] * self.sigma) @ self.v[:, :k].conj().T


def as_cmatrix(a) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex array (always a fresh copy)."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFinite("matrix contains NaN or Inf entries")
    return m


def hermitian_defect(h: np.ndarray) -> float:
    return float(np.linalg.norm(h - h.conj().T))


def _pivot_index(col: np.ndarray) -> int:
    mags = np.abs(col)
    top = mags.max()
    return int(np.flatnonzero(mags >= top * (1.0 - _TIE_RTOL))[0])


def column_phases(w: np.ndarray) -> np.ndarray:
    """Unit phases that make each column's pivot entry real and nonnegative."""
    phases = np.ones(w.shape[1], dtype=complex)
    for k in range(w.shape[1]):
        col = w[:, k]
        i = _pivot_index(col)
        if col[i] != 0:
            phases[k] = np.conj(col[i]) / abs(col[i])
    return phases


def _apply_phases(w: np.ndarray, phases: np.ndarray) -> np.ndarray:
    w = w * phases
    # snap the pivots so their imaginary part is exactly zero
    for k in range(w.shape[1]):
        i = _pivot_index(w[:, k])
        w[i, k] = abs(w[i, k])
    return w


def qr_positive(a):
    """QR factorisation ``a = q @ t`` with a real nonnegative diagonal on ``t``.

    ``q`` is the full square unitary factor and ``t`` is upper triangular
    (trapezoidal when ``a`` has more rows than columns).
    """
    a = as_cmatrix(a)
    if a.shape[0] < a.shape[1]:
        raise ValueError("qr_positive needs rows >= cols")
    q, t = np.linalg.qr(a, mode="complete")
    n = a.shape[1]
    diag = np.diagonal(t).copy()
    mags = np.abs(diag)
    ph = np.where(mags > 0, diag / np.where(mags > 0, mags, 1.0), 1.0)
    q[:, :n] *= ph
    t[:n, :] *= ph.conj()[:, None]
    t[np.arange(n), np.arange(n)] = mags
    return q, t


def svd_fixed(m) -> SvdResult:
    """Singular value decomposition with the package phase convention.

    The phase rule is applied to the columns of ``u``; the paired columns of
    ``v`` receive the same phase so that ``m = u diag(sigma) v^H`` still holds.
    """
    m = as_cmatrix(m)
    u, s, vh = np.linalg.svd(m, full_matrices=True)
    v = vh.conj().T
    k = s.size
    ph_u = column_phases(u)
    u = _apply_phases(u, ph_u)
    ph_v = np.ones(v.shape[1], dtype=complex)
    ph_v[:k] = ph_u[:k]
    v = v * ph_v
    # unpaired columns of v (more columns than rows) get their own phase
    if v.shape[1] > k:
        v[:, k:] = _apply_phases(v[:, k:], column_phases(v[:, k:]))
    return SvdResult(u, s, v)


def eigh_fixed(h, herm_rtol: float = 1e-10):
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns ``(w, lam)`` with ``h = w @ diag(lam) @ w^H``.  Within a
    degenerate eigenspace only the phase rule is applied; the basis itself is
    whatever LAPACK returns.

    Raises:
        NotHermitian: if ``h`` deviates from Hermitian by more than
            ``herm_rtol * max(1, ||h||_F)``.
    """
    h = as_cmatrix(h)
    if h.shape[0] != h.shape[1]:
        raise NotHermitian(f"matrix of shape {h.shape} is not square")
    if hermitian_defect(h) > herm_rtol * max(1.0, np.linalg.norm(h)):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    lam, w = np.linalg.eigh(0.5 * (h + h.conj().T))
    lam = lam[::-1].copy()
    w = w[:, ::-1]
    w = _apply_phases(w, column_phases(w))
    return w, lam


def pinv(a, rtol=None) -> np.ndarray:
    """Moore-Penrose pseudoinverse.

    Singular values at or below ``rtol * sigma_max`` are treated as zero.
    The default ``rtol`` is ``max(rows, cols) * eps``.
    """
    a = as_cmatrix(a)
    if rtol is None:
        rtol = max(a.shape) * EPS
    if rtol <= 0:
        raise ValueError("rtol must be positive")
    u, s, v = svd_fixed(a)
    k = s.size
    cutoff = rtol * (s[0] if k else 0.0)
    keep = s > cutoff
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return (v[:, :k] * inv) @ u[:, :k].conj().T


def sqrtm_psd(h, herm_rtol: float = 1e-10, neg_tol: float = 1e-10) -> np.ndarray:
    """Principal square root of a Hermitian positive semidefinite matrix.

    Eigenvalues in ``[-neg_tol * max(1, lam_max), 0)`` are clamped to zero.
    """
    w, lam = eigh_fixed(h, herm_rtol=herm_rtol)
    if lam[-1] < -neg_tol * max(1.0, lam[0]):
        raise NotPSD(f"minimum eigenvalue {lam[-1]:.3e} is negative")
    root = np.sqrt(np.clip(lam, 0.0, None))
    out = (w * root) @ w.conj().T
    return 0.5 * (out + out.conj().T)
