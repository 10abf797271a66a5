"""Fidelities, the symmetric logarithmic derivative, and Fisher informations.

All quantities are per detected photon: the state is the trace-one density
matrix ``rho = C C^H`` of the one-photon sector.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotHermitian, NotSquare, NotUnitary, SingularOutcome, SupportLeak
from .matdecomp import as_cmatrix, eigh_fixed, hermitian_defect
from .purify import PurificationPair, overlap_decomp, purification_pair
from .scene import Scene, density, density_derivative

UNITARY_TOL = 1e-8
STATE_TOL = 1e-8
SUPPORT_TOL = 1e-12
# Outcomes with probability at or below this floor are excluded from the CFI sum.
PROB_FLOOR = 1e-12
# ... unless their probability derivative exceeds this, which makes the CFI diverge.
SINGULAR_DP = 1e-9
LEAK_TOL = 1e-8


@dataclass(frozen=True)
class SldBundle:
    rho: np.ndarray
    drho: np.ndarray
    l: np.ndarray
    support_tol: float = SUPPORT_TOL

    @property
    def qfi(self) -> float:
        return float(np.trace(self.rho @ self.l @ self.l).real)

    def residual(self) -> float:
        """``||drho - (L rho + rho L)/2||_F``."""
        lr = self.l @ self.rho
        return float(np.linalg.norm(self.drho - 0.5 * (lr + lr.conj().T)))


def check_unitary(r, tol: float = UNITARY_TOL) -> np.ndarray:
    r = as_cmatrix(r)
    if r.shape[0] != r.shape[1]:
        raise NotUnitary(f"interferometer of shape {r.shape} is not square")
    defect = np.linalg.norm(r.conj().T @ r - np.eye(r.shape[0]))
    if defect > tol:
        raise NotUnitary(f"||R^H R - I||_F = {defect:.3e}")
    return r


def quantum_fidelity(scene: Scene, theta: float, theta_prime: float) -> float:
    """Root fidelity of rho(theta) and rho(theta'): the nuclear norm of the overlap."""
    return float(overlap_decomp(scene, theta, theta_prime).svd.sigma.sum())


def row_fidelity(a_rot, b_rot) -> float:
    """Sum over rows of ``||a'(v)|| * ||b'(v)||``.

    This is the Bhattacharyya overlap of the photon-counting distributions
    after the interferometer, given the rotated purifications directly.
    """
    a_rot = np.asarray(a_rot)
    b_rot = np.asarray(b_rot)
    return float(np.sum(np.linalg.norm(a_rot, axis=1) * np.linalg.norm(b_rot, axis=1)))


def classical_fidelity(pair: PurificationPair, r) -> float:
    r = check_unitary(r)
    return row_fidelity(r @ pair.a, r @ pair.b)


def diagonal_fidelity(a_rot, b_rot) -> float:
    """Sum of ``|a'(v,v)| * |b'(v,v)|`` over the diagonal.

    Warning: this is NOT the classical fidelity.  For triangular rotated
    purifications it only lower-bounds :func:`row_fidelity`, with equality
    when both matrices are diagonal.  Kept as a diagnostic for how far a
    triangular (QR-based) interferometer is from saturation.
    """
    a_rot = np.asarray(a_rot)
    b_rot = np.asarray(b_rot)
    if a_rot.ndim != 2 or a_rot.shape[0] != a_rot.shape[1] or a_rot.shape != b_rot.shape:
        raise NotSquare(f"need equal square matrices, got {a_rot.shape} and {b_rot.shape}")
    return float(np.sum(np.abs(np.diagonal(a_rot)) * np.abs(np.diagonal(b_rot))))


def _check_state(rho, drho):
    rho = as_cmatrix(rho)
    drho = as_cmatrix(drho)
    if rho.shape[0] != rho.shape[1] or rho.shape != drho.shape:
        raise NotSquare(f"rho {rho.shape} and drho {drho.shape} must be equal square matrices")
    if hermitian_defect(rho) > STATE_TOL:
        raise NotHermitian("rho is not Hermitian")
    if hermitian_defect(drho) > STATE_TOL * max(1.0, np.linalg.norm(drho)):
        raise NotHermitian("drho is not Hermitian")
    return rho, drho


def sld_solve(rho, drho, support_tol: float = SUPPORT_TOL) -> SldBundle:
    """Solve ``drho = (L rho + rho L) / 2`` for the Hermitian SLD ``L``.

    In the eigenbasis of ``rho`` the solution is
    ``L_ij = 2 drho_ij / (lam_i + lam_j)``; entries with
    ``lam_i + lam_j <= support_tol`` are set to zero.

    Raises:
        SupportLeak: if ``drho`` has weight above 1e-8 on the null-null block
            of ``rho``, where the SLD equation has no solution.
    """
    rho, drho = _check_state(rho, drho)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > STATE_TOL:
        raise ValueError(f"rho has trace {tr}, expected 1")
    w, lam = eigh_fixed(rho, herm_rtol=STATE_TOL)
    if lam[-1] < -STATE_TOL:
        raise ValueError(f"rho has negative eigenvalue {lam[-1]:.3e}")
    lam = np.clip(lam, 0.0, None)
    dr = w.conj().T @ drho @ w
    denom = lam[:, None] + lam[None, :]
    on_support = denom > support_tol
    leak = np.linalg.norm(np.where(on_support, 0.0, dr))
    if leak > LEAK_TOL:
        raise SupportLeak(f"drho has norm {leak:.3e} outside the support of rho")
    lt = np.where(on_support, 2.0 * dr / np.where(on_support, denom, 1.0), 0.0)
    l = w @ lt @ w.conj().T
    return SldBundle(rho, drho, 0.5 * (l + l.conj().T), support_tol)


def qfi_state(rho, drho, support_tol: float = SUPPORT_TOL) -> float:
    return sld_solve(rho, drho, support_tol).qfi


def qfi(scene: Scene, theta: float, support_tol: float = SUPPORT_TOL) -> float:
    """Quantum Fisher information ``Tr(rho L^2)`` from the analytic state derivative."""
    return qfi_state(density(scene, theta), density_derivative(scene, theta), support_tol)


def qfi_from_fidelity(scene: Scene, theta: float, delta: float = 1e-4) -> float:
    """QFI from the curvature of the root fidelity, ``8 (1 - f) / delta^2``.

    Uses the central pair ``(theta - delta/2, theta + delta/2)`` and carries
    an O(delta^2) bias.  ``1 - f`` is evaluated as ``||A - B||_F^2 / 2`` for
    the canonical purifications (equal to ``1 - Tr D`` for trace-one states),
    which avoids cancellation between ``f`` and 1.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    pair = purification_pair(scene, theta - 0.5 * delta, theta + 0.5 * delta)
    infidelity = 0.5 * np.linalg.norm(pair.a - pair.b) ** 2
    return 8.0 * infidelity / delta**2


def outcome_probabilities(rho, drho, r):
    """Photon-counting probabilities ``p_v`` and their derivatives behind ``r``."""
    p = np.einsum("vi,ij,vj->v", r, rho, r.conj()).real
    dp = np.einsum("vi,ij,vj->v", r, drho, r.conj()).real
    return p, dp


def cfi(rho, drho, r) -> float:
    """Classical Fisher information of photon counting behind interferometer ``r``.

    Raises:
        NotUnitary: if ``r`` is not unitary within 1e-8.
        SingularOutcome: if an outcome with ``p_v <= 1e-12`` has
            ``|dp_v| > 1e-9``.
    """
    rho, drho = _check_state(rho, drho)
    r = check_unitary(r)
    if r.shape != rho.shape:
        raise ValueError(f"interferometer {r.shape} does not match state {rho.shape}")
    p, dp = outcome_probabilities(rho, drho, r)
    live = p > PROB_FLOOR
    bad = ~live & (np.abs(dp) > SINGULAR_DP)
    if np.any(bad):
        v = int(np.flatnonzero(bad)[0])
        raise SingularOutcome(f"outcome {v} has p = {p[v]:.3e} but dp = {dp[v]:.3e}")
    return float(np.sum(dp[live] ** 2 / p[live]))


def cfi_batch(rho, drho, rs: np.ndarray) -> np.ndarray:
    """CFI for a stack of interferometers ``rs[k]``; singular outcomes give ``inf``.

    No validation is done; meant for brute-force sampling.
    """
    p = np.einsum("kvi,ij,kvj->kv", rs, rho, rs.conj()).real
    dp = np.einsum("kvi,ij,kvj->kv", rs, drho, rs.conj()).real
    live = p > PROB_FLOOR
    terms = np.where(live, dp**2 / np.where(live, p, 1.0), 0.0)
    out = terms.sum(axis=1)
    singular = np.any(~live & (np.abs(dp) > SINGULAR_DP), axis=1)
    out[singular] = np.inf
    return out
