"""Overlap matrix of two transfer matrices and the canonical purification pair.

For parameter values ``theta`` and ``theta'`` the overlap ``M = C^H C'`` is
decomposed as ``M = U D V^H``.  The purifications ``A = C U`` and ``B = C' V``
then satisfy ``A^H B = D`` with ``D`` real, nonnegative and diagonal, so the
root fidelity of the two states is simply ``sum(D)``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import GaugeResidual
from .matdecomp import EPS, SvdResult, svd_fixed
from .scene import Scene, transfer_matrix

GAUGE_TOL = 1e-9
# Largest principal angle (radians) at which two column spaces count as equal.
ANGLE_TOL = 1e-6


@dataclass(frozen=True)
class OverlapDecomp:
    theta: float
    theta_prime: float
    m: np.ndarray
    svd: SvdResult
    c: np.ndarray
    c_prime: np.ndarray


@dataclass(frozen=True)
class PurificationPair:
    a: np.ndarray
    b: np.ndarray
    d: np.ndarray
    theta: float = float("nan")
    theta_prime: float = float("nan")


@dataclass
class ConsistencyReport:
    consistent: bool
    principal_angles: np.ndarray
    gram_offdiag: float
    ranks: tuple = field(default=(0, 0))


def overlap_decomp(scene: Scene, theta: float, theta_prime: float) -> OverlapDecomp:
    c = transfer_matrix(scene, theta).c
    c2 = transfer_matrix(scene, theta_prime).c
    m = c.conj().T @ c2
    return OverlapDecomp(float(theta), float(theta_prime), m, svd_fixed(m), c, c2)


def purifications(decomp: OverlapDecomp) -> PurificationPair:
    """Purifications ``A = C U`` and ``B = C' V`` with ``A^H B = diag(d)``.

    Raises:
        GaugeResidual: if ``||A^H B - diag(d)||_F`` exceeds 1e-9.
    """
    u, sigma, v = decomp.svd
    a = decomp.c @ u
    b = decomp.c_prime @ v
    d = sigma.copy()
    resid = np.linalg.norm(a.conj().T @ b - np.diag(d))
    if resid > GAUGE_TOL:
        raise GaugeResidual(f"||A^H B - D||_F = {resid:.3e}")
    return PurificationPair(a, b, d, decomp.theta, decomp.theta_prime)


def purification_pair(scene: Scene, theta: float, theta_prime: float) -> PurificationPair:
    return purifications(overlap_decomp(scene, theta, theta_prime))


def _range_basis(x: np.ndarray, rtol: float) -> np.ndarray:
    u, s, _ = np.linalg.svd(x, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return u[:, :0]
    return u[:, : int(np.count_nonzero(s > rtol * s[0]))]


def _offdiag_max(g: np.ndarray) -> float:
    if g.shape[0] < 2:
        return 0.0
    return float(np.max(np.abs(g - np.diag(np.diagonal(g)))))


def local_consistency(pair: PurificationPair, rtol=None) -> ConsistencyReport:
    """Compare the column spaces of ``A`` and ``B``.

    ``gram_offdiag`` is the largest off-diagonal magnitude of the Gram
    matrices ``A^H A`` and ``B^H B``; it vanishes when the overlap basis also
    diagonalises both Gram matrices (columns of ``A`` and ``B`` orthogonal),
    which is the situation in which a QR-based interferometer happens to be
    optimal.
    """
    a, b = pair.a, pair.b
    if rtol is None:
        rtol = max(a.shape) * EPS
    gram = max(_offdiag_max(a.conj().T @ a), _offdiag_max(b.conj().T @ b))
    qa = _range_basis(a, rtol)
    qb = _range_basis(b, rtol)
    ranks = (qa.shape[1], qb.shape[1])
    if ranks[0] != ranks[1]:
        k = max(ranks)
        angles = np.full(k, np.pi / 2)
        angles[: min(ranks)] = 0.0
        return ConsistencyReport(False, angles, gram, ranks)
    if ranks[0] == 0:
        return ConsistencyReport(True, np.zeros(0), gram, ranks)
    # sines of the principal angles, accurate for small angles
    resid = qb - qa @ (qa.conj().T @ qb)
    sines = np.linalg.svd(resid, compute_uv=False)
    angles = np.sort(np.arcsin(np.clip(sines, 0.0, 1.0)))
    return ConsistencyReport(bool(angles.max() <= ANGLE_TOL), angles, gram, ranks)
