"""Candidate interferometers acting on the collector modes.

Three constructions are provided:

* :func:`build_qr` -- the unitary ``R = Q^H`` from the QR factorisation of the
  purification ``A``.  ``RA`` is upper triangular and, because ``A^H B`` is
  diagonal, ``RB`` comes out lower triangular.  Optimal only when the columns
  of ``A`` are orthogonal (for example in inversion-symmetric scenes).
* :func:`build_finite_shift` -- eigenbasis of ``P = B A^+``.  ``P`` is
  Hermitian positive semidefinite, and ``R P = Lambda R`` makes every rotated
  row pair proportional, ``RB = Lambda RA``, which saturates the fidelity.
* :func:`build_sld` -- the ``delta -> 0`` limit of the above: the eigenbasis
  of the symmetric logarithmic derivative.
"""

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import NotHermitian, SupportMismatch
from .fisher import SUPPORT_TOL, sld_solve
from .matdecomp import eigh_fixed, hermitian_defect, pinv, qr_positive
from .purify import PurificationPair, local_consistency, purification_pair
from .scene import Scene, density, density_derivative

DEFAULT_DELTA = 1e-5
P_HERM_RTOL = 1e-6
EIG_FLOOR = 1e-10
# Rows whose rotated purifications are both this small count as empty.
ROW_ZERO = 1e-12


class Method(enum.Enum):
    QR_BASED = "QrBased"
    FINITE_SHIFT = "FiniteShift"
    SLD_LIMIT = "SldLimit"


@dataclass(frozen=True)
class InterferometerPlan:
    r: np.ndarray
    method: Method
    lam: Optional[np.ndarray] = None
    p: Optional[np.ndarray] = None
    delta: Optional[float] = None
    l: Optional[np.ndarray] = None
    diagnostics: dict = field(default_factory=dict)


def _lower_residual(m: np.ndarray) -> float:
    upper = np.triu(m, k=1)
    return float(np.max(np.abs(upper))) if upper.size else 0.0


def build_qr(pair: PurificationPair) -> InterferometerPlan:
    """QR-based interferometer ``R = Q^H`` with ``A = Q T``.

    ``diagnostics['lower_residual']`` is the largest magnitude above the
    diagonal of ``RB`` (zero when ``RB`` is exactly lower triangular).
    """
    q, _ = qr_positive(pair.a)
    r = q.conj().T
    diag = {"lower_residual": _lower_residual(r @ pair.b)}
    return InterferometerPlan(r, Method.QR_BASED, diagnostics=diag)


def finite_shift_plan(pair: PurificationPair, rtol=None, delta=None) -> InterferometerPlan:
    """Interferometer diagonalising ``P = B A^+`` for a given purification pair.

    Raises:
        SupportMismatch: if ``A`` and ``B`` do not share a column space.
        NotHermitian: if ``P`` departs from Hermitian by more than
            ``1e-6 ||P||_F`` before symmetrisation.
    """
    report = local_consistency(pair, rtol)
    if not report.consistent:
        raise SupportMismatch(
            f"column spaces differ: ranks {report.ranks}, "
            f"largest principal angle {report.principal_angles.max():.3e}"
        )
    a_pinv = pinv(pair.a, rtol)
    p = pair.b @ a_pinv
    asym = hermitian_defect(p)
    if asym > P_HERM_RTOL * np.linalg.norm(p):
        raise NotHermitian(f"P = B A^+ has anti-Hermitian part {asym:.3e}")
    # second algebraic form, (A^+)^H D A^+, must agree on the support
    p_alt = a_pinv.conj().T @ (pair.d[:, None] * a_pinv)
    forms_gap = float(np.linalg.norm(p - p_alt))
    p = 0.5 * (p + p.conj().T)
    w, lam = eigh_fixed(p)
    min_eig = float(lam[-1])
    lam = np.where((lam < 0) & (lam >= -EIG_FLOOR), 0.0, lam)
    diag = {
        "p_asymmetry": asym,
        "p_forms_gap": forms_gap,
        "p_min_eig": min_eig,
        "max_angle": float(report.principal_angles.max(initial=0.0)),
        "gram_offdiag": report.gram_offdiag,
    }
    return InterferometerPlan(w.conj().T, Method.FINITE_SHIFT, lam=lam, p=p,
                              delta=delta, diagnostics=diag)


def build_finite_shift(scene: Scene, theta: float, delta: float = DEFAULT_DELTA,
                       rtol=None) -> InterferometerPlan:
    """Optimal interferometer for the finite shift ``theta -> theta + delta``."""
    if delta == 0:
        raise ValueError("delta must be nonzero")
    pair = purification_pair(scene, theta, theta + delta)
    return finite_shift_plan(pair, rtol, delta)


def sld_plan(rho, drho, tol: float = SUPPORT_TOL) -> InterferometerPlan:
    bundle = sld_solve(rho, drho, tol)
    w, lam = eigh_fixed(bundle.l)
    diag = {"sld_eigenvalues": lam, "sld_residual": bundle.residual()}
    return InterferometerPlan(w.conj().T, Method.SLD_LIMIT, l=bundle.l, diagnostics=diag)


def build_sld(scene: Scene, theta: float, tol: float = SUPPORT_TOL) -> InterferometerPlan:
    """Measure in the eigenbasis of the symmetric logarithmic derivative at ``theta``."""
    return sld_plan(density(scene, theta), density_derivative(scene, theta), tol)


def plan_residual(plan: InterferometerPlan, pair: PurificationPair) -> float:
    """Largest row-proportionality defect of ``RA`` and ``RB``.

    With eigenvalues available this is ``max_v ||b'(v) - lam_v a'(v)||``.
    Without them (QR plans) each row uses the best ``lam_v >= 0``; rows
    where either rotated vector vanishes already meet the saturation
    condition and contribute zero.
    """
    a_rot = plan.r @ pair.a
    b_rot = plan.r @ pair.b
    na = np.linalg.norm(a_rot, axis=1)
    nb = np.linalg.norm(b_rot, axis=1)
    if plan.lam is not None:
        defects = np.linalg.norm(b_rot - plan.lam[:, None] * a_rot, axis=1)
        defects[(na <= ROW_ZERO) & (nb <= ROW_ZERO)] = 0.0
        return float(defects.max())
    worst = 0.0
    for av, bv, a_norm, b_norm in zip(a_rot, b_rot, na, nb):
        if a_norm <= ROW_ZERO or b_norm <= ROW_ZERO:
            continue
        lam = max(0.0, float(np.vdot(av, bv).real)) / a_norm**2
        worst = max(worst, float(np.linalg.norm(bv - lam * av)))
    return worst
