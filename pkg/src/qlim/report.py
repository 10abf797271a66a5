"""Per-parameter Fisher report comparing the QR-based and corrected interferometers."""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import QlimError
from .fisher import (SUPPORT_TOL, cfi, classical_fidelity, qfi_from_fidelity, qfi_state)
from .interferometer import DEFAULT_DELTA, build_finite_shift, build_qr, build_sld
from .purify import local_consistency, purification_pair
from .scene import Scene, density, density_derivative

NAN = float("nan")


@dataclass(frozen=True)
class ReportSettings:
    delta: float = DEFAULT_DELTA
    fid_delta: float = 1e-4
    rtol: Optional[float] = None
    support_tol: float = SUPPORT_TOL
    # central finite differences of rho instead of the analytic derivative
    fd_derivative: bool = False
    fd_step: float = 1e-6


@dataclass
class FisherReport:
    theta: float
    qfi: float = NAN
    qfi_fid: float = NAN
    cfi_opt: float = NAN
    cfi_qr: float = NAN
    cfi_shift: float = NAN
    f_quantum: float = NAN
    f_classical_opt: float = NAN
    f_classical_qr: float = NAN
    residuals: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)

    @property
    def clean(self) -> bool:
        return not self.errors

    def invariant_violations(self) -> list:
        out = []
        for name in ("cfi_opt", "cfi_qr", "cfi_shift"):
            value = getattr(self, name)
            if math.isfinite(value) and math.isfinite(self.qfi) and value > self.qfi + 1e-6:
                out.append(f"{name} > qfi")
        for name in ("f_classical_opt", "f_classical_qr"):
            value = getattr(self, name)
            if math.isfinite(value) and math.isfinite(self.f_quantum) and value < self.f_quantum - 1e-10:
                out.append(f"{name} < f_quantum")
        return out


def _state(scene: Scene, theta: float, settings: ReportSettings):
    rho = density(scene, theta)
    if settings.fd_derivative:
        h = settings.fd_step
        drho = (density(scene, theta + h) - density(scene, theta - h)) / (2 * h)
        drho = 0.5 * (drho + drho.conj().T)
    else:
        drho = density_derivative(scene, theta)
    return rho, drho


def fisher_report(scene: Scene, theta: float, settings: ReportSettings = ReportSettings()) -> FisherReport:
    """Evaluate QFI, CFIs and fidelities at one parameter value.

    Failures of individual quantities (for example ``SingularOutcome`` or
    ``SupportMismatch``) are recorded in ``report.errors`` under the field
    name and leave that field as NaN; the rest of the report is still filled.
    """
    rep = FisherReport(theta=float(theta))
    delta = settings.delta

    def attempt(name, fn):
        try:
            return fn()
        except QlimError as exc:
            rep.errors[name] = type(exc).__name__
            return None

    rho, drho = _state(scene, theta, settings)
    q = attempt("qfi", lambda: qfi_state(rho, drho, settings.support_tol))
    if q is not None:
        rep.qfi = q
    q = attempt("qfi_fid", lambda: qfi_from_fidelity(scene, theta, settings.fid_delta))
    if q is not None:
        rep.qfi_fid = q

    pair = purification_pair(scene, theta, theta + delta)
    rep.f_quantum = float(pair.d.sum())
    consistency = local_consistency(pair, settings.rtol)
    rep.residuals["gram_offdiag"] = consistency.gram_offdiag

    sld = attempt("cfi_opt", lambda: build_sld(scene, theta, settings.support_tol))
    if sld is not None:
        rep.residuals["sld_residual"] = sld.diagnostics["sld_residual"]
        rep.f_classical_opt = classical_fidelity(pair, sld.r)
        value = attempt("cfi_opt", lambda: cfi(rho, drho, sld.r))
        if value is not None:
            rep.cfi_opt = value

    if pair.a.shape[0] >= pair.a.shape[1]:
        qr = build_qr(pair)
        rep.residuals["qr_lower_residual"] = qr.diagnostics["lower_residual"]
        rep.f_classical_qr = classical_fidelity(pair, qr.r)
        value = attempt("cfi_qr", lambda: cfi(rho, drho, qr.r))
        if value is not None:
            rep.cfi_qr = value
    else:
        rep.errors["cfi_qr"] = "WideTransfer"

    shift = attempt("cfi_shift", lambda: build_finite_shift(scene, theta, delta, settings.rtol))
    if shift is not None:
        value = attempt("cfi_shift", lambda: cfi(rho, drho, shift.r))
        if value is not None:
            rep.cfi_shift = value
        rep.residuals["shift_fidelity_gap"] = classical_fidelity(pair, shift.r) - rep.f_quantum

    violations = rep.invariant_violations()
    if violations:
        rep.errors["invariant"] = "; ".join(violations)
    return rep


def scan(scene: Scene, thetas, settings: ReportSettings = ReportSettings(), workers: int = 1):
    """Reports for each theta, in input order.

    ``workers > 1`` evaluates grid points on a thread pool; every point is
    independent so the output does not depend on the worker count.
    """
    thetas = [float(t) for t in np.atleast_1d(thetas)]
    if workers <= 1:
        return [fisher_report(scene, t, settings) for t in thetas]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda t: fisher_report(scene, t, settings), thetas))
