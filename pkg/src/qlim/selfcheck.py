"""Seeded invariant corpus behind ``qlim selfcheck``.

Each check measures an error per instance and compares it against a fixed
tolerance.  Passing ``strict`` replaces every tolerance, which is how the
command's failure path is exercised.
"""

from dataclasses import dataclass

import numpy as np

from .corpus import scene_corpus
from .errors import SingularOutcome
from .fisher import (cfi, classical_fidelity, diagonal_fidelity, qfi_from_fidelity,
                     quantum_fidelity, row_fidelity, sld_solve)
from .interferometer import build_finite_shift, build_qr, build_sld, finite_shift_plan
from .matdecomp import eigh_fixed, pinv, qr_positive, svd_fixed
from .oracle import haar_unitary, uhlmann_fidelity
from .purify import purification_pair
from .scene import density, density_derivative, transfer_derivative, transfer_matrix

# Condition cap for corpora that exercise pseudoinverse identities at 1e-8.
COND_CAP = 100.0


@dataclass
class CheckResult:
    name: str
    passed: int
    total: int
    max_error: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def line(self) -> str:
        flag = "PASS" if self.ok else "FAIL"
        return (f"{flag}  {self.name:<28} {self.passed:>4}/{self.total:<4} "
                f"max_err={self.max_error:.3e} tol={self.tol:.1e}")


def _random_complex(rng, m, n):
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


def _decomp_residuals(seed, n):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        m, k = (int(v) for v in rng.integers(1, 7, size=2))
        a = _random_complex(rng, max(m, k), min(m, k))
        scale = np.linalg.norm(a)
        q, t = qr_positive(a)
        out.append(np.linalg.norm(a - q @ t) / scale)
        b = _random_complex(rng, m, k)
        out.append(np.linalg.norm(b - svd_fixed(b).reconstruct()) / np.linalg.norm(b))
        h = b @ b.conj().T
        w, lam = eigh_fixed(h)
        out.append(np.linalg.norm(h - (w * lam) @ w.conj().T) / np.linalg.norm(h))
    return out


def _phase_defects(seed, n):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        m = int(rng.integers(1, 7))
        b = _random_complex(rng, m, m)
        # v only inherits the phases of u, so its pivots are not constrained
        for w in (svd_fixed(b).u, eigh_fixed(b + b.conj().T)[0]):
            for k in range(w.shape[1]):
                mags = np.abs(w[:, k])
                piv = w[np.flatnonzero(mags >= mags.max() * (1 - 1e-12))[0], k]
                out.append(max(abs(piv.imag), max(0.0, -piv.real)))
    return out


def _pinv_involution(seed, n):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        m = int(rng.integers(1, 6))
        a = _random_complex(rng, m, m) + 3 * np.eye(m)
        out.append(np.linalg.norm(pinv(pinv(a)) - a))
    return out


def _state_checks(corpus):
    trace, traceless, fd = [], [], []
    for scene, theta in corpus:
        rho = density(scene, theta)
        drho = density_derivative(scene, theta)
        lam = np.linalg.eigvalsh(rho)
        trace.append(max(abs(np.trace(rho) - 1), np.linalg.norm(rho - rho.conj().T), -lam.min()))
        traceless.append(max(abs(np.trace(drho)), np.linalg.norm(drho - drho.conj().T)))
        h = 1e-6
        approx = (transfer_matrix(scene, theta + h).c - transfer_matrix(scene, theta - h).c) / (2 * h)
        fd.append(np.max(np.abs(approx - transfer_derivative(scene, theta))))
    return trace, traceless, fd


def _pair_checks(corpus):
    gauge, dens, nuclear, bounded = [], [], [], []
    for scene, theta in corpus:
        pair = purification_pair(scene, theta, theta + 1e-3)
        gauge.append(np.linalg.norm(pair.a.conj().T @ pair.b - np.diag(pair.d)))
        dens.append(max(np.linalg.norm(pair.a @ pair.a.conj().T - density(scene, theta)),
                        np.linalg.norm(pair.b @ pair.b.conj().T - density(scene, theta + 1e-3))))
        m = transfer_matrix(scene, theta).c.conj().T @ transfer_matrix(scene, theta + 1e-3).c
        nuclear.append(abs(pair.d.sum() - np.linalg.svd(m, compute_uv=False).sum()))
        bounded.append(max(0.0, pair.d.sum() - 1.0))
    return gauge, dens, nuclear, bounded


def _shift_checks(corpus):
    rb, herm, neg, forms, sat = [], [], [], [], []
    for scene, theta in corpus:
        pair = purification_pair(scene, theta, theta + 1e-5)
        plan = finite_shift_plan(pair)
        a_rot, b_rot = plan.r @ pair.a, plan.r @ pair.b
        rb.append(np.linalg.norm(b_rot - plan.lam[:, None] * a_rot))
        herm.append(plan.diagnostics["p_asymmetry"])
        neg.append(max(0.0, -plan.diagnostics["p_min_eig"]))
        forms.append(plan.diagnostics["p_forms_gap"])
        sat.append(abs(classical_fidelity(pair, plan.r) - pair.d.sum()))
    return rb, herm, neg, forms, sat


def _fisher_checks(corpus, seed):
    order, sld_res, bound, cross, opt, unitary = [], [], [], [], [], []
    for i, (scene, theta) in enumerate(corpus):
        rho = density(scene, theta)
        drho = density_derivative(scene, theta)
        r = haar_unitary(scene.n_collectors, seed + i)
        pair = purification_pair(scene, theta, theta + 1e-5)
        order.append(pair.d.sum() - classical_fidelity(pair, r))
        bundle = sld_solve(rho, drho)
        sld_res.append(bundle.residual() / max(1.0, np.linalg.norm(drho)))
        q = bundle.qfi
        try:
            bound.append(cfi(rho, drho, r) - q)
        except SingularOutcome:
            pass
        if q > 1e-3:
            cross.append(abs(qfi_from_fidelity(scene, theta, 1e-4) - q) / q)
        plan = build_sld(scene, theta)
        opt.append((q - cfi(rho, drho, plan.r)) / max(1.0, q))
        unitary.append(np.linalg.norm(plan.r.conj().T @ plan.r - np.eye(len(plan.r))))
        if scene.n_collectors >= scene.n_sources:
            qr = build_qr(pair)
            unitary.append(np.linalg.norm(qr.r.conj().T @ qr.r - np.eye(len(qr.r))))
    return order, sld_res, bound, cross, opt, unitary


def _oracle_checks(corpus, seed):
    cross, symm = [], []
    rng = np.random.default_rng(seed)
    for scene, theta in corpus:
        theta2 = theta + float(rng.uniform(-1.0, 1.0))
        rho, sigma = density(scene, theta), density(scene, theta2)
        u = uhlmann_fidelity(rho, sigma)
        cross.append(abs(u - quantum_fidelity(scene, theta, theta2)))
        symm.append(abs(u - uhlmann_fidelity(sigma, rho)))
    return cross, symm


def _triangular_rows(seed, n):
    rng = np.random.default_rng(seed)
    rows, eq = [], []
    for _ in range(n):
        m = int(rng.integers(1, 6))
        a = np.triu(_random_complex(rng, m, m))
        b = np.tril(_random_complex(rng, m, m))
        rows.append(max(0.0, float(np.max(np.abs(np.diagonal(a)) - np.linalg.norm(a, axis=1)))))
        eq.append(max(0.0, diagonal_fidelity(a, b) - row_fidelity(a, b)))
    return rows, eq


def _shift_vs_sld(corpus):
    final, mono = [], []
    for scene, theta in corpus:
        rho = density(scene, theta)
        drho = density_derivative(scene, theta)
        ref = cfi(rho, drho, build_sld(scene, theta).r)
        gaps = [abs(cfi(rho, drho, build_finite_shift(scene, theta, d).r) - ref)
                for d in (1e-3, 1e-4, 1e-5)]
        final.append(gaps[-1])
        mono.append(max(0.0, gaps[1] - gaps[0], gaps[2] - gaps[1]))
    return final, mono


def run_selfcheck(seed: int = 0, strict=None, count: int = 100) -> list:
    """Run every invariant family; return one :class:`CheckResult` per invariant."""
    any_corpus = scene_corpus(seed, count)
    well_posed = scene_corpus(seed + 1, count, shape="wide", max_cond=COND_CAP, spread=3.0)

    measured = []
    measured.append(("decomp_reconstruction", _decomp_residuals(seed, count), 1e-11))
    measured.append(("decomp_phase_convention", _phase_defects(seed, count), 1e-12))
    measured.append(("pinv_involution", _pinv_involution(seed, count), 1e-9))
    trace, traceless, fd = _state_checks(any_corpus)
    measured += [("density_trace_psd", trace, 1e-12), ("drho_traceless", traceless, 1e-10),
                 ("transfer_fd_derivative", fd, 1e-8)]
    gauge, dens, nuclear, bounded = _pair_checks(any_corpus)
    measured += [("purification_gauge", gauge, 1e-10), ("purification_densities", dens, 1e-11),
                 ("fidelity_nuclear_norm", nuclear, 1e-11), ("fidelity_at_most_one", bounded, 1e-10)]
    rb, herm, neg, forms, sat = _shift_checks(well_posed)
    measured += [("shift_rows_proportional", rb, 1e-7), ("shift_p_hermitian", herm, 1e-9),
                 ("shift_p_psd", neg, 1e-10), ("shift_p_two_forms", forms, 1e-8),
                 ("shift_fidelity_saturation", sat, 1e-8)]
    order, sld_res, bound, cross, opt, unitary = _fisher_checks(any_corpus, seed)
    measured += [("fidelity_ordering", order, 1e-10), ("sld_residual", sld_res, 1e-8),
                 ("cfi_below_qfi", bound, 1e-8), ("qfi_fidelity_route", cross, 1e-4),
                 ("sld_plan_saturation", opt, 1e-6), ("plans_unitary", unitary, 1e-10)]
    cross_u, symm = _oracle_checks(any_corpus, seed)
    measured += [("uhlmann_vs_overlap", cross_u, 1e-9), ("uhlmann_symmetric", symm, 1e-10)]
    rows, eq = _triangular_rows(seed, count)
    measured += [("triangular_row_bound", rows, 1e-12), ("row_vs_diagonal_fidelity", eq, 1e-12)]
    final, mono = _shift_vs_sld(well_posed[: max(1, count // 4)])
    measured += [("shift_to_sld_cfi", final, 1e-6), ("shift_to_sld_monotone", mono, 1e-12)]

    results = []
    for name, errors, tol in measured:
        errors = np.asarray(errors, dtype=float)
        limit = tol if strict is None else float(strict)
        passed = int(np.count_nonzero(errors <= limit))
        worst = float(errors.max()) if errors.size else 0.0
        results.append(CheckResult(name, passed, int(errors.size), worst, limit))
    return results
