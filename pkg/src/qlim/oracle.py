"""Brute-force baselines used to audit the interferometer constructions.

Random measurements are drawn from the Haar measure on U(n) with numpy's
PCG64 generator (``numpy.random.default_rng``), so a seed reproduces the
same unitaries on every platform numpy supports.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotPSD, SingularOutcome
from .fisher import cfi, cfi_batch
from .interferometer import build_finite_shift, build_qr, build_sld
from .matdecomp import qr_positive, sqrtm_psd, svd_fixed
from .purify import purification_pair
from .scene import Scene, density, density_derivative

GENERATOR = "numpy.random.PCG64"


@dataclass(frozen=True)
class SearchResult:
    best_cfi: float
    best_r: np.ndarray
    samples: int
    seed: int
    best_random_cfi: float
    source: str
    generator: str = GENERATOR
    skipped: int = 0


def _ginibre(rng, shape):
    z = rng.standard_normal((2,) + tuple(shape))
    return (z[0] + 1j * z[1]) / np.sqrt(2.0)


def haar_unitary(n: int, seed: int) -> np.ndarray:
    """Haar-random ``n x n`` unitary: QR of a complex Ginibre matrix with the
    diagonal of R made positive."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    q, _ = qr_positive(_ginibre(rng, (n, n)))
    return q


def haar_batch(n: int, count: int, rng) -> np.ndarray:
    z = _ginibre(rng, (count, n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    return q * (d / np.abs(d))[:, None, :]


def random_search_cfi(scene: Scene, theta: float, n_samples: int, seed: int,
                      delta: float = 1e-5) -> SearchResult:
    """Best photon-counting CFI over Haar-random interferometers and the constructed plans.

    Random samples whose outcome distribution has a singular outcome are
    skipped and counted in ``skipped``.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rho = density(scene, theta)
    drho = density_derivative(scene, theta)
    n = rho.shape[0]
    rs = haar_batch(n, n_samples, np.random.default_rng(seed))
    values = cfi_batch(rho, drho, rs)
    finite = np.isfinite(values)
    skipped = int(np.count_nonzero(~finite))
    values = np.where(finite, values, -np.inf)
    k = int(np.argmax(values))
    best_random = float(values[k])
    best, best_r, source = best_random, rs[k], "haar"

    candidates = [("sld", lambda: build_sld(scene, theta).r)]
    if scene.n_collectors >= scene.n_sources:
        candidates.append(("qr", lambda: build_qr(purification_pair(scene, theta, theta + delta)).r))
    candidates.append(("finite_shift", lambda: build_finite_shift(scene, theta, delta).r))
    for name, make in candidates:
        try:
            r = make()
            value = cfi(rho, drho, r)
        except (SingularOutcome, ValueError):
            continue
        if value > best:
            best, best_r, source = value, r, name
    return SearchResult(best, best_r, n_samples, seed, best_random, source, skipped=skipped)


def uhlmann_fidelity(rho, sigma) -> float:
    """Root fidelity ``Tr|sqrt(rho) sqrt(sigma)|`` via matrix square roots."""
    for name, m in (("rho", rho), ("sigma", sigma)):
        tr = np.trace(np.asarray(m)).real
        if tr > 1.0 + 1e-10:
            raise NotPSD(f"{name} has trace {tr} > 1")
    product = sqrtm_psd(rho) @ sqrtm_psd(sigma)
    return float(svd_fixed(product).sigma.sum())
