"""Seeded random scenes for property checks."""

import numpy as np

from .scene import Binding, Scene, build_scene, transfer_matrix


def random_scene(rng, max_sources: int = 5, max_collectors: int = 5,
                 n_sources=None, n_collectors=None, spread: float = 1.0) -> Scene:
    """Random scene: sources in [-spread, spread], collectors in [-1, 1],
    Dirichlet(2) weights and scale in [0.5, 3].

    Two-source scenes use the symmetric binding half of the time.
    """
    s = int(rng.integers(1, max_sources + 1)) if n_sources is None else n_sources
    v = int(rng.integers(1, max_collectors + 1)) if n_collectors is None else n_collectors
    x = rng.uniform(-spread, spread, s)
    w = rng.dirichlet(np.full(s, 2.0))
    u = rng.uniform(-1.0, 1.0, v)
    scale = rng.uniform(0.5, 3.0)
    binding = Binding.SYMMETRIC if s == 2 and rng.random() < 0.5 else Binding.SHIFT_LAST
    return build_scene({"x": x, "w": w, "u": u, "scale": scale, "binding": binding})


def condition_number(scene: Scene, theta: float) -> float:
    s = np.linalg.svd(transfer_matrix(scene, theta).c, compute_uv=False)
    return float(s[0] / s[-1]) if s[-1] > 0 else float("inf")


def scene_corpus(seed: int, count: int, shape=None, theta_range=(0.1, 3.0),
                 max_cond=None, spread: float = 1.0):
    """``count`` random ``(scene, theta)`` instances.

    ``max_cond`` rejects instances whose transfer matrix has a larger
    condition number.  Pseudoinverse-based identities lose about
    ``eps * cond**2`` of absolute accuracy, so checks at 1e-8 need a cap.
    ``spread`` scales the source position range.

    ``shape`` restricts the source/collector counts:
      ``"tall"`` -- collectors >= sources (QR construction applies),
      ``"wide"`` -- sources >= collectors (shared column space is generic),
      ``"square"`` -- equal counts, both of the above.
    """
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        a, b = (int(k) for k in rng.integers(1, 6, size=2))
        if shape == "tall":
            s, v = min(a, b), max(a, b)
        elif shape == "wide":
            s, v = max(a, b), min(a, b)
        elif shape == "square":
            s = v = a
        else:
            s, v = a, b
        scene = random_scene(rng, n_sources=s, n_collectors=v, spread=spread)
        theta = float(rng.uniform(*theta_range))
        if max_cond is not None and condition_number(scene, theta) > max_cond:
            continue
        out.append((scene, theta))
    return out
