"""Imaging configuration: point sources on a line, collectors, far-field kernel.

The transfer matrix has one row per collector and one column per source,

    c[v, j] = sqrt(w_j / V) * exp(i * scale * u_v * x_j(theta)),

so every entry is unimodular up to the weight factor and ``Tr(C C^H) = 1``
for every ``theta``.  The one-photon density matrix is ``rho = C C^H``.
"""

import enum
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import BadBinding, BadConfig

# Weight sums within this distance of 1 are renormalised, anything further is rejected.
_WEIGHT_RENORM_TOL = 1e-9
_TRACE_TOL = 1e-12


class Binding(enum.Enum):
    """How the scalar parameter theta moves the sources.

    SHIFT_LAST: the last source sits at ``x_last + theta``; the other sources
        are fixed reference points.  A single source has nothing to be
        separated from and stays put.
    SYMMETRIC: exactly two sources at ``x_0 - theta/2`` and ``x_1 + theta/2``.
    """

    SHIFT_LAST = "ShiftLastSource"
    SYMMETRIC = "SymmetricSeparation"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        aliases = {
            "shiftlastsource": cls.SHIFT_LAST,
            "shift_last": cls.SHIFT_LAST,
            "shift": cls.SHIFT_LAST,
            "symmetricseparation": cls.SYMMETRIC,
            "symmetric": cls.SYMMETRIC,
        }
        try:
            return aliases[str(value).strip().lower()]
        except KeyError:
            raise BadConfig(f"unknown binding {value!r}") from None


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Scene:
    source_positions: np.ndarray
    source_weights: np.ndarray
    collector_positions: np.ndarray
    scale: float = 1.0
    binding: Binding = Binding.SHIFT_LAST

    @property
    def n_sources(self) -> int:
        return self.source_positions.size

    @property
    def n_collectors(self) -> int:
        return self.collector_positions.size

    def displacement(self) -> np.ndarray:
        """d x_j / d theta for every source."""
        s = self.n_sources
        if self.binding is Binding.SYMMETRIC:
            if s != 2:
                raise BadBinding(f"SymmetricSeparation needs 2 sources, scene has {s}")
            return np.array([-0.5, 0.5])
        out = np.zeros(s)
        if s >= 2:
            out[-1] = 1.0
        return out

    def positions(self, theta: float) -> np.ndarray:
        return self.source_positions + theta * self.displacement()

    def to_config(self) -> dict:
        return {
            "sources": [
                {"x": float(x), "w": float(w)}
                for x, w in zip(self.source_positions, self.source_weights)
            ],
            "collectors": [float(u) for u in self.collector_positions],
            "scale": float(self.scale),
            "binding": self.binding.value,
        }


@dataclass(frozen=True)
class TransferMatrix:
    c: np.ndarray
    theta: float


def build_scene(config: Mapping) -> Scene:
    """Validate a scene description and return an immutable :class:`Scene`.

    Accepts either the file layout
    ``{"sources": [{"x": .., "w": ..}], "collectors": [..], "scale": .., "binding": ..}``
    or the flat layout ``{"x": [..], "w": [..], "u": [..], "scale": .., "binding": ..}``.
    Missing weights default to equal weights; missing scale defaults to 1 and
    binding to ``ShiftLastSource``.
    """
    if not isinstance(config, Mapping):
        raise BadConfig("scene config must be a mapping")
    if "sources" in config:
        try:
            xs = [src["x"] for src in config["sources"]]
            ws = [src.get("w") for src in config["sources"]]
        except (TypeError, KeyError) as exc:
            raise BadConfig(f"malformed sources entry: {exc}") from None
        if any(w is None for w in ws):
            if not all(w is None for w in ws):
                raise BadConfig("either every source has a weight or none does")
            ws = None
    else:
        xs = config.get("x")
        ws = config.get("w")
    us = config.get("collectors", config.get("u"))
    if xs is None or us is None:
        raise BadConfig("scene needs source positions and collector positions")

    try:
        x = np.asarray(xs, dtype=float).ravel()
        u = np.asarray(us, dtype=float).ravel()
        w = np.full(x.size, 1.0 / max(x.size, 1)) if ws is None else np.asarray(ws, dtype=float).ravel()
        scale = float(config.get("scale", 1.0))
    except (TypeError, ValueError) as exc:
        raise BadConfig(f"non-numeric scene field: {exc}") from None

    if x.size == 0 or u.size == 0:
        raise BadConfig("scene needs at least one source and one collector")
    if w.size != x.size:
        raise BadConfig(f"{w.size} weights for {x.size} sources")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(u)) and np.all(np.isfinite(w))):
        raise BadConfig("scene fields must be finite")
    if not np.isfinite(scale) or scale <= 0:
        raise BadConfig(f"scale must be positive, got {scale}")
    if np.any(w < 0):
        raise BadConfig("source weights must be nonnegative")
    total = w.sum()
    if abs(total - 1.0) > _WEIGHT_RENORM_TOL:
        raise BadConfig(f"source weights sum to {total}, not 1")
    w = w / total

    binding = Binding.parse(config.get("binding", Binding.SHIFT_LAST))
    if binding is Binding.SYMMETRIC and x.size != 2:
        raise BadBinding(f"SymmetricSeparation needs 2 sources, got {x.size}")
    return Scene(_frozen(x), _frozen(w), _frozen(u), scale, binding)


def load_scene(path) -> Scene:
    try:
        config = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise BadConfig(f"{path}: invalid JSON ({exc})") from None
    return build_scene(config)


def asymmetric_scene(weights=(0.5, 0.5), scale: float = 1.0) -> Scene:
    """Two sources at 0 and theta, collectors at u = 0 and u = 1."""
    return build_scene({"x": [0.0, 0.0], "w": list(weights), "u": [0.0, 1.0],
                        "scale": scale, "binding": Binding.SHIFT_LAST})


def symmetric_scene(scale: float = 1.0) -> Scene:
    """Inversion-symmetric pair: sources at -theta/2, +theta/2, collectors at -1/2, +1/2."""
    return build_scene({"x": [0.0, 0.0], "w": [0.5, 0.5], "u": [-0.5, 0.5],
                        "scale": scale, "binding": Binding.SYMMETRIC})


def transfer_matrix(scene: Scene, theta: float) -> TransferMatrix:
    x = scene.positions(theta)
    amp = np.sqrt(scene.source_weights / scene.n_collectors)
    phase = scene.scale * np.outer(scene.collector_positions, x)
    return TransferMatrix(amp * np.exp(1j * phase), float(theta))


def transfer_derivative(scene: Scene, theta: float) -> np.ndarray:
    """Analytic d C / d theta."""
    c = transfer_matrix(scene, theta).c
    factor = 1j * scene.scale * np.outer(scene.collector_positions, scene.displacement())
    return factor * c


def density(scene: Scene, theta: float) -> np.ndarray:
    c = transfer_matrix(scene, theta).c
    rho = c @ c.conj().T
    tr = np.trace(rho).real
    assert abs(tr - 1.0) <= _TRACE_TOL, f"trace(rho) = {tr!r}"
    return rho


def density_derivative(scene: Scene, theta: float) -> np.ndarray:
    c = transfer_matrix(scene, theta).c
    dc = transfer_derivative(scene, theta)
    prod = dc @ c.conj().T
    return prod + prod.conj().T
