import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qlim.errors import BadBinding, BadConfig
from qlim.scene import (Binding, build_scene, density, density_derivative, load_scene,
                        transfer_derivative, transfer_matrix)
from qlim.corpus import random_scene


def kernel(x, u, w, scale):
    """Direct entry-by-entry evaluation of the far-field kernel."""
    c = np.empty((len(u), len(x)), dtype=complex)
    for v in range(len(u)):
        for j in range(len(x)):
            c[v, j] = np.sqrt(w[j] / len(u)) * np.exp(1j * scale * u[v] * x[j])
    return c


class TestBuildScene:
    def test_one_source(self, one_source):
        assert one_source.n_sources == 1 and one_source.n_collectors == 2

    def test_two_source_config(self):
        scene = build_scene({"x": [0, 0], "w": [0.5, 0.5], "u": [0, 1], "scale": 1,
                             "binding": "ShiftLastSource"})
        np.testing.assert_array_equal(scene.positions(0.0), [0, 0])
        assert scene.binding is Binding.SHIFT_LAST

    def test_file_layout(self, tmp_path):
        path = tmp_path / "scene.json"
        path.write_text('{"sources": [{"x": 0, "w": 0.25}, {"x": 1, "w": 0.75}],'
                        ' "collectors": [0, 1, 2], "scale": 2.0, "binding": "SymmetricSeparation"}')
        scene = load_scene(path)
        np.testing.assert_array_equal(scene.source_weights, [0.25, 0.75])
        assert scene.scale == 2.0 and scene.binding is Binding.SYMMETRIC
        assert build_scene(scene.to_config()).to_config() == scene.to_config()

    def test_default_weights_equal(self):
        scene = build_scene({"x": [0, 1, 2], "u": [0]})
        np.testing.assert_allclose(scene.source_weights, [1 / 3] * 3)

    @pytest.mark.parametrize("config", [
        {"x": [0, 0], "w": [0.7, 0.7], "u": [0, 1]},
        {"x": [0, 0], "w": [1.5, -0.5], "u": [0, 1]},
        {"x": [], "w": [], "u": [0, 1]},
        {"x": [0], "w": [1], "u": []},
        {"x": [0], "w": [1], "u": [0], "scale": 0.0},
        {"x": [np.nan], "w": [1], "u": [0]},
        {"x": [0], "w": [1], "u": [0], "binding": "Sideways"},
    ])
    def test_bad_config(self, config):
        with pytest.raises(BadConfig):
            build_scene(config)

    def test_small_weight_drift_renormalised(self):
        scene = build_scene({"x": [0, 1], "w": [0.5, 0.5 + 5e-10], "u": [0]})
        assert abs(scene.source_weights.sum() - 1) <= 1e-15

    def test_symmetric_needs_two_sources(self):
        with pytest.raises(BadBinding):
            build_scene({"x": [0, 1, 2], "u": [0], "binding": "SymmetricSeparation"})

    def test_immutable(self, asym):
        with pytest.raises(ValueError):
            asym.source_positions[0] = 3.0


class TestTransferMatrix:
    def test_asym_at_pi(self, asym):
        c = transfer_matrix(asym, np.pi).c
        ref = kernel([0.0, np.pi], [0.0, 1.0], [0.5, 0.5], 1.0)
        np.testing.assert_allclose(c, ref, atol=1e-15)
        np.testing.assert_allclose(c, 0.5 * np.array([[1, 1], [1, -1]]), atol=1e-15)

    def test_coincident_sources(self, asym):
        c = transfer_matrix(asym, 0.0).c
        np.testing.assert_allclose(c, 0.5 * np.ones((2, 2)))
        assert np.linalg.matrix_rank(c) == 1

    def test_scale_enters_phase(self):
        scene = build_scene({"x": [0, 0], "u": [0, 1], "scale": 2.0})
        np.testing.assert_allclose(transfer_matrix(scene, np.pi / 2).c,
                                   0.5 * np.array([[1, 1], [1, -1]]), atol=1e-15)

    def test_one_source_moduli(self, one_source):
        for theta in (0.0, 0.7, 3.0):
            c = transfer_matrix(one_source, theta).c
            np.testing.assert_allclose(np.abs(c) ** 2, 0.5)

    def test_symmetric_positions(self, sym):
        np.testing.assert_allclose(sym.positions(2.0), [-1.0, 1.0])

    def test_periodicity(self, asym):
        theta = 0.83
        np.testing.assert_allclose(transfer_matrix(asym, theta).c,
                                   transfer_matrix(asym, theta + 2 * np.pi).c, atol=1e-14)


class TestDerivative:
    def test_asym_at_pi(self, asym):
        # hand evaluation: i * u_v * c[v, 1] on the moving column only
        np.testing.assert_allclose(transfer_derivative(asym, np.pi),
                                   np.array([[0, 0], [0, -0.5j]]), atol=1e-15)

    def test_zero_aperture(self):
        scene = build_scene({"x": [0, 0], "u": [0, 0]})
        assert np.all(transfer_derivative(scene, 1.3) == 0)

    @pytest.mark.parametrize("h", [1e-5, 1e-6])
    def test_central_difference(self, asym, sym, h):
        for scene in (asym, sym):
            for theta in (0.3, 2.0, 5.1):
                fd = (transfer_matrix(scene, theta + h).c - transfer_matrix(scene, theta - h).c) / (2 * h)
                assert np.max(np.abs(fd - transfer_derivative(scene, theta))) <= 1e-8


class TestDensity:
    def test_asym_at_pi(self, asym):
        np.testing.assert_allclose(density(asym, np.pi), np.eye(2) / 2, atol=1e-15)

    def test_asym_derivative_at_pi(self, asym):
        np.testing.assert_allclose(density_derivative(asym, np.pi),
                                   np.array([[0, 0.25j], [-0.25j, 0]]), atol=1e-15)

    def test_derivative_traceless(self, asym, one_source):
        for theta in (0.1, 1.0, 4.0):
            assert abs(np.trace(density_derivative(asym, theta))) <= 1e-15
        assert np.all(density_derivative(one_source, 1.0) == 0)


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), theta=st.floats(-6.0, 6.0))
def test_state_invariants(seed, theta):
    scene = random_scene(np.random.default_rng(seed))
    rho = density(scene, theta)
    drho = density_derivative(scene, theta)
    assert abs(np.trace(rho) - 1) <= 1e-12
    assert np.linalg.norm(rho - rho.conj().T) <= 1e-12
    assert np.linalg.eigvalsh(rho).min() >= -1e-12
    assert abs(np.trace(drho)) <= 1e-10
    assert np.linalg.norm(drho - drho.conj().T) <= 1e-10
    h = 1e-6
    fd = (density(scene, theta + h) - density(scene, theta - h)) / (2 * h)
    assert np.max(np.abs(fd - drho)) <= 1e-8
