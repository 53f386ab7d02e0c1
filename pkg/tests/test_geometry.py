import numpy as np
import pytest

from statemetric import geometry
from statemetric.errors import (
    DegenerateSection,
    EmptyGrid,
    InsufficientGrid,
    MissingParameter,
)
from statemetric.geometry import (
    GridSpec,
    classify,
    gauss_curvature,
    gauss_curvature_from_fn,
    metric_at,
    metric_field,
    rank_analysis,
    scalar_curvature,
)
from statemetric.manifold import MetricTensor
from statemetric.models import (
    OscillatorModelSpec,
    SpinModelSpec,
    TwoSpinModelSpec,
    oscillator_model,
    spin_model,
    two_spin_model,
)


@pytest.fixture(scope="module")
def spin1():
    return spin_model(SpinModelSpec(s=1, m=0))


@pytest.fixture(scope="module")
def osc():
    return oscillator_model(OscillatorModelSpec())


class TestGridSpec:
    def test_points_row_major(self):
        grid = GridSpec({"a": (0.0, 1.0, 2), "b": (0.0, 2.0, 3)}, fixed={"c": 7.0})
        pts = list(grid.points())
        assert len(pts) == 6
        # last sweep varies fastest
        assert [p["b"] for p in pts[:3]] == [0.0, 1.0, 2.0]
        assert [p["a"] for p in pts[:3]] == [0.0, 0.0, 0.0]
        assert pts[3]["a"] == 1.0
        assert all(p["c"] == 7.0 for p in pts)

    def test_empty_grid(self):
        with pytest.raises(EmptyGrid):
            GridSpec({})
        with pytest.raises(EmptyGrid):
            GridSpec({"a": (0.0, 1.0, 0)})
        with pytest.raises(EmptyGrid):
            GridSpec({"a": (0.0, np.inf, 3)})


class TestMetricField:
    def test_node_count_and_order(self, spin1):
        grid = GridSpec({"theta_2": (0.5, 1.5, 3)},
                        fixed={"theta_1": 0.1, "theta_3": 0.2})
        field = metric_field(spin1, grid)
        assert len(field.tensors) == 3
        assert [t.point["theta_2"] for t in field.tensors] == [0.5, 1.0, 1.5]

    def test_matches_pointwise_metric(self, spin1):
        grid = GridSpec({"theta_2": (0.4, 1.2, 3)},
                        fixed={"theta_1": 0.0, "theta_3": 0.3})
        field = metric_field(spin1, grid)
        for t in field.tensors:
            assert np.max(np.abs(t.g - metric_at(spin1, t.point).g)) <= 1e-14

    def test_missing_parameter(self, spin1):
        with pytest.raises(MissingParameter):
            metric_field(spin1, GridSpec({"theta_2": (0.0, 1.0, 3)}))

    def test_thread_count_env(self, monkeypatch, spin1):
        monkeypatch.setenv("STATEMETRIC_THREADS", "1")
        grid = GridSpec({"theta_2": (0.4, 1.2, 3)},
                        fixed={"theta_1": 0.0, "theta_3": 0.0})
        serial = metric_field(spin1, grid)
        monkeypatch.setenv("STATEMETRIC_THREADS", "4")
        threaded = metric_field(spin1, grid)
        for a, b in zip(serial.tensors, threaded.tensors):
            assert np.array_equal(a.g, b.g)


class TestRankAnalysis:
    def test_full_rank(self):
        m = MetricTensor(np.diag([2.0, 1.0, 0.5]), 1.0, {}, ("a", "b", "c"))
        rank, null = rank_analysis(m)
        assert rank == 3 and null.shape[1] == 0

    def test_eigenstate_sphere_rank_two(self, spin1):
        m = metric_at(spin1, {"theta_1": 0.3, "theta_2": 1.1, "theta_3": -0.7})
        rank, null = rank_analysis(m)
        assert rank == 2
        # the null direction is the pure-phase theta_3 axis
        assert np.allclose(np.abs(null.ravel()), [0, 0, 1], atol=1e-8)

    def test_zero_metric(self):
        m = MetricTensor(np.zeros((2, 2)), 1.0, {}, ("a", "b"))
        rank, null = rank_analysis(m)
        assert rank == 0 and null.shape[1] == 2


class TestBrioschi:
    """Check the stencil against 2-surfaces with known curvature, supplied as
    plain metric functions with no quantum model behind them."""

    def test_round_sphere(self):
        R = 2.0
        def fn(u, v):
            return np.array([[R**2 * np.sin(v) ** 2, 0.0], [0.0, R**2]])
        K = gauss_curvature_from_fn(fn, 0.4, 1.1)
        assert K == pytest.approx(1.0 / R**2, abs=1e-4)

    def test_flat_polar_coordinates(self):
        def fn(u, v):
            return np.array([[1.0, 0.0], [0.0, u**2]])
        assert abs(gauss_curvature_from_fn(fn, 1.3, 0.2)) <= 1e-9

    def test_hyperbolic_plane(self):
        def fn(u, v):
            return np.array([[1.0, 0.0], [0.0, np.exp(2 * u)]])
        assert gauss_curvature_from_fn(fn, 0.1, 0.5) == pytest.approx(-1.0, abs=1e-5)

    def test_off_diagonal_terms_exercised(self):
        # E = 1 + v^2, F = v, G = 1 has constant curvature -1 (Brioschi's
        # bottom determinant is nonzero here, unlike the diagonal cases)
        def fn(u, v):
            return np.array([[1.0 + v**2, v], [v, 1.0]])
        assert gauss_curvature_from_fn(fn, 0.3, 0.7) == pytest.approx(-1.0, abs=1e-5)

    def test_degenerate_section(self):
        def fn(u, v):
            return np.zeros((2, 2))
        with pytest.raises(DegenerateSection):
            gauss_curvature_from_fn(fn, 0.0, 0.0)


class TestGaussCurvature:
    def test_spin_sphere(self, spin1):
        # R = (1/sqrt2) sqrt(s(s+1) - m^2) = 1 for s=1, m=0, so K = 1
        K = gauss_curvature(spin1, {"theta_1": 0.2, "theta_2": 1.0, "theta_3": 0.5},
                            ("theta_1", "theta_2"))
        assert K == pytest.approx(1.0, abs=1e-4)

    def test_oscillator_flat(self, osc):
        K = gauss_curvature(osc, {"theta": 0.1, "phi": -0.2}, ("theta", "phi"))
        assert abs(K) <= 1e-8

    def test_bad_section(self, spin1):
        pt = {"theta_1": 0.1, "theta_2": 1.0, "theta_3": 0.0}
        with pytest.raises(DegenerateSection):
            gauss_curvature(spin1, pt, ("theta_1", "theta_1"))


def test_scalar_curvature_full_rank_spin1():
    # a generic spin-1 superposition gives a rank-3 metric; the scalar
    # curvature of the sampled 3-manifold stays finite and O(1)
    model = spin_model(SpinModelSpec(s=1, coefficients=(0.6, 0.0, 0.8)))
    R = scalar_curvature(model, {"theta_1": 0.4, "theta_2": 1.1, "theta_3": 0.7})
    assert np.isfinite(R)
    assert abs(R) < 50.0


class TestClassify:
    def grid3(self, fixed=None):
        return GridSpec({"theta_1": (0.2, 1.0, 3), "theta_2": (0.6, 1.4, 3)},
                        fixed=fixed or {"theta_3": 0.1})

    def test_sphere(self, spin1):
        report = classify(metric_field(spin1, self.grid3()))
        assert report.classification == "sphere"
        assert report.rank == 2
        assert report.radius == pytest.approx(1.0, abs=1e-6)
        assert report.label().startswith("sphere(R=")

    def test_sphere_radius_tracks_spin(self):
        model = spin_model(SpinModelSpec(s=1.5, m=0.5))
        report = classify(metric_field(model, self.grid3()))
        expected = np.sqrt((1.5 * 2.5 - 0.25) / 2)
        assert report.classification == "sphere"
        assert report.radius == pytest.approx(expected, abs=1e-6)

    def test_flat(self, osc):
        grid = GridSpec({"theta": (-0.5, 0.5, 3), "phi": (-0.5, 0.5, 3)})
        report = classify(metric_field(osc, grid))
        assert report.classification == "flat"
        assert report.rank == 2
        assert report.label() == "flat"

    def test_two_spin_sphere(self):
        model = two_spin_model(TwoSpinModelSpec(variant="dm_xx", initial="up_down"))
        report = classify(metric_field(model, self.grid3()))
        assert report.classification == "sphere"
        assert report.radius == pytest.approx(0.5, abs=1e-6)

    def test_rank_one_phase_line_is_flat(self, spin1):
        # at theta_2 = 0 the theta_1/theta_3 rotations only move phases; the
        # single surviving direction has constant length, so the manifold
        # collapses to a flat line
        grid = GridSpec({"theta_1": (0.1, 0.9, 3), "theta_3": (0.1, 0.9, 3)},
                        fixed={"theta_2": 0.0})
        report = classify(metric_field(spin1, grid))
        assert report.classification == "flat"
        assert report.rank == 1

    def test_rank_zero_is_degenerate(self, spin1):
        # a one-factor circuit whose generator annihilates the state: the
        # metric is identically zero
        from statemetric.manifold import CircuitSpec
        from statemetric.models import Model
        null = Model(name="null", rep=spin1.rep,
                     circuit=CircuitSpec(spin1.rep, (("Sz", "t"),)),
                     initial_state=spin1.initial_state)
        report = classify(metric_field(null, GridSpec({"t": (0.0, 1.0, 3)})))
        assert report.classification == "degenerate"
        assert report.rank == 0
        assert report.label() == "degenerate(rank=0)"

    def test_generic_superposition(self):
        # a spin-2 state spread over all five levels: full-rank metric whose
        # section curvature is not constant
        coeffs = (0.3, 0.4, 0.5, 0.6, np.sqrt(1 - 0.86))
        model = spin_model(SpinModelSpec(s=2, coefficients=coeffs))
        report = classify(metric_field(model, self.grid3()))
        assert report.classification == "generic"
        assert report.rank == 3

    def test_insufficient_grid(self, spin1):
        grid = GridSpec({"theta_1": (0.0, 1.0, 2), "theta_2": (0.5, 1.0, 3)},
                        fixed={"theta_3": 0.0})
        with pytest.raises(InsufficientGrid):
            classify(metric_field(spin1, grid))
