"""Independent finite-difference ground truth for the metric.

Two oracles: central differences of the state fed through the projector
formula, and a fidelity-based quadratic form that never sees phases at all.
Both know nothing about tilde operators or structure constants.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, PointMismatch, StepOutOfRange
from .manifold import CircuitSpec, MetricTensor, evolve, metric_from_derivatives

STEP_MIN = 1e-6
STEP_MAX = 1e-2
DEFAULT_STEP = 1e-4


def _check_step(h: float) -> float:
    h = float(h)
    if not (STEP_MIN <= h <= STEP_MAX):
        raise StepOutOfRange(f"step {h:g} outside [{STEP_MIN:g}, {STEP_MAX:g}]")
    return h


def _shifted(point, direction, h):
    out = dict(point)
    for name, comp in direction.items():
        out[name] = out[name] + h * comp
    return out


def fd_metric(circuit: CircuitSpec, point, psi_i, gamma: float = 1.0,
              h: float = DEFAULT_STEP) -> MetricTensor:
    """Metric from O(h^2) central differences of the evolved state."""
    h = _check_step(h)
    point = {p: float(point[p]) for p in circuit.parameter_names}
    psi = evolve(circuit, point, psi_i)
    derivs = []
    for name in circuit.parameter_names:
        plus = evolve(circuit, _shifted(point, {name: 1.0}, h), psi_i)
        minus = evolve(circuit, _shifted(point, {name: 1.0}, -h), psi_i)
        derivs.append((plus - minus) / (2 * h))
    return metric_from_derivatives(psi, derivs, gamma, point, circuit.parameter_names)


def fidelity_metric(circuit: CircuitSpec, point, psi_i, gamma: float = 1.0,
                    h: float = DEFAULT_STEP) -> MetricTensor:
    """Metric from state overlaps only; exactly phase-insensitive.

    Quadratic form along a direction v:
        q(v) = gamma^2 (1 - |<psi(x - h v)|psi(x + h v)>|^2) / (4 h^2),
    symmetric about the point so the error is O(h^2).  Off-diagonals via the
    polarization identity q(e_m + e_n) - q(e_m) - q(e_n) over 2.
    """
    h = _check_step(h)
    point = {p: float(point[p]) for p in circuit.parameter_names}
    names = circuit.parameter_names
    m = len(names)

    def q(direction):
        plus = evolve(circuit, _shifted(point, direction, h), psi_i)
        minus = evolve(circuit, _shifted(point, direction, -h), psi_i)
        return gamma**2 * (1.0 - abs(np.vdot(minus, plus)) ** 2) / (4 * h * h)

    g = np.zeros((m, m))
    diag = [q({names[k]: 1.0}) for k in range(m)]
    for k in range(m):
        g[k, k] = diag[k]
    for i in range(m):
        for j in range(i + 1, m):
            mixed = q({names[i]: 1.0, names[j]: 1.0})
            g[i, j] = g[j, i] = (mixed - diag[i] - diag[j]) / 2
    return MetricTensor(g, gamma, point, names)


@dataclass(frozen=True)
class ComparisonReport:
    max_abs_diff: float
    worst_component: tuple
    diffs: np.ndarray
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_abs_diff <= self.tolerance


def compare(g_a: MetricTensor, g_b: MetricTensor, tol: float) -> ComparisonReport:
    """Componentwise comparison of two metrics at the same point."""
    if g_a.parameter_names != g_b.parameter_names or g_a.dim != g_b.dim:
        raise DimensionMismatch("metrics index different parameter sets")
    for p in g_a.parameter_names:
        if abs(g_a.point.get(p, 0.0) - g_b.point.get(p, 0.0)) > 1e-12:
            raise PointMismatch(f"metrics were evaluated at different {p!r}")
    diffs = np.abs(g_a.g - g_b.g)
    idx = np.unravel_index(np.argmax(diffs), diffs.shape)
    return ComparisonReport(float(diffs[idx]), (int(idx[0]), int(idx[1])),
                            diffs, float(tol))
