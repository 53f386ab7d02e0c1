"""Circuit unitaries, state evolution and the analytic Fubini-Study metric.

Two independent closed-form routes are provided: one from exact state
derivatives of the ordered exponential product, one from covariances of the
conjugated circuit generators.  They must agree to roundoff.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import liealg, linalg
from .errors import DimensionMismatch, MissingParameter
from .liealg import LieAlgebraRep


@dataclass(frozen=True)
class CircuitSpec:
    """Ordered factorization U = prod_j exp(-i theta_j A_j).

    factors is a sequence of (generator name, parameter name) pairs; each
    parameter drives exactly one factor.
    """

    algebra: LieAlgebraRep
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple((g, p) for g, p in self.factors))
        seen = set()
        for gname, pname in self.factors:
            self.algebra.index(gname)  # raises UnknownGenerator
            if pname in seen:
                raise ValueError(f"parameter {pname!r} drives more than one factor")
            seen.add(pname)

    @property
    def parameter_names(self) -> tuple:
        return tuple(p for _g, p in self.factors)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def angles(self, point) -> np.ndarray:
        """Parameter values in factor order; raises MissingParameter."""
        try:
            vals = [float(point[p]) for p in self.parameter_names]
        except KeyError as exc:
            raise MissingParameter(f"no value for parameter {exc.args[0]!r}") from None
        if not all(np.isfinite(vals)):
            raise ValueError("parameter values must be finite")
        return np.asarray(vals)

    def factor_unitaries(self, point):
        """exp(-i theta_j A_j) for each factor, using cached eigendecompositions."""
        angles = self.angles(point)
        out = []
        for (gname, _), t in zip(self.factors, angles):
            w, V = self.algebra.generator_eig(gname)
            out.append(linalg.expm_phase_eig(w, V, t))
        return out


@dataclass(frozen=True)
class MetricTensor:
    """Symmetric real metric at one parameter point."""

    g: np.ndarray
    gamma: float
    point: dict
    parameter_names: tuple

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    def __post_init__(self):
        g = np.asarray(self.g, dtype=float)
        object.__setattr__(self, "g", (g + g.T) / 2)
        object.__setattr__(self, "point", dict(self.point))
        object.__setattr__(self, "parameter_names", tuple(self.parameter_names))


def build_unitary(circuit: CircuitSpec, point) -> np.ndarray:
    """Ordered left-to-right product of the factor exponentials."""
    U = np.eye(circuit.dim, dtype=complex)
    for F in circuit.factor_unitaries(point):
        U = U @ F
    return U


def evolve(circuit: CircuitSpec, point, psi_i) -> np.ndarray:
    psi_i = np.asarray(psi_i, dtype=complex).ravel()
    if psi_i.shape[0] != circuit.dim:
        raise DimensionMismatch(
            f"state dim {psi_i.shape[0]} does not match circuit dim {circuit.dim}"
        )
    return build_unitary(circuit, point) @ psi_i


def state_derivatives(circuit: CircuitSpec, point, psi_i):
    """Exact partial derivatives of the evolved state, one per parameter.

    d/d(theta_j) U = (F_1 .. F_{j-1}) (-i A_j) (F_j .. F_M), so each
    derivative is a prefix product applied to -i A_j times a suffix state.
    The returned vectors are tangent vectors, not normalized states.
    """
    psi_i = np.asarray(psi_i, dtype=complex).ravel()
    if psi_i.shape[0] != circuit.dim:
        raise DimensionMismatch(
            f"state dim {psi_i.shape[0]} does not match circuit dim {circuit.dim}"
        )
    factors = circuit.factor_unitaries(point)
    m = len(factors)
    # suffix[j] = F_j .. F_{m-1} |psi_i>
    suffix = [None] * (m + 1)
    suffix[m] = psi_i
    for j in range(m - 1, -1, -1):
        suffix[j] = factors[j] @ suffix[j + 1]
    derivs = []
    prefix = np.eye(circuit.dim, dtype=complex)
    for j, (gname, _) in enumerate(circuit.factors):
        A = circuit.algebra.generator(gname)
        derivs.append(prefix @ (-1j * A @ suffix[j]))
        prefix = prefix @ factors[j]
    return derivs


def metric_from_derivatives(psi, derivs, gamma: float = 1.0,
                            point=None, parameter_names=None) -> MetricTensor:
    """g_mn = gamma^2 Re(<psi_m|psi_n> - <psi_m|psi><psi|psi_n>).

    Gauge-invariant: a global phase on psi (with derivatives adjusted
    accordingly) leaves the result unchanged.
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    D = np.stack([np.asarray(d, dtype=complex).ravel() for d in derivs], axis=1)
    if D.shape[0] != psi.shape[0]:
        raise DimensionMismatch("derivative vectors do not match the state dimension")
    overlaps = D.conj().T @ D
    proj = D.conj().T @ psi
    g = gamma**2 * (overlaps - np.outer(proj, proj.conj())).real
    m = D.shape[1]
    if parameter_names is None:
        parameter_names = tuple(f"p{k + 1}" for k in range(m))
    return MetricTensor(g, gamma, dict(point or {}), parameter_names)


def metric_from_tilde(rep: LieAlgebraRep, circuit: CircuitSpec, point, psi_i,
                      gamma: float = 1.0) -> MetricTensor:
    """g_ij = (gamma^2/2) <{Delta A~_i, Delta A~_j}> in the initial state.

    A~_j are the conjugated circuit generators and Delta subtracts the
    expectation value.  Equals metric_from_derivatives to roundoff.
    """
    vectors = local_basis_vectors(rep, circuit, point, psi_i, gamma)
    W = np.stack(vectors, axis=1)
    g = (W.conj().T @ W).real
    return MetricTensor(g, gamma, dict(point), circuit.parameter_names)


def local_basis_vectors(rep: LieAlgebraRep, circuit: CircuitSpec, point, psi_i,
                        gamma: float = 1.0):
    """gamma * Delta A~_j |psi_i> per parameter; their real Gram matrix is the metric."""
    psi_i = np.asarray(psi_i, dtype=complex).ravel()
    if psi_i.shape[0] != rep.dim:
        raise DimensionMismatch(
            f"state dim {psi_i.shape[0]} does not match algebra dim {rep.dim}"
        )
    tildes = liealg.tilde_by_conjugation(rep, circuit, point)
    out = []
    for T in tildes:
        mean = linalg.expectation(psi_i, T).real
        out.append(gamma * (T @ psi_i - mean * psi_i))
    return out
