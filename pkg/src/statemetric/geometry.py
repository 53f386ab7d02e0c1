"""Metric fields, curvature diagnostics and manifold classification.

Curvature is obtained by finite differences of the analytically computed
metric (generators are arbitrary user matrices, so symbolic derivatives are
unavailable): Gaussian curvature of 2-parameter sections via the Brioschi
formula, scalar curvature of full-rank 3-parameter metrics via Christoffel
symbols.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateSection,
    EmptyGrid,
    InsufficientGrid,
    MissingParameter,
)
from .manifold import (
    MetricTensor,
    evolve,
    metric_from_derivatives,
    state_derivatives,
)
from .models import Model

CURVATURE_STEP = 1e-3
RANK_TOL = 1e-10
FLAT_K_TOL = 1e-5
FLAT_GRID_TOL = 1e-8
SPHERE_K_VARIATION = 1e-4


def metric_at(model: Model, point, gamma: float | None = None) -> MetricTensor:
    """Analytic metric of a model at one parameter point (derivative path)."""
    g = model.gamma if gamma is None else gamma
    psi = evolve(model.circuit, point, model.initial_state)
    derivs = state_derivatives(model.circuit, point, model.initial_state)
    return metric_from_derivatives(psi, derivs, g, point,
                                   model.circuit.parameter_names)


def _thread_count() -> int:
    env = os.environ.get("STATEMETRIC_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class GridSpec:
    """Swept parameter ranges (name -> (min, max, count)) plus fixed values."""

    sweeps: dict
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "sweeps", dict(self.sweeps))
        object.__setattr__(self, "fixed", dict(self.fixed))
        if not self.sweeps:
            raise EmptyGrid("at least one swept parameter is required")
        for name, (lo, hi, count) in self.sweeps.items():
            if int(count) < 1:
                raise EmptyGrid(f"sweep {name!r} has count {count}")
            if not (np.isfinite(lo) and np.isfinite(hi)):
                raise EmptyGrid(f"sweep {name!r} has non-finite bounds")

    def axes(self):
        return {name: np.linspace(lo, hi, int(count))
                for name, (lo, hi, count) in self.sweeps.items()}

    def points(self):
        """Row-major over the sweeps in declaration order."""
        axes = self.axes()
        names = list(axes)
        for combo in itertools.product(*(axes[n] for n in names)):
            point = dict(self.fixed)
            point.update({n: float(v) for n, v in zip(names, combo)})
            yield point


@dataclass(frozen=True)
class MetricField:
    """Metric tensors over a parameter grid, row-major node order."""

    grid: GridSpec
    tensors: tuple
    model: Model
    gamma: float


def metric_field(model: Model, grid: GridSpec, gamma: float | None = None) -> MetricField:
    g = model.gamma if gamma is None else gamma
    missing = [p for p in model.circuit.parameter_names
               if p not in grid.sweeps and p not in grid.fixed]
    if missing:
        raise MissingParameter(f"parameters {missing} are neither swept nor fixed")
    points = list(grid.points())
    workers = min(_thread_count(), len(points))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            tensors = tuple(pool.map(lambda p: metric_at(model, p, g), points))
    else:
        tensors = tuple(metric_at(model, p, g) for p in points)
    return MetricField(grid, tensors, model, g)


def rank_analysis(metric: MetricTensor, tol: float = RANK_TOL):
    """(rank, null_directions) via eigendecomposition of the symmetric metric."""
    w, V = np.linalg.eigh(metric.g)
    cutoff = tol * max(1.0, float(w[-1]) if len(w) else 1.0)
    keep = w > cutoff
    rank = int(np.count_nonzero(keep))
    null_directions = V[:, ~keep]
    return rank, null_directions


def _section_metric_fn(model: Model, point, section, gamma):
    base = dict(point)
    i, j = (list(model.circuit.parameter_names).index(s) for s in section)

    def fn(u, v):
        p = dict(base)
        p[section[0]] = u
        p[section[1]] = v
        g = metric_at(model, p, gamma).g
        return np.array([[g[i, i], g[i, j]], [g[j, i], g[j, j]]])

    return fn, (float(base[section[0]]), float(base[section[1]]))


def gauss_curvature_from_fn(metric_fn, u: float, v: float,
                            step: float = CURVATURE_STEP) -> float:
    """Brioschi formula with second-order central differences of E, F, G."""
    d = step
    # m[i+1][j+1] is the 2x2 section metric at (u + i d, v + j d)
    m = [[metric_fn(u + i * d, v + j * d) for j in (-1, 0, 1)] for i in (-1, 0, 1)]

    def comp(sel):
        return np.array([[m[i][j][sel] for j in range(3)] for i in range(3)])

    E, F, G = comp((0, 0)), comp((0, 1)), comp((1, 1))

    def du(c):
        return (c[2, 1] - c[0, 1]) / (2 * d)

    def dv(c):
        return (c[1, 2] - c[1, 0]) / (2 * d)

    E_u, E_v = du(E), dv(E)
    F_u, F_v = du(F), dv(F)
    G_u, G_v = du(G), dv(G)
    E_vv = (E[1, 2] - 2 * E[1, 1] + E[1, 0]) / d**2
    G_uu = (G[2, 1] - 2 * G[1, 1] + G[0, 1]) / d**2
    F_uv = (F[2, 2] - F[2, 0] - F[0, 2] + F[0, 0]) / (4 * d**2)

    e, f, g = E[1, 1], F[1, 1], G[1, 1]
    det = e * g - f * f
    if det <= 1e-10:
        raise DegenerateSection(f"section metric determinant {det:.3e} too small")
    top = np.array([
        [-E_vv / 2 + F_uv - G_uu / 2, E_u / 2, F_u - E_v / 2],
        [F_v - G_u / 2, e, f],
        [G_v / 2, f, g],
    ])
    bottom = np.array([
        [0.0, E_v / 2, G_u / 2],
        [E_v / 2, e, f],
        [G_u / 2, f, g],
    ])
    return float((np.linalg.det(top) - np.linalg.det(bottom)) / det**2)


def gauss_curvature(model: Model, point, section, gamma: float | None = None,
                    step: float = CURVATURE_STEP) -> float:
    """Gaussian curvature of a 2-parameter coordinate section at a point."""
    g = model.gamma if gamma is None else gamma
    section = tuple(section)
    if len(section) != 2 or section[0] == section[1]:
        raise DegenerateSection(f"section must be two distinct parameters, got {section}")
    fn, (u, v) = _section_metric_fn(model, point, section, g)
    return gauss_curvature_from_fn(fn, u, v, step)


def scalar_curvature(model: Model, point, gamma: float | None = None,
                     step: float = CURVATURE_STEP) -> float:
    """Scalar curvature from Christoffel symbols, all by finite differences.

    Diagnostic output only; intended for full-rank metrics.
    """
    g0 = model.gamma if gamma is None else gamma
    names = list(model.circuit.parameter_names)
    n = len(names)
    x0 = np.array([float(point[p]) for p in names])

    def g_at(x):
        return metric_at(model, dict(zip(names, x)), g0).g

    def christoffel(x):
        g = g_at(x)
        ginv = np.linalg.inv(g)
        dg = np.empty((n, n, n))
        for a in range(n):
            e = np.zeros(n)
            e[a] = step
            dg[a] = (g_at(x + e) - g_at(x - e)) / (2 * step)
        # Gamma^i_jk = 1/2 g^il (d_j g_lk + d_k g_jl - d_l g_jk)
        return 0.5 * np.einsum("il,jlk->ijk", ginv,
                               dg.transpose(0, 1, 2) + dg.transpose(2, 1, 0)
                               - dg.transpose(1, 0, 2))

    gam = christoffel(x0)
    dgam = np.empty((n, n, n, n))
    for a in range(n):
        e = np.zeros(n)
        e[a] = step
        dgam[a] = (christoffel(x0 + e) - christoffel(x0 - e)) / (2 * step)
    # Ricci_jl = d_i Gamma^i_jl - d_j Gamma^i_il + G^i_ip G^p_jl - G^i_jp G^p_il
    ricci = (np.einsum("iijl->jl", dgam) - np.einsum("jiil->jl", dgam)
             + np.einsum("iip,pjl->jl", gam, gam)
             - np.einsum("ijp,pil->jl", gam, gam))
    return float(np.einsum("jl,jl->", np.linalg.inv(g_at(x0)), ricci))


@dataclass(frozen=True)
class CurvatureReport:
    classification: str  # flat | sphere | degenerate | generic
    rank: int
    null_directions: np.ndarray
    gaussian_curvature: float | None
    radius: float | None
    scalar_curvature: float | None
    section: tuple | None

    def label(self) -> str:
        if self.classification == "sphere":
            return f"sphere(R={self.radius:.6g})"
        if self.classification == "degenerate":
            return f"degenerate(rank={self.rank})"
        return self.classification


def _best_section(field: MetricField):
    """Coordinate pair maximizing the minimal section determinant over nodes."""
    names = field.model.circuit.parameter_names
    best, best_det = None, -np.inf
    for i, j in itertools.combinations(range(len(names)), 2):
        dets = [t.g[i, i] * t.g[j, j] - t.g[i, j] ** 2 for t in field.tensors]
        score = min(dets)
        if score > best_det:
            best_det = score
            best = (names[i], names[j])
    return best, best_det


def classify(field: MetricField, k_samples: int = 5) -> CurvatureReport:
    """Label a metric field as flat, a sphere of some radius, degenerate or
    generic.

    Needs at least 3 nodes per swept parameter.  Gaussian curvature is
    sampled at a handful of grid nodes of the dominant nondegenerate
    2-section; a sphere requires constant positive curvature there.
    """
    for name, (_lo, _hi, count) in field.grid.sweeps.items():
        if int(count) < 3:
            raise InsufficientGrid(f"sweep {name!r} needs >= 3 nodes, has {count}")
    tensors = field.tensors
    dim = tensors[0].dim

    ranks = [rank_analysis(t)[0] for t in tensors]
    rank = max(ranks)
    mid = tensors[len(tensors) // 2]
    _, null_dirs = rank_analysis(mid)

    scale = max(1.0, max(float(np.max(np.abs(t.g))) for t in tensors))
    stack = np.stack([t.g for t in tensors])
    grid_variation = float(np.max(stack.max(axis=0) - stack.min(axis=0)))

    if rank < 2:
        if rank == 0:
            return CurvatureReport("degenerate", 0, null_dirs, None, None, None, None)
        cls = "flat" if grid_variation <= FLAT_GRID_TOL else "degenerate"
        return CurvatureReport(cls, rank, null_dirs, None, None, None, None)

    section, sec_det = _best_section(field)
    step = len(tensors) // k_samples if len(tensors) > k_samples else 1
    sample_nodes = list(field.grid.points())[::step][:k_samples]
    curvatures = []
    for node in sample_nodes:
        try:
            # Richardson-extrapolate the O(step^2) stencil error so the
            # inferred sphere radius is good to ~1e-8
            k1 = gauss_curvature(field.model, node, section, field.gamma,
                                 CURVATURE_STEP)
            k2 = gauss_curvature(field.model, node, section, field.gamma,
                                 CURVATURE_STEP / 2)
            curvatures.append((4 * k2 - k1) / 3)
        except DegenerateSection:
            continue
    if not curvatures:
        return CurvatureReport("degenerate", rank, null_dirs, None, None, None, section)
    curvatures = np.array(curvatures)
    k_mean = float(np.mean(curvatures))
    k_spread = float(np.max(np.abs(curvatures - k_mean)))

    scal = None
    if rank == dim and dim == 3:
        scal = scalar_curvature(field.model, sample_nodes[len(sample_nodes) // 2],
                                field.gamma)

    if grid_variation <= FLAT_GRID_TOL * scale and np.max(np.abs(curvatures)) <= FLAT_K_TOL:
        return CurvatureReport("flat", rank, null_dirs, k_mean, None, scal, section)
    if k_mean > 0 and k_spread <= SPHERE_K_VARIATION * abs(k_mean):
        return CurvatureReport("sphere", rank, null_dirs, k_mean,
                               float(1.0 / np.sqrt(k_mean)), scal, section)
    if rank < dim:
        return CurvatureReport("degenerate", rank, null_dirs, k_mean, None, scal, section)
    return CurvatureReport("generic", rank, null_dirs, k_mean, None, scal, section)
