"""Grid verification: sample states, apply H by finite differences, integrate.

The static Hamiltonian in reduced variables acts on a sampled field f as

    (H f)(r) = -(hbar^2/2m) lap f + (hbar/i) r.Omega.grad f + (m/2)(r.V.r) f.

Derivatives use second-order central stencils inside and second-order
one-sided stencils on the edges; residual measures exclude the outer
three layers where the one-sided stencils and Gaussian tails dominate.
Integrals use trapezoidal tensor quadrature, which is weight-agnostic
and therefore safe for the complex non-diagonal Gaussian envelopes the
states carry.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce as _reduce

import numpy as np

from .errors import GridMismatch, NotPositiveDefinite
from .model import NormalForm

_DEFAULT_POINTS = {1: 201, 2: 101, 3: 41}
_EDGE_LAYERS = 3


@dataclass(frozen=True)
class Grid:
    """Uniform tensor grid centered at the origin, at most 3 axes.

    extent[j] is the half-width of axis j; points[j] its sample count,
    odd and at least five so the origin is a node and every edge stencil
    fits.  Spacing is 2*extent[j]/(points[j]-1).
    """

    extent: tuple
    points: tuple

    def __post_init__(self):
        if not 1 <= len(self.extent) <= 3:
            raise GridMismatch(f"grids support 1..3 axes, got {len(self.extent)}")
        if len(self.points) != len(self.extent):
            raise GridMismatch("extent and points must have equal length")
        for length, count in zip(self.extent, self.points):
            if not length > 0:
                raise GridMismatch(f"extent {length} must be positive")
            if count < 5 or count % 2 == 0:
                raise GridMismatch(f"point count {count} must be odd and >= 5")

    @staticmethod
    def build(extent, points, dim: int | None = None) -> "Grid":
        if np.isscalar(extent):
            extent = (float(extent),) * (dim or 1)
        if np.isscalar(points):
            points = (int(points),) * len(tuple(extent))
        return Grid(tuple(float(v) for v in extent),
                    tuple(int(v) for v in points))

    @property
    def dim(self) -> int:
        return len(self.extent)

    @property
    def shape(self) -> tuple:
        return self.points

    @property
    def spacing(self) -> tuple:
        return tuple(2.0 * length / (count - 1)
                     for length, count in zip(self.extent, self.points))

    def axis(self, j: int) -> np.ndarray:
        return np.linspace(-self.extent[j], self.extent[j], self.points[j])

    def mesh(self) -> np.ndarray:
        axes = [self.axis(j) for j in range(self.dim)]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)


def default_points(dim: int) -> int:
    return _DEFAULT_POINTS.get(dim, 41)


def stationary_grid(K0, mass: float = 1.0, hbar: float = 1.0,
                    max_total: int = 0, points=None) -> Grid:
    """Grid sized for stationary states built on shape matrix K0.

    The softest width of the ground Gaussian is set by the smallest
    eigenvalue of Re K0; excitation by total order n widens the support
    roughly by sqrt(1+n).  Six of those widths keeps edge amplitudes
    negligible.
    """
    K0 = np.asarray(K0, dtype=complex)
    dim = K0.shape[0]
    lam = float(np.linalg.eigvalsh(K0.real)[0])
    if lam <= 0:
        raise NotPositiveDefinite("Re K0 must be positive definite for a grid")
    sigma = np.sqrt(hbar * (1.0 + max_total) / (mass * lam))
    if points is None:
        points = default_points(dim)
    return Grid.build(6.0 * sigma, points, dim=dim)


def sample(evaluator, grid: Grid) -> np.ndarray:
    """Evaluate a (..., N) -> (...) callable on all grid points."""
    field = np.asarray(evaluator(grid.mesh()), dtype=complex)
    if field.shape != grid.shape:
        raise GridMismatch(
            f"evaluator returned shape {field.shape}, grid is {grid.shape}")
    return field


def _first_derivative(field: np.ndarray, h: float, axis: int) -> np.ndarray:
    f = np.moveaxis(field, axis, 0)
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - f[:-2]) / (2.0 * h)
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
    out[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * h)
    return np.moveaxis(out, 0, axis)


def _second_derivative(field: np.ndarray, h: float, axis: int) -> np.ndarray:
    f = np.moveaxis(field, axis, 0)
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / (h * h)
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h)
    out[-1] = (2.0 * f[-1] - 5.0 * f[-2] + 4.0 * f[-3] - f[-4]) / (h * h)
    return np.moveaxis(out, 0, axis)


def apply_hamiltonian(nf: NormalForm, field, grid: Grid,
                      hbar: float = 1.0, mass: float | None = None):
    """Apply the static reduced Hamiltonian to a sampled field."""
    m = nf.mass if mass is None else mass
    f = np.asarray(field, dtype=complex)
    if f.shape != grid.shape:
        raise GridMismatch(f"field shape {f.shape} does not match {grid.shape}")
    if grid.dim != nf.dim:
        raise GridMismatch(f"grid has {grid.dim} axes, system has {nf.dim}")
    hs = grid.spacing
    lap = sum(_second_derivative(f, hs[j], j) for j in range(grid.dim))
    mesh = grid.mesh()
    out = -(hbar * hbar / (2.0 * m)) * lap
    if np.any(nf.Omega):
        coef = np.einsum("...i,ij->...j", mesh, nf.Omega)
        for j in range(grid.dim):
            out = out - 1j * hbar * coef[..., j] * _first_derivative(f, hs[j], j)
    quad = np.einsum("...i,ij,...j->...", mesh, nf.V, mesh)
    return out + 0.5 * m * quad * f


def inner_product(a, b, grid: Grid) -> complex:
    """Trapezoidal tensor quadrature of conj(a) * b."""
    aa = np.asarray(a, dtype=complex)
    bb = np.asarray(b, dtype=complex)
    if aa.shape != grid.shape or bb.shape != grid.shape:
        raise GridMismatch("fields must match the grid shape")
    weights = []
    for count in grid.points:
        w = np.ones(count)
        w[0] = w[-1] = 0.5
        weights.append(w)
    wgt = _reduce(np.multiply.outer, weights)
    vol = float(np.prod(grid.spacing))
    return complex(np.sum(np.conj(aa) * bb * wgt) * vol)


def grid_norm(a, grid: Grid) -> float:
    return float(np.sqrt(np.real(inner_product(a, a, grid))))


def _interior(grid: Grid) -> tuple:
    cut = tuple(slice(_EDGE_LAYERS, count - _EDGE_LAYERS)
                for count in grid.points)
    if any(count <= 2 * _EDGE_LAYERS for count in grid.points):
        raise GridMismatch("grid too small to exclude edge layers")
    return cut


def eigen_residual(nf: NormalForm, field, energy: float, grid: Grid,
                   hbar: float = 1.0, mass: float | None = None) -> float:
    """Relative interior residual ||H f - E f|| / ||E f||."""
    f = np.asarray(field, dtype=complex)
    hf = apply_hamiltonian(nf, f, grid, hbar=hbar, mass=mass)
    cut = _interior(grid)
    resid = (hf - energy * f)[cut]
    ref = (energy * f)[cut]
    denom = float(np.linalg.norm(ref.ravel()))
    if denom == 0.0:
        denom = float(np.linalg.norm(f[cut].ravel()))
    return float(np.linalg.norm(resid.ravel())) / max(denom, 1e-300)


def gram_matrix(fields, grid: Grid) -> np.ndarray:
    """Matrix of pairwise inner products of a list of fields."""
    n = len(fields)
    out = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            val = inner_product(fields[i], fields[j], grid)
            out[i, j] = val
            out[j, i] = np.conj(val)
    return out
