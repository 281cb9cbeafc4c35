"""Multidimensional Hermite polynomials for a symmetric coupling matrix.

H^gamma_n is defined by the Rodrigues formula

    H_n(x) = (-1)^{|n|} exp(x.gamma.x / 2) d^n/dx^n exp(-x.gamma.x / 2)

or equivalently through the generating function

    exp( sum_ij gamma_ij (x_i - z_i/2) z_j ) = sum_n prod_i z_i^{n_i}/n_i! H_n(x).

Evaluation uses the recurrence

    H_{n+e_k} = (gamma x)_k H_n - sum_j gamma_kj n_j H_{n-e_j},  H_0 = 1,

filled over the sub-lattice below the target index.  Two independent
evaluators (truncated polynomial arithmetic on the generating function,
and direct Rodrigues differentiation) exist to cross-check the recurrence.
For the one-dimensional coupling gamma = 2 these reduce to the classical
Hermite polynomials.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NonSymmetricInput, OrderTooLarge

_GEN_CAP = 12
_ROD_CAP = 8


def _check_gamma(gamma) -> np.ndarray:
    gamma = np.asarray(gamma, dtype=complex)
    if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1]:
        raise ValueError("gamma must be a square matrix")
    scale = max(1.0, float(np.max(np.abs(gamma))))
    if np.max(np.abs(gamma - gamma.T)) > 1e-10 * scale:
        raise NonSymmetricInput("gamma must be symmetric")
    return gamma


def _check_index(n, dim: int) -> tuple:
    n = tuple(int(v) for v in n)
    if len(n) != dim:
        raise ValueError(f"index length {len(n)} != dimension {dim}")
    if any(v < 0 for v in n):
        raise ValueError("index entries must be non-negative")
    return n


def hermite_box(gamma, box, x) -> dict:
    """Evaluate H_m for every index m with m_i <= box_i, in one sweep.

    ``x`` has shape (..., N); each returned value has shape (...).
    """
    gamma = _check_gamma(gamma)
    dim = gamma.shape[0]
    box = _check_index(box, dim)
    xx = np.asarray(x)
    squeeze = xx.ndim == 1
    if squeeze:
        xx = xx[None, :]
    if xx.shape[-1] != dim:
        raise ValueError("points must have last axis of length N")
    gx = xx @ gamma.T

    values: dict[tuple, np.ndarray] = {}
    base = np.ones(xx.shape[:-1], dtype=complex)
    for m in np.ndindex(tuple(b + 1 for b in box)):
        if sum(m) == 0:
            values[m] = base
            continue
        k = next(i for i, v in enumerate(m) if v > 0)
        prev = list(m)
        prev[k] -= 1
        prev = tuple(prev)
        acc = gx[..., k] * values[prev]
        for j in range(dim):
            if prev[j] > 0:
                lower = list(prev)
                lower[j] -= 1
                acc = acc - gamma[k, j] * prev[j] * values[tuple(lower)]
        values[m] = acc
    if squeeze:
        return {m: v[0] for m, v in values.items()}
    return values


def hermite_value(gamma, n, x):
    """H^gamma_n at points x of shape (..., N) via the recurrence."""
    gamma = _check_gamma(gamma)
    n = _check_index(n, gamma.shape[0])
    return hermite_box(gamma, n, x)[n]


class _Poly:
    """Multivariate polynomial as {exponent tuple: coefficient}."""

    def __init__(self, dim: int, terms=None):
        self.dim = dim
        self.terms = dict(terms or {})

    @classmethod
    def const(cls, dim: int, c=1.0):
        return cls(dim, {(0,) * dim: complex(c)})

    def add(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0.0) + c
        return _Poly(self.dim, out)

    def scale(self, c):
        return _Poly(self.dim, {e: v * c for e, v in self.terms.items()})

    def mul(self, other, cap: int):
        out: dict[tuple, complex] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if sum(e) > cap:
                    continue
                out[e] = out.get(e, 0.0) + c1 * c2
        return _Poly(self.dim, out)

    def diff(self, k: int):
        out: dict[tuple, complex] = {}
        for e, c in self.terms.items():
            if e[k] == 0:
                continue
            ne = list(e)
            ne[k] -= 1
            out[tuple(ne)] = out.get(tuple(ne), 0.0) + c * e[k]
        return _Poly(self.dim, out)

    def eval(self, x: np.ndarray) -> complex:
        total = 0.0 + 0.0j
        for e, c in self.terms.items():
            term = c
            for xi, p in zip(x, e):
                if p:
                    term = term * xi ** p
            total += term
        return total


def hermite_from_generating(gamma, n, x) -> complex:
    """Coefficient extraction from the generating function at a point.

    Exact truncated polynomial arithmetic in the expansion variables;
    independent of the recurrence.  Total order capped at 12.
    """
    gamma = _check_gamma(gamma)
    dim = gamma.shape[0]
    n = _check_index(n, dim)
    order = sum(n)
    if order > _GEN_CAP:
        raise OrderTooLarge(f"total order {order} exceeds cap {_GEN_CAP}")
    x = np.asarray(x, dtype=complex)
    gx = gamma @ x

    arg = _Poly(dim)
    for j in range(dim):
        if gx[j] != 0:
            e = [0] * dim
            e[j] = 1
            arg = arg.add(_Poly(dim, {tuple(e): gx[j]}))
    for i in range(dim):
        for j in range(dim):
            if gamma[i, j] != 0:
                e = [0] * dim
                e[i] += 1
                e[j] += 1
                arg = arg.add(_Poly(dim, {tuple(e): -0.5 * gamma[i, j]}))

    series = _Poly.const(dim, 1.0)
    power = _Poly.const(dim, 1.0)
    for k in range(1, order + 1):
        power = power.mul(arg, order)
        series = series.add(power.scale(1.0 / math.factorial(k)))
    coeff = series.terms.get(n, 0.0 + 0.0j)
    return complex(coeff * np.prod([math.factorial(v) for v in n]))


def hermite_from_rodrigues(gamma, n, x) -> complex:
    """Repeated differentiation of the Gaussian kernel at a point.

    Requires real gamma.  Total order capped at 8.
    """
    gamma = _check_gamma(gamma)
    if np.max(np.abs(gamma.imag)) > 0:
        raise ValueError("Rodrigues route requires real gamma")
    dim = gamma.shape[0]
    n = _check_index(n, dim)
    order = sum(n)
    if order > _ROD_CAP:
        raise OrderTooLarge(f"total order {order} exceeds cap {_ROD_CAP}")

    # d/dx_k [P e^{-x.g.x/2}] = [dP/dx_k - (gamma x)_k P] e^{-x.g.x/2}
    poly = _Poly.const(dim, 1.0)
    for k in range(dim):
        for _ in range(n[k]):
            shifted = poly.diff(k)
            for j in range(dim):
                if gamma[k, j] != 0:
                    e = [0] * dim
                    e[j] = 1
                    shifted = shifted.add(
                        poly.mul(_Poly(dim, {tuple(e): -gamma[k, j]}),
                                 cap=order + dim * max(n)))
            poly = shifted
    sign = (-1.0) ** order
    return complex(sign * poly.eval(np.asarray(x, dtype=complex)))


def orthogonality_integral(gamma, n, m, points: int = 240, extent: float = 10.0):
    """Weighted overlap integral against its closed-form prediction.

    Computes integral of exp(-x.gamma.x/2) H_n H_m over [-extent, extent]^N
    with tensor Gauss-Legendre quadrature and returns ``(value, expected)``
    where expected = pi^{N/2} prod_i 2^{n_i} n_i!  delta_{nm}.  The closed
    form is only claimed for the decoupled case gamma = 2 I.
    """
    gamma = _check_gamma(gamma)
    dim = gamma.shape[0]
    n = _check_index(n, dim)
    m = _check_index(m, dim)
    scale = max(1.0, float(np.max(np.abs(gamma))))
    if np.max(np.abs(gamma - np.diag(np.diag(gamma)))) > 1e-12 * scale:
        raise ValueError("orthogonality check requires diagonal gamma")

    nodes, weights = np.polynomial.legendre.leggauss(points)
    nodes = nodes * extent
    weights = weights * extent
    grids = np.meshgrid(*([nodes] * dim), indexing="ij")
    pts = np.stack(grids, axis=-1)
    wgt = np.ones_like(grids[0])
    for ax in range(dim):
        shape = [1] * dim
        shape[ax] = points
        wgt = wgt * weights.reshape(shape)

    box = tuple(max(a, b) for a, b in zip(n, m))
    table = hermite_box(gamma, box, pts)
    quad = np.einsum("...i,ij,...j->...", pts, gamma, pts)
    integrand = np.exp(-0.5 * quad) * table[n] * table[m]
    value = complex(np.sum(wgt * integrand))

    if n == m:
        expected = np.pi ** (dim / 2.0) * np.prod(
            [2.0 ** v * math.factorial(v) for v in n])
    else:
        expected = 0.0
    return value, float(expected)
