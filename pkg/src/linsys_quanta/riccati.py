"""Shape-matrix flows: the matrix Riccati equation and its linearization.

The complex symmetric shape matrix K of a Gaussian state obeys

    dK/dt = -i K^2 + i V - [Omega, K].

Writing K = -(i/m) N D^{-1} converts this to the linear pair

    dN/dt = -m V D - Omega N,      dD/dt = (1/m) N - Omega D,

whose columns evolve exactly like classical mode vectors.  Stationary
shapes follow without integration: picking one mode per negation pair and
loading the amplitudes into columns, D0 = [R_i], N0 = [P_i], gives an
algebraic solution K0; the state is normalizable iff Re K0 is positive
definite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .classical import ModeSet
from .errors import BlowUp, NoPhysicalState, SingularD
from .model import NormalForm

_GUARD = 1e12


@dataclass(frozen=True)
class LinearPair:
    """State (N, D) of the linearized flow, with the mass that scales it."""

    nmat: np.ndarray
    dmat: np.ndarray
    mass: float


@dataclass(frozen=True)
class RiccatiPath:
    t: np.ndarray
    K: np.ndarray


@dataclass(frozen=True)
class PairPath:
    t: np.ndarray
    nmat: np.ndarray
    dmat: np.ndarray
    mass: float


@dataclass(frozen=True)
class StationaryShape:
    """Result of the stationary-shape search.

    ``selection`` holds mode indices, one per negation pair; ``physical``
    lists every selection whose Re K0 came out positive definite.
    """

    K0: np.ndarray
    selection: tuple
    asymmetry: float
    re_min_eig: float
    tr_im: float
    physical: tuple


def riccati_rhs(K: np.ndarray, nf: NormalForm) -> np.ndarray:
    """Right-hand side -i K^2 + i V - (Omega K - K Omega)."""
    return -1j * (K @ K) + 1j * nf.V - (nf.Omega @ K - K @ nf.Omega)


def _steps(t_span, dt: float):
    t0, t1 = float(t_span[0]), float(t_span[1])
    span = t1 - t0
    if span <= 0:
        raise ValueError("t_span must have t1 > t0")
    nsteps = max(1, int(np.ceil(span / dt - 1e-12)))
    return t0, span / nsteps, nsteps


def integrate_riccati(K0: np.ndarray, nf: NormalForm, t_span, dt: float) -> RiccatiPath:
    """Fixed-step RK4 for the Riccati flow, sampled at every step.

    K is re-symmetrized after each step.  Raises BlowUp when any entry
    magnitude exceeds 1e12.
    """
    t0, h, nsteps = _steps(t_span, dt)
    K = np.array(K0, dtype=complex)
    ts = np.empty(nsteps + 1)
    Ks = np.empty((nsteps + 1,) + K.shape, dtype=complex)
    ts[0], Ks[0] = t0, K
    for s in range(nsteps):
        k1 = riccati_rhs(K, nf)
        k2 = riccati_rhs(K + 0.5 * h * k1, nf)
        k3 = riccati_rhs(K + 0.5 * h * k2, nf)
        k4 = riccati_rhs(K + h * k3, nf)
        K = K + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        K = 0.5 * (K + K.T)
        if not np.all(np.isfinite(K)) or np.max(np.abs(K)) > _GUARD:
            raise BlowUp(f"shape matrix magnitude exceeded {_GUARD:g}")
        ts[s + 1] = t0 + (s + 1) * h
        Ks[s + 1] = K
    return RiccatiPath(t=ts, K=Ks)


def integrate_linear_pair(p0: LinearPair, nf: NormalForm, t_span, dt: float) -> PairPath:
    """Fixed-step RK4 for the linearized pair, sampled at every step."""
    m = p0.mass
    t0, h, nsteps = _steps(t_span, dt)
    N = np.array(p0.nmat, dtype=complex)
    D = np.array(p0.dmat, dtype=complex)

    def rhs(Nc, Dc):
        return (-m * nf.V @ Dc - nf.Omega @ Nc,
                Nc / m - nf.Omega @ Dc)

    ts = np.empty(nsteps + 1)
    Ns = np.empty((nsteps + 1,) + N.shape, dtype=complex)
    Ds = np.empty_like(Ns)
    ts[0], Ns[0], Ds[0] = t0, N, D
    for s in range(nsteps):
        a1, b1 = rhs(N, D)
        a2, b2 = rhs(N + 0.5 * h * a1, D + 0.5 * h * b1)
        a3, b3 = rhs(N + 0.5 * h * a2, D + 0.5 * h * b2)
        a4, b4 = rhs(N + h * a3, D + h * b3)
        N = N + (h / 6.0) * (a1 + 2 * a2 + 2 * a3 + a4)
        D = D + (h / 6.0) * (b1 + 2 * b2 + 2 * b3 + b4)
        if (not (np.all(np.isfinite(N)) and np.all(np.isfinite(D)))
                or max(np.max(np.abs(N)), np.max(np.abs(D))) > _GUARD):
            raise BlowUp(f"linear pair magnitude exceeded {_GUARD:g}")
        ts[s + 1] = t0 + (s + 1) * h
        Ns[s + 1], Ds[s + 1] = N, D
    return PairPath(t=ts, nmat=Ns, dmat=Ds, mass=m)


def k_from_pair(pair: LinearPair) -> np.ndarray:
    """Recover K = -(i/m) N D^{-1} from a linear-pair state."""
    D = pair.dmat
    if not np.all(np.isfinite(D)) or np.linalg.cond(D) >= 1e12:
        raise SingularD("denominator matrix is numerically singular")
    return (-1j / pair.mass) * pair.nmat @ np.linalg.inv(D)


def solve_algebraic(ms: ModeSet, selection, mass: float | None = None):
    """Stationary shape matrix from one mode per negation pair.

    Returns ``(K0, asymmetry)`` where asymmetry is the largest entry of
    K0 - K0^T before symmetrization.
    """
    m = ms.mass if mass is None else mass
    sel = tuple(int(i) for i in selection)
    D0 = ms.R[list(sel)].T
    N0 = ms.P[list(sel)].T
    if np.linalg.cond(D0) >= 1e12:
        raise SingularD("selected position amplitudes are singular")
    K = (-1j / m) * N0 @ np.linalg.inv(D0)
    asym = float(np.max(np.abs(K - K.T)))
    return 0.5 * (K + K.T), asym


def select_modes(ms: ModeSet, mass: float | None = None) -> StationaryShape:
    """Deterministic scan of one-per-pair selections for a physical shape.

    Candidates are enumerated positive-branch first; the first selection
    with positive definite Re K0 wins.  All physical selections found are
    reported for diagnostics.

    Raises
    ------
    NoPhysicalState
        If no selection yields a positive definite Re K0: the system has
        no normalizable stationary Gaussian state (no square-integrable
        ground state), e.g. an inverted oscillator.
    """
    n = ms.dim
    winner = None
    physical = []
    for choice in itertools.product((0, 1), repeat=n):
        sel = tuple(int(i if c == 0 else ms.pairing[i])
                    for i, c in enumerate(choice))
        try:
            K0, asym = solve_algebraic(ms, sel, mass)
        except SingularD:
            continue
        ReK = K0.real
        ReK = 0.5 * (ReK + ReK.T)
        eigs = np.linalg.eigvalsh(ReK)
        scale = float(np.linalg.norm(ReK, 2))
        if eigs[0] > 1e-10 * max(scale, 1e-300):
            physical.append(sel)
            if winner is None:
                winner = (K0, sel, asym, float(eigs[0]),
                          float(np.trace(K0).imag))
    if winner is None:
        raise NoPhysicalState(
            "no mode selection gives a positive definite Re K0; the system "
            "has no normalizable stationary Gaussian state")
    K0, sel, asym, re_min, tr_im = winner
    return StationaryShape(K0=K0, selection=sel, asymmetry=asym,
                           re_min_eig=re_min, tr_im=tr_im,
                           physical=tuple(physical))
