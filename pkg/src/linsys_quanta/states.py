"""Stationary states, energies, and coherent states.

With a stationary shape K0 built from selected modes, the ground state is

    psi_0(r) = normN exp(-(m/2 hbar) r.K0.r).

Excited states are labeled by a multi-index n over the selected modes and
use only the conjugate-partner amplitudes R_i*:

    psi_n(r) = norm * H^gamma_n(x(r)) * psi_0(r),
    gamma_ij = (m/hbar) R_i*.A.R_j*,   A = K0 + conj(K0),
    r = sum_i x_i(r) R_i*,
    E_n = hbar (sum_i n_i omega_i + Omega0),  Omega0 = Tr(A)/4.

Coherent states admit two independent evaluations (a moving Gaussian
packet, and a factored generating-function form over psi_0); their
pointwise agreement is a strong consistency check of the whole chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from itertools import product

import numpy as np

from .classical import ModeSet, trajectory
from .errors import (ComplexFrequency, FormMismatch, NotPositiveDefinite,
                     RelationViolation, SingularBasis, TruncationTooLarge)
from .hermite import hermite_box, hermite_value
from .model import NormalForm
from .packet import adaptive_simpson, norm_factor

_REAL_TOL = 1e-9
_TRUNC_CAP = 16


@dataclass(frozen=True)
class SpectrumBasis:
    """Everything needed to build excited states on top of a ground state.

    Only the conjugate-partner amplitudes enter state evaluation; the
    selected amplitudes themselves are recoverable by conjugation when a
    classical trajectory is required.
    """

    selection: tuple
    freqs: np.ndarray
    Rc: np.ndarray
    Pc: np.ndarray
    A: np.ndarray
    gamma: np.ndarray
    Omega0: float
    hbar: float
    mass: float


@dataclass(frozen=True)
class GroundState:
    K0: np.ndarray
    normN: float
    hbar: float
    mass: float


@dataclass(frozen=True)
class StationaryState:
    index: tuple
    energy: float
    norm: float


@dataclass(frozen=True)
class CoherentState:
    lam: np.ndarray
    phi0: float


def make_ground(K0, mass: float = 1.0, hbar: float = 1.0) -> GroundState:
    """Ground state for a stationary shape matrix (Re K0 must be definite)."""
    K0 = np.asarray(K0, dtype=complex)
    tr_im = abs(float(np.trace(K0).imag))
    if tr_im > 1e-9 * max(1.0, float(np.max(np.abs(K0)))):
        raise RelationViolation(
            f"Tr Im K0 = {tr_im:.3e}; stationary shapes must conserve norm")
    return GroundState(K0=K0, normN=norm_factor(K0, mass, hbar),
                       hbar=hbar, mass=mass)


def build_basis(ms: ModeSet, selection, K0, mass: float | None = None,
                hbar: float = 1.0) -> SpectrumBasis:
    """Assemble the excitation basis for a selected stationary shape.

    Verifies the defining relation K0 R_i = -(i/m) P_i for every selected
    mode before trusting the amplitudes.
    """
    m = ms.mass if mass is None else mass
    sel = tuple(int(i) for i in selection)
    K0 = np.asarray(K0, dtype=complex)
    R = ms.R[list(sel)]
    P = ms.P[list(sel)]
    scale = max(1.0, float(np.max(np.abs(P))) / m)
    resid = np.max(np.abs((K0 @ R.T + 1j * P.T / m)))
    if resid > 1e-7 * scale:
        raise RelationViolation(
            f"K0 R_i = -(i/m) P_i violated by {resid:.3e}")
    A = K0 + np.conj(K0)
    Rc = R.conj().T
    Pc = P.conj().T
    gamma = (m / hbar) * Rc.T @ A @ Rc
    gamma = 0.5 * (gamma + gamma.T)
    return SpectrumBasis(selection=sel, freqs=ms.freqs[list(sel)], Rc=Rc,
                         Pc=Pc, A=A.real, gamma=gamma,
                         Omega0=float(np.trace(A).real) / 4.0,
                         hbar=hbar, mass=m)


def coordinates(basis: SpectrumBasis, r) -> np.ndarray:
    """Components x with r = sum_i x_i R_i*; batched over (..., N)."""
    if np.linalg.cond(basis.Rc) >= 1e12:
        raise SingularBasis("conjugate amplitudes do not span space")
    rr = np.asarray(r, dtype=complex)
    flat = rr.reshape(-1, rr.shape[-1]).T
    x = np.linalg.solve(basis.Rc, flat).T
    return x.reshape(rr.shape)


def psi0(gs: GroundState, r) -> np.ndarray:
    """Ground-state wave function at points r of shape (..., N)."""
    rr = np.asarray(r, dtype=float)
    quad = np.einsum("...i,ij,...j->...", rr, gs.K0, rr)
    return gs.normN * np.exp(-(gs.mass / (2.0 * gs.hbar)) * quad)


def _real_freqs(basis: SpectrumBasis) -> np.ndarray:
    w = basis.freqs
    if np.any(np.abs(w.imag) > _REAL_TOL * np.maximum(1.0, np.abs(w))):
        raise ComplexFrequency("energies require real selected frequencies")
    return w.real


def energy(basis: SpectrumBasis, n) -> float:
    """E_n = hbar (sum_i n_i omega_i + Omega0)."""
    w = _real_freqs(basis)
    n = tuple(int(v) for v in n)
    return float(basis.hbar * (np.dot(n, w) + basis.Omega0))


def stationary_state(basis: SpectrumBasis, n) -> StationaryState:
    """Excited-state record; ``norm`` starts at 1 until fixed on a grid."""
    n = tuple(int(v) for v in n)
    return StationaryState(index=n, energy=energy(basis, n), norm=1.0)


def psi_n(basis: SpectrumBasis, gs: GroundState, state: StationaryState,
          r) -> np.ndarray:
    """Excited-state wave function at points r of shape (..., N)."""
    x = coordinates(basis, r)
    return state.norm * hermite_value(basis.gamma, state.index, x) * psi0(gs, r)


def normalized_on_grid(basis: SpectrumBasis, gs: GroundState,
                       state: StationaryState, grid) -> StationaryState:
    """Fix the state norm by quadrature so the grid norm is 1."""
    from .verify import inner_product, sample
    field = sample(lambda r: psi_n(basis, gs, replace(state, norm=1.0), r),
                   grid)
    nrm = float(np.real(inner_product(field, field, grid)))
    if nrm <= 0:
        raise NotPositiveDefinite("state has non-positive grid norm")
    return replace(state, norm=state.norm / math.sqrt(nrm))


def indices_up_to(dim: int, max_total: int):
    """All multi-indices with component sum <= max_total, sorted."""
    out = [n for n in product(range(max_total + 1), repeat=dim)
           if sum(n) <= max_total]
    out.sort(key=lambda n: (sum(n), n))
    return out


def _selected_R(basis: SpectrumBasis) -> np.ndarray:
    return basis.Rc.conj().T


def coherent_center(basis: SpectrumBasis, cs: CoherentState, t: float):
    """Classical center (R, P) at time t for coherent coefficients lam."""
    w = _real_freqs(basis)
    ph = cs.lam * np.exp(1j * w * t)
    R = 2.0 * np.real(ph @ _selected_R(basis))
    P = 2.0 * np.real(ph @ basis.Pc.conj().T)
    return R, P


def _coherent_phase(basis: SpectrumBasis, gs: GroundState, nf: NormalForm,
                    cs: CoherentState, t: float) -> float:
    """phase(t) from the packet phase law along the coherent trajectory."""
    hbar, m = basis.hbar, basis.mass
    rate0 = -0.5 * hbar * float(np.trace(gs.K0).real)

    def rate(tau):
        R, P = coherent_center(basis, cs, tau)
        return rate0 - float(P @ P) / (2.0 * m) + 0.5 * m * float(R @ nf.V @ R)

    if t == 0.0:
        return hbar * cs.phi0
    val = adaptive_simpson(rate, 0.0, float(t), tol=1e-12 * max(1.0, abs(t)))
    return hbar * cs.phi0 + float(np.real(val))


def _constant_prefactor(basis: SpectrumBasis, gs: GroundState,
                        cs: CoherentState) -> complex:
    """Constant matching the factored form to the packet form at t = 0."""
    m, hbar = basis.mass, basis.hbar
    R0, _ = coherent_center(basis, cs, 0.0)
    z0 = np.conj(cs.lam)
    expo = (-(m / (2.0 * hbar)) * R0 @ gs.K0 @ R0
            + 0.5 * z0 @ basis.gamma @ z0)
    return complex(np.exp(expo))


def coherent_forms(cs: CoherentState, basis: SpectrumBasis, gs: GroundState,
                   nf: NormalForm, t: float, r):
    """Both evaluations of the coherent state at points r of shape (..., N).

    The first route is the moving Gaussian packet with center on the
    classical trajectory and phase integrated from the packet phase law.
    The second multiplies psi_0 by the factored generating-function
    exponential with the constant prefactor fixed at t = 0.  Their
    pointwise agreement is the numerical proof that the stationary-state
    machinery is consistent with packet propagation.
    """
    m, hbar = basis.mass, basis.hbar
    rr = np.asarray(r, dtype=float)
    w = _real_freqs(basis)

    R, P = coherent_center(basis, cs, t)
    phase = _coherent_phase(basis, gs, nf, cs, t)
    d = rr - R
    quad = np.einsum("...i,ij,...j->...", d, gs.K0, d)
    direct = (gs.normN * np.exp(1j * phase / hbar)
              * np.exp(-(m / (2.0 * hbar)) * quad + 1j * (rr @ P) / hbar))

    z = np.conj(cs.lam) * np.exp(-1j * w * t)
    x = coordinates(basis, rr)
    gz = basis.gamma @ z
    expo = -0.5 * z @ basis.gamma @ z + np.einsum("...i,i->...", x, gz)
    factored = (_constant_prefactor(basis, gs, cs)
                * np.exp(1j * cs.phi0) * np.exp(-1j * basis.Omega0 * t)
                * np.exp(expo) * psi0(gs, rr))
    return direct, factored


def coherent_value(cs: CoherentState, basis: SpectrumBasis, gs: GroundState,
                   nf: NormalForm, t: float, r, check: bool = True):
    """Coherent-state wave function; cross-checks both routes when asked.

    With ``check`` the packet and factored forms are compared pointwise
    and FormMismatch is raised on disagreement, which signals a mode or
    selection inconsistency upstream.
    """
    direct, factored = coherent_forms(cs, basis, gs, nf, t, r)
    if check:
        scale = max(float(np.max(np.abs(direct))), 1e-300)
        gap = float(np.max(np.abs(direct - factored)))
        if gap > 1e-7 * scale:
            raise FormMismatch(
                f"packet and factored coherent forms differ by {gap:.3e}")
    return direct


def expand_coherent(cs: CoherentState, basis: SpectrumBasis,
                    gs: GroundState, max_total: int, t: float = 0.0) -> dict:
    """Expansion coefficients over H_n psi_0 up to a total order.

    The coherent state equals sum_n c_n(t) H^gamma_n(x(r)) psi_0(r) with

        c_n(t) = C0 e^{i phi0} e^{-i Omega0 t}
                 prod_i (lam_i* e^{-i omega_i t})^{n_i} / n_i!

    where C0 is the same constant prefactor used by coherent_value.
    Truncations above 16 are refused.
    """
    if max_total > _TRUNC_CAP:
        raise TruncationTooLarge(f"truncation {max_total} exceeds {_TRUNC_CAP}")
    w = _real_freqs(basis)
    zbar = np.conj(cs.lam) * np.exp(-1j * w * t)
    front = (_constant_prefactor(basis, gs, cs) * np.exp(1j * cs.phi0)
             * np.exp(-1j * basis.Omega0 * t))
    coeffs = {}
    for n in indices_up_to(len(cs.lam), max_total):
        term = front
        for zi, ni in zip(zbar, n):
            term = term * zi ** ni / math.factorial(ni)
        coeffs[n] = complex(term)
    return coeffs


def reconstruct_expansion(coeffs: dict, basis: SpectrumBasis,
                          gs: GroundState, r) -> np.ndarray:
    """Partial sum of an expansion on points r of shape (..., N)."""
    x = coordinates(basis, r)
    box = tuple(int(v) for v in np.max(list(coeffs), axis=0))
    table = hermite_box(basis.gamma, box, x)
    base = psi0(gs, r)
    total = np.zeros(np.shape(base), dtype=complex)
    for n, c in coeffs.items():
        total = total + c * table[n]
    return total * base
