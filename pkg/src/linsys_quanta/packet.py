"""Gaussian packet propagation.

A normalized Gaussian packet

    Psi(r, t) = normN exp(i phase / hbar)
                * exp(-(m/2 hbar) (r-R).K.(r-R) + (i/hbar) P.r)

stays Gaussian under the quadratic flow.  Its parameters obey

    dK/dt     = -i K^2 + i V - [Omega, K]
    dR/dt     = P/m - Omega R
    dP/dt     = -m V R - Omega P - m g(t)
    dnormN/dt = (normN / 2) Tr Im K
    dphase/dt = -(hbar/2) Tr Re K - P^2/2m + (m/2) R.V.R

The shape never feels the drive, and (R, P) follow the classical
trajectory exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import BlowUp, NotPositiveDefinite
from .model import NormalForm
from .riccati import riccati_rhs

_GUARD = 1e12


@dataclass(frozen=True)
class PacketState:
    """Instantaneous packet parameters."""

    K: np.ndarray
    R: np.ndarray
    P: np.ndarray
    normN: float
    phase: float
    hbar: float
    mass: float


@dataclass(frozen=True)
class PacketPath:
    t: np.ndarray
    K: np.ndarray
    R: np.ndarray
    P: np.ndarray
    normN: np.ndarray
    phase: np.ndarray


def make_packet(K, mass: float = 1.0, hbar: float = 1.0, R=None, P=None,
                phase: float = 0.0) -> PacketState:
    """Normalized packet with the given shape, center and phase."""
    K = np.asarray(K, dtype=complex)
    n = K.shape[0]
    R = np.zeros(n) if R is None else np.asarray(R, dtype=float)
    P = np.zeros(n) if P is None else np.asarray(P, dtype=float)
    state = PacketState(K=K, R=R, P=P, normN=1.0, phase=float(phase),
                        hbar=float(hbar), mass=float(mass))
    return normalized(state)


def norm_factor(K: np.ndarray, mass: float, hbar: float) -> float:
    """Prefactor making the packet unit norm.

    Follows from the Gaussian integral of |Psi|^2:

        normN^2 (pi hbar / m)^{N/2} det(Re K)^{-1/2} = 1.
    """
    ReK = np.asarray(K).real
    ReK = 0.5 * (ReK + ReK.T)
    eigs = np.linalg.eigvalsh(ReK)
    if eigs[0] <= 0:
        raise NotPositiveDefinite("Re K must be positive definite")
    n = ReK.shape[0]
    det = float(np.prod(eigs))
    return float((mass / (np.pi * hbar)) ** (n / 4.0) * det ** 0.25)


def normalized(state: PacketState) -> PacketState:
    return replace(state, normN=norm_factor(state.K, state.mass, state.hbar))


def packet_rhs(state: PacketState, nf: NormalForm, t: float):
    """Time derivatives (dK, dR, dP, dnormN, dphase)."""
    m = state.mass
    hbar = state.hbar
    K, R, P = state.K, state.R, state.P
    dK = riccati_rhs(K, nf)
    dR = P / m - nf.Omega @ R
    dP = -m * nf.V @ R - nf.Omega @ P
    if not nf.g.is_zero():
        dP = dP - m * np.real(nf.g.value(t))
    dN = 0.5 * state.normN * float(np.trace(K).imag)
    dphi = (-0.5 * hbar * float(np.trace(K).real)
            - float(P @ P) / (2.0 * m)
            + 0.5 * m * float(R @ nf.V @ R))
    return dK, dR, dP, dN, dphi


def propagate(state: PacketState, nf: NormalForm, t_span, dt: float) -> PacketPath:
    """Fixed-step RK4 over all packet parameters, sampled at every step.

    K is re-symmetrized after each step; any entry exceeding 1e12 in
    magnitude raises BlowUp.
    """
    t0, t1 = float(t_span[0]), float(t_span[1])
    span = t1 - t0
    if span <= 0:
        raise ValueError("t_span must have t1 > t0")
    nsteps = max(1, int(np.ceil(span / dt - 1e-12)))
    h = span / nsteps

    K = np.array(state.K, dtype=complex)
    R = np.array(state.R, dtype=float)
    P = np.array(state.P, dtype=float)
    normN, phase = state.normN, state.phase
    n = K.shape[0]

    ts = np.empty(nsteps + 1)
    Ks = np.empty((nsteps + 1, n, n), dtype=complex)
    Rs = np.empty((nsteps + 1, n))
    Ps = np.empty((nsteps + 1, n))
    Nn = np.empty(nsteps + 1)
    Ph = np.empty(nsteps + 1)
    ts[0], Ks[0], Rs[0], Ps[0], Nn[0], Ph[0] = t0, K, R, P, normN, phase

    cur = replace(state)
    for s in range(nsteps):
        tc = t0 + s * h
        cur = replace(cur, K=K, R=R, P=P, normN=normN, phase=phase)
        k1 = packet_rhs(cur, nf, tc)
        s2 = replace(cur, K=K + 0.5 * h * k1[0], R=R + 0.5 * h * k1[1],
                     P=P + 0.5 * h * k1[2], normN=normN + 0.5 * h * k1[3],
                     phase=phase + 0.5 * h * k1[4])
        k2 = packet_rhs(s2, nf, tc + 0.5 * h)
        s3 = replace(cur, K=K + 0.5 * h * k2[0], R=R + 0.5 * h * k2[1],
                     P=P + 0.5 * h * k2[2], normN=normN + 0.5 * h * k2[3],
                     phase=phase + 0.5 * h * k2[4])
        k3 = packet_rhs(s3, nf, tc + 0.5 * h)
        s4 = replace(cur, K=K + h * k3[0], R=R + h * k3[1], P=P + h * k3[2],
                     normN=normN + h * k3[3], phase=phase + h * k3[4])
        k4 = packet_rhs(s4, nf, tc + h)

        K = K + (h / 6.0) * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        K = 0.5 * (K + K.T)
        R = R + (h / 6.0) * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        P = P + (h / 6.0) * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        normN = normN + (h / 6.0) * (k1[3] + 2 * k2[3] + 2 * k3[3] + k4[3])
        phase = phase + (h / 6.0) * (k1[4] + 2 * k2[4] + 2 * k3[4] + k4[4])
        if not np.all(np.isfinite(K)) or np.max(np.abs(K)) > _GUARD:
            raise BlowUp(f"shape matrix magnitude exceeded {_GUARD:g}")

        ts[s + 1] = t0 + (s + 1) * h
        Ks[s + 1], Rs[s + 1], Ps[s + 1] = K, R, P
        Nn[s + 1], Ph[s + 1] = normN, phase
    return PacketPath(t=ts, K=Ks, R=Rs, P=Ps, normN=Nn, phase=Ph)


def packet_value(state: PacketState, r) -> np.ndarray:
    """Evaluate the packet at points r of shape (..., N)."""
    rr = np.asarray(r, dtype=float)
    d = rr - state.R
    quad = np.einsum("...i,ij,...j->...", d, state.K, d)
    lin = rr @ state.P
    m, hbar = state.mass, state.hbar
    return (state.normN * np.exp(1j * state.phase / hbar)
            * np.exp(-(m / (2.0 * hbar)) * quad + 1j * lin / hbar))


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-10,
                     max_depth: int = 50, min_depth: int = 6):
    """Adaptive Simpson quadrature for scalar (possibly complex) f.

    The error estimate is not trusted before ``min_depth`` splits; a
    coarse first panel can alias periodic integrands (all probe points
    at the same phase) into a spuriously converged wrong value.
    """
    fa, fb = f(a), f(b)
    mid = 0.5 * (a + b)
    fm = f(mid)

    def simpson(x0, x2, f0, f1, f2):
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def recur(x0, x2, f0, f1, f2, whole, eps, depth):
        xm = 0.5 * (x0 + x2)
        lm, rm = 0.5 * (x0 + xm), 0.5 * (xm + x2)
        flm, frm = f(lm), f(rm)
        left = simpson(x0, xm, f0, flm, f1)
        right = simpson(xm, x2, f1, frm, f2)
        done = abs(left + right - whole) <= 15.0 * eps
        if depth >= max_depth or (depth >= min_depth and done):
            return left + right + (left + right - whole) / 15.0
        return (recur(x0, xm, f0, flm, f1, left, eps / 2.0, depth + 1)
                + recur(xm, x2, f1, frm, f2, right, eps / 2.0, depth + 1))

    if a == b:
        return 0.0 * fa
    return recur(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 0)


def pulsating_shape_1d(k: float, omega: float, t: float):
    """Closed-form shape and phase angle of a 1-D pulsating packet.

    For a harmonic well of frequency ``omega`` and initial shape
    K(0) = k * omega, the solution of d(alpha)/dt = -i alpha^2 + i omega^2
    is

        alpha(t) = omega (k cos wt + i sin wt) / (cos wt + i k sin wt)

    (check: alpha'(0) = i omega^2 (1 - k^2), and alpha(pi/2w) = omega/k).
    The returned phase is the angle -(1/2) integral_0^t Re alpha, computed
    by adaptive Simpson to 1e-10.
    """
    def alpha(tau):
        c, s = np.cos(omega * tau), np.sin(omega * tau)
        return omega * (k * c + 1j * s) / (c + 1j * k * s)

    phase = -0.5 * adaptive_simpson(lambda tau: alpha(tau).real, 0.0, float(t),
                                    tol=1e-10)
    return alpha(t), float(np.real(phase))
