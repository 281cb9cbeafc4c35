"""Classical eigenmodes of the normal-form equations of motion.

The first-order equations

    dr/dt = p/m - Omega r,      dp/dt = -m V r - Omega p - m g(t)

are organized around the 2N x 2N stability matrix ``M``.  Solutions of the
homogeneous system are superpositions of eigenmodes (R_k, P_k) with
frequencies omega_k defined by M (R, P) = i omega (R, P).  Frequencies come
in negation pairs; for bounded systems they are real and the two members of
a pair are complex conjugates of each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (ComplexFrequency, DefectiveSpectrum,
                     DegenerateUnresolved, SingularModeBasis)
from .model import NormalForm
from .signals import TimeSignal

_PAIR_TOL = 1e-8
_REAL_TOL = 1e-9


@dataclass(frozen=True)
class ModeSet:
    """All 2N eigenmodes of a system, positive branch first.

    ``freqs[i]`` for i < dim is the positive branch (Re omega > 0, or
    Im omega > 0 on the imaginary axis); ``pairing[i]`` is the index of the
    partner mode with the negated frequency.  Amplitude rows ``R[i]``,
    ``P[i]`` are scaled so the largest-magnitude component of R equals 1,
    with P recomputed from P = m (Omega + i omega) R.
    """

    dim: int
    mass: float
    freqs: np.ndarray
    R: np.ndarray
    P: np.ndarray
    pairing: np.ndarray

    def positive(self) -> range:
        return range(self.dim)


@dataclass(frozen=True)
class DriveProjection:
    """Mode components g_i(t) of a drive, one complex signal per mode.

    Defined by the static expansion

        (0, g(t)) = sum_i [ g_i(t) (R_i, P_i) + conj ]

    over the positive branch, so each component keeps the kind of g.
    """

    signal: TimeSignal

    def values(self, t: float) -> np.ndarray:
        """All components g_i(t) as a complex (N,) array."""
        return np.asarray(self.signal.value(t), dtype=complex)


def stability_matrix(nf: NormalForm) -> np.ndarray:
    """Block matrix [[-Omega, 1/m], [-m V, -Omega]] of the linear flow."""
    n = nf.dim
    M = np.zeros((2 * n, 2 * n))
    M[:n, :n] = -nf.Omega
    M[:n, n:] = np.eye(n) / nf.mass
    M[n:, :n] = -nf.mass * nf.V
    M[n:, n:] = -nf.Omega
    return M


def compute_modes(nf: NormalForm) -> ModeSet:
    """Diagonalize the stability matrix into a deterministic mode set.

    Raises
    ------
    DefectiveSpectrum
        If the eigenvector matrix is rank deficient (Jordan block), e.g.
        for a free particle.
    DegenerateUnresolved
        If branch classification or negation pairing cannot be completed.
    """
    n = nf.dim
    M = stability_matrix(nf)
    mu, B = np.linalg.eig(M)
    sv = np.linalg.svd(B, compute_uv=False)
    if sv[-1] < 1e-8 * sv[0]:
        raise DefectiveSpectrum(
            "stability matrix is not diagonalizable (mode count < 2N)")
    omega = -1j * mu
    vecs = _canonical_vectors(M, mu, B)

    scale = max(1.0, float(np.max(np.abs(omega))))
    pos, neg = [], []
    for k in range(2 * n):
        w = omega[k]
        if w.real > _REAL_TOL * scale:
            pos.append(k)
        elif w.real < -_REAL_TOL * scale:
            neg.append(k)
        elif w.imag > 0:
            pos.append(k)
        else:
            neg.append(k)
    if len(pos) != n:
        raise DegenerateUnresolved(
            f"branch split gave {len(pos)} positive modes, expected {n}")
    pos.sort(key=lambda k: (round(omega[k].real / scale, 12),
                            round(omega[k].imag / scale, 12)))

    order, partner = [], []
    used = set()
    for k in pos:
        match = None
        for q in neg:
            if q in used:
                continue
            if abs(omega[k] + omega[q]) <= _PAIR_TOL * max(1.0, abs(omega[k])):
                match = q
                break
        if match is None:
            raise DegenerateUnresolved(
                f"no negation partner for frequency {omega[k]}")
        used.add(match)
        order.append(k)
        partner.append(match)
    order += partner

    freqs = omega[order]
    R = np.zeros((2 * n, n), dtype=complex)
    P = np.zeros((2 * n, n), dtype=complex)
    for row, k in enumerate(order):
        r = vecs[:n, k]
        j = int(np.argmax(np.abs(r)))
        r = r / r[j]
        R[row] = r
        P[row] = nf.mass * (nf.Omega @ r + 1j * freqs[row] * r)
    pairing = np.concatenate([np.arange(n, 2 * n), np.arange(n)])
    return ModeSet(dim=n, mass=nf.mass, freqs=freqs, R=R, P=P, pairing=pairing)


def _canonical_vectors(M, mu, B) -> np.ndarray:
    """Replace eigenvectors of repeated eigenvalues by a canonical basis.

    Within each degenerate eigenspace the returned vectors are obtained by
    orthonormalizing the projections of the standard basis vectors, which
    depends only on the subspace and not on the solver's arbitrary choice.
    """
    n2 = mu.shape[0]
    scale = max(1.0, float(np.max(np.abs(mu))))
    groups = _cluster(mu, 1e-8 * scale)
    vecs = np.array(B, dtype=complex)
    for grp in groups:
        if len(grp) < 2:
            continue
        Bg = B[:, grp]
        Pi = Bg @ np.linalg.solve(Bg.conj().T @ Bg, Bg.conj().T)
        basis = []
        for j in range(n2):
            cand = Pi @ np.eye(n2)[:, j]
            for b in basis:
                cand = cand - (b.conj() @ cand) * b
            nrm = np.linalg.norm(cand)
            if nrm > 1e-8:
                basis.append(cand / nrm)
            if len(basis) == len(grp):
                break
        if len(basis) != len(grp):
            raise DegenerateUnresolved("could not span a degenerate eigenspace")
        for col, b in zip(grp, basis):
            vecs[:, col] = b
    return vecs


def _cluster(values: np.ndarray, tol: float) -> list[list[int]]:
    parent = list(range(len(values)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if abs(values[i] - values[j]) <= tol:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(len(values)):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _require_real_branch(ms: ModeSet) -> np.ndarray:
    w = ms.freqs[: ms.dim]
    if np.any(np.abs(w.imag) > _REAL_TOL * np.maximum(1.0, np.abs(w))):
        raise ComplexFrequency(
            "trajectory requires real positive-branch frequencies")
    return w.real


def trajectory(ms: ModeSet, lam: np.ndarray, t):
    """Homogeneous solution r(t), p(t) = 2 Re sum_i lam_i (R_i, P_i) e^{i w t}.

    ``t`` may be a scalar or a 1-D array; returns (r, p) with matching
    leading shape.  Requires real positive-branch frequencies.
    """
    w = _require_real_branch(ms)
    lam = np.asarray(lam, dtype=complex)
    tarr = np.atleast_1d(np.asarray(t, dtype=float))
    phases = np.exp(1j * np.outer(tarr, w)) * lam
    r = 2.0 * np.real(phases @ ms.R[: ms.dim])
    p = 2.0 * np.real(phases @ ms.P[: ms.dim])
    if np.isscalar(t) or np.ndim(t) == 0:
        return r[0], p[0]
    return r, p


def _basis_matrix(ms: ModeSet) -> np.ndarray:
    """Real 2N x 2N system matrix for expanding phase-space vectors in modes."""
    n = ms.dim
    V = np.hstack([ms.R[:n], ms.P[:n]]).T
    return np.hstack([2.0 * V.real, -2.0 * V.imag])


def fit_coefficients(ms: ModeSet, r0, p0) -> np.ndarray:
    """Mode coefficients lam with trajectory(ms, lam, 0) = (r0, p0)."""
    n = ms.dim
    A = _basis_matrix(ms)
    if np.linalg.cond(A) >= 1e12:
        raise SingularModeBasis("mode amplitudes do not span phase space")
    b = np.concatenate([np.asarray(r0, dtype=float),
                        np.asarray(p0, dtype=float)])
    x = np.linalg.solve(A, b)
    return x[:n] + 1j * x[n:]


def project_drive(ms: ModeSet, g: TimeSignal) -> DriveProjection:
    """Expand (0, g(t)) over mode amplitudes and their conjugates.

    The solve is time independent, so each component signal keeps the kind
    of ``g`` (zero, constant, sinusoid with the same frequency and phase,
    or sampled on the same time grid).
    """
    n = ms.dim
    A = _basis_matrix(ms)
    if np.linalg.cond(A) >= 1e12:
        raise SingularModeBasis("mode amplitudes do not span phase space")

    def solve_static(vec):
        b = np.concatenate([np.zeros(n), np.asarray(vec, dtype=float)])
        x = np.linalg.solve(A, b)
        return x[:n] + 1j * x[n:]

    if g.is_zero():
        sig = TimeSignal.zero(n)
    elif g.kind == "constant":
        sig = TimeSignal.constant(solve_static(g.v))
    elif g.kind == "sinusoid":
        sig = TimeSignal.sinusoid(solve_static(g.a), g.omega, g.phase)
    else:
        comps = np.array([solve_static(row) for row in g.samples])
        sig = TimeSignal.sampled(g.t, comps)
    return DriveProjection(signal=sig)


def _osc_integral(k: complex, t: float) -> complex:
    """integral_0^t e^{i k tau} d tau, stable for small |k t|."""
    kt = k * t
    if abs(kt) < 1e-8:
        return t * (1.0 + 1j * kt / 2.0 + (1j * kt) ** 2 / 6.0)
    return (np.exp(1j * kt) - 1.0) / (1j * k)


def evolve_driven(ms: ModeSet, lam0, dp: DriveProjection, t: float) -> np.ndarray:
    """Coefficients at time t under a drive.

    Solves d(lam_i)/dt = -m g_i(t) e^{-i omega_i t}; the exponential carries
    the static-basis components of ``dp`` into the co-moving mode frame.
    Closed form for zero, constant and sinusoid components; composite
    Simpson on a refined uniform grid for sampled ones.
    """
    n = ms.dim
    m = ms.mass
    lam0 = np.asarray(lam0, dtype=complex)
    w = ms.freqs[:n]
    sig = dp.signal
    out = lam0.copy()
    if sig.is_zero() or t == 0.0:
        return out
    if sig.kind == "constant":
        for i in range(n):
            out[i] -= m * sig.v[i] * _osc_integral(-w[i], t)
    elif sig.kind == "sinusoid":
        for i in range(n):
            acc = 0.5 * np.exp(1j * sig.phase) * _osc_integral(sig.omega - w[i], t)
            acc += 0.5 * np.exp(-1j * sig.phase) * _osc_integral(-sig.omega - w[i], t)
            out[i] -= m * sig.a[i] * acc
    else:
        wmax = float(np.max(np.abs(w))) if n else 1.0
        panels = max(128, 8 * (sig.t.size - 1),
                     int(40 * abs(t) * max(wmax, abs(sig.omega)) / (2 * np.pi)))
        panels += panels % 2
        tau = np.linspace(0.0, t, panels + 1)
        weights = np.ones(panels + 1)
        weights[1:-1:2] = 4.0
        weights[2:-1:2] = 2.0
        hstep = (tau[-1] - tau[0]) / panels
        vals = np.array([sig.value(tk) for tk in tau])
        for i in range(n):
            integrand = vals[:, i] * np.exp(-1j * w[i] * tau)
            out[i] -= m * (hstep / 3.0) * np.sum(weights * integrand)
    return out


def default_timestep(nf: NormalForm) -> float:
    """Default integrator step: 1/200 of the fastest mode period."""
    M = stability_matrix(nf)
    w = np.abs(np.linalg.eigvals(M))
    wmax = float(np.max(w)) if w.size else 0.0
    if wmax <= 0.0:
        wmax = 1.0
    return (2.0 * np.pi / wmax) / 200.0
