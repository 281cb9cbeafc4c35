"""System definition and reduction to normal coordinates.

A general quadratic Hamiltonian is described by a mass scale ``m``, a
positive definite kinetic matrix ``F``, a cross-coupling matrix ``Q``, a
symmetric potential matrix ``U``, and optional drive signals ``f`` (force)
and ``h`` (momentum drive):

    H = (1/2m) pi.F.pi + xi.Q.pi + (m/2) xi.U.xi + m f(t).xi + (1/m) h(t).pi

``reduce`` transforms this to the normal form used everywhere else in the
package,

    H = p^2/2m + r.Omega.p + (m/2) r.V.r - m g(t).r,

with ``Omega`` antisymmetric and ``V`` symmetric, by the linear canonical
change of variables r = O^T xi, p = O^{-1} pi + m S O^T xi + (O^T)^{-1} h(t).
A time-only scalar is dropped and recorded, never used.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import NonSymmetricInput, NotPositiveDefinite
from .signals import QuadraticDrop, TimeSignal

_SYM_TOL = 1e-10


@dataclass(frozen=True)
class GeneralHamiltonian:
    """Input description of a quadratic system in original coordinates."""

    dim: int
    mass: float
    F: np.ndarray
    Q: np.ndarray
    U: np.ndarray
    f: TimeSignal
    h: TimeSignal

    @classmethod
    def build(cls, mass, F, Q, U, f=None, h=None) -> "GeneralHamiltonian":
        F = np.asarray(F, dtype=float)
        Q = np.asarray(Q, dtype=float)
        U = np.asarray(U, dtype=float)
        n = F.shape[0]
        for name, mat in (("F", F), ("Q", Q), ("U", U)):
            if mat.shape != (n, n):
                raise ValueError(f"{name} must be {n}x{n}, got {mat.shape}")
        if mass <= 0:
            raise ValueError("mass must be positive")
        f = f if f is not None else TimeSignal.zero(n)
        h = h if h is not None else TimeSignal.zero(n)
        if f.dim != n or h.dim != n:
            raise ValueError("drive signal dimension does not match system")
        return cls(dim=n, mass=float(mass), F=F, Q=Q, U=U, f=f, h=h)


@dataclass(frozen=True)
class NormalForm:
    """Reduced system data: the only system description used downstream."""

    dim: int
    mass: float
    Omega: np.ndarray
    V: np.ndarray
    g: TimeSignal
    O: np.ndarray
    dropped: QuadraticDrop

    @classmethod
    def from_matrices(cls, Omega, V, mass: float = 1.0,
                      g: TimeSignal | None = None) -> "NormalForm":
        """Assemble a normal form directly from its matrices."""
        Omega = np.asarray(Omega, dtype=float)
        V = np.asarray(V, dtype=float)
        n = V.shape[0]
        _require_symmetric("V", V)
        if not np.allclose(Omega, -Omega.T,
                           atol=_SYM_TOL * max(1.0, _amax(Omega))):
            raise NonSymmetricInput("Omega must be antisymmetric")
        eye = np.eye(n)
        return cls(dim=n, mass=float(mass),
                   Omega=0.5 * (Omega - Omega.T), V=0.5 * (V + V.T),
                   g=g if g is not None else TimeSignal.zero(n),
                   O=eye,
                   dropped=QuadraticDrop(float(mass), eye, TimeSignal.zero(n)))


def _amax(mat: np.ndarray) -> float:
    return float(np.max(np.abs(mat))) if mat.size else 0.0


def _require_symmetric(name: str, mat: np.ndarray) -> None:
    if _amax(mat - mat.T) > _SYM_TOL * max(1.0, _amax(mat)):
        raise NonSymmetricInput(f"{name} must be symmetric")


def reduce(ham: GeneralHamiltonian) -> NormalForm:
    """Reduce a general quadratic system to normal form.

    Returns a ``NormalForm`` with unit kinetic matrix.  The diagonalizer
    ``O`` satisfies O^T F O = 1 and is built deterministically: eigenvalues
    of ``F`` ascending, each eigenvector sign-fixed so its largest-magnitude
    component is positive.

    Raises
    ------
    NonSymmetricInput
        If ``F`` or ``U`` is asymmetric beyond relative 1e-10.
    NotPositiveDefinite
        If ``F`` has a non-positive eigenvalue.
    """
    _require_symmetric("F", ham.F)
    _require_symmetric("U", ham.U)
    F = 0.5 * (ham.F + ham.F.T)
    U = 0.5 * (ham.U + ham.U.T)
    m = ham.mass

    evals, E = np.linalg.eigh(F)
    if evals[0] <= 1e-12 * max(1.0, evals[-1]):
        raise NotPositiveDefinite("kinetic matrix has a non-positive eigenvalue")
    for j in range(ham.dim):
        k = int(np.argmax(np.abs(E[:, j])))
        if E[k, j] < 0:
            E[:, j] = -E[:, j]
    O = E @ np.diag(evals ** -0.5)

    Oinv = np.linalg.inv(O)
    OinvT = Oinv.T
    W = Oinv @ ham.Q @ O
    S = 0.5 * (W + W.T)
    Omega = 0.5 * (W - W.T)
    V = Oinv @ U @ OinvT - S @ S - (Omega @ S - S @ Omega)
    V = 0.5 * (V + V.T)

    g = _reduced_drive(ham, W, O, OinvT)
    dropped = QuadraticDrop(m, OinvT, ham.h)
    return NormalForm(dim=ham.dim, mass=m, Omega=Omega, V=V, g=g, O=O,
                      dropped=dropped)


def _reduced_drive(ham: GeneralHamiltonian, W, O, OinvT) -> TimeSignal:
    """g(t) = (1/m) W (O^T)^{-1} h(t) - O f(t), closed over signal kinds."""
    m = ham.mass
    A = (W @ OinvT) / m
    B = -O
    parts = []
    for mat, sig in ((A, ham.h), (B, ham.f)):
        if sig.is_zero():
            continue
        if sig.kind == "constant":
            parts.append(TimeSignal.constant(mat @ sig.v))
        elif sig.kind == "sinusoid":
            parts.append(TimeSignal.sinusoid(mat @ sig.a, sig.omega, sig.phase))
        else:
            parts.append(TimeSignal.sampled(sig.t, sig.samples @ mat.T))
    if not parts:
        return TimeSignal.zero(ham.dim)
    if len(parts) == 1:
        return parts[0]
    # Mixed drives: fall back to a sampled sum on the union of natural grids.
    tmax = max(p.t[-1] if p.kind == "sampled" else 0.0 for p in parts)
    base = max((p for p in parts if p.kind == "sampled"),
               key=lambda p: p.t.size, default=None)
    tgrid = base.t if base is not None else np.linspace(0.0, max(tmax, 1.0), 257)
    vals = np.array([sum(p.value(ti) for p in parts) for ti in tgrid])
    return TimeSignal.sampled(tgrid, vals)


def hamiltonian_value(nf: NormalForm, r, p, t: float = 0.0) -> float:
    """Evaluate p^2/2m + r.Omega.p + (m/2) r.V.r - m g(t).r.

    The recorded time-only scalar is not included.
    """
    r = np.asarray(r, dtype=float)
    p = np.asarray(p, dtype=float)
    m = nf.mass
    val = (p @ p) / (2.0 * m) + r @ nf.Omega @ p + 0.5 * m * r @ nf.V @ r
    if not nf.g.is_zero():
        val -= m * float(np.real(nf.g.value(t)) @ r)
    return float(val)


def load_model(path) -> GeneralHamiltonian:
    """Read a system description from a JSON file.

    Expected layout::

        {"dim": 2, "mass": 1.0,
         "F": [[...]], "Q": [[...]], "U": [[...]],
         "f": {"kind": "zero"}, "h": {"kind": "sinusoid", ...}}

    ``f`` and ``h`` default to zero when omitted.
    """
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    return parse_model(obj)


def parse_model(obj: dict) -> GeneralHamiltonian:
    try:
        dim = int(obj["dim"])
        mass = float(obj.get("mass", 1.0))
        F = np.asarray(obj["F"], dtype=float)
        Q = np.asarray(obj["Q"], dtype=float)
        U = np.asarray(obj["U"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"bad model file: {exc}") from exc
    f = TimeSignal.from_json(obj.get("f"), dim)
    h = TimeSignal.from_json(obj.get("h"), dim)
    ham = GeneralHamiltonian.build(mass, F, Q, U, f, h)
    if ham.dim != dim:
        raise ValueError("matrix shapes disagree with declared dim")
    return ham
