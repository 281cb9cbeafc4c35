"""Vector-valued time signals used for drives and inhomogeneous terms.

A signal is one of four kinds:

* ``zero``      -- identically zero,
* ``constant``  -- a fixed vector,
* ``sinusoid``  -- ``a * cos(omega * t + phase)`` with vector amplitude ``a``,
* ``sampled``   -- linear interpolation of tabulated values.

Values may be real or complex; the projection of a real drive onto complex
eigenmodes produces complex component signals of the same kind.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SignalDomainExceeded

_KINDS = ("zero", "constant", "sinusoid", "sampled")


@dataclass(frozen=True)
class TimeSignal:
    """A time-dependent vector with a closed, serializable description."""

    kind: str
    dim: int
    v: np.ndarray | None = None
    a: np.ndarray | None = None
    omega: float = 0.0
    phase: float = 0.0
    t: np.ndarray | None = None
    samples: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def zero(cls, dim: int) -> "TimeSignal":
        return cls(kind="zero", dim=dim)

    @classmethod
    def constant(cls, v) -> "TimeSignal":
        v = np.atleast_1d(np.asarray(v))
        return cls(kind="constant", dim=v.shape[0], v=v)

    @classmethod
    def sinusoid(cls, a, omega: float, phase: float = 0.0) -> "TimeSignal":
        a = np.atleast_1d(np.asarray(a))
        return cls(kind="sinusoid", dim=a.shape[0], a=a,
                   omega=float(omega), phase=float(phase))

    @classmethod
    def sampled(cls, t, samples) -> "TimeSignal":
        t = np.asarray(t, dtype=float)
        samples = np.atleast_2d(np.asarray(samples))
        if samples.shape[0] != t.shape[0]:
            raise ValueError("sample table and time grid lengths differ")
        if t.ndim != 1 or t.shape[0] < 2 or np.any(np.diff(t) <= 0):
            raise ValueError("sample times must be strictly increasing, >= 2 points")
        return cls(kind="sampled", dim=samples.shape[1], t=t, samples=samples)

    def value(self, time: float) -> np.ndarray:
        """Evaluate the signal at a single time, returning a (dim,) array."""
        if self.kind == "zero":
            return np.zeros(self.dim)
        if self.kind == "constant":
            return self.v.copy()
        if self.kind == "sinusoid":
            return self.a * np.cos(self.omega * time + self.phase)
        lo, hi = self.t[0], self.t[-1]
        slack = 1e-12 * max(1.0, hi - lo)
        if time < lo - slack or time > hi + slack:
            raise SignalDomainExceeded(
                f"t={time} outside sampled range [{lo}, {hi}]")
        time = min(max(time, lo), hi)
        if np.iscomplexobj(self.samples):
            re = np.array([np.interp(time, self.t, self.samples[:, j].real)
                           for j in range(self.dim)])
            im = np.array([np.interp(time, self.t, self.samples[:, j].imag)
                           for j in range(self.dim)])
            return re + 1j * im
        return np.array([np.interp(time, self.t, self.samples[:, j])
                         for j in range(self.dim)])

    def is_zero(self) -> bool:
        return self.kind == "zero"

    def to_json(self) -> dict:
        if self.kind == "zero":
            return {"kind": "zero"}
        if self.kind == "constant":
            return {"kind": "constant", "v": _encode(self.v)}
        if self.kind == "sinusoid":
            return {"kind": "sinusoid", "a": _encode(self.a),
                    "omega": self.omega, "phase": self.phase}
        return {"kind": "sampled", "t": self.t.tolist(),
                "v": _encode(self.samples)}

    @classmethod
    def from_json(cls, obj, dim: int) -> "TimeSignal":
        if obj is None:
            return cls.zero(dim)
        kind = obj.get("kind")
        if kind not in _KINDS:
            raise ValueError(f"unknown signal kind {kind!r}")
        if kind == "zero":
            return cls.zero(dim)
        if kind == "constant":
            sig = cls.constant(_decode(obj["v"], depth_real=1))
        elif kind == "sinusoid":
            sig = cls.sinusoid(_decode(obj["a"], depth_real=1), obj["omega"],
                               obj.get("phase", 0.0))
        else:
            sig = cls.sampled(obj["t"], _decode(obj["v"], depth_real=2))
        if sig.dim != dim:
            raise ValueError(f"signal dimension {sig.dim} != system dimension {dim}")
        return sig


def _encode(arr: np.ndarray):
    if np.iscomplexobj(arr):
        return [[_pair(x) for x in row] for row in np.atleast_2d(arr)] \
            if arr.ndim > 1 else [_pair(x) for x in arr]
    return arr.tolist()


def _pair(x):
    return [float(x.real), float(x.imag)]


def _decode(obj, depth_real: int):
    """Parse a JSON array as real floats, or as [re, im] pairs one level deeper."""
    a = np.asarray(obj, dtype=float)
    if a.ndim == depth_real:
        return a
    if a.ndim == depth_real + 1 and a.shape[-1] == 2:
        return a[..., 0] + 1j * a[..., 1]
    raise ValueError("array nesting does not match a real or [re, im] layout")


@dataclass(frozen=True)
class QuadraticDrop:
    """The time-only scalar removed from a reduced Hamiltonian.

    Its value is ``-(1/2m) |A h(t)|^2`` where ``A`` maps the original
    momentum drive into normal coordinates.  Recorded for reporting only;
    nothing downstream consumes it.
    """

    mass: float
    A: np.ndarray
    h: TimeSignal

    def value(self, time: float) -> float:
        vec = self.A @ self.h.value(time)
        return float(-0.5 / self.mass * np.real(np.vdot(vec, vec)))
