"""Shared systems, pipelines and integration oracles for the test suite."""
from pathlib import Path

import numpy as np
import pytest

from linsys_quanta import classical, model, riccati, states


def make_sho(omega: float = 1.0, mass: float = 1.0) -> model.NormalForm:
    """1-D harmonic well p^2/2m + (m/2) omega^2 r^2."""
    return model.NormalForm.from_matrices(
        Omega=np.zeros((1, 1)), V=np.array([[omega ** 2]]), mass=mass)


def make_aniso(w1: float = 1.0, w2: float = 2.0,
               mass: float = 1.0) -> model.NormalForm:
    """2-D decoupled well with distinct axis frequencies."""
    return model.NormalForm.from_matrices(
        Omega=np.zeros((2, 2)), V=np.diag([w1 ** 2, w2 ** 2]), mass=mass)


def make_iso(w: float = 1.0, dim: int = 2, mass: float = 1.0) -> model.NormalForm:
    """Isotropic well: fully degenerate frequency spectrum."""
    return model.NormalForm.from_matrices(
        Omega=np.zeros((dim, dim)), V=(w ** 2) * np.eye(dim), mass=mass)


def make_magnetic(q: float = 0.5, u: float = 1.0,
                  mass: float = 1.0) -> model.NormalForm:
    """2-D well with rotational momentum coupling of strength q."""
    return model.NormalForm.from_matrices(
        Omega=np.array([[0.0, q], [-q, 0.0]]), V=u * np.eye(2), mass=mass)


def make_inverted(mass: float = 1.0) -> model.NormalForm:
    """1-D inverted well: no normalizable stationary state."""
    return model.NormalForm.from_matrices(
        Omega=np.zeros((1, 1)), V=np.array([[-1.0]]), mass=mass)


def stable_system(rng, dim: int, mass: float = 1.0) -> model.NormalForm:
    """Random system whose phase-space quadratic form is positive definite.

    V = A^T A + I/2 - Omega^2 keeps V + Omega^2 positive definite, which
    guarantees a real frequency spectrum and a physical stationary shape.
    """
    A = rng.standard_normal((dim, dim))
    G = rng.standard_normal((dim, dim))
    Om = 0.5 * (G - G.T)
    V = A.T @ A + 0.5 * np.eye(dim) - Om @ Om
    return model.NormalForm.from_matrices(Omega=Om, V=V, mass=mass)


def stationary_pipeline(nf: model.NormalForm, hbar: float = 1.0):
    """modes -> stationary shape -> ground state -> spectrum basis."""
    ms = classical.compute_modes(nf)
    shape = riccati.select_modes(ms)
    gs = states.make_ground(shape.K0, mass=nf.mass, hbar=hbar)
    basis = states.build_basis(ms, shape.selection, shape.K0, hbar=hbar)
    return ms, shape, gs, basis


def rk4(f, y0, t0: float, t1: float, steps: int) -> np.ndarray:
    """Plain fixed-step RK4 for array-valued f(t, y); independent oracle."""
    y = np.array(y0, dtype=complex)
    h = (t1 - t0) / steps
    t = t0
    for _ in range(steps):
        k1 = f(t, y)
        k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = f(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += h
    return y


def random_shape_matrix(rng, dim: int) -> np.ndarray:
    """Random complex symmetric matrix with positive definite real part."""
    B = rng.standard_normal((dim, dim))
    S = rng.standard_normal((dim, dim))
    return B.T @ B + 0.5 * np.eye(dim) + 0.3j * (S + S.T)


@pytest.fixture
def sho_nf():
    return make_sho()


@pytest.fixture
def aniso_nf():
    return make_aniso()


@pytest.fixture
def magnetic_nf():
    return make_magnetic()


@pytest.fixture
def models_dir() -> Path:
    return Path(__file__).resolve().parents[1] / "models"
