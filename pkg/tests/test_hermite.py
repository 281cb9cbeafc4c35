"""Multidimensional Hermite polynomials: three routes and orthogonality."""
import itertools
import math

import numpy as np
import pytest

from linsys_quanta import hermite
from linsys_quanta.errors import NonSymmetricInput, OrderTooLarge


def random_gamma(rng, dim: int, real: bool = False) -> np.ndarray:
    A = rng.standard_normal((dim, dim))
    g = 0.5 * (A + A.T) + dim * np.eye(dim)
    if not real:
        B = rng.standard_normal((dim, dim))
        g = g + 0.4j * (B + B.T)
    return g


def test_one_dimensional_frozen_values():
    g = np.array([[2.0]])
    assert hermite.hermite_value(g, (0,), [0.3]) == pytest.approx(1.0)
    assert hermite.hermite_value(g, (1,), [1.0]) == pytest.approx(2.0)
    assert hermite.hermite_value(g, (2,), [1.0]) == pytest.approx(2.0)
    assert hermite.hermite_value(g, (3,), [1.0]) == pytest.approx(-4.0)
    x = np.linspace(-2.0, 2.0, 9)[:, None]
    got = hermite.hermite_value(g, (3,), x)
    assert np.allclose(got, 8.0 * x[:, 0] ** 3 - 12.0 * x[:, 0], atol=1e-12)


def test_matches_classical_hermite_polynomials():
    # gamma = 2 reduces to the physicists' family on the real line
    g = np.array([[2.0]])
    x = np.linspace(-3.0, 3.0, 31)
    for n in range(11):
        coeffs = np.zeros(n + 1)
        coeffs[n] = 1.0
        want = np.polynomial.hermite.hermval(x, coeffs)
        got = hermite.hermite_value(g, (n,), x[:, None])
        assert np.allclose(got, want, rtol=1e-10, atol=1e-8)


def test_two_dimensional_frozen_value():
    g = np.array([[2.0, 0.6], [0.6, 2.0]])
    rng = np.random.default_rng(2)
    pts = rng.standard_normal((12, 2))
    got = hermite.hermite_value(g, (1, 1), pts)
    gx = pts @ g
    assert np.allclose(got, gx[:, 0] * gx[:, 1] - 0.6, atol=1e-12)
    # first orders are the linear forms themselves
    assert np.allclose(hermite.hermite_value(g, (1, 0), pts), gx[:, 0],
                       atol=1e-12)


def test_parity():
    rng = np.random.default_rng(14)
    for dim in (1, 2, 3):
        g = random_gamma(rng, dim)
        pts = rng.standard_normal((5, dim))
        for n in itertools.product(range(3), repeat=dim):
            if sum(n) > 5:
                continue
            plus = hermite.hermite_value(g, n, pts)
            minus = hermite.hermite_value(g, n, -pts)
            assert np.allclose(minus, (-1.0) ** sum(n) * plus, atol=1e-10)


def test_three_routes_agree():
    rng = np.random.default_rng(77)
    for case in range(12):
        dim = int(rng.integers(1, 4))
        real = case % 2 == 0
        g = random_gamma(rng, dim, real=real)
        x = rng.standard_normal(dim)
        for n in itertools.product(range(4), repeat=dim):
            if sum(n) > 6:
                continue
            rec = complex(hermite.hermite_value(g, n, x))
            gen = hermite.hermite_from_generating(g, n, x)
            scale = max(1.0, abs(rec))
            assert abs(rec - gen) <= 1e-10 * scale
            if real:
                rod = hermite.hermite_from_rodrigues(g, n, x)
                assert abs(rec - rod) <= 1e-10 * scale


def test_relabeling_symmetry():
    rng = np.random.default_rng(6)
    g = random_gamma(rng, 3)
    perm = np.array([2, 0, 1])
    P = np.eye(3)[perm]
    gp = P @ g @ P.T
    x = rng.standard_normal(3)
    n = (2, 1, 0)
    np_perm = tuple(np.array(n)[perm])
    a = hermite.hermite_value(g, n, x)
    b = hermite.hermite_value(gp, np_perm, P @ x)
    assert abs(complex(a) - complex(b)) <= 1e-12 * max(1.0, abs(complex(a)))


def test_hermite_box_consistent_with_single_values():
    rng = np.random.default_rng(9)
    g = random_gamma(rng, 2)
    pts = rng.standard_normal((7, 2))
    table = hermite.hermite_box(g, (2, 3), pts)
    assert set(table) == {(i, j) for i in range(3) for j in range(4)}
    for n, vals in table.items():
        assert np.allclose(vals, hermite.hermite_value(g, n, pts), atol=1e-12)


def test_orthogonality_frozen_values():
    g = 2.0 * np.eye(1)
    val, exp = hermite.orthogonality_integral(g, (0,), (0,))
    assert exp == pytest.approx(np.sqrt(np.pi), abs=1e-14)
    assert val == pytest.approx(np.sqrt(np.pi), rel=1e-10)
    val, exp = hermite.orthogonality_integral(g, (2,), (2,))
    assert exp == pytest.approx(8.0 * np.sqrt(np.pi), abs=1e-12)
    assert val == pytest.approx(8.0 * np.sqrt(np.pi), rel=1e-10)
    val, exp = hermite.orthogonality_integral(g, (1,), (2,))
    assert exp == 0.0
    assert abs(val) <= 1e-10

    g2 = 2.0 * np.eye(2)
    val, exp = hermite.orthogonality_integral(g2, (1, 0), (1, 0))
    assert exp == pytest.approx(2.0 * np.pi, abs=1e-12)
    assert val == pytest.approx(2.0 * np.pi, rel=1e-10)
    val, _ = hermite.orthogonality_integral(g2, (1, 0), (0, 1))
    assert abs(val) <= 1e-10


def test_orthogonality_requires_diagonal_gamma():
    with pytest.raises(ValueError):
        hermite.orthogonality_integral(np.array([[2.0, 0.5], [0.5, 2.0]]),
                                       (0, 0), (0, 0))


def test_order_caps_and_input_guards():
    g = 2.0 * np.eye(1)
    with pytest.raises(OrderTooLarge):
        hermite.hermite_from_generating(g, (13,), [0.0])
    with pytest.raises(OrderTooLarge):
        hermite.hermite_from_rodrigues(g, (9,), [0.0])
    with pytest.raises(ValueError):
        hermite.hermite_from_rodrigues(np.array([[2.0 + 1.0j]]), (1,), [0.0])
    with pytest.raises(NonSymmetricInput):
        hermite.hermite_value(np.array([[1.0, 0.2], [0.0, 1.0]]), (0, 0),
                              [0.0, 0.0])
    with pytest.raises(ValueError):
        hermite.hermite_value(g, (1, 1), [0.0])
    with pytest.raises(ValueError):
        hermite.hermite_value(g, (-1,), [0.0])
    # recurrence route carries no order cap
    big = hermite.hermite_value(g, (20,), [0.5])
    assert math.isfinite(float(np.real(big)))
