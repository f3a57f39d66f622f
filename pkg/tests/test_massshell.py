import math

import numpy as np
import pytest

from futuretube.geometry import GeometryError, apply, boost
from futuretube.massshell import (build_grid, filter_fwhm, filter_peak, integrate, ray_filter)

K0_2 = 0.11389387274953344
PI_K1_2 = 0.43940162680264510


def test_nodes_on_shell(grid1, grid3):
    for g in (grid1, grid3):
        E = g.nodes[:, 0]
        p2 = np.sum(g.nodes[:, 1:] ** 2, axis=1)
        assert np.max(np.abs(E - np.sqrt(g.m**2 + p2)) / E) < 1e-14
        assert np.all(g.weights >= 0) and np.sum(g.weights > 0) > len(g) // 2


def test_d1_integrals(grid1):
    E = grid1.energy
    assert abs(integrate(np.exp(-2 * E), grid1) - K0_2) < 1e-9
    assert abs(integrate(grid1.nodes[:, 1] / E * np.exp(-2 * E), grid1)) < 1e-12
    assert integrate(np.zeros(len(grid1)), grid1) == 0


def test_d3_integral(grid3):
    assert abs(integrate(np.exp(-2 * grid3.energy), grid3) - PI_K1_2) < 1e-6


def test_grid_convergence():
    a = integrate(np.exp(-2 * build_grid(1, n=512).energy), build_grid(1, n=512))
    g2 = build_grid(1, n=1023)
    assert abs(integrate(np.exp(-2 * g2.energy), g2) - a) < 1e-10


def test_exponential_law(grid1):
    y = np.array([1.0, 0.0])
    f1 = ray_filter(y, grid1.nodes) ** 2
    f2 = ray_filter(2 * y, grid1.nodes)
    assert integrate(f1, grid1) == pytest.approx(integrate(f2, grid1), rel=1e-15)


def test_integrate_tail_and_errors(grid1):
    v, tail = integrate(np.exp(-2 * grid1.energy), grid1, with_tail=True)
    assert tail < 1e-300 or tail < 1e-15 * v
    with pytest.raises(ValueError):
        integrate(np.ones(3), grid1)


def test_build_grid_errors():
    with pytest.raises(ValueError):
        build_grid(2)
    with pytest.raises(ValueError):
        build_grid(1, n=8)
    with pytest.raises(ValueError):
        build_grid(1, m=0)


def test_ray_filter_values():
    assert ray_filter([1, 0], [1, 0]) == pytest.approx(math.exp(-1))
    assert ray_filter([4, 0], [math.sqrt(2), 1]) == pytest.approx(math.exp(-4 * math.sqrt(2)))
    assert ray_filter([4, 0], [math.sqrt(2), 1]) == pytest.approx(0.0034934892766462, rel=1e-13)
    with pytest.raises(GeometryError, match="past tube diverges"):
        ray_filter([-1, 0], [1, 0])


def test_reverse_triangle(rng):
    for _ in range(1000):
        a, b = rng.uniform(-2, 2, 2)
        la, lb = rng.uniform(0.1, 3, 2)
        y = la * np.array([np.cosh(a), np.sinh(a)])
        p = lb * np.array([np.cosh(b), np.sinh(b)])
        assert y[0] * p[0] - y[1] * p[1] >= la * lb * (1 - 1e-14)
    y = np.array([np.cosh(0.3), np.sinh(0.3)])
    assert y[0] * y[0] - y[1] * y[1] == pytest.approx(1.0)


def test_filter_peak_and_width(grid1):
    np.testing.assert_allclose(filter_peak([2.0, 0.0], grid1), [1.0, 0.0], atol=grid1.ds)
    r = 0.62
    q = filter_peak([np.cosh(r), np.sinh(r)], grid1)[1]
    assert abs(q - np.sinh(r)) < 2 * grid1.ds * np.cosh(r)
    widths = [filter_fwhm([lam, 0.0], grid1) for lam in (1, 2, 4)]
    assert widths[0] > widths[1] > widths[2]


def test_filter_bound(grid1):
    lam = 1.5
    R = ray_filter([lam, 0.0], grid1.nodes)
    assert np.all(R >= 0) and np.all(R[np.abs(grid1.rapidity) < 5] > 0) and np.all(R <= math.exp(-lam * grid1.m) * (1 + 1e-15))


def test_boost_is_lattice_shift(grid1):
    k = 10
    s = k * grid1.ds
    y = np.array([1.0, 0.0])
    L = boost(s, [1.0])
    R_boost = ray_filter(apply(y, L), grid1.nodes)
    # p Lambda^{-1} at node i equals node i - k
    R_shift = ray_filter(y, grid1.nodes[np.arange(len(grid1)) - k])
    inner = slice(k, len(grid1) - k)
    np.testing.assert_allclose(R_boost[inner], R_shift[inner], rtol=1e-11, atol=1e-300)
