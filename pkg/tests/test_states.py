import numpy as np
import pytest

from futuretube.geometry import ComplexInterval, GeometryError, apply, boost
from futuretube.massshell import build_grid
from futuretube.states import (FundamentalState, WaveFunction, bound_check, e_z_eval,
                               effective_mass, fidelity, gaussian_uncertainty, gram_matrix,
                               momentum_expectation, momentum_expectation_quadrature,
                               nonrel_oracle, norm_squared_closed, overlap_closed,
                               overlap_quadrature, position_expectation, random_tube_points,
                               synthesize, synthesize_closed, synthesize_xy)

K0_2 = 0.11389387274953344
K1_2 = 0.13986588181652243
K0_2PI = 0.037987722915986459 - 0.10171357546139087j
MLAM_D1 = 1.2280369298189080
MLAM_D3 = 1.8143077587637895

Z0 = ComplexInterval([0.0, 0.0], [1.0, 0.0])


def test_e_z_eval():
    st = FundamentalState(Z0)
    assert abs(e_z_eval(st, [1.0, 0.0]) - np.exp(-1)) < 1e-15
    p = np.array([np.sqrt(2), 1.0])
    a = np.array([0.4, -1.3])
    shifted = FundamentalState(ComplexInterval(Z0.x + a, Z0.y))
    ratio = e_z_eval(shifted, p) / e_z_eval(st, p)
    assert abs(ratio - np.exp(1j * (a[0] * p[0] - a[1] * p[1]))) < 1e-14
    with pytest.raises(GeometryError):
        FundamentalState(ComplexInterval([0, 0], [0.5, 1.0]))


def test_modulus_is_ray_filter(rng, grid1):
    from futuretube.massshell import ray_filter
    for z in random_tube_points(rng, 10):
        v = e_z_eval(FundamentalState(z), grid1.nodes)
        np.testing.assert_allclose(np.abs(v), ray_filter(z.y, grid1.nodes), rtol=1e-13, atol=1e-300)


def test_overlap_examples(grid3):
    kv = overlap_closed(Z0, Z0)
    assert abs(kv.value - K0_2) < 1e-14 and abs(kv.zeta - 2) < 1e-15
    kv = overlap_closed(Z0, ComplexInterval([1.0, 0.0], [1.0, 0.0]))
    assert abs(kv.zeta - (2 + 1j)) < 1e-14
    assert abs(kv.value - K0_2PI) < 1e-13
    z3 = ComplexInterval([0, 0, 0, 0], [1.0, 0, 0, 0])
    assert abs(overlap_closed(z3, z3, d=3).value - np.pi * K1_2) < 1e-13
    assert abs(overlap_quadrature(z3, z3, grid3) - np.pi * K1_2) < 1e-6 * np.pi * K1_2


def test_kernel_quadrature_pairs_d1(grid1):
    rng = np.random.default_rng(3)
    pts = random_tube_points(rng, 5)
    for a in pts:
        for b in pts:
            c = overlap_closed(a, b).value
            q = overlap_quadrature(a, b, grid1)
            assert abs(q - c) <= 1e-8 * abs(c)


def test_overlap_hermitian_and_translation(grid1):
    a = ComplexInterval([0.2, 0.5], [1.0, 0.3])
    b = ComplexInterval([-0.4, 1.0], [1.5, -0.2])
    assert abs(overlap_quadrature(a, b, grid1) - np.conj(overlap_quadrature(b, a, grid1))) < 1e-15
    s = np.array([0.7, -2.0])
    a2, b2 = ComplexInterval(a.x + s, a.y), ComplexInterval(b.x + s, b.y)
    assert abs(abs(overlap_quadrature(a2, b2, grid1)) - abs(overlap_quadrature(a, b, grid1))) < 1e-14


def test_lorentz_invariance():
    a = ComplexInterval([0.2, 0.5, 0, 0], [1.0, 0.3, 0.1, 0])
    b = ComplexInterval([-0.4, 1.0, 0.2, 0], [1.5, -0.2, 0, 0.2])
    L = boost(0.8, [0.0, 0.6, 0.8])
    v0 = overlap_closed(a, b, d=3).value
    aL = ComplexInterval(apply(a.x, L), apply(a.y, L))
    bL = ComplexInterval(apply(b.x, L), apply(b.y, L))
    assert abs(overlap_closed(aL, bL, d=3).value - v0) <= 1e-10 * abs(v0)


def test_gram_positive_definite():
    pts = random_tube_points(np.random.default_rng(8), 6)
    G = gram_matrix(pts)
    np.testing.assert_allclose(G, G.conj().T, atol=1e-15)
    assert np.min(np.linalg.eigvalsh(G)) > 0


@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
def test_norm_depends_only_on_lam(lam):
    ref = norm_squared_closed(lam)
    for r, x in [(0.0, [0, 0]), (0.9, [1.2, -3.0]), (-1.7, [5.0, 0.1])]:
        z = ComplexInterval(x, [lam * np.cosh(r), lam * np.sinh(r)])
        assert abs(overlap_closed(z, z).value - ref) <= 1e-12 * ref


def test_effective_mass_values(grid1, grid3):
    assert effective_mass(1.0) == pytest.approx(MLAM_D1, rel=1e-13)
    assert effective_mass(1.0, d=3) == pytest.approx(MLAM_D3, rel=1e-13)
    for lam in (0.1, 1.0, 10.0):
        assert effective_mass(lam) > 1.0
    with pytest.raises(ValueError):
        effective_mass(0.0)
    st = FundamentalState(ComplexInterval([0, 0], [np.cosh(0.4), np.sinh(0.4)]))
    np.testing.assert_allclose(momentum_expectation_quadrature(st, grid1), momentum_expectation(st),
                               rtol=1e-10)
    st3 = FundamentalState(ComplexInterval([0, 0, 0, 0], [1.0, 0, 0, 0]))
    assert momentum_expectation_quadrature(st3, grid3)[0] == pytest.approx(MLAM_D3, rel=1e-6)


def test_synthesis(grid1):
    w1 = ComplexInterval([0.0, 1.0], [1.0, 0.3])
    w2 = ComplexInterval([0.2, -1.0], [1.5, -0.5])
    psi = WaveFunction.from_states(grid1, [1.0, 0.5j], [w1, w2])
    rng = np.random.default_rng(5)
    for z in random_tube_points(rng, 10):
        ref = overlap_closed(w1, z).value + 0.5j * overlap_closed(w2, z).value
        assert abs(synthesize(psi, z) - ref) <= 1e-8 * abs(ref)
        lhs, rhs = bound_check(psi, z)
        assert lhs <= rhs
    e = WaveFunction.fundamental(grid1, w1)
    v = synthesize(e, w1)
    assert abs(v.imag) < 1e-15 * abs(v) and v.real > 0
    xs = np.array([[0.0, 0.0], [0.3, 1.0]])
    ys = np.array([[1.0, 0.0], [1.2, 0.1]])
    np.testing.assert_allclose(synthesize_xy(psi, xs, ys), synthesize_closed(psi, xs, ys), rtol=1e-8)
    with pytest.raises(GeometryError):
        synthesize(psi, ComplexInterval([0, 0], [-1.0, 0.0]))


def test_closed_norm(grid1):
    psi = WaveFunction.from_states(grid1, [0.7, -0.3], [Z0, ComplexInterval([0.1, 2.0], [0.8, 0.1])])
    assert psi.norm_squared() == pytest.approx(psi.norm_squared_closed(), rel=1e-9)
    with pytest.raises(ValueError):
        WaveFunction(grid1, psi.amplitudes).norm_squared_closed()


@pytest.mark.parametrize("x1", [2.0, 0.0, -1.3])
def test_position_expectation(grid1, x1):
    st = FundamentalState(ComplexInterval([0.0, x1], [1.0, 0.0]))
    assert position_expectation(st, grid1)[0] == pytest.approx(x1, abs=1e-6)
    st = FundamentalState(ComplexInterval([0.0, x1], [np.cosh(0.5), np.sinh(0.5)]))
    assert position_expectation(st, grid1)[0] == pytest.approx(x1, abs=1e-6)


def test_position_requires_t0(grid1):
    with pytest.raises(ValueError, match="translate"):
        position_expectation(FundamentalState(ComplexInterval([0.5, 0.0], [1.0, 0.0])), grid1)


def _nr_point(lam_m, u=0.05, x1=0.3):
    L = lam_m
    return ComplexInterval([0.0, x1], [L * np.sqrt(1 + u**2), L * u])


def test_nonrelativistic_limit():
    gg = build_grid(1, 1.0, 4.0, 4001)
    z = _nr_point(50.0)
    assert fidelity(WaveFunction.fundamental(gg, z), nonrel_oracle(z, gg)) >= 0.99
    z = _nr_point(0.5)
    assert fidelity(WaveFunction.fundamental(gg, z), nonrel_oracle(z, gg)) < 0.99


def test_fidelity_identity(grid1):
    psi = WaveFunction.fundamental(grid1, Z0)
    assert fidelity(psi, psi) == pytest.approx(1.0, abs=1e-14)


def test_gaussian_minimum_uncertainty():
    for z in (ComplexInterval([0.0, 1.0], [2.0, 0.1]), _nr_point(50.0), _nr_point(0.5, 0.3, -2.0)):
        dx, dp = gaussian_uncertainty(z)
        assert abs(dx * dp - 0.5) < 1e-6
