import numpy as np
import pytest
from scipy.special import kv as scipy_kv

from futuretube.specfun import (BesselConvergenceError, BesselDomainError, bessel_k,
                                bessel_k_nu_monotonicity_check, kv)

# reference values from mpmath.besselk at 25 digits
K0_2 = 0.11389387274953344
K1_2 = 0.13986588181652243
K2_2 = 0.25375975456605586
KHALF_2 = 0.11993777196806145
K0_2PI = 0.037987722915986459 - 0.10171357546139087j


@pytest.mark.parametrize("nu, w, ref", [(0, 2, K0_2), (1, 2, K1_2), (2, 2, K2_2),
                                        (0.5, 2, KHALF_2), (0, 2 + 1j, K0_2PI)])
def test_reference_values(nu, w, ref):
    r = bessel_k(nu, w)
    assert abs(r.value - ref) <= 1e-13 * abs(ref)
    assert 0 <= r.estimated_abs_error < 1e-10


def test_half_integer_closed_form():
    for w in (0.3, 2.0, 7.5):
        assert abs(kv(0.5, w) - np.sqrt(np.pi / (2 * w)) * np.exp(-w)) < 1e-14


def test_against_scipy_on_complex_grid(rng):
    w = rng.uniform(0.1, 30, 400) + 1j * rng.uniform(-30, 30, 400)
    for nu in (0.0, 0.5, 1.0, 2.0, 3.0):
        v = bessel_k(nu, w)
        ref = scipy_kv(nu, w)
        assert np.max(np.abs(v.value - ref) / np.abs(ref)) < 1e-12
        assert np.all(v.estimated_abs_error < 1e-10)


def test_conjugation_symmetry(rng):
    w = rng.uniform(0.1, 10, 50) + 1j * rng.uniform(-10, 10, 50)
    for nu in (0, 1.5):
        a, b = kv(nu, np.conj(w)), np.conj(kv(nu, w))
        assert np.max(np.abs(a - b) / np.abs(b)) < 1e-10


def test_recurrence():
    w = np.linspace(0.5, 10, 40)
    for nu in (1, 2):
        lhs = kv(nu + 1, w) - kv(nu - 1, w)
        rhs = 2 * nu / w * kv(nu, w)
        assert np.max(np.abs(lhs - rhs) / np.abs(rhs)) < 1e-8


def test_large_argument():
    w = 50.0
    asym = np.sqrt(np.pi / (2 * w)) * np.exp(-w)
    for nu in (0, 1, 3):
        assert abs(kv(nu, w).real / asym - 1) < 0.02 + nu**2 / w


def test_errors():
    with pytest.raises(BesselDomainError):
        bessel_k(0, -1.0)
    with pytest.raises(BesselDomainError):
        bessel_k(-1, 1.0)
    with pytest.raises(BesselConvergenceError) as exc:
        bessel_k(0, 2.0, rtol=1e-30, max_level=2)
    assert abs(exc.value.best.value - K0_2) < 1e-6


def test_shapes():
    assert isinstance(bessel_k(0, 1.0).value, complex)
    assert bessel_k(1, np.ones((3, 4))).value.shape == (3, 4)


@pytest.mark.parametrize("w, n1, n2", [(2, 0, 1), (2, 1, 2), (10, 0, 0.5)])
def test_monotonic_in_order(w, n1, n2):
    assert bessel_k_nu_monotonicity_check(w, n1, n2)
    assert not bessel_k_nu_monotonicity_check(w, n2, n1)
