import numpy as np
import pytest

from futuretube.geometry import ComplexInterval, GeometryError
from futuretube.massshell import build_grid
from futuretube.phasespace import (CalibrationError, NotCalibratedError, PhaseSpaceSlice,
                                   TruncationError, analytic_N, calibrate, conservation_residual,
                                   current, reproduce, slice_norm, total_charge, y_marginal)
from futuretube.states import WaveFunction, random_tube_points, synthesize

K0_2 = 0.11389387274953344
K1_2 = 0.13986588181652243
N_LAM1 = 1.1379111261792673   # m / (2 pi lam K1(2 lam m)) at lam = m = 1
N_LAM2 = 6.374612780004049    # same at lam = 2


def test_slice_nodes_on_hyperboloid():
    s = PhaseSpaceSlice(t0=0.0, lam=1.7)
    y = s.y_nodes
    # relative to the Euclidean size, since y0^2 - y1^2 cancels at large rapidity
    assert np.max(np.abs(y[:, 0] ** 2 - y[:, 1] ** 2 - 1.7**2) / np.sum(y**2, axis=1)) < 1e-14
    np.testing.assert_allclose(y, 1.7 * np.column_stack([np.cosh(s.rapidity), np.sinh(s.rapidity)]),
                               rtol=1e-15)
    np.testing.assert_allclose(s.y_weights[1:-1], 1.7 * np.cosh(s.rapidity[1:-1]) * s.s_step)
    assert np.all(s.x_nodes[:, 0] == 0.0)
    assert not s.calibrated


def test_slice_validation():
    with pytest.raises(ValueError):
        PhaseSpaceSlice(t0=0.0, lam=1.0, d=3)
    with pytest.raises(ValueError):
        PhaseSpaceSlice(t0=0.0, lam=-1.0)
    with pytest.raises(NotCalibratedError):
        PhaseSpaceSlice(t0=0.0, lam=1.0).require_calibrated()


def test_y_marginal_identity(slice11):
    r = np.array([-2.0, 0.0, 0.7, 3.0])
    p = np.column_stack([np.cosh(r), np.sinh(r)])
    np.testing.assert_allclose(y_marginal(slice11, p), 2 * K1_2 * np.cosh(r), rtol=1e-10)


def test_calibration_values(calibrations):
    c = calibrations[(0.0, 1.0)]
    assert c.N == pytest.approx(N_LAM1, rel=1e-6)
    assert c.N_analytic == pytest.approx(N_LAM1, rel=1e-14)
    assert c.flatness < 1e-8
    assert c.W_over_E == pytest.approx(2 * K1_2, rel=1e-10)
    assert calibrations[(0.0, 2.0)].N == pytest.approx(N_LAM2, rel=1e-6)
    assert analytic_N(2.0) == pytest.approx(N_LAM2, rel=1e-14)
    for cal in calibrations.values():
        assert cal.N > 0 and cal.slice.calibrated


def test_calibration_flatness_failure(grid1):
    # a y-range too short to contain the rapidity shift breaks W ~ E
    bad = PhaseSpaceSlice(t0=0.0, lam=1.0, s_max=2.0)
    with pytest.raises(CalibrationError):
        calibrate(bad, grid1)
    with pytest.raises(ValueError):
        calibrate(PhaseSpaceSlice(t0=0.0, lam=1.0, m=2.0), grid1)


def test_plancherel(test_states, calibrations):
    for psi in test_states:
        ref = psi.norm_squared_closed()
        for cal in calibrations.values():
            assert slice_norm(psi, cal.slice) == pytest.approx(ref, rel=1e-4)


def test_plancherel_reference_value(test_states, slice11):
    assert slice_norm(test_states[0], slice11) == pytest.approx(K0_2, rel=1e-4)


def test_truncation_error(grid1, slice11):
    far = WaveFunction.fundamental(grid1, ComplexInterval([0.0, 19.0], [1.0, 0.0]))
    with pytest.raises(TruncationError) as exc:
        slice_norm(far, slice11)
    assert exc.value.estimate > 1e-6


def test_reproduce(test_states, slice11):
    psi = test_states[1]
    for zp in (ComplexInterval([0.0, 0.4], [1.0, 0.0]),
               ComplexInterval([0.5, -0.3], [1.3, 0.2]),
               ComplexInterval([-0.5, 0.8], [0.9, -0.1])):
        ref = synthesize(psi, zp)
        assert abs(reproduce(psi, slice11, zp) - ref) <= 1e-3 * abs(ref)
    w = ComplexInterval([0.0, 0.0], [1.0, 0.0])
    e = test_states[0]
    zp = ComplexInterval([0.3, 0.2], [1.1, 0.1])
    with pytest.raises(GeometryError):
        reproduce(e, slice11, ComplexInterval([0, 0], [0.1, 1.0]))
    from futuretube.states import overlap_closed
    ref = overlap_closed(w, zp).value
    assert abs(reproduce(e, slice11, zp) - ref) <= 1e-3 * abs(ref)


def test_conservation_residual(test_states):
    pts = random_tube_points(np.random.default_rng(21), 20)
    for psi in test_states:
        assert max(conservation_residual(psi, z) for z in pts) < 1e-10


def test_current_properties(grid1, test_states):
    w = ComplexInterval([0.0, 0.0], [1.0, 0.0])
    j = current(test_states[0], w).j
    assert j.dtype == float and j[0] > 0
    zero = WaveFunction(grid1, np.zeros(len(grid1), dtype=complex))
    np.testing.assert_array_equal(current(zero, w).j, 0.0)
    # a boosted state moves along yhat: j^1 / j^0 = -j_1 / j_0 has the sign of y_1
    for r in (0.8, -0.6):
        wb = ComplexInterval([0.0, 0.0], [np.cosh(r), np.sinh(r)])
        jb = current(WaveFunction.fundamental(grid1, wb), wb).j
        assert np.sign(-jb[1]) == np.sign(r)
        assert -jb[1] / jb[0] == pytest.approx(np.tanh(r), rel=1e-6)


def test_local_current_and_charge(test_states, calibrations):
    psi = test_states[0]
    gamma = calibrations[(0.0, 1.0)].slice
    cv = current(psi, ComplexInterval([0.0, 0.0], [1.0, 0.0]), gamma)
    assert cv.J[0] > 0 and abs(cv.J[1]) < 1e-12 * cv.J[0]
    assert cv.J_tail < 1e-10
    q, tail = total_charge(psi, gamma)
    assert q == pytest.approx(K0_2, rel=1e-4) and tail < 1e-10
