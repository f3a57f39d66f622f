"""Flat phase-space slices ``Gamma = Sigma_t - i Omega_lam`` of the future tube.

A slice is the product of the flat time slice ``x0 = t0`` with the
hyperboloid ``y^2 = lam^2`` in the forward cone.  In ``d = 1`` the
hyperboloid is parametrised by rapidity, ``y = lam (cosh s, sinh s)``, and
the spatial measure ``d y1 = lam cosh s ds`` is used (not the invariant
measure on the hyperboloid).  With that choice the ``y``-marginal

    W(p) = int dy1 exp(-2 y.p / hbar) = 2 lam K_1(2 lam m / hbar) E(p) / m

is proportional to ``E`` and the phase-space norm

    ||psi||^2_Gamma = N int dx1 dy1 |psi(x - i y)|^2

equals ``||a||^2`` for ``N = m / (2 pi hbar lam K_1(2 lam m / hbar))``.
:func:`calibrate` determines ``N`` numerically and reports this value as a
cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .geometry import ComplexInterval, GeometryError, metric
from .massshell import MassShellGrid, build_grid
from .specfun import kv
from .states import WaveFunction, kernel, synthesize_grid, synthesize_xy

TAIL_TOL = 1e-6
CURRENT_TAIL_TOL = 1e-10


class CalibrationError(RuntimeError):
    pass


class TruncationError(RuntimeError):
    """Raised when the mass near the slice boundary exceeds the tolerance."""

    def __init__(self, message, estimate):
        super().__init__(f"{message} (tail estimate {estimate:.3e})")
        self.estimate = estimate


class NotCalibratedError(RuntimeError):
    pass


@dataclass(frozen=True)
class PhaseSpaceSlice:
    """Flat slice ``x0 = t0`` times the hyperboloid ``y^2 = lam^2`` (``d = 1``)."""

    t0: float = 0.0
    lam: float = 1.0
    m: float = 1.0
    hbar: float = 1.0
    d: int = 1
    x_extent: float = 20.0
    x_step: float = 0.1
    x_center: float = 0.0
    s_max: float = 12.0
    s_step: float = 0.1
    N: float | None = None

    def __post_init__(self):
        if self.d != 1:
            raise ValueError("phase-space slices are implemented for d = 1")
        if self.lam <= 0 or self.m <= 0 or self.hbar <= 0:
            raise ValueError("lam, m and hbar must be positive")
        if self.x_step <= 0 or self.s_step <= 0 or self.x_extent <= 0 or self.s_max <= 0:
            raise ValueError("grid extents and steps must be positive")
        if self.N is not None and not self.N > 0:
            raise ValueError("N must be positive")

    @property
    def D(self) -> int:
        return self.d + 1

    @property
    def calibrated(self) -> bool:
        return self.N is not None

    @property
    def x_nodes(self) -> np.ndarray:
        k = int(round(self.x_extent / self.x_step))
        x1 = self.x_center + self.x_step * np.arange(-k, k + 1)
        return np.column_stack([np.full_like(x1, self.t0), x1])

    @property
    def rapidity(self) -> np.ndarray:
        k = int(round(self.s_max / self.s_step))
        return self.s_step * np.arange(-k, k + 1)

    @property
    def y_nodes(self) -> np.ndarray:
        s = self.rapidity
        return self.lam * np.column_stack([np.cosh(s), np.sinh(s)])

    @property
    def y_weights(self) -> np.ndarray:
        # trapezoid in s; the end nodes carry a negligible share
        w = self.lam * np.cosh(self.rapidity) * self.s_step
        w[0] *= 0.5
        w[-1] *= 0.5
        return w

    def require_calibrated(self) -> float:
        if self.N is None:
            raise NotCalibratedError("phase-space slice is not calibrated; call calibrate() first")
        return self.N


class Calibration(NamedTuple):
    N: float
    flatness: float          # max relative deviation of W/E from its mean
    W_over_E: float          # mean of W/E on the sampled momenta
    N_analytic: float        # m / (2 pi hbar lam K_1(2 lam m / hbar))
    slice: PhaseSpaceSlice


class CurrentValue(NamedTuple):
    j: np.ndarray            # microlocal current, lower index
    J: np.ndarray | None     # local current at Re z, lower index
    J_tail: float = 0.0


def analytic_N(lam: float, m: float = 1.0, hbar: float = 1.0) -> float:
    """Closed-form ``N`` for flat ``d = 1`` slices."""
    return m / (2 * np.pi * hbar * lam * kv(1, 2 * lam * m / hbar).real)


def y_marginal(gamma: PhaseSpaceSlice, p) -> np.ndarray:
    """``W(p) = sum_y w_y exp(-2 y.p / hbar)`` for momenta ``p`` (N, D)."""
    p = np.atleast_2d(np.asarray(p, dtype=float))
    y = gamma.y_nodes
    yp = y[:, 0][None, :] * p[:, [0]] - y[:, 1][None, :] * p[:, [1]]
    return np.exp(-2 * yp / gamma.hbar) @ gamma.y_weights


def _reference_state(gamma: PhaseSpaceSlice, grid: MassShellGrid) -> WaveFunction:
    w = ComplexInterval([gamma.t0, gamma.x_center], [gamma.hbar / gamma.m, 0.0])
    return WaveFunction.fundamental(grid, w)


def calibrate(gamma: PhaseSpaceSlice, grid: MassShellGrid | None = None,
              flat_tol: float = 1e-4, p_rapidity: float = 4.0) -> Calibration:
    """Fix ``N`` on ``gamma`` from a reference fundamental state.

    The flatness of ``W(p)/E(p)`` is checked on the grid momenta with
    ``|rapidity| <= p_rapidity``; a deviation above ``flat_tol`` raises
    :class:`CalibrationError`.
    """
    if grid is None:
        grid = build_grid(1, gamma.m, hbar=gamma.hbar)
    if grid.d != gamma.d or grid.m != gamma.m or grid.hbar != gamma.hbar:
        raise ValueError("mass-shell grid does not match the slice parameters")
    sel = np.abs(grid.rapidity) <= p_rapidity
    p = grid.nodes[sel]
    ratio = y_marginal(gamma, p) / p[:, 0]
    mean = float(np.mean(ratio))
    flat = float(np.max(np.abs(ratio / mean - 1)))
    if flat > flat_tol:
        raise CalibrationError(f"W(p)/E(p) is not flat: deviation {flat:.3e}")
    psi = _reference_state(gamma, grid)
    raw = _slice_integral(psi, gamma)
    N = psi.norm_squared() / raw
    cal = replace(gamma, N=float(N))
    return Calibration(float(N), flat, mean, analytic_N(gamma.lam, gamma.m, gamma.hbar), cal)


def _edge_fraction(dens: np.ndarray, band: int = 5) -> float:
    """Share of ``|dens|`` (shape (Nx, Ny)) in the outer ``band`` rows/columns."""
    tot = float(np.sum(np.abs(dens)))
    if tot == 0:
        return 0.0
    a = np.abs(dens)
    inner = float(np.sum(a[band:-band, band:-band]))
    return (tot - inner) / tot


def _slice_density(psi: WaveFunction, gamma: PhaseSpaceSlice) -> np.ndarray:
    P = synthesize_grid(psi, gamma.x_nodes, gamma.y_nodes)
    return np.abs(P) ** 2 * (gamma.x_step * gamma.y_weights)[None, :]


def _slice_integral(psi: WaveFunction, gamma: PhaseSpaceSlice, tail_tol: float = TAIL_TOL) -> float:
    dens = _slice_density(psi, gamma)
    tail = _edge_fraction(dens)
    if tail > tail_tol:
        raise TruncationError("state not contained in the slice grid", tail)
    return math.fsum(dens.ravel())


def slice_norm(psi: WaveFunction, gamma: PhaseSpaceSlice, tail_tol: float = TAIL_TOL) -> float:
    """``N sum |psi(x - i y)|^2`` over the slice grid."""
    N = gamma.require_calibrated()
    return N * _slice_integral(psi, gamma, tail_tol)


def reproduce(psi: WaveFunction, gamma: PhaseSpaceSlice, zp: ComplexInterval,
              tail_tol: float = TAIL_TOL) -> complex:
    """``N int_Gamma psi(z) K(z' - conj z)``; equals ``psi(z')`` anywhere in the tube."""
    N = gamma.require_calibrated()
    if not zp.in_future_tube():
        raise GeometryError("z' must lie in the future tube")
    g = psi.grid
    xs, ys = gamma.x_nodes, gamma.y_nodes
    P = synthesize_grid(psi, xs, ys)
    wx, wy = np.broadcast_arrays(zp.x[None, None, :] - xs[:, None, :],
                                 zp.y[None, None, :] + ys[None, :, :])
    K = kernel(wx, wy, g.m, g.d, g.hbar)
    dens = P * K * (gamma.x_step * gamma.y_weights)[None, :]
    tail = _edge_fraction(dens)
    if tail > tail_tol:
        raise TruncationError("reproducing integral truncated", tail)
    return N * complex(math.fsum(dens.real.ravel()), math.fsum(dens.imag.ravel()))


def _lower(p: np.ndarray) -> np.ndarray:
    return p * np.diag(metric(p.shape[-1]))


def _j_from(psi_val, dpsi_val, N):
    # j_mu = -2 N Im(d_mu psi conj(psi))
    return -2 * N * np.imag(dpsi_val * np.conj(psi_val)[..., None])


def _lam_max(lam: float, m: float, hbar: float, tol: float) -> tuple[float, float]:
    """Outer radius of ``B_lam`` with the relative ``y``-tail below ``tol``."""
    ref = lam * kv(1, 2 * lam * m / hbar).real
    k = 8
    while True:
        lm = lam + k * hbar / m
        tail = lm * kv(1, 2 * lm * m / hbar).real / ref
        if tail < tol:
            return lm, float(tail)
        k += 1


def _ball_nodes(gamma: PhaseSpaceSlice, n_lam: int, tol: float):
    """Nodes ``y = lam' (cosh s, sinh s)`` of ``B_lam`` with flat weights ``lam' dlam' ds``."""
    lm, tail = _lam_max(gamma.lam, gamma.m, gamma.hbar, tol)
    t, wt = np.polynomial.legendre.leggauss(n_lam)
    lp = gamma.lam + 0.5 * (lm - gamma.lam) * (t + 1)
    wl = 0.5 * (lm - gamma.lam) * wt * lp
    s = gamma.rapidity
    ws = np.full(len(s), gamma.s_step)
    ws[0] = ws[-1] = 0.5 * gamma.s_step
    return lp, wl, s, ws, tail


def current(psi: WaveFunction, z: ComplexInterval, gamma: PhaseSpaceSlice | None = None,
            n_lam: int = 32) -> CurrentValue:
    """Microlocal current ``j`` at ``z`` and, if a calibrated slice is given,
    the local current ``J`` at ``Re z`` integrated over ``B_lam`` of that slice.

    Without a slice ``N = 1`` and ``J`` is ``None``.
    """
    if not z.in_future_tube():
        raise GeometryError("z must lie in the future tube")
    g = psi.grid
    N = 1.0 if gamma is None else gamma.require_calibrated()
    ins = -1j * _lower(g.nodes) / g.hbar
    psi_val = synthesize_xy(psi, z.x, z.y)[0]
    dpsi = np.array([synthesize_xy(psi, z.x, z.y, insert=ins[:, mu])[0] for mu in range(g.D)])
    j = _j_from(psi_val, dpsi, N)
    if gamma is None:
        return CurrentValue(j, None)
    lp, wl, s, ws, tail = _ball_nodes(gamma, n_lam, CURRENT_TAIL_TOL)
    J = np.zeros(g.D)
    for lam_k, wl_k in zip(lp, wl):
        ys = lam_k * np.column_stack([np.cosh(s), np.sinh(s)])
        xs = np.broadcast_to(z.x, ys.shape)
        pv = synthesize_xy(psi, xs, ys)
        dv = np.stack([synthesize_xy(psi, xs, ys, insert=ins[:, mu]) for mu in range(g.D)], axis=-1)
        J += wl_k * (ws @ _j_from(pv, dv, N))
    return CurrentValue(j, J, tail)


def total_charge(psi: WaveFunction, gamma: PhaseSpaceSlice, n_lam: int = 32) -> tuple[float, float]:
    """``int_Sigma dx1 J_0(x)`` on the flat slice of ``gamma``; returns ``(charge, tail)``."""
    N = gamma.require_calibrated()
    g = psi.grid
    xs = gamma.x_nodes
    lp, wl, s, ws, tail = _ball_nodes(gamma, n_lam, CURRENT_TAIL_TOL)
    ins0 = -1j * g.nodes[:, 0] / g.hbar
    # columns of the insert matrix: psi and d_0 psi share one matrix product
    Ex = np.exp(-1j * (xs[:, 0:1] * g.nodes[None, :, 0] - xs[:, 1:2] * g.nodes[None, :, 1]) / g.hbar)
    coef = g.weights * psi.amplitudes
    total = []
    for lam_k, wl_k in zip(lp, wl):
        ys = lam_k * np.column_stack([np.cosh(s), np.sinh(s)])
        Ey = np.exp(-(ys[:, 0:1] * g.nodes[None, :, 0] - ys[:, 1:2] * g.nodes[None, :, 1]) / g.hbar)
        B = np.concatenate([(Ey * coef).T, (Ey * (coef * ins0)).T], axis=1)
        R = Ex @ B
        pv, dv = R[:, :len(s)], R[:, len(s):]
        j0 = -2 * N * np.imag(dv * np.conj(pv))
        total.append(wl_k * gamma.x_step * float(np.sum(j0 @ ws)))
    return math.fsum(total), tail


def conservation_residual(psi: WaveFunction, z: ComplexInterval) -> float:
    """Relative size of ``d^2 rho / dx_mu dy^mu`` at ``z``.

    All derivatives are exact momentum insertions under the synthesis sum.
    Expanding ``rho = psi conj(psi)`` the contraction is
    ``2 Im(box psi conj(psi))`` plus cross terms ``-i eta |d psi|^2 + c.c.``
    that cancel identically; the result is divided by the sum of the moduli
    of all contributing terms.
    """
    if not z.in_future_tube():
        raise GeometryError("z must lie in the future tube")
    g = psi.grid
    pl = -1j * _lower(g.nodes) / g.hbar
    eta = np.diag(metric(g.D))
    psi_v = synthesize_xy(psi, z.x, z.y)[0]
    d1 = np.array([synthesize_xy(psi, z.x, z.y, insert=pl[:, mu])[0] for mu in range(g.D)])
    d2 = np.array([synthesize_xy(psi, z.x, z.y, insert=pl[:, mu] ** 2)[0] for mu in range(g.D)])
    box_terms = eta * d2 * np.conj(psi_v)
    cross = eta * np.abs(d1) ** 2
    value = 2 * np.imag(np.sum(box_terms)) + np.real(np.sum(-1j * cross + 1j * cross))
    scale = 2 * np.sum(np.abs(box_terms)) + 2 * np.sum(np.abs(cross))
    if scale == 0:
        return 0.0
    return float(abs(value) / scale)


__all__ = [
    "PhaseSpaceSlice", "Calibration", "CurrentValue", "CalibrationError",
    "TruncationError", "NotCalibratedError", "analytic_N", "y_marginal",
    "calibrate", "slice_norm", "reproduce", "current", "total_charge",
    "conservation_residual",
]
