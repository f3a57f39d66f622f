"""Fundamental states ``e_z``, their Bessel-kernel overlaps and wavefunctions.

Conventions: ``e_z(p) = exp(i conj(z).p / hbar)`` on the mass shell, the
inner product ``<a, b> = int dmu a conj(b)`` is linear in its first slot, and
``psi(z) = <a, e_z> = int dmu a(p) exp(-i z.p / hbar)``.  With these,

    <e_z, e_z'> = K(z' - conj(z)),
    K(w) = (2 pi m c hbar / zeta(w))^nu  K_nu(m c zeta(w) / hbar),  nu = (d-1)/2.

Momentum-space quadrature uses ``c = 1``; ``c`` only enters closed forms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .geometry import (ComplexInterval, GeometryError, in_future_cone,
                       minkowski_dot, minkowski_square, zeta)
from .massshell import MassShellGrid, integrate
from .specfun import kv


@dataclass(frozen=True)
class FundamentalState:
    z: ComplexInterval
    m: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not self.z.in_future_tube():
            raise GeometryError("e_z is only defined for z in the future tube")

    @property
    def lam(self) -> float:
        return self.z.lam


class KernelValue(NamedTuple):
    w: ComplexInterval
    zeta: complex
    value: complex


def e_z_eval(state: FundamentalState, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    z = state.z
    return np.exp(1j * minkowski_dot(p, z.x) / state.hbar) * np.exp(
        -minkowski_dot(p, z.y) / state.hbar)


def kernel(wx, wy, m: float = 1.0, d: int = 1, hbar: float = 1.0, c: float = 1.0):
    """Closed-form reproducing kernel at ``w = wx - i wy`` (vectorised).

    ``wy`` must be future timelike; the real part of ``m zeta`` is then at
    least ``m |wy|`` so the Bessel argument stays in the right half-plane.
    """
    wx = np.asarray(wx, dtype=float)
    wy = np.asarray(wy, dtype=float)
    if not np.all(in_future_cone(wy)):
        raise GeometryError("kernel argument outside the future tube")
    zt = zeta(wx, wy)
    nu = 0.5 * (d - 1)
    mc = m * c
    val = kv(nu, mc * zt / hbar)
    if nu:
        val = val * (2 * np.pi * mc * hbar / zt) ** nu
    return val


def overlap_closed(z: ComplexInterval, zp: ComplexInterval, m: float = 1.0,
                   d: int = 1, hbar: float = 1.0, c: float = 1.0) -> KernelValue:
    """``<e_z, e_z'>`` from the Bessel kernel at ``w = z' - conj(z)``."""
    w = ComplexInterval(zp.x - z.x, zp.y + z.y)
    if not w.in_future_tube():
        raise GeometryError("w = z' - conj(z) is not in the future tube")
    zt = complex(zeta(w.x, w.y))
    return KernelValue(w, zt, complex(kernel(w.x, w.y, m, d, hbar, c)))


def overlap_quadrature(z: ComplexInterval, zp: ComplexInterval, grid: MassShellGrid) -> complex:
    """``<e_z, e_z'>`` summed on the mass-shell grid."""
    ez = e_z_eval(FundamentalState(z, grid.m, grid.hbar), grid.nodes)
    ezp = e_z_eval(FundamentalState(zp, grid.m, grid.hbar), grid.nodes)
    return integrate(ez * np.conj(ezp), grid)


def norm_squared_closed(lam: float, m: float = 1.0, d: int = 1, hbar: float = 1.0,
                        c: float = 1.0) -> float:
    """``||e_z||^2``; depends on ``z`` only through ``lam = |y|``."""
    nu = 0.5 * (d - 1)
    a = 2 * lam * m * c / hbar
    val = kv(nu, a).real
    if nu:
        val *= (np.pi * m * c * hbar / lam) ** nu
    return float(val)


def effective_mass(lam: float, m: float = 1.0, d: int = 1, hbar: float = 1.0,
                   c: float = 1.0) -> float:
    """``m_lam = m K_{nu+1}(2 lam m c/hbar) / K_nu(2 lam m c/hbar)``."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    nu = 0.5 * (d - 1)
    a = 2 * lam * m * c / hbar
    return float(m * kv(nu + 1, a).real / kv(nu, a).real)


def momentum_expectation(state: FundamentalState, d: int | None = None, c: float = 1.0) -> np.ndarray:
    """Closed form ``<P> = m_lam c yhat``."""
    y = state.z.y
    d = y.size - 1 if d is None else d
    lam = state.lam
    return effective_mass(lam, state.m, d, state.hbar, c) * c * y / lam


def momentum_expectation_quadrature(state: FundamentalState, grid: MassShellGrid) -> np.ndarray:
    rho = np.exp(-2 * minkowski_dot(grid.nodes, state.z.y) / grid.hbar)
    norm = integrate(rho, grid)
    return np.array([integrate(grid.nodes[:, mu] * rho, grid) for mu in range(grid.D)]) / norm


# -- wavefunctions -----------------------------------------------------------

@dataclass(frozen=True)
class WaveFunction:
    """Momentum amplitudes ``a(p)`` on a grid.

    ``components`` optionally records ``a = sum c_i e_{w_i}`` so that every
    derived quantity has a closed-form kernel counterpart.
    """

    grid: MassShellGrid
    amplitudes: np.ndarray = field(repr=False)
    components: tuple = ()

    @classmethod
    def from_states(cls, grid: MassShellGrid, coeffs: Sequence[complex],
                    points: Sequence[ComplexInterval]) -> "WaveFunction":
        a = np.zeros(len(grid), dtype=complex)
        for cf, w in zip(coeffs, points):
            a += cf * e_z_eval(FundamentalState(w, grid.m, grid.hbar), grid.nodes)
        return cls(grid, a, tuple(zip(coeffs, points)))

    @classmethod
    def fundamental(cls, grid: MassShellGrid, w: ComplexInterval) -> "WaveFunction":
        return cls.from_states(grid, [1.0], [w])

    @property
    def is_closed_form(self) -> bool:
        return bool(self.components)

    def norm_squared(self) -> float:
        return float(integrate(np.abs(self.amplitudes) ** 2, self.grid).real)

    def norm_squared_closed(self) -> float:
        """``||a||^2 = c^H G c`` with the kernel Gram matrix."""
        if not self.components:
            raise ValueError("wavefunction has no closed-form tag")
        coeffs = np.array([cf for cf, _ in self.components], dtype=complex)
        G = gram_matrix([w for _, w in self.components], self.grid.m, self.grid.d, self.grid.hbar)
        return float(np.real(coeffs @ G @ np.conj(coeffs)))

    def inner(self, other: "WaveFunction") -> complex:
        return integrate(self.amplitudes * np.conj(other.amplitudes), self.grid)


def gram_matrix(points: Sequence[ComplexInterval], m: float = 1.0, d: int = 1,
                hbar: float = 1.0) -> np.ndarray:
    """``G[i, j] = <e_{z_i}, e_{z_j}>``."""
    n = len(points)
    G = np.empty((n, n), dtype=complex)
    for i, zi in enumerate(points):
        for j, zj in enumerate(points):
            G[i, j] = overlap_closed(zi, zj, m, d, hbar).value
    return G


def _as_points(x, y):
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    return np.broadcast_arrays(x, y)


def synthesize_xy(psi: WaveFunction, x, y, insert=None) -> np.ndarray:
    """``psi(x - i y)`` for arrays of points (last axis = components).

    ``insert`` optionally multiplies the integrand by a node-indexed factor,
    e.g. ``-i p_mu / hbar`` for an exact derivative.
    """
    g = psi.grid
    x, y = _as_points(x, y)
    if not np.all(in_future_cone(y)):
        raise GeometryError("synthesis point outside the future tube")
    coef = g.weights * psi.amplitudes
    if insert is not None:
        coef = coef * insert
    shape = x.shape[:-1]
    xf = x.reshape(-1, g.D)
    yf = y.reshape(-1, g.D)
    out = np.empty(len(xf), dtype=complex)
    step = max(1, 2_000_000 // len(g))
    for s in range(0, len(xf), step):
        ph = (minkowski_dot(xf[s:s + step, None, :], g.nodes[None]) * 1j
              + minkowski_dot(yf[s:s + step, None, :], g.nodes[None]))
        out[s:s + step] = np.exp(-ph / g.hbar) @ coef
    return out.reshape(shape)


def synthesize(psi: WaveFunction, z: ComplexInterval) -> complex:
    """``psi(z) = sum_k w_k a(p_k) exp(-i z.p_k / hbar)``."""
    if not z.in_future_tube():
        raise GeometryError("z must lie in the future tube")
    g = psi.grid
    return integrate(psi.amplitudes * np.exp(-1j * minkowski_dot(g.nodes, z.z) / g.hbar), g)


def synthesize_closed(psi: WaveFunction, x, y) -> np.ndarray:
    """Kernel evaluation ``sum_i c_i K(z - conj(w_i))`` (vectorised over points)."""
    if not psi.components:
        raise ValueError("wavefunction has no closed-form tag")
    g = psi.grid
    x, y = _as_points(x, y)
    out = np.zeros(x.shape[:-1], dtype=complex)
    for cf, w in psi.components:
        out += cf * kernel(x - w.x, y + w.y, g.m, g.d, g.hbar)
    return out


def synthesize_grid(psi: WaveFunction, xs, ys, insert=None) -> np.ndarray:
    """``psi`` on the product of point sets ``xs`` (Nx, D) and ``ys`` (Ny, D).

    Uses the factorisation ``exp(-i x.p) exp(-y.p)`` so the work is a single
    ``(Nx, Np) @ (Np, Ny)`` product.
    """
    g = psi.grid
    xs = np.atleast_2d(xs)
    ys = np.atleast_2d(ys)
    if not np.all(in_future_cone(ys)):
        raise GeometryError("synthesis point outside the future tube")
    coef = g.weights * psi.amplitudes
    if insert is not None:
        coef = coef * insert
    Ex = np.exp(-1j * minkowski_dot(xs[:, None, :], g.nodes[None]) / g.hbar)
    Ey = np.exp(-minkowski_dot(ys[:, None, :], g.nodes[None]) / g.hbar) * coef
    return Ex @ Ey.T


def bound_check(psi: WaveFunction, z: ComplexInterval) -> tuple[float, float]:
    """``(|psi(z)|, ||a|| ||e_z||)``; the first never exceeds the second."""
    g = psi.grid
    lhs = abs(synthesize(psi, z))
    rhs = np.sqrt(psi.norm_squared()) * np.sqrt(norm_squared_closed(z.lam, g.m, g.d, g.hbar))
    return lhs, float(rhs)


# -- Newton-Wigner position --------------------------------------------------

# sixth-order central first-derivative stencil
_D1 = np.array([-1, 9, -45, 0, 45, -9, 1]) / 60.0


def _ddq(f: np.ndarray, grid: MassShellGrid) -> np.ndarray:
    """``d f / dq`` on the uniform rapidity grid (``d = 1``)."""
    ds = grid.ds
    df = np.zeros_like(f)
    for k, c in enumerate(_D1):
        if c:
            df[3:-3] += c * f[k:len(f) - 6 + k]
    df /= ds
    return df / (grid.m * np.cosh(grid.rapidity))


def position_expectation(state: FundamentalState, grid: MassShellGrid,
                         amplitudes: np.ndarray | None = None) -> np.ndarray:
    """Newton-Wigner ``<X>`` at ``t = 0`` (``d = 1`` grids).

    The amplitude is mapped to ``phi = a / sqrt(2E)`` (unitary onto the flat
    measure ``dq``) and ``X = i hbar d/dq`` acts on ``phi``; the derivative is
    a sixth-order central difference in rapidity.
    """
    if grid.d != 1:
        raise NotImplementedError("Newton-Wigner position is implemented for d = 1")
    if abs(state.z.x[0]) > 0:
        raise ValueError("position expectation needs x0 = 0; translate the state first")
    a = e_z_eval(state, grid.nodes) if amplitudes is None else amplitudes
    E = grid.energy
    phi = a / np.sqrt(2 * E)
    dq = grid.m * np.cosh(grid.rapidity) * grid.ds  # flat measure per node
    num = np.sum(np.conj(phi) * 1j * grid.hbar * _ddq(phi, grid) * dq)
    den = np.sum(np.abs(phi) ** 2 * dq)
    return np.array([(num / den).real])


# -- nonrelativistic limit ---------------------------------------------------

def nonrel_oracle(z: ComplexInterval, grid: MassShellGrid) -> WaveFunction:
    """Gaussian coherent state approximating ``e_z`` at ``t = 0``.

    ``a(p) = exp(-i x.p/hbar - lam (p - m u)^2 / (2 m hbar))`` with
    ``u = y_spatial / lam``, i.e. ``<X> = x`` and ``<P> = m u``.
    """
    if abs(z.x[0]) > 0:
        raise ValueError("the Gaussian comparison is at t = 0")
    m, hbar = grid.m, grid.hbar
    lam = z.lam
    u = z.y[1:] / lam
    p = grid.nodes[:, 1:]
    a = np.exp(-1j * (p @ z.x[1:]) / hbar - lam * np.sum((p - m * u) ** 2, axis=1) / (2 * m * hbar))
    return WaveFunction(grid, a)


def fidelity(psi1: WaveFunction, psi2: WaveFunction) -> float:
    """``|<psi1, psi2>|^2 / (||psi1||^2 ||psi2||^2)`` with the invariant measure."""
    return float(abs(psi1.inner(psi2)) ** 2 / (psi1.norm_squared() * psi2.norm_squared()))


def gaussian_uncertainty(z: ComplexInterval, m: float = 1.0, hbar: float = 1.0,
                         n: int = 4097, width: float = 12.0) -> tuple[float, float]:
    """``(Delta_X, Delta_P)`` of the Gaussian oracle on a flat momentum grid.

    Uses the nonrelativistic flat measure ``dq``; ``X = i hbar d/dq`` is
    applied spectrally.  Only ``d = 1`` is needed.
    """
    lam = z.lam
    u = z.y[1] / lam
    sig = np.sqrt(m * hbar / lam)
    q = m * u + np.linspace(-width * sig, width * sig, n, endpoint=False)
    dq = q[1] - q[0]
    a = np.exp(-1j * z.x[1] * q / hbar - lam * (q - m * u) ** 2 / (2 * m * hbar))
    k = 2 * np.pi * np.fft.fftfreq(n, d=dq)
    da = np.fft.ifft(1j * k * np.fft.fft(a))
    rho = np.abs(a) ** 2
    nrm = rho.sum()
    p_mean = (q * rho).sum() / nrm
    dP = np.sqrt(((q - p_mean) ** 2 * rho).sum() / nrm)
    xa = 1j * hbar * da
    x_mean = (np.conj(a) * xa).sum().real / nrm
    x2 = (np.abs(xa) ** 2).sum() / nrm
    dX = np.sqrt(x2 - x_mean**2)
    return float(dX), float(dP)


def random_tube_points(rng: np.random.Generator, n: int, d: int = 1,
                       x_scale: float = 1.0, lam_range=(0.5, 2.0),
                       rapidity: float = 1.0) -> list[ComplexInterval]:
    """Sample points of the future tube (test and demo helper)."""
    pts = []
    for _ in range(n):
        lam = rng.uniform(*lam_range)
        r = rng.uniform(-rapidity, rapidity)
        n_hat = rng.normal(size=d)
        n_hat /= np.linalg.norm(n_hat)
        y = lam * np.concatenate([[np.cosh(r)], np.sinh(r) * n_hat])
        x = rng.normal(scale=x_scale, size=d + 1)
        pts.append(ComplexInterval(x, y))
    return pts


__all__ = [
    "FundamentalState", "KernelValue", "WaveFunction", "e_z_eval", "kernel",
    "overlap_closed", "overlap_quadrature", "norm_squared_closed", "effective_mass",
    "momentum_expectation", "momentum_expectation_quadrature", "gram_matrix",
    "synthesize", "synthesize_xy", "synthesize_closed", "synthesize_grid",
    "bound_check", "position_expectation", "nonrel_oracle", "fidelity",
    "gaussian_uncertainty", "random_tube_points",
]
