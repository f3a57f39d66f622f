"""Holomorphic gauge calculus on the future tube.

Points are complex ``D``-vectors ``z = x - i y`` with ``y`` future
timelike.  Wirtinger derivatives follow from that sign choice:

    d_mu    = (d/dx^mu + i d/dy^mu) / 2,
    dbar_mu = (d/dx^mu - i d/dy^mu) / 2,

so ``d_mu z^nu = delta`` and ``dbar_mu z^nu = 0``.  Both are computed with
fourth-order central differences and a Richardson error estimate; a
stencil leaving the tube raises :class:`~futuretube.geometry.GeometryError`.

A fiber metric is any callable returning a positive scalar or a Hermitian
positive-definite matrix.  Wavefunctions are row vectors, the covariant
density is ``psi g psi^H``, the potential is ``A = (d g) g^{-1}`` and the
field is ``F_{mubar nu} = dbar_mu A_nu``.  The integrability residual is

    R_{mu nu} = d_mu A_nu - d_nu A_mu - (A_mu A_nu - A_nu A_mu),

which vanishes for every metric of this form; in the abelian limit it
reduces to the symmetry of mixed second derivatives.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.linalg import expm

from .geometry import ComplexInterval, GeometryError, in_future_cone, metric

ComplexFn = Callable[[np.ndarray], object]

# fourth-order central first derivative: offsets and weights
_OFF = np.array([-2.0, -1.0, 1.0, 2.0])
_WTS = np.array([1.0, -8.0, 8.0, -1.0])  # divided by 12 h after summing

H_FIRST = 1e-3    # relative step for first derivatives
H_SECOND = 1e-2   # relative step for nested (second) derivatives


class WirtingerResult(NamedTuple):
    d: np.ndarray      # (D, ...) holomorphic derivatives
    dbar: np.ndarray   # (D, ...) antiholomorphic derivatives
    error: float       # Richardson estimate, max over components


def _as_z(z) -> np.ndarray:
    if isinstance(z, ComplexInterval):
        return z.z
    return np.asarray(z, dtype=complex)


def _lam(z: np.ndarray) -> float:
    y = -z.imag
    return float(np.sqrt(max(y[0] ** 2 - np.sum(y[1:] ** 2), 0.0)))


def _default_h(z: np.ndarray, rel: float) -> float:
    return rel * _lam(z)


def _check_stencil(z: np.ndarray, h: float) -> None:
    y = -z.imag
    for mu in range(len(z)):
        for o in (-4.0, 4.0):   # widest point of the 2h stencil
            yy = y.copy()
            yy[mu] += o * h
            if not in_future_cone(yy):
                raise GeometryError("Wirtinger stencil leaves the future tube; reduce h")


def wirtinger(f: ComplexFn, z, h: float | None = None) -> WirtingerResult:
    """``(d f, dbar f)`` at ``z`` for scalar- or array-valued ``f``.

    ``f`` takes a complex ``D``-vector ``x - i y``.  The returned value is
    the Richardson-extrapolated combination of steps ``h`` and ``2h``.
    """
    z = _as_z(z)
    if not in_future_cone(-z.imag):
        raise GeometryError("z must lie in the future tube")
    h = _default_h(z, H_FIRST) if h is None else h
    if not h > 0:
        raise ValueError("step must be positive")
    _check_stencil(z, h)
    D = len(z)
    res = {}
    for k in (1.0, 2.0):
        hk = k * h
        dx, dy = [], []
        for mu in range(D):
            e = np.zeros(D)
            e[mu] = 1.0
            dx.append(sum(w * np.asarray(f(z + o * hk * e), dtype=complex)
                          for o, w in zip(_OFF, _WTS)) / (12 * hk))
            dy.append(sum(w * np.asarray(f(z - 1j * o * hk * e), dtype=complex)
                          for o, w in zip(_OFF, _WTS)) / (12 * hk))
        dx, dy = np.stack(dx), np.stack(dy)
        res[k] = (0.5 * (dx + 1j * dy), 0.5 * (dx - 1j * dy))
    (d1, b1), (d2, b2) = res[1.0], res[2.0]
    d = d1 + (d1 - d2) / 15
    b = b1 + (b1 - b2) / 15
    err = float(max(np.max(np.abs(d1 - d2)), np.max(np.abs(b1 - b2))) / 15)
    return WirtingerResult(d, b, err)


# -- fiber metrics ------------------------------------------------------------

@dataclass(frozen=True)
class FiberMetric:
    """``fn(z)`` returns a positive scalar (rank 1) or an ``(n, n)`` Hermitian matrix."""

    fn: ComplexFn
    rank: int = 1
    name: str = "custom"

    def __call__(self, z) -> np.ndarray:
        v = np.asarray(self.fn(_as_z(z)), dtype=complex)
        if self.rank == 1:
            return v.reshape(())
        return v.reshape(self.rank, self.rank)

    def check_positive(self, z) -> float:
        """Smallest eigenvalue (or the value itself) at ``z``; raises if not positive."""
        v = self(z)
        if self.rank == 1:
            lo = float(v.real)
            if abs(v.imag) > 1e-12 * max(abs(v.real), 1.0) or not lo > 0:
                raise ValueError("scalar fiber metric must be real and positive")
            return lo
        if not np.allclose(v, v.conj().T, rtol=1e-12, atol=1e-14):
            raise ValueError("matrix fiber metric must be Hermitian")
        lo = float(np.linalg.eigvalsh(v)[0])
        if not lo > 0:
            raise ValueError("matrix fiber metric must be positive definite")
        return lo


class GaugePotential(NamedTuple):
    components: np.ndarray   # (D,) or (D, n, n)
    error: float


class GaugeField(NamedTuple):
    components: np.ndarray   # (D, D) or (D, D, n, n); index order (mubar, nu)
    error: float


def _inv(v: np.ndarray) -> np.ndarray:
    if v.ndim == 0:
        if v == 0:
            raise ZeroDivisionError("fiber metric is singular")
        return 1 / v
    if np.linalg.cond(v) > 1e14:
        raise np.linalg.LinAlgError("fiber metric is singular")
    return np.linalg.inv(v)


def _potential_fn(g: FiberMetric, h: float | None):
    def A(z):
        return potential(g, z, h).components
    return A


def potential(g: FiberMetric, z, h: float | None = None) -> GaugePotential:
    """``A_mu = (d_mu g) g^{-1}``; for rank 1 this is ``d_mu ln g``."""
    z = _as_z(z)
    gi = _inv(g(z))
    w = wirtinger(g, z, h)
    if g.rank == 1:
        return GaugePotential(w.d * gi, w.error * abs(gi))
    return GaugePotential(w.d @ gi, w.error * np.linalg.norm(gi, 2))


def field(g: FiberMetric, z, h: float | None = None) -> GaugeField:
    """``F_{mubar nu} = dbar_mu A_nu`` by nested stencils."""
    z = _as_z(z)
    h = _default_h(z, H_SECOND) if h is None else h
    w = wirtinger(_potential_fn(g, h), z, h)
    return GaugeField(w.dbar, w.error)


def integrability_residual(g: FiberMetric, z, h: float | None = None) -> float:
    """``max ||R_{mu nu}||`` relative to the size of its terms (floor 1)."""
    z = _as_z(z)
    h = _default_h(z, H_SECOND) if h is None else h
    A = potential(g, z, h).components
    dA = wirtinger(_potential_fn(g, h), z, h).d   # dA[mu, nu] = d_mu A_nu
    D = len(z)
    worst, scale = 0.0, 1.0
    for mu in range(D):
        for nu in range(mu + 1, D):
            if g.rank == 1:
                comm = 0.0
                terms = (abs(dA[mu, nu]), abs(dA[nu, mu]))
            else:
                comm = A[mu] @ A[nu] - A[nu] @ A[mu]
                terms = (np.linalg.norm(dA[mu, nu]), np.linalg.norm(dA[nu, mu]),
                         np.linalg.norm(A[mu] @ A[nu]))
            R = dA[mu, nu] - dA[nu, mu] - comm
            worst = max(worst, float(np.linalg.norm(np.atleast_1d(R))))
            scale = max(scale, *map(float, terms))
    return worst / scale


# -- gauge transformations and densities --------------------------------------

def psi_function(psi):
    from .states import WaveFunction, synthesize_xy
    if isinstance(psi, WaveFunction):
        def f(z):
            z = _as_z(z)
            return synthesize_xy(psi, z.real, -z.imag)[0]
        return f
    return psi


def covariant_density(psi, g: FiberMetric, z) -> float:
    """``rho = psi g psi^H`` with ``psi`` a wavefunction or a callable."""
    z = _as_z(z)
    v = np.atleast_1d(np.asarray(psi_function(psi)(z), dtype=complex))
    G = np.atleast_2d(g(z))
    return float(np.real(v @ G @ v.conj()))


def _chi_value(chi, z) -> np.ndarray:
    c = np.asarray(chi(z), dtype=complex)
    if np.any(np.abs(c) == 0) or (c.ndim == 2 and abs(np.linalg.det(c)) == 0):
        raise ZeroDivisionError("gauge function vanishes at a sample point")
    return c


def gauge_transform(g: FiberMetric, chi: ComplexFn) -> FiberMetric:
    """``g' = chi^{-1} g (chi^*)^{-1}`` for holomorphic scalar or matrix ``chi``."""
    def fn(z):
        c = _chi_value(chi, z)
        G = g(z)
        if c.ndim == 0:
            return G / (c * np.conj(c))
        ci = np.linalg.inv(c)
        return ci @ G @ ci.conj().T
    return FiberMetric(fn, g.rank, f"{g.name}/gauge")


def transform_wavefunction(psi, chi: ComplexFn) -> ComplexFn:
    """``psi' = psi chi`` (row vector times matrix for non-abelian ``chi``)."""
    f = psi_function(psi)

    def fn(z):
        c = _chi_value(chi, z)
        v = np.asarray(f(z), dtype=complex)
        return v * c if c.ndim == 0 else v @ c
    return fn


def plane_gauge(k) -> ComplexFn:
    """``chi(z) = exp(i k.z)`` with the Euclidean pairing ``sum_mu k_mu z^mu``."""
    k = np.asarray(k, dtype=float)
    return lambda z: np.exp(1j * np.dot(k, _as_z(z)))


def polynomial_gauge(c0: complex, c1, c2) -> ComplexFn:
    """``chi(z) = exp(c0 + c1.z + z.C2.z)``, holomorphic and nowhere zero."""
    c1 = np.asarray(c1, dtype=complex)
    c2 = np.asarray(c2, dtype=complex)
    return lambda z: np.exp(c0 + c1 @ _as_z(z) + _as_z(z) @ c2 @ _as_z(z))


def box_residual(psi, g: FiberMetric, z, m: float = 1.0, hbar: float = 1.0,
                 h: float | None = None) -> float:
    """Relative size of ``i psi [box(psi g)]^H - i [box(psi g)] psi^H``.

    ``box = eta^{mu nu} d_mu d_nu`` with Wirtinger derivatives.  The
    expression equals ``d^2 rho / dx_mu dy^mu``; it vanishes when
    ``-box(psi g) = psi M`` with Hermitian ``M``.  The scale is
    ``(m / hbar)^2 |psi|^2 ||g||``.
    """
    z = _as_z(z)
    h = _default_h(z, H_SECOND) if h is None else h
    f = psi_function(psi)
    eta = np.diag(metric(len(z)))

    def pg(zz):
        v = np.atleast_1d(np.asarray(f(zz), dtype=complex))
        return v @ np.atleast_2d(g(zz))

    def dpg(zz):
        return wirtinger(pg, zz, h).d

    dd = wirtinger(dpg, z, h).d          # dd[mu, nu] = d_mu d_nu (psi g)
    box = np.einsum("m,mm...->...", eta, dd)
    v = np.atleast_1d(np.asarray(f(z), dtype=complex))
    val = 1j * (v @ box.conj()) - 1j * (box @ v.conj())
    scale = (m / hbar) ** 2 * float(np.real(v @ v.conj())) * float(np.linalg.norm(np.atleast_2d(g(z)), 2))
    return float(abs(val) / scale) if scale > 0 else float(abs(val))


# -- test metrics with closed-form derivatives ----------------------------------

def flat_metric(rank: int = 1) -> FiberMetric:
    if rank == 1:
        return FiberMetric(lambda z: 1.0, 1, "flat")
    return FiberMetric(lambda z: np.eye(rank), rank, "flat")


@dataclass(frozen=True)
class QuadraticMetric:
    """``g = exp(S)``, ``S = alpha sum_mu |z^mu|^2 + |k.z|^2`` (Euclidean pairings).

    ``A_nu = alpha conj(z^nu) + k_nu conj(k.z)`` and
    ``F_{mubar nu} = alpha delta_{mu nu} + k_mu k_nu``.
    """

    alpha: float = 0.3
    k: tuple = (0.2, -0.1)

    def superpotential(self, z) -> float:
        z = _as_z(z)
        k = np.asarray(self.k)
        return float(self.alpha * np.sum(np.abs(z) ** 2) + abs(k @ z) ** 2)

    def metric(self) -> FiberMetric:
        return FiberMetric(lambda z: np.exp(self.superpotential(z)), 1, "abelian-quadratic")

    def potential_exact(self, z) -> np.ndarray:
        z = _as_z(z)
        k = np.asarray(self.k)
        return self.alpha * np.conj(z) + k * np.conj(k @ z)

    def field_exact(self, D: int) -> np.ndarray:
        k = np.asarray(self.k)
        return self.alpha * np.eye(D) + np.outer(k, k)


def nonabelian_metric(n: int = 2, D: int = 2, seed: int = 7, scale: float = 0.3) -> FiberMetric:
    """``g = expm(H(x, y))`` with ``H`` a Hermitian matrix polynomial of degree 2."""
    rng = np.random.default_rng(seed)

    def herm():
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        return scale * (a + a.conj().T) / 2

    H0 = herm()
    H1 = [herm() for _ in range(2 * D)]
    H2 = [herm() for _ in range(2 * D)]

    def fn(z):
        z = _as_z(z)
        r = np.concatenate([z.real, -z.imag])
        H = H0 + sum(c * M for c, M in zip(r, H1)) + 0.1 * sum(c * c * M for c, M in zip(r, H2))
        return expm(H)

    return FiberMetric(fn, n, "nonabelian-expm")


def diagonal_metric(g1: FiberMetric, g2: FiberMetric) -> FiberMetric:
    """``diag(g1, g2)`` from two scalar metrics."""
    return FiberMetric(lambda z: np.diag([complex(g1(z)), complex(g2(z))]), 2, "diagonal")


METRICS = {
    "flat": lambda: flat_metric(1),
    "abelian-quadratic": lambda: QuadraticMetric().metric(),
    "nonabelian-expm": lambda: nonabelian_metric(),
}


def cauchy_riemann_residual(psi, z, h: float | None = None) -> float:
    """``max |dbar psi| / max |d psi|`` at ``z``."""
    w = wirtinger(psi_function(psi), z, h)
    ref = float(np.max(np.abs(w.d)))
    return float(np.max(np.abs(w.dbar)) / ref) if ref > 0 else float(np.max(np.abs(w.dbar)))


__all__ = [
    "WirtingerResult", "FiberMetric", "GaugePotential", "GaugeField", "wirtinger",
    "potential", "field", "integrability_residual", "covariant_density",
    "gauge_transform", "transform_wavefunction", "plane_gauge", "polynomial_gauge",
    "box_residual", "flat_metric", "QuadraticMetric", "nonabelian_metric",
    "diagonal_metric", "METRICS", "cauchy_riemann_residual",
]
