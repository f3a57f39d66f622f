"""Canonical ensembles from the internal translation ``z -> z - i theta``.

The thermal vector ``theta = (hbar beta / 2) u`` shifts the imaginary part
of every phase-space point.  For operators diagonal in momentum the
phase-space average

    <A> = int_Gamma Atilde(z - i theta) / int_Gamma ||e_{z - i theta}||^2,
    Atilde(z) = int dmu A(p) exp(-2 y.p / hbar),

has integrands independent of ``x``; the spatial volume cancels and is
dropped, so every quantity here is per unit volume.  Summing over the
hyperboloid first gives ``W(p) exp(-beta u.p)`` with ``W`` proportional to
``E``, which turns ``dmu`` into the flat measure ``d^d p``.  The direct
oracle :func:`canonical_oracle` therefore uses ``d^d p``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .geometry import ComplexInterval, GeometryError, in_future_cone, minkowski_dot
from .massshell import MassShellGrid
from .phasespace import PhaseSpaceSlice, TAIL_TOL, TruncationError, _edge_fraction
from .states import kernel

Symbol = Callable[[np.ndarray], np.ndarray]


class ThermalDivergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ThermalVector:
    beta: float
    u: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        u = np.asarray(self.u, dtype=float)
        object.__setattr__(self, "u", u)
        if u[0] <= 0 or abs(minkowski_dot(u, u) - 1) > 1e-12:
            raise GeometryError("u must be a future timelike unit vector")

    @classmethod
    def rest(cls, beta: float, d: int = 1, hbar: float = 1.0) -> "ThermalVector":
        u = np.zeros(d + 1)
        u[0] = 1.0
        return cls(beta, u, hbar)

    @classmethod
    def boosted(cls, beta: float, rapidity: float, hbar: float = 1.0) -> "ThermalVector":
        return cls(beta, np.array([np.cosh(rapidity), np.sinh(rapidity)]), hbar)

    @property
    def theta(self) -> np.ndarray:
        return 0.5 * self.hbar * self.beta * self.u


class ThermoPotentials(NamedTuple):
    beta: float
    U: float
    S: float
    F: float
    Phi: float


def thermal_translate(z: ComplexInterval, vt: ThermalVector) -> ComplexInterval:
    """``z - i theta``: ``x`` unchanged, ``y -> y + theta``."""
    if not z.in_future_tube():
        raise GeometryError("z must lie in the future tube")
    return ComplexInterval(z.x, z.y + vt.theta)


def _evaluate_symbol(A: Symbol, grid: MassShellGrid) -> np.ndarray:
    vals = np.asarray(A(grid.nodes), dtype=float)
    if vals.shape == ():
        vals = np.full(len(grid), float(vals))
    if vals.shape != (len(grid),) or not np.all(np.isfinite(vals)):
        raise ThermalDivergenceError("symbol must give finite values on every node")
    return vals


def _ratio(num_terms: np.ndarray, den_terms: np.ndarray, grid: MassShellGrid) -> float:
    # the outermost rapidity shells must be negligible or the sum has not converged
    edge = np.abs(grid.rapidity) >= grid.rapidity.max() - 2 * grid.ds
    for t in (num_terms, den_terms):
        tot = np.sum(np.abs(t))
        if tot > 0 and np.sum(np.abs(t[edge])) > 1e-12 * tot:
            raise ThermalDivergenceError("thermal integral not converged on the mass-shell grid")
    return math.fsum(num_terms) / math.fsum(den_terms)


def thermal_average(A: Symbol, vt: ThermalVector, gamma: PhaseSpaceSlice,
                    grid: MassShellGrid) -> float:
    """Phase-space average of the diagonal operator with symbol ``A(p)``.

    ``A`` maps an ``(N, D)`` array of momenta to ``N`` real values.
    """
    gamma.require_calibrated()
    if grid.d != gamma.d:
        raise ValueError("grid and slice dimensions differ")
    vals = _evaluate_symbol(A, grid)
    ys = gamma.y_nodes + vt.theta[None, :]
    # sum_y w_y exp(-2 (y + theta).p / hbar) for every node p
    Wp = np.exp(-2 * minkowski_dot(ys[:, None, :], grid.nodes[None]) / grid.hbar).T @ gamma.y_weights
    base = grid.weights * Wp
    return _ratio(base * vals, base, grid)


def canonical_oracle(A: Symbol, beta: float, u, grid: MassShellGrid) -> float:
    """``int d^dp A exp(-beta u.p) / int d^dp exp(-beta u.p)``.

    The flat measure is ``2E dmu`` on the mass-shell grid.
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    vals = _evaluate_symbol(A, grid)
    u = np.asarray(u, dtype=float)
    base = grid.weights * 2 * grid.energy * np.exp(-beta * minkowski_dot(grid.nodes, u))
    return _ratio(base * vals, base, grid)


def trace_rank_one(w: ComplexInterval, gamma: PhaseSpaceSlice, m: float | None = None,
                   tail_tol: float = TAIL_TOL) -> float:
    """``N int_Gamma |K(z - conj w)|^2``, the trace of ``|e_w><e_w|``.

    Equals ``||e_w||^2`` when the resolution of unity holds.
    """
    N = gamma.require_calibrated()
    if not w.in_future_tube():
        raise GeometryError("w must lie in the future tube")
    m = gamma.m if m is None else m
    xs, ys = gamma.x_nodes, gamma.y_nodes
    wx, wy = np.broadcast_arrays(xs[:, None, :] - w.x[None, None, :],
                                 ys[None, :, :] + w.y[None, None, :])
    K = kernel(wx, wy, m, gamma.d, gamma.hbar)
    dens = np.abs(K) ** 2 * (gamma.x_step * gamma.y_weights)[None, :]
    tail = _edge_fraction(dens)
    if tail > tail_tol:
        raise TruncationError("kernel not contained in the slice grid", tail)
    return N * math.fsum(dens.ravel())


def log_partition(beta: float, grid: MassShellGrid, u=None) -> float:
    """``ln Z`` with ``Z = int d^dp exp(-beta u.p) / (2 pi hbar)^d`` per unit volume."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    u = np.eye(grid.D)[0] if u is None else np.asarray(u, dtype=float)
    terms = grid.weights * 2 * grid.energy * np.exp(-beta * minkowski_dot(grid.nodes, u))
    return math.log(math.fsum(terms)) - grid.d * math.log(2 * math.pi * grid.hbar)


def potentials(betas: Sequence[float], grid: MassShellGrid, u=None,
               rel_step: float = 1e-4) -> list[ThermoPotentials]:
    """Internal energy, entropy, free energy and Massieu potential per unit volume.

    ``U = -d ln Z / d beta`` by a centred difference with step
    ``rel_step * beta``; ``Phi = ln Z``, ``S = Phi + beta U``, ``F = -Phi / beta``.
    """
    out = []
    for beta in betas:
        if not beta > 0:
            raise ValueError("beta must be positive")
        h = rel_step * beta
        U = -(log_partition(beta + h, grid, u) - log_partition(beta - h, grid, u)) / (2 * h)
        Phi = log_partition(beta, grid, u)
        out.append(ThermoPotentials(float(beta), U, Phi + beta * U, -Phi / beta, Phi))
    return out


def energy(p: np.ndarray) -> np.ndarray:
    return p[:, 0]


def unity(p: np.ndarray) -> np.ndarray:
    return np.ones(len(p))


SYMBOLS: dict[str, Symbol] = {
    "1": unity,
    "E": energy,
    "E2": lambda p: p[:, 0] ** 2,
    "p1": lambda p: p[:, 1],
    "p1^2": lambda p: p[:, 1] ** 2,
}


__all__ = [
    "ThermalVector", "ThermoPotentials", "ThermalDivergenceError", "thermal_translate",
    "thermal_average", "canonical_oracle", "trace_rank_one", "log_partition",
    "potentials", "SYMBOLS",
]
