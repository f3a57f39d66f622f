"""Quadrature on the mass shell with the invariant measure ``d^d p / 2E``.

``d = 1`` uses a uniform rapidity grid ``q = m sinh s``; since
``dq / 2E = ds / 2`` the trapezoid weights are ``ds / 2`` and a boost by a
multiple of the rapidity step is an exact shift of the node index.

``d = 3`` uses rapidity in ``|p| = m sinh s`` times Gauss-Legendre in the
cosine of the polar angle (measured from spatial axis 1) times a uniform
azimuth.  With ``n_phi=1`` the azimuth is integrated analytically, which is
valid for integrands that depend on ``p`` only through ``E``, ``p1`` and
``|p_perp|``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import GeometryError, in_future_cone, minkowski_dot


@dataclass(frozen=True)
class MassShellGrid:
    d: int
    m: float
    hbar: float
    s_max: float
    n: int
    nodes: np.ndarray = field(repr=False)    # (N, D) momenta p = (E, p)
    weights: np.ndarray = field(repr=False)  # (N,)
    rapidity: np.ndarray = field(repr=False)  # (N,) rapidity of each node
    axial: bool = False
    n_cos: int = 0
    n_phi: int = 0

    @property
    def D(self) -> int:
        return self.d + 1

    @property
    def energy(self) -> np.ndarray:
        return self.nodes[:, 0]

    @property
    def ds(self) -> float:
        return 2 * self.s_max / (self.n - 1) if self.d == 1 else self.s_max / (self.n - 1)

    def __len__(self) -> int:
        return len(self.weights)


def build_grid(d: int = 1, m: float = 1.0, s_max: float = 8.0, n: int = 512,
               hbar: float = 1.0, n_cos: int = 48, n_phi: int = 1) -> MassShellGrid:
    """Build a mass-shell grid.

    For ``d = 1`` there are ``n`` rapidity nodes on ``[-s_max, s_max]``.
    For ``d = 3`` there are ``n`` radial rapidity nodes on ``[0, s_max]``,
    ``n_cos`` Gauss-Legendre nodes in ``cos(theta)`` and ``n_phi`` azimuths
    (``n_phi=1``: axially reduced grid).
    """
    if m <= 0 or hbar <= 0:
        raise ValueError("mass and hbar must be positive")
    if n < 16:
        raise ValueError("need at least 16 nodes per axis")
    if d == 1:
        s = np.linspace(-s_max, s_max, n)
        ds = s[1] - s[0]
        w = np.full(n, ds / 2)
        w[0] = w[-1] = ds / 4
        nodes = np.column_stack([m * np.cosh(s), m * np.sinh(s)])
        return MassShellGrid(1, m, hbar, s_max, n, nodes, w, s)
    if d == 3:
        s = np.linspace(0.0, s_max, n)
        ds = s[1] - s[0]
        # trapezoid on [0, s_max]; exact-even extension after the angular sum
        ws = np.full(n, ds)
        ws[0] = ws[-1] = ds / 2
        c, wc = np.polynomial.legendre.leggauss(n_cos)
        if n_phi == 1:
            phi = np.zeros(1)
            wphi = np.full(1, 2 * np.pi)
        else:
            phi = 2 * np.pi * np.arange(n_phi) / n_phi
            wphi = np.full(n_phi, 2 * np.pi / n_phi)
        S, C, PHI = np.meshgrid(s, c, phi, indexing="ij")
        W = ws[:, None, None] * wc[None, :, None] * wphi[None, None, :]
        S, C, PHI, W = (a.ravel() for a in (S, C, PHI, W))
        k = m * np.sinh(S)
        sn = np.sqrt(1 - C * C)
        nodes = np.column_stack([m * np.cosh(S), k * C, k * sn * np.cos(PHI), k * sn * np.sin(PHI)])
        # d^3p / 2E = (m^2/2) sinh^2 s ds dOmega
        weights = 0.5 * m * m * np.sinh(S) ** 2 * W
        return MassShellGrid(3, m, hbar, s_max, n, nodes, weights, S,
                             axial=(n_phi == 1), n_cos=n_cos, n_phi=n_phi)
    raise ValueError(f"unsupported spatial dimension d={d}; use 1 or 3")


def integrate(f, grid: MassShellGrid, with_tail: bool = False):
    """Compensated sum ``sum_k w_k f_k`` in fixed node order.

    With ``with_tail=True`` returns ``(value, tail)`` where ``tail`` is the
    magnitude of the contribution of the outermost rapidity shell.
    """
    f = np.asarray(f)
    if f.shape != grid.weights.shape:
        raise ValueError(f"expected {grid.weights.shape} samples, got {f.shape}")
    terms = grid.weights * f
    if np.iscomplexobj(terms):
        value = complex(math.fsum(terms.real), math.fsum(terms.imag))
    else:
        value = math.fsum(terms)
    if not with_tail:
        return value
    edge = np.abs(np.abs(grid.rapidity) - grid.s_max) < 1e-12 * max(grid.s_max, 1.0)
    tail = float(np.sum(np.abs(terms[edge])))
    return value, tail


def ray_filter(y, p, hbar: float = 1.0):
    """``R_y(p) = exp(-y.p / hbar)`` for ``y`` in the future cone.

    ``p`` may be a single momentum or an ``(N, D)`` array of nodes.
    """
    y = np.asarray(y, dtype=float)
    if not in_future_cone(y):
        raise GeometryError("past tube diverges: y must lie in the future cone")
    return np.exp(-minkowski_dot(np.asarray(p, dtype=float), y) / hbar)


def filter_peak(y, grid: MassShellGrid) -> np.ndarray:
    """Node maximising the ray filter; approximates ``m * y / |y|``."""
    r = ray_filter(y, grid.nodes, grid.hbar)
    return grid.nodes[int(np.argmax(r))].copy()


def filter_fwhm(y, grid: MassShellGrid) -> float:
    """Full width at half maximum of ``R_y`` in ``q = p1`` (``d = 1``)."""
    if grid.d != 1:
        raise ValueError("fwhm is defined here for d = 1 grids")
    r = ray_filter(y, grid.nodes, grid.hbar)
    q = grid.nodes[:, 1]
    above = q[r >= 0.5 * r.max()]
    return float(above.max() - above.min())
