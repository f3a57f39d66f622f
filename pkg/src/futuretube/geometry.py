"""Real and complex Minkowski geometry.

Vectors are plain ``numpy`` arrays whose last axis holds the ``D = 1 + d``
components, time first.  Signature is ``(+, -, ..., -)`` with ``c = 1``.

Lorentz matrices act on *row* vectors from the right, ``x -> x @ L``, so a
sequence of transformations composes left to right: ``(x @ L1) @ L2 ==
x @ (L1 @ L2)``.  Every function here is pure.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class GeometryError(ValueError):
    """Raised for inputs outside the domain of a geometric operation."""


class SectorLabel(enum.Enum):
    FUTURE_TIMELIKE = "FutureTimelike"
    PAST_TIMELIKE = "PastTimelike"
    FUTURE_LIGHTLIKE = "FutureLightlike"
    PAST_LIGHTLIKE = "PastLightlike"
    SPACELIKE = "Spacelike"
    ZERO = "Zero"


def four_vector(*components) -> np.ndarray:
    """Return a validated real vector ``(t, x1, ..., xd)``."""
    if len(components) == 1 and np.ndim(components[0]) == 1:
        components = tuple(components[0])
    v = np.asarray(components, dtype=float)
    if v.ndim != 1 or v.size < 2:
        raise GeometryError("a four-vector needs a time and at least one space component")
    if not np.all(np.isfinite(v)):
        raise GeometryError("four-vector components must be finite")
    return v


def metric(D: int) -> np.ndarray:
    return np.diag([1.0] + [-1.0] * (D - 1))


def minkowski_dot(a, b):
    """Minkowski scalar product ``a0*b0 - sum(ai*bi)`` over the last axis.

    Broadcasts over leading axes and works for complex arguments (no
    conjugation is applied).
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] != b.shape[-1]:
        raise GeometryError(f"dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}")
    return a[..., 0] * b[..., 0] - np.sum(a[..., 1:] * b[..., 1:], axis=-1)


def minkowski_square(a):
    return minkowski_dot(a, a)


def lightlike_tolerance(x) -> float:
    x = np.asarray(x, dtype=float)
    return 1e-12 * (float(np.dot(x, x)) + 1.0)


def classify(x) -> SectorLabel:
    """Sector of ``x``; ``x^2`` within ``1e-12*(|x|^2 + 1)`` of 0 counts as lightlike."""
    x = np.asarray(x, dtype=float)
    if not np.any(x):
        return SectorLabel.ZERO
    q = float(minkowski_square(x))
    if abs(q) <= lightlike_tolerance(x):
        return SectorLabel.FUTURE_LIGHTLIKE if x[0] > 0 else SectorLabel.PAST_LIGHTLIKE
    if q < 0:
        return SectorLabel.SPACELIKE
    return SectorLabel.FUTURE_TIMELIKE if x[0] > 0 else SectorLabel.PAST_TIMELIKE


def in_future_cone(y) -> np.ndarray:
    """Vectorised test ``y in V+`` (strict: ``y0 > |y|``)."""
    y = np.asarray(y, dtype=float)
    return (y[..., 0] > 0) & (minkowski_square(y) > 0)


def boost(rapidity: float, axis) -> np.ndarray:
    """Pure boost along the spatial unit vector ``axis``.

    The matrix is symmetric, so it is the same for row and column
    conventions; with the row convention ``(m cosh r, m sinh r) @ boost(s, [1])``
    is ``(m cosh(r+s), m sinh(r+s))``.
    """
    n = np.atleast_1d(np.asarray(axis, dtype=float))
    if abs(np.linalg.norm(n) - 1.0) > 1e-12:
        raise GeometryError("boost axis must be a unit vector")
    D = n.size + 1
    ch, sh = np.cosh(rapidity), np.sinh(rapidity)
    L = np.eye(D)
    L[0, 0] = ch
    L[0, 1:] = sh * n
    L[1:, 0] = sh * n
    L[1:, 1:] += (ch - 1.0) * np.outer(n, n)
    return L


def rotation(R) -> np.ndarray:
    """Embed a spatial rotation (``det R = +1``) as a ``D x D`` Lorentz matrix."""
    R = np.asarray(R, dtype=float)
    if not np.allclose(R @ R.T, np.eye(len(R)), atol=1e-12) or np.linalg.det(R) < 0:
        raise GeometryError("not a proper rotation")
    L = np.eye(len(R) + 1)
    L[1:, 1:] = R
    return L


def apply(x, L):
    """Act with ``L`` on row vector(s) ``x``; complex ``z`` transforms linearly."""
    return np.asarray(x) @ np.asarray(L)


def is_restricted(L, atol: float = 1e-10) -> bool:
    """Membership in the restricted group: preserves eta, det 1, keeps time order."""
    L = np.asarray(L, dtype=float)
    eta = metric(len(L))
    return (
        np.allclose(L @ eta @ L.T, eta, atol=atol)
        and abs(np.linalg.det(L) - 1.0) < atol
        and L[0, 0] > 0
    )


def proper_interval(x) -> float:
    """Proper distance ``sqrt(-x^2)`` for spacelike ``x``, signed proper time
    ``sgn(t) sqrt(x^2)`` for timelike ``x``."""
    x = np.asarray(x, dtype=float)
    label = classify(x)
    q = float(minkowski_square(x))
    if label is SectorLabel.SPACELIKE:
        return float(np.sqrt(-q))
    if label in (SectorLabel.FUTURE_TIMELIKE, SectorLabel.PAST_TIMELIKE):
        return float(np.sign(x[0]) * np.sqrt(q))
    raise GeometryError(f"degenerate interval ({label.value})")


@dataclass(frozen=True)
class ComplexInterval:
    """``z = x - i y`` stored as its real and (negated) imaginary parts."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.shape != y.shape or x.ndim != 1:
            raise GeometryError("x and y must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise GeometryError("non-finite component")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_complex(cls, z) -> "ComplexInterval":
        z = np.asarray(z, dtype=complex)
        return cls(z.real, -z.imag)

    @property
    def z(self) -> np.ndarray:
        return self.x - 1j * self.y

    @property
    def D(self) -> int:
        return self.x.size

    @property
    def lam(self) -> float:
        """``|y| = sqrt(y^2)``; only meaningful in the causal tube."""
        return float(np.sqrt(minkowski_square(self.y)))

    def in_future_tube(self) -> bool:
        return classify(self.y) is SectorLabel.FUTURE_TIMELIKE

    def in_causal_tube(self) -> bool:
        return classify(self.y) in (SectorLabel.FUTURE_TIMELIKE, SectorLabel.PAST_TIMELIKE)

    def conj(self) -> "ComplexInterval":
        return ComplexInterval(self.x, -self.y)

    def translate(self, a) -> "ComplexInterval":
        return ComplexInterval(self.x + np.asarray(a, dtype=float), self.y)

    def transform(self, L) -> "ComplexInterval":
        return ComplexInterval(apply(self.x, L), apply(self.y, L))

    def __sub__(self, other: "ComplexInterval") -> "ComplexInterval":
        return ComplexInterval(self.x - other.x, self.y - other.y)

    def __add__(self, other: "ComplexInterval") -> "ComplexInterval":
        return ComplexInterval(self.x + other.x, self.y + other.y)


class ComplexLength(NamedTuple):
    zeta: complex
    sigma: float
    tau: float


def zeta(x, y):
    """Vectorised principal ``sqrt(-z^2) = sqrt(y^2 - x^2 + 2i y.x)`` for ``z = x - iy``.

    No domain check; callers guarantee ``y`` timelike so that the radicand
    stays off the negative real axis.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    rad = minkowski_square(y) - minkowski_square(x) + 2j * minkowski_dot(y, x)
    return np.sqrt(rad)


def complex_length(z: ComplexInterval) -> ComplexLength:
    if not z.in_causal_tube():
        raise GeometryError("outside causal tube: y must be timelike")
    zt = complex(zeta(z.x, z.y))
    return ComplexLength(zt, zt.real, zt.imag)


def boundary_value(x, u, eps: float) -> complex:
    """``zeta(x - i eps u)``; tends to ``sigma(x)`` (spacelike) or ``i tau(x)`` (timelike)."""
    if eps <= 0:
        raise GeometryError("eps must be positive")
    u = np.asarray(u, dtype=float)
    if classify(u) is not SectorLabel.FUTURE_TIMELIKE:
        raise GeometryError("u must be future timelike")
    u = u / np.sqrt(minkowski_square(u))
    return complex(zeta(x, eps * u))


def local_coords(x, y, atol: float = 1e-10) -> tuple[float, float]:
    """Invariant local time ``t_y = yhat.x`` and radius ``r_y = sqrt(t_y^2 - x^2)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    y2 = float(minkowski_square(y))
    if y2 <= 0:
        raise GeometryError("y must be timelike")
    ty = float(minkowski_dot(y, x)) / np.sqrt(y2)
    r2 = ty * ty - float(minkowski_square(x))
    if r2 < 0:
        if r2 < -atol * (ty * ty + float(np.dot(x, x)) + 1.0):
            raise GeometryError("t_y^2 < x^2 beyond roundoff")
        r2 = 0.0
    return ty, float(np.sqrt(r2))


def _directions(d: int, n: int) -> np.ndarray:
    """``n`` deterministic unit vectors in ``R^d``."""
    if d == 1:
        return np.where(np.arange(n) % 2 == 0, 1.0, -1.0)[:, None]
    if d == 2:
        a = 2 * np.pi * np.arange(n) / n
        return np.stack([np.cos(a), np.sin(a)], axis=1)
    # Fibonacci sphere in the first three axes
    k = np.arange(n) + 0.5
    c = 1 - 2 * k / n
    s = np.sqrt(1 - c * c)
    a = np.pi * (1 + 5**0.5) * k
    out = np.zeros((n, d))
    out[:, 0], out[:, 1], out[:, 2] = c, s * np.cos(a), s * np.sin(a)
    return out


def level_surface_sample(sigma=None, tau=None, lam: float = 1.0, n: int = 16,
                         d: int = 1, extent: float = 3.0) -> np.ndarray:
    """Points ``x`` on a level set of ``zeta(x - i(lam, 0))``.

    With both ``sigma`` and ``tau`` the points lie on the intersection
    ``zeta = sigma + i tau`` (a sphere of radius ``r`` at time ``t``).  With
    only ``sigma`` they sweep the hyperboloid where ``Re zeta = sigma``, with
    only ``tau`` the one where ``Im zeta = tau``; the sweep parameter runs
    over ``[-extent, extent]``.  Returns an ``(n, 1 + d)`` array.
    """
    if lam <= 0:
        raise GeometryError("lam must be positive")
    dirs = _directions(d, n)
    if sigma is not None and sigma < lam:
        raise GeometryError("empty surface: sigma < lam")
    if sigma is not None and tau is not None:
        t = sigma * tau / lam
        r = np.sqrt((sigma**2 - lam**2) * (tau**2 + lam**2)) / lam
        ts = np.full(n, t)
        rs = np.full(n, r)
    elif sigma is not None:
        ts = np.linspace(-extent, extent, n)
        rs = np.sqrt((sigma**2 - lam**2) * (1 + ts**2 / sigma**2))
    elif tau is not None:
        if tau == 0:
            raise GeometryError("tau must be nonzero for a time-like level surface")
        rs = np.linspace(0, extent, n)
        ts = np.sign(tau) * abs(tau) * np.sqrt(1 + rs**2 / (tau**2 + lam**2))
    else:
        raise GeometryError("give sigma, tau or both")
    return np.column_stack([ts, rs[:, None] * dirs])
