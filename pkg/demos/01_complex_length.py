"""
Complex length and the ray filter
=================================

Walk through the geometry of the future tube in 1+1 dimensions.
"""

# %%
import numpy as np

from futuretube.geometry import ComplexInterval, boost, apply, complex_length, zeta, boundary_value
from futuretube.massshell import build_grid, ray_filter, filter_peak, filter_fwhm

# a point of the tube: real part x, imaginary part y in the future cone
z = ComplexInterval([1.0, 0.0], [1.0, 0.0])
cl = complex_length(z)
print("zeta =", cl.zeta, " sigma =", cl.sigma, " tau =", cl.tau)

# %%
# zeta only sees invariants, so boosting both parts leaves it alone
L = boost(0.9, [1.0])
print("boosted zeta =", complex(zeta(apply(z.x, L), apply(z.y, L))))

# %%
# on the slice y = (1, 0) the modulus has its minimum 1 at the origin
t = np.linspace(-3, 3, 7)
r = np.linspace(0, 3, 4)
T, R = np.meshgrid(t, r, indexing="ij")
Z = zeta(np.stack([T, R], axis=-1), np.array([1.0, 0.0]))
print(np.round(np.abs(Z), 3))

# %%
# shrinking y recovers the real proper distance (spacelike) or i * proper time (timelike)
for x in ([0.0, 1.0], [2.0, 0.0], [-2.0, 0.0]):
    print(x, [np.round(boundary_value(x, [1.0, 0.0], eps), 6) for eps in (1e-1, 1e-3, 1e-5)])

# %%
# the ray filter |e_z(p)| = exp(-y.p) picks momenta along y
grid = build_grid(1)
for lam in (1.0, 2.0, 4.0):
    y = [lam, 0.0]
    print(f"lam={lam}: peak p={filter_peak(y, grid)}, FWHM in q = {filter_fwhm(y, grid):.3f}")

r = 0.6
print("boosted y -> peak", filter_peak([np.cosh(r), np.sinh(r)], grid), "expected q =", np.sinh(r))
print("S_1(0) =", ray_filter([1.0, 0.0], [1.0, 0.0]))
