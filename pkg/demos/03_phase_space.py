"""
Phase-space slices and the covariant Born rule
==============================================

Calibrate a slice, then compare phase-space norms with momentum norms.
"""

# %%
import numpy as np

from futuretube.geometry import ComplexInterval
from futuretube.massshell import build_grid
from futuretube.phasespace import (PhaseSpaceSlice, analytic_N, calibrate, conservation_residual,
                                   current, reproduce, slice_norm, total_charge)
from futuretube.states import WaveFunction, random_tube_points, synthesize

grid = build_grid(1)
cal = calibrate(PhaseSpaceSlice(t0=0.0, lam=1.0), grid)
print(f"N = {cal.N:.10f} (closed form {analytic_N(1.0):.10f}), W/E flatness {cal.flatness:.1e}")

# %%
psi = WaveFunction.from_states(grid, [1.0, 0.5j], [ComplexInterval([0.0, 1.0], [1.0, 0.3]),
                                                   ComplexInterval([0.2, -1.0], [1.5, -0.5])])
print("||a||^2 =", psi.norm_squared_closed())
for t0 in (0.0, 0.7):
    for lam in (1.0, 2.0):
        g = calibrate(PhaseSpaceSlice(t0=t0, lam=lam), grid).slice
        print(f"  slice t0={t0}, lam={lam}: {slice_norm(psi, g):.10f}")

# %%
# the slice reproduces psi on, before and after itself
for dt in (-0.5, 0.0, 0.5):
    zp = ComplexInterval([dt, 0.4], [1.2, 0.15])
    print(f"dt={dt:+}: {reproduce(psi, cal.slice, zp):.8f}  direct {synthesize(psi, zp):.8f}")

# %%
# currents: the mixed derivative of rho vanishes identically, and the charge is ||a||^2
pts = random_tube_points(np.random.default_rng(1), 5)
print("conservation residuals:", [f"{conservation_residual(psi, z):.1e}" for z in pts])
cv = current(psi, pts[0], cal.slice)
print("j =", cv.j, " J =", cv.J)
print("total charge:", total_charge(psi, cal.slice)[0])
