"""
Thermal averages from an imaginary translation
==============================================

Shift every phase-space point by -i theta and compare with the canonical ensemble.
"""

# %%
import numpy as np

from futuretube.massshell import build_grid
from futuretube.phasespace import PhaseSpaceSlice, calibrate
from futuretube.thermal import (SYMBOLS, ThermalVector, canonical_oracle, potentials,
                                thermal_average, trace_rank_one)
from futuretube.geometry import ComplexInterval

grid = build_grid(1)
gamma = calibrate(PhaseSpaceSlice(t0=0.0, lam=1.0), grid).slice

# %%
print(" beta  symbol    phase space        canonical")
for beta in (0.5, 1.0, 2.0):
    for name in ("E", "E2", "p1^2"):
        vt = ThermalVector.rest(beta)
        a = thermal_average(SYMBOLS[name], vt, gamma, grid)
        o = canonical_oracle(SYMBOLS[name], beta, vt.u, grid)
        print(f"{beta:5} {name:>6} {a:18.12f} {o:16.12f}")

# %%
# a moving heat bath: u.p in the boosted frame averages to the rest-frame <E>
r = 0.3
u = np.array([np.cosh(r), np.sinh(r)])
vt = ThermalVector.boosted(2.0, r)
print("boosted <u.p> =", thermal_average(lambda p: u[0] * p[:, 0] - u[1] * p[:, 1], vt, gamma, grid))

# %%
for p in potentials(np.linspace(0.5, 4, 8), grid):
    print(f"beta={p.beta:4.2f}  U={p.U:.6f}  S={p.S:.6f}  F={p.F:.6f}  Phi={p.Phi:.6f}")

# %%
print("Tr |e_w><e_w| =", trace_rank_one(ComplexInterval([0, 0], [1.0, 0]), gamma))
