"""
Fundamental states and the Bessel kernel
========================================

Overlaps of e_z computed on the mass shell against the closed form.
"""

# %%
import numpy as np

from futuretube.geometry import ComplexInterval
from futuretube.massshell import build_grid
from futuretube.states import (FundamentalState, WaveFunction, effective_mass, fidelity,
                               gram_matrix, momentum_expectation_quadrature, nonrel_oracle,
                               overlap_closed, overlap_quadrature, position_expectation,
                               random_tube_points)

grid = build_grid(1)
a = ComplexInterval([0.0, 0.0], [1.0, 0.0])
b = ComplexInterval([1.0, 0.0], [1.0, 0.0])
kv = overlap_closed(a, b)
print("zeta(w) =", kv.zeta, " closed =", kv.value, " quadrature =", overlap_quadrature(a, b, grid))

# %%
# the Gram matrix of a handful of states is positive definite
pts = random_tube_points(np.random.default_rng(0), 6)
print("Gram eigenvalues:", np.round(np.linalg.eigvalsh(gram_matrix(pts)), 6))

# %%
# the mean momentum is heavier than m: m_lam = m K1/K0 in d = 1
for lam in (0.1, 1.0, 10.0):
    st = FundamentalState(ComplexInterval([0, 0], [lam, 0]))
    print(f"lam={lam:5}: m_lam closed {effective_mass(lam):.6f}, "
          f"quadrature {momentum_expectation_quadrature(st, grid)[0]:.6f}")

# %%
# Newton-Wigner position at t = 0 returns the real part of z
st = FundamentalState(ComplexInterval([0.0, 2.0], [1.0, 0.3]))
print("<X> =", position_expectation(st, grid))

# %%
# large lam m / hbar: e_z approaches a Gaussian coherent state
fine = build_grid(1, 1.0, 4.0, 4001)
for lam_m in (0.5, 5.0, 50.0):
    z = ComplexInterval([0.0, 0.3], [lam_m * np.sqrt(1 + 0.05**2), lam_m * 0.05])
    print(f"lam m = {lam_m:5}: fidelity {fidelity(WaveFunction.fundamental(fine, z), nonrel_oracle(z, fine)):.6f}")
