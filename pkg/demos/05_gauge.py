"""
Holomorphic gauge fields
========================

Fiber metrics, their potentials and fields, and gauge covariance.
"""

# %%
import numpy as np

from futuretube.gauge import (QuadraticMetric, cauchy_riemann_residual, covariant_density, field,
                              gauge_transform, integrability_residual, nonabelian_metric,
                              plane_gauge, potential, transform_wavefunction)
from futuretube.geometry import ComplexInterval
from futuretube.massshell import build_grid
from futuretube.states import WaveFunction

z = np.array([0.3 - 1.2j, -0.5 - 0.4j])   # x - i y with y = (1.2, 0.4)
psi = WaveFunction.fundamental(build_grid(1), ComplexInterval([0.0, 0.0], [1.0, 0.1]))
print("dbar psi / d psi =", cauchy_riemann_residual(psi, z))

# %%
Q = QuadraticMetric()
g = Q.metric()
print("A numeric", potential(g, z).components)
print("A exact  ", Q.potential_exact(z))
print("F numeric\n", np.round(field(g, z).components, 10))

# %%
chi = plane_gauge([0.4, -0.7])
gp = gauge_transform(g, chi)
print("F change under chi:", np.max(np.abs(field(gp, z).components - field(g, z).components)))
print("rho before/after:", covariant_density(psi, g, z),
      covariant_density(transform_wavefunction(psi, chi), gp, z))

# %%
gn = nonabelian_metric()
A = potential(gn, z).components
print("||[A_0, A_1]|| =", np.linalg.norm(A[0] @ A[1] - A[1] @ A[0]))
print("integrability residual =", integrability_residual(gn, z))
