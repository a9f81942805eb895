"""
A five-state Gibbs family and its binomial invariants
=====================================================

Energy U = (0, 0, 1, 2, 2) on five states.  The deformed Gibbs densities
p = kexp(theta U - psi) satisfy polynomial-type relations indexed by the
integer vectors orthogonal to 1 and U.
"""

import numpy as np

from kappageom import (
    EnergyModel,
    elimination_check,
    gibbs_density,
    kbinomial_residual,
    kbinomial_residual_boundary,
    orthogonal_lattice_basis,
    psi_prime,
    total_variation,
    uniform_on,
)

model = EnergyModel.from_values([0, 0, 1, 2, 2], lattice_step=1)
k = 0.5

print(" theta        psi     psi'   p")
for theta in (-2, -1, 0, 1, 2):
    pt = gibbs_density(k, model, theta)
    print(f"{theta:6}  {pt.psi:9.5f}  {psi_prime(k, model, theta, pt):7.4f}  {np.round(pt.weights, 5)}")

# %%
# A saturated basis of the integer vectors orthogonal to 1 and U.
basis = orthogonal_lattice_basis(model)
for v in basis:
    print("v =", v.values)

# %%
# Every Gibbs density satisfies the binomial relations, and the
# elimination identity p3 (x) p3 = p2 (x) p5.
pt = gibbs_density(k, model, 1.7)
print("residuals:", [f"{kbinomial_residual(k, pt.density, v):.1e}" for v in basis])
print("elimination:", f"{elimination_check(k, pt.density, model):.1e}")

# %%
# As theta grows the family leaves the open simplex; the limits are
# uniform on the lowest and highest energy levels, and they still satisfy
# the relations written with the deformed product.
top = uniform_on(model.space, {4, 5})
for theta in (10, 100, 1000):
    print(f"theta = {theta:5}: TV to limit = {total_variation(gibbs_density(k, model, theta).density, top):.2e}")
print("boundary residuals:", [kbinomial_residual_boundary(k, top, v) for v in basis])
