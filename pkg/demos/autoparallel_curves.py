"""
Auto-parallel curves
====================

One-dimensional deformed exponential families t -> kexp(t u - psi(t u)) p0
are auto-parallel for the transport.  We integrate the ODE numerically
with RK4 and compare with the closed form.
"""

import time

import numpy as np

from kappageom import EnergyModel, autoparallel_closed_form, integrate_autoparallel, total_variation, uniform

model = EnergyModel.from_values([0, 0, 1, 2, 2])
p0 = uniform(model.space)
u = model.energy - model.energy.mean()
grid = np.linspace(-2, 2, 9)

for k in (0.0, 0.5):
    t0 = time.perf_counter()
    sol = integrate_autoparallel(k, p0, u, grid, step=1e-3)
    dt = time.perf_counter() - t0
    tv = [total_variation(s, autoparallel_closed_form(k, p0, u, t)) for s, t in zip(sol, grid)]
    print(f"kappa = {k}: max TV to closed form {max(tv):.2e} ({dt:.2f} s)")
    for t, s in zip(grid[::2], sol[::2]):
        print(f"  theta = {t:5.2f}  p = {np.round(s.weights, 5)}")
