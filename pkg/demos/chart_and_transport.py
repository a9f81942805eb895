"""
Coordinates, the normalizer and parallel transport
==================================================

Around a reference density p every strictly positive q is written as
q = kexp(u - psi(u)) p with u centered under p.  The normalizer psi is
convex, its gradient is an escort mean, and psi(u) is a divergence.
"""

import numpy as np

from kappageom import (
    FiniteDensity,
    change_chart,
    d2psi,
    divergence,
    dpsi,
    escort,
    from_coordinates,
    to_coordinates,
    total_variation,
    transport,
)

k = 0.5
p = FiniteDensity.from_weights([0.1, 0.2, 0.3, 0.4])
q = FiniteDensity.from_weights([0.4, 0.3, 0.2, 0.1])

cp = to_coordinates(k, p, q)
print("u    =", cp.u.values)
print("psi  =", cp.psi, " divergence =", divergence(k, p, q))
print("back =", from_coordinates(k, p, cp.u).q.weights)

# %%
# First and second derivatives of psi at u.
rng = np.random.default_rng(0)
v = rng.normal(size=4)
v -= np.dot(p.weights, v)
print("D psi(u)[v]      =", dpsi(k, p, cp.u, v))
print("escort mean of v =", np.dot(escort(k, p, q).weights, v))
print("D2 psi(u)[v, v]  =", d2psi(k, p, cp.u, v, v), "(positive: strict convexity)")

# %%
# Moving the reference point: the same q seen from pbar.
pbar = FiniteDensity.from_weights([0.25, 0.25, 0.25, 0.25])
ub = change_chart(k, p, pbar, cp.u)
print("same density:", total_variation(from_coordinates(k, pbar, ub).q, q))

# %%
# Transport keeps tangent vectors centered at the new base point.
tv = transport(k, p, pbar, v)
print("transported v:", tv.values, " mean under pbar:", np.dot(pbar.weights, tv.values))
