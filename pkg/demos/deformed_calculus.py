"""
Deformed exponential and logarithm
==================================

The deformed exponential interpolates between the ordinary exponential
(kappa = 0) and a function with power-law tails.  Here we tabulate it and
check the algebra that makes it useful.
"""

import numpy as np

from kappageom import kexp, kln, kplus, kprod, kpow

x = np.linspace(-6, 6, 7)
print("x      " + " ".join(f"{v:10.3g}" for v in x))
for k in (0.0, 0.25, 0.5, 0.9):
    print(f"k={k:<4} " + " ".join(f"{v:10.3g}" for v in kexp(k, x)))

# %%
# For large negative arguments the decay is a power law, not exponential:
# kexp(x) ~ |2 k x|^(-1/k).
k = 0.5
for x in (-10.0, -100.0, -1000.0):
    print(f"kexp({x:g}) = {kexp(k, x):.6e}   power law {abs(2 * k * x) ** (-1 / k):.6e}")

# %%
# The deformed sum turns kexp into a group homomorphism, and the
# deformed product does the same for kln.
a, b = 1.3, -0.4
print("kexp(a (+) b)      =", kexp(k, kplus(k, a, b)))
print("kexp(a) * kexp(b)  =", kexp(k, a) * kexp(k, b))
y1, y2 = 2.0, 5.0
print("kln(y1 (x) y2)     =", kln(k, kprod(k, y1, y2)))
print("kln(y1) + kln(y2)  =", kln(k, y1) + kln(k, y2))

# %%
# Integer powers under the deformed product.
for n in range(5):
    print(f"2 (x)^{n} = {kpow(k, 2.0, n):.12g}   kexp(n kln 2) = {kexp(k, n * kln(k, 2.0)):.12g}")
