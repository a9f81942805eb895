"""Safeguarded Newton solve for ``sum_i w_i kexp(a_i - psi) = 1``.

The left side is smooth, convex and strictly decreasing in ``psi``, from
``+inf`` to 0, so the root is unique and Newton started left of it converges
monotonically. The bracket is kept anyway to guard against rounding.
"""

from __future__ import annotations

import numpy as np

from .core import kexp, kexp_deriv, kln

TOL = 1e-13
MAXITER = 200


class ConvergenceError(RuntimeError):
    """Raised when a normalization solve exhausts its iteration budget."""


def _residual(kappa, a, w, psi):
    x = a - psi
    return float(np.dot(w, kexp(kappa, x)) - 1.0), float(np.dot(w, kexp_deriv(kappa, x)))


def solve_normalizer(kappa, a, w=None, *, tol=TOL, maxiter=MAXITER):
    """Return the unique ``psi`` with ``sum(w * kexp(kappa, a - psi)) == 1``.

    ``w`` defaults to all ones. Weights must be positive.
    """
    a = np.asarray(a, dtype=float)
    w = np.ones_like(a) if w is None else np.asarray(w, dtype=float)
    if a.ndim != 1 or a.shape != w.shape or a.size == 0:
        raise ValueError("a and w must be matching nonempty vectors")
    if np.any(~(w > 0)):
        raise ValueError("weights must be strictly positive")
    if not np.all(np.isfinite(a)):
        raise ValueError("a must be finite")

    # W kexp(min a - psi) <= sum <= W kexp(max a - psi)
    shift = float(kln(kappa, w.sum()))
    lo = float(a.min()) + shift
    hi = float(a.max()) + shift
    width = max(hi - lo, 1.0)
    f_lo, fp_lo = _residual(kappa, a, w, lo)
    while f_lo < 0:
        lo -= width
        width *= 2
        f_lo, fp_lo = _residual(kappa, a, w, lo)
    width = max(hi - lo, 1.0)
    f_hi, _ = _residual(kappa, a, w, hi)
    while f_hi > 0:
        hi += width
        width *= 2
        f_hi, _ = _residual(kappa, a, w, hi)

    psi, f, fp = lo, f_lo, fp_lo
    best = (abs(f), psi)
    for _ in range(maxiter):
        if abs(f) <= tol:
            return psi
        if f > 0:
            lo = psi
        else:
            hi = psi
        step = psi + f / fp if fp > 0 else np.nan
        if not lo < step < hi:
            step = 0.5 * (lo + hi)
        # rounding floor: the residual cannot be pushed further down
        ulp = np.spacing(max(abs(lo), abs(hi), 1.0))
        if hi - lo <= 4 * ulp or abs(step - psi) <= 2 * ulp:
            return best[1]
        psi = step
        f, fp = _residual(kappa, a, w, psi)
        best = min(best, (abs(f), psi))
    raise ConvergenceError(
        f"normalization did not converge in {maxiter} iterations "
        f"(residual {best[0]:.3e})"
    )
