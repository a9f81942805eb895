"""Scalar kappa-deformed calculus.

All functions take the deformation parameter first and broadcast over numpy
arrays. ``kappa == 0`` dispatches to the ordinary ``exp``/``log``.

The deformed exponential is evaluated as ``exp(asinh(kappa*x)/kappa)`` and the
deformed logarithm as ``sinh(kappa*log(y))/kappa``; these are the same
functions as the power forms but do not cancel for large negative arguments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "KappaParam",
    "as_kappa",
    "kexp",
    "kln",
    "kexp_deriv",
    "kexp_deriv2",
    "kln_deriv",
    "kplus",
    "kplus_partial",
    "kprod",
    "kpow",
    "kprod_reduce",
    "kcosh",
    "FLOAT_MAX",
]

FLOAT_MAX = np.finfo(float).max


@dataclass(frozen=True)
class KappaParam:
    """Deformation parameter, ``0 <= kappa < 1``.

    The deformed functions depend on kappa only through its magnitude, so
    only the nonnegative half of the window is accepted.
    """

    kappa: float

    def __post_init__(self):
        k = float(self.kappa)
        if not np.isfinite(k) or not 0.0 <= k < 1.0:
            raise ValueError(f"kappa must satisfy 0 <= kappa < 1, got {self.kappa!r}")
        object.__setattr__(self, "kappa", k)

    def __float__(self):
        return self.kappa


def as_kappa(kappa) -> float:
    """Validate a float or :class:`KappaParam` and return the float value."""
    if isinstance(kappa, KappaParam):
        return kappa.kappa
    return KappaParam(kappa).kappa


def _out(a):
    # 0-d arrays come back as numpy scalars
    return a[()] if isinstance(a, np.ndarray) and a.ndim == 0 else a


def _saturate(y):
    sat = ~np.isfinite(y)
    if np.any(sat):
        y = np.where(sat, FLOAT_MAX, y)
    return y, sat


def kexp(kappa, x, *, full_output=False):
    """Kappa-deformed exponential.

    Parameters
    ----------
    kappa : float or KappaParam
    x : array_like
        Finite real arguments.
    full_output : bool
        If True also return a boolean mask flagging results that overflowed
        and were clipped to the largest finite float.

    Returns
    -------
    y : ndarray or float
        Strictly positive values; never ``inf``.
    saturated : ndarray of bool, optional
    """
    k = as_kappa(kappa)
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        if k == 0.0:
            y = np.exp(x)
        else:
            y = np.exp(np.arcsinh(k * x) / k)
    y, sat = _saturate(y)
    if full_output:
        return _out(y), _out(sat)
    return _out(y)


def _check_positive(y, name="y"):
    y = np.asarray(y, dtype=float)
    if np.any(~(y > 0)):
        raise ValueError(f"{name} must be strictly positive")
    return y


def kln(kappa, y):
    """Kappa-deformed logarithm, the inverse of :func:`kexp`.

    Raises ValueError for ``y <= 0``.
    """
    k = as_kappa(kappa)
    y = _check_positive(y)
    if k == 0.0:
        return _out(np.log(y))
    return _out(np.sinh(k * np.log(y)) / k)


def kexp_deriv(kappa, x):
    """First derivative ``kexp(x) / sqrt(1 + kappa**2 x**2)``."""
    k = as_kappa(kappa)
    x = np.asarray(x, dtype=float)
    y = np.asarray(kexp(k, x)) / np.hypot(1.0, k * x)
    return _out(y)


def kexp_deriv2(kappa, x):
    """Second derivative of :func:`kexp`.

    ``(sqrt(1+k²x²) - k²x) / (1+k²x²) * kexp'(x)``, positive for ``kappa < 1``.
    """
    k = as_kappa(kappa)
    x = np.asarray(x, dtype=float)
    s = np.hypot(1.0, k * x)
    y = (s - k * k * x) / (s * s) * np.asarray(kexp_deriv(k, x))
    return _out(y)


def kln_deriv(kappa, y):
    """Derivative of :func:`kln`, ``(y**k + y**-k) / (2y)``."""
    k = as_kappa(kappa)
    y = _check_positive(y)
    return _out(np.cosh(k * np.log(y)) / y)


def kplus(kappa, x1, x2):
    """Deformed sum: ``kexp(kplus(a, b)) == kexp(a) * kexp(b)``."""
    k = as_kappa(kappa)
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    return _out(x1 * np.hypot(1.0, k * x2) + x2 * np.hypot(1.0, k * x1))


def kplus_partial(kappa, x1, x2):
    """Partial derivative of ``kplus(kappa, x1, x2)`` in ``x1``.

    ``sqrt(1 + k² x2²) + k² x1 x2 / sqrt(1 + k² x1²)``. Note the plus sign:
    this is the exact derivative of the closed form of :func:`kplus`.
    """
    k = as_kappa(kappa)
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    return _out(np.hypot(1.0, k * x2) + k * k * x1 * x2 / np.hypot(1.0, k * x1))


def _check_nonneg(y, name="y"):
    y = np.asarray(y, dtype=float)
    if np.any(~(y >= 0)):
        raise ValueError(f"{name} must be nonnegative")
    return y


def _kln_or_nan(k, y):
    # kln on the positive entries; zeros map to nan and are masked by callers
    pos = y > 0
    out = np.full(y.shape, np.nan)
    out[pos] = kln(k, y[pos])
    return out, pos


def kprod(kappa, y1, y2):
    """Deformed product ``kexp(kln y1 + kln y2)``, zero if either factor is 0."""
    k = as_kappa(kappa)
    y1 = _check_nonneg(y1, "y1")
    y2 = _check_nonneg(y2, "y2")
    y1, y2 = np.broadcast_arrays(y1, y2)
    l1, pos1 = _kln_or_nan(k, y1)
    l2, pos2 = _kln_or_nan(k, y2)
    pos = pos1 & pos2
    out = np.zeros(y1.shape)
    out[pos] = kexp(k, l1[pos] + l2[pos])
    return _out(out)


def kpow(kappa, y, n):
    """``n``-fold deformed product of ``y`` with itself.

    ``n`` must be a nonnegative integer (or integer array). ``kpow(y, 0) == 1``
    including at ``y == 0``.
    """
    k = as_kappa(kappa)
    y = _check_nonneg(y)
    n = np.asarray(n)
    if not np.issubdtype(n.dtype, np.integer):
        if np.any(n != np.round(n)):
            raise ValueError("kpow exponent must be an integer")
        n = n.astype(np.int64)
    if np.any(n < 0):
        raise ValueError("kpow exponent must be nonnegative")
    y, n = np.broadcast_arrays(y, n)
    ly, pos = _kln_or_nan(k, y)
    out = np.where(n == 0, 1.0, 0.0)
    live = pos & (n > 0)
    out[live] = kexp(k, n[live] * ly[live])
    return _out(out)


def kprod_reduce(kappa, ys, powers=None):
    """Deformed product of a sequence, each factor raised to a deformed power.

    Equivalent to folding :func:`kprod` over ``kpow(ys[i], powers[i])``; any
    zero factor with positive power makes the result 0. The empty product is 1.
    """
    k = as_kappa(kappa)
    ys = _check_nonneg(np.atleast_1d(ys))
    if powers is None:
        powers = np.ones(ys.shape, dtype=np.int64)
    powers = np.asarray(powers)
    if np.any(powers < 0):
        raise ValueError("powers must be nonnegative")
    active = powers > 0
    if not np.any(active):
        return 1.0
    if np.any(ys[active] == 0):
        return 0.0
    return float(kexp(k, np.sum(powers[active] * kln(k, ys[active]))))


def kcosh(kappa, x):
    """``(kexp(x) + kexp(-x)) / 2``, i.e. ``cosh(asinh(kappa*x)/kappa)``."""
    k = as_kappa(kappa)
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        t = x if k == 0.0 else np.arcsinh(k * x) / k
        y = np.cosh(t)
    return _out(_saturate(y)[0])
