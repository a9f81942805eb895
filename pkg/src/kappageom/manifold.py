"""Charts, normalizer derivatives, chart changes and parallel transport.

At a strictly positive reference density ``p`` every strictly positive ``q``
has a unique centered coordinate ``u`` with::

    q = kexp(u - psi(u)) * p,      E_p[kexp(u - psi(u))] = 1,

and ``psi(u)`` equals the kappa-divergence ``D(p || q)``. Tangent vectors at
``p`` are vectors with zero ``p``-mean.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import logsumexp

from ._normalize import solve_normalizer
from .core import as_kappa, kexp, kexp_deriv, kexp_deriv2, kln, kplus, kplus_partial
from .densities import FiniteDensity, _require_strict, _same_space, values_of

__all__ = [
    "TangentVector",
    "ChartPoint",
    "tangent",
    "to_coordinates",
    "solve_psi",
    "from_coordinates",
    "reverse_divergence",
    "dpsi",
    "d2psi",
    "change_chart",
    "change_chart_deriv",
    "transport",
    "curve_velocity",
    "autoparallel_closed_form",
    "integrate_autoparallel",
    "kexp_submodel_residuals",
]

CENTER_TOL = 1e-12
FD_STEP = 1e-6


@dataclass(frozen=True)
class TangentVector:
    """Vector ``u`` with ``E_base[u] == 0``.

    The centering tolerance is relative to ``max(1, max|u|)``.
    """

    base: FiniteDensity
    values: np.ndarray

    def __post_init__(self):
        _require_strict(self.base)
        u = np.array(values_of(self.values, self.base.space), dtype=float)
        scale = max(1.0, float(np.abs(u).max()))
        if abs(float(np.dot(self.base.weights, u))) > CENTER_TOL * scale:
            raise ValueError("tangent vector is not centered at its base density")
        u.setflags(write=False)
        object.__setattr__(self, "values", u)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


def tangent(p: FiniteDensity, u, *, center=False) -> TangentVector:
    """Wrap ``u`` as a tangent vector at ``p``, optionally subtracting its mean."""
    u = np.asarray(values_of(u, p.space), dtype=float)
    if center:
        u = u - np.dot(p.weights, u)
    return TangentVector(p, u)


@dataclass(frozen=True)
class ChartPoint:
    base: FiniteDensity
    u: TangentVector
    psi: float
    q: FiniteDensity


def _u_at(p: FiniteDensity, u) -> np.ndarray:
    if isinstance(u, TangentVector):
        if u.base.space != p.space or not np.array_equal(u.base.weights, p.weights):
            raise ValueError("tangent vector is based at a different density")
        return u.values
    return TangentVector(p, u).values


def to_coordinates(kappa, p: FiniteDensity, q: FiniteDensity) -> ChartPoint:
    """Coordinate of ``q`` in the chart at ``p``: the centered ``kln(q/p)``."""
    k = as_kappa(kappa)
    _same_space(p, q)
    _require_strict(p, q)
    v = np.asarray(kln(k, q.weights / p.weights), dtype=float)
    m = float(np.dot(p.weights, v))
    return ChartPoint(p, TangentVector(p, v - m), -m, q)


def solve_psi(kappa, p: FiniteDensity, u) -> float:
    """Normalizer ``psi`` with ``E_p[kexp(u - psi)] == 1``.

    Nonnegative; ``log E_p[exp(u)]`` when ``kappa == 0``.
    """
    k = as_kappa(kappa)
    _require_strict(p)
    u = _u_at(p, u)
    if k == 0.0:
        return float(logsumexp(u, b=p.weights))
    return solve_normalizer(k, u, p.weights)


def _density_at(k, p, u, psi):
    w = np.asarray(kexp(k, u - psi), dtype=float) * p.weights
    # the solver residual bounds |sum w - 1|; renormalizing would break q = kexp(.) p
    return FiniteDensity(p.space, w, tol=1e-10)


def from_coordinates(kappa, p: FiniteDensity, u) -> ChartPoint:
    """Density ``q = kexp(u - psi(u)) p`` with coordinate ``u`` at ``p``."""
    k = as_kappa(kappa)
    uv = _u_at(p, u)
    psi = solve_psi(k, p, uv)
    return ChartPoint(p, TangentVector(p, uv), psi, _density_at(k, p, uv, psi))


def reverse_divergence(kappa, point: ChartPoint) -> float:
    """``D(q || p) = E_q[u] - psi(u)``."""
    as_kappa(kappa)
    return float(np.dot(point.q.weights, point.u.values)) - point.psi


def _escort_weights(k, p, u, psi):
    # proportional to kexp'(u - psi) p
    r = np.asarray(kexp_deriv(k, u - psi), dtype=float) * p.weights
    return r / r.sum()


def dpsi(kappa, p: FiniteDensity, u, v, *, psi=None) -> float:
    """Directional derivative ``D psi(u) v``: the escort mean of ``v``.

    For ``kappa == 0`` the escort is ``q`` itself.
    """
    k = as_kappa(kappa)
    u = _u_at(p, u)
    v = _u_at(p, v)
    if psi is None:
        psi = solve_psi(k, p, u)
    return float(np.dot(_escort_weights(k, p, u, psi), v))


def d2psi(kappa, p: FiniteDensity, u, v, w, *, psi=None) -> float:
    """Second directional derivative ``D² psi(u) v w``.

    Ratio ``E_p[kexp''(u-psi) (v - Dv)(w - Dw)] / E_p[kexp'(u-psi)]`` where
    ``Dv = D psi(u) v``. Equals ``Cov_p(v, w)`` at ``u = 0`` and
    ``Cov_q(v, w)`` at ``kappa = 0``.
    """
    k = as_kappa(kappa)
    u = _u_at(p, u)
    v = _u_at(p, v)
    w = _u_at(p, w)
    if psi is None:
        psi = solve_psi(k, p, u)
    x = u - psi
    e = _escort_weights(k, p, u, psi)
    dv = v - np.dot(e, v)
    dw = w - np.dot(e, w)
    num = np.dot(p.weights, np.asarray(kexp_deriv2(k, x)) * dv * dw)
    return float(num / np.dot(p.weights, kexp_deriv(k, x)))


def change_chart(kappa, p: FiniteDensity, pbar: FiniteDensity, u) -> TangentVector:
    """Coordinate at ``pbar`` of the density with coordinate ``u`` at ``p``.

    ``(u - psi(u)) ⊕ kln(p/pbar)``, recentred at ``pbar``; for ``kappa == 0``
    this is the affine map ``u + log(p/pbar) - E_pbar[...]``.
    """
    k = as_kappa(kappa)
    _same_space(p, pbar)
    _require_strict(p, pbar)
    u = _u_at(p, u)
    psi = solve_psi(k, p, u)
    a = np.asarray(kplus(k, u - psi, kln(k, p.weights / pbar.weights)), dtype=float)
    return TangentVector(pbar, a - np.dot(pbar.weights, a))


def change_chart_deriv(kappa, p: FiniteDensity, pbar: FiniteDensity, u, v) -> TangentVector:
    """Derivative of :func:`change_chart` at ``u`` in direction ``v``."""
    k = as_kappa(kappa)
    _same_space(p, pbar)
    _require_strict(p, pbar)
    u = _u_at(p, u)
    v = _u_at(p, v)
    psi = solve_psi(k, p, u)
    A = np.asarray(
        kplus_partial(k, u - psi, kln(k, p.weights / pbar.weights)), dtype=float
    ) * (v - dpsi(k, p, u, v, psi=psi))
    return TangentVector(pbar, A - np.dot(pbar.weights, A))


def _transport(k, p, pbar, u):
    # p, pbar, u are raw arrays; pbar need not be normalized
    s = np.hypot(1.0, k * np.asarray(kln(k, pbar / p)))
    e = pbar / s
    return (u - np.dot(e, u) / e.sum()) / s


def transport(kappa, p: FiniteDensity, pbar: FiniteDensity, u) -> TangentVector:
    """Parallel transport of ``u`` from the tangent space at ``p`` to ``pbar``.

    ``(u - E_{pbar|p}[u]) / sqrt(1 + kappa² kln(pbar/p)²)``, where the mean is
    under the escort of ``pbar`` relative to ``p``.
    """
    k = as_kappa(kappa)
    _same_space(p, pbar)
    _require_strict(p, pbar)
    u = _u_at(p, u)
    return TangentVector(pbar, _transport(k, p.weights, pbar.weights, u))


def curve_velocity(
    kappa,
    p0: FiniteDensity,
    u_of_theta: Callable[[float], np.ndarray],
    theta: float,
    du_of_theta: Callable[[float], np.ndarray] | None = None,
) -> TangentVector:
    """Velocity ``p'/p`` of ``theta -> from_coordinates(p0, u(theta)).q``.

    The result lives at ``p_theta``. ``du_of_theta`` gives the coordinate
    velocity; without it a central difference with step 1e-6 is used.
    """
    k = as_kappa(kappa)
    u = _u_at(p0, u_of_theta(theta))
    if du_of_theta is not None:
        du = np.asarray(du_of_theta(theta), dtype=float)
    else:
        h = FD_STEP
        du = (np.asarray(u_of_theta(theta + h)) - np.asarray(u_of_theta(theta - h))) / (2 * h)
    psi = solve_psi(k, p0, u)
    q = _density_at(k, p0, u, psi)
    x = u - psi
    vel = (du - np.dot(_escort_weights(k, p0, u, psi), du)) / np.hypot(1.0, k * x)
    return TangentVector(q, vel)


def autoparallel_closed_form(kappa, p0: FiniteDensity, u, theta: float) -> FiniteDensity:
    """``kexp(theta u - psi(theta u)) p0``."""
    return from_coordinates(kappa, p0, theta * _u_at(p0, u)).q


def _rk4_step(k, p0, u, p, h):
    f = lambda y: y * _transport(k, p0, y, u)
    k1 = f(p)
    y = p + 0.5 * h * k1
    if np.any(y <= 0):
        return None
    k2 = f(y)
    y = p + 0.5 * h * k2
    if np.any(y <= 0):
        return None
    k3 = f(y)
    y = p + h * k3
    if np.any(y <= 0):
        return None
    k4 = f(y)
    out = p + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return out if np.all(out > 0) else None


def _integrate_segment(k, p0, u, p, t0, t1, step, max_halvings):
    n = max(1, int(np.ceil(abs(t1 - t0) / step - 1e-9)))
    h = (t1 - t0) / n
    t = t0
    halvings = 0
    while (t1 - t) * np.sign(h) > 1e-15:
        h_eff = h if abs(t1 - t) >= abs(h) else t1 - t
        nxt = _rk4_step(k, p0, u, p, h_eff)
        if nxt is None:
            halvings += 1
            if halvings > max_halvings:
                raise FloatingPointError(
                    f"RK4 step lost positivity after {max_halvings} halvings at theta={t}"
                )
            h /= 2
            continue
        p, t = nxt, t + h_eff
    return p


def integrate_autoparallel(
    kappa,
    p0: FiniteDensity,
    u,
    theta_grid: Sequence[float],
    step: float = 1e-3,
    max_halvings: int = 20,
) -> list[FiniteDensity]:
    """Solve ``p'/p = transport(p0 -> p, u)`` from ``p(0) = p0`` by RK4.

    ``theta_grid`` must be strictly increasing with ``min <= 0 <= max``; the
    solution is advanced from 0 outward in both directions with steps no
    longer than ``step``. A stage that produces a nonpositive weight halves
    the step; more than ``max_halvings`` halvings raise FloatingPointError.
    """
    k = as_kappa(kappa)
    _require_strict(p0)
    u = _u_at(p0, u)
    grid = np.asarray(theta_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or np.any(np.diff(grid) <= 0):
        raise ValueError("theta_grid must be strictly increasing")
    if not grid[0] <= 0 <= grid[-1]:
        raise ValueError("theta_grid must contain 0 in its range")

    out: list = [None] * grid.size
    base = p0.weights.copy()
    for direction in (1, -1):
        idx = np.flatnonzero(grid >= 0) if direction > 0 else np.flatnonzero(grid < 0)[::-1]
        p, t = base, 0.0
        for i in idx:
            p = _integrate_segment(k, base, u, p, t, grid[i], step, max_halvings)
            t = grid[i]
            out[i] = FiniteDensity(p0.space, p, tol=1e-10)
    return out


def kexp_submodel_residuals(kappa, p: FiniteDensity, q: FiniteDensity, vperp) -> list[float]:
    """``E_p[kln(q/p) v]`` for each constraint ``v`` (centered at ``p``)."""
    k = as_kappa(kappa)
    _same_space(p, q)
    _require_strict(p, q)
    lq = np.asarray(kln(k, q.weights / p.weights), dtype=float)
    return [float(np.dot(p.weights, lq * _u_at(p, v))) for v in vperp]
