"""Finite densities with respect to the uniform counting reference."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable

import numpy as np
from scipy.special import rel_entr

from .core import as_kappa, kln

__all__ = [
    "StateSpace",
    "FiniteDensity",
    "RandomVariable",
    "SIMPLEX_TOL",
    "values_of",
    "expectation",
    "divergence",
    "escort",
    "uniform",
    "uniform_on",
    "total_variation",
]

SIMPLEX_TOL = 1e-12


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class StateSpace:
    """Ordered finite set of at least two distinct state labels."""

    labels: tuple

    def __post_init__(self):
        labels = tuple(self.labels)
        if len(labels) < 2:
            raise ValueError("a state space needs at least two states")
        if len(set(labels)) != len(labels):
            raise ValueError("state labels must be distinct")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def of_size(cls, n: int) -> "StateSpace":
        """States labelled ``1..n``."""
        return cls(tuple(range(1, n + 1)))

    def __len__(self):
        return len(self.labels)

    def index(self, label: Hashable) -> int:
        return self.labels.index(label)


@dataclass(frozen=True)
class RandomVariable:
    space: StateSpace
    values: np.ndarray

    def __post_init__(self):
        values = _frozen(self.values)
        if values.shape != (len(self.space),):
            raise ValueError("values must have one entry per state")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class FiniteDensity:
    """Probability vector over ``space``.

    Weights must be nonnegative and sum to one within ``tol``; nothing is
    renormalized. ``positivity`` is ``"strict"`` when every weight is positive
    and ``"boundary"`` otherwise.
    """

    space: StateSpace
    weights: np.ndarray
    tol: float = field(default=SIMPLEX_TOL, repr=False, compare=False)

    def __post_init__(self):
        w = _frozen(self.weights)
        if w.shape != (len(self.space),):
            raise ValueError(
                f"expected {len(self.space)} weights, got shape {w.shape}"
            )
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("weights must be finite and nonnegative")
        total = w.sum()
        if abs(total - 1.0) > self.tol:
            raise ValueError(f"weights sum to {total!r}, not 1")
        object.__setattr__(self, "weights", w)

    @classmethod
    def from_weights(cls, weights, space: StateSpace | None = None, **kw):
        weights = np.asarray(weights, dtype=float)
        if space is None:
            space = StateSpace.of_size(weights.size)
        return cls(space, weights, **kw)

    @property
    def positivity(self) -> str:
        return "strict" if np.all(self.weights > 0) else "boundary"

    @property
    def is_strict(self) -> bool:
        return self.positivity == "strict"

    def __len__(self):
        return len(self.space)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.weights, dtype=dtype)


def values_of(f, space: StateSpace | None = None) -> np.ndarray:
    """Raw value vector of a RandomVariable, FiniteDensity or array.

    When ``space`` is given, a mismatching space or length raises ValueError.
    """
    if isinstance(f, RandomVariable):
        if space is not None and f.space != space:
            raise ValueError("random variable lives on a different state space")
        return f.values
    if isinstance(f, FiniteDensity):
        if space is not None and f.space != space:
            raise ValueError("density lives on a different state space")
        return f.weights
    a = np.asarray(f, dtype=float)
    if space is not None and a.shape != (len(space),):
        raise ValueError(f"expected {len(space)} values, got shape {a.shape}")
    return a


def _require_strict(*densities):
    for d in densities:
        if not d.is_strict:
            raise ValueError("operation requires a strictly positive density")


def _same_space(p, q):
    if p.space != q.space:
        raise ValueError("densities live on different state spaces")


def expectation(p: FiniteDensity, f) -> float:
    """``sum_x f(x) p(x)``."""
    return float(np.dot(values_of(f, p.space), p.weights))


def divergence(kappa, p: FiniteDensity, q: FiniteDensity) -> float:
    """Kappa-divergence ``E_p[kln(p/q)]``; Kullback-Leibler when ``kappa == 0``.

    Both densities must be strictly positive; the value is +inf otherwise and
    that case is refused rather than returned.
    """
    k = as_kappa(kappa)
    _same_space(p, q)
    _require_strict(p, q)
    if k == 0.0:
        return float(np.sum(rel_entr(p.weights, q.weights)))
    return float(np.dot(p.weights, kln(k, p.weights / q.weights)))


def escort(kappa, p: FiniteDensity, q: FiniteDensity) -> FiniteDensity:
    """Escort density ``q|p`` proportional to ``q / sqrt(1 + kappa² kln(q/p)²)``."""
    k = as_kappa(kappa)
    _same_space(p, q)
    _require_strict(p, q)
    r = q.weights / np.hypot(1.0, k * kln(k, q.weights / p.weights))
    return FiniteDensity(p.space, r / r.sum())


def uniform(space: StateSpace) -> FiniteDensity:
    n = len(space)
    return FiniteDensity(space, np.full(n, 1.0 / n))


def uniform_on(space: StateSpace, subset: Iterable[Hashable]) -> FiniteDensity:
    """Uniform density on the given labels, zero elsewhere."""
    idx = sorted({space.index(s) for s in subset})
    if not idx:
        raise ValueError("subset must be nonempty")
    w = np.zeros(len(space))
    w[idx] = 1.0 / len(idx)
    return FiniteDensity(space, w)


def total_variation(p, q) -> float:
    """``0.5 * sum |p - q|`` for densities or raw vectors."""
    return 0.5 * float(np.abs(values_of(p) - values_of(q)).sum())
