"""The kappa-Gibbs model ``p(x; theta) = kexp(theta U(x) - psi(theta))``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from ._normalize import solve_normalizer
from .core import as_kappa, kexp
from .densities import FiniteDensity, StateSpace, values_of

__all__ = [
    "EnergyModel",
    "GibbsPoint",
    "solve_psi_gibbs",
    "gibbs_density",
    "psi_prime",
    "moment_identity_residual",
]

LATTICE_TOL = 1e-9
# sum of the Gibbs weights is 1 up to the solver floor, which grows with |theta|
GIBBS_SIMPLEX_TOL = 1e-10


@dataclass(frozen=True)
class EnergyModel:
    """Nonnegative energy ``U`` on a state space.

    ``lattice_step`` (``Delta``), when given, asserts every energy is an
    integer multiple of it.
    """

    space: StateSpace
    energy: np.ndarray
    lattice_step: float | None = None

    def __post_init__(self):
        U = np.array(values_of(self.energy), dtype=float)
        if U.shape != (len(self.space),):
            raise ValueError("energy must have one value per state")
        if not np.all(np.isfinite(U)) or np.any(U < 0):
            raise ValueError("energies must be finite and nonnegative")
        U.setflags(write=False)
        object.__setattr__(self, "energy", U)
        if self.lattice_step is not None:
            step = float(self.lattice_step)
            if not step > 0:
                raise ValueError("lattice_step must be positive")
            n = U / step
            if np.any(np.abs(n - np.round(n)) > LATTICE_TOL):
                raise ValueError("energies are not on the lattice 0, step, 2*step, ...")
            object.__setattr__(self, "lattice_step", step)

    @classmethod
    def from_values(cls, energy, labels=None, lattice_step=None):
        energy = np.asarray(energy, dtype=float)
        space = StateSpace(labels) if labels is not None else StateSpace.of_size(energy.size)
        return cls(space, energy, lattice_step)

    @property
    def n_states(self) -> int:
        return len(self.space)

    def lattice_levels(self) -> np.ndarray:
        """Integer energies ``U / Delta``."""
        if self.lattice_step is None:
            raise ValueError("model has no lattice_step")
        return np.round(self.energy / self.lattice_step).astype(np.int64)


@dataclass(frozen=True)
class GibbsPoint:
    model: EnergyModel
    kappa: float
    theta: float
    psi: float
    density: FiniteDensity

    @property
    def weights(self) -> np.ndarray:
        return self.density.weights


def solve_psi_gibbs(kappa, model: EnergyModel, theta: float) -> float:
    """Normalizer ``psi`` with ``sum_x kexp(theta U(x) - psi) == 1``.

    For ``kappa == 0`` this is the log-partition function.
    """
    k = as_kappa(kappa)
    theta = float(theta)
    if not np.isfinite(theta):
        raise ValueError("theta must be finite")
    with np.errstate(over="ignore"):
        a = theta * model.energy
    if not np.all(np.isfinite(a)):
        raise ValueError("theta * U overflows")
    if k == 0.0:
        return float(logsumexp(a))
    return solve_normalizer(k, a)


def gibbs_density(kappa, model: EnergyModel, theta: float) -> GibbsPoint:
    k = as_kappa(kappa)
    psi = solve_psi_gibbs(k, model, theta)
    w = np.asarray(kexp(k, float(theta) * model.energy - psi), dtype=float)
    p = FiniteDensity(model.space, w, tol=GIBBS_SIMPLEX_TOL)
    return GibbsPoint(model, k, float(theta), psi, p)


def _inv_scale(point: GibbsPoint) -> np.ndarray:
    x = point.theta * point.model.energy - point.psi
    return 1.0 / np.hypot(1.0, point.kappa * x)


def psi_prime(kappa, model: EnergyModel, theta: float, point: GibbsPoint | None = None) -> float:
    """Derivative of the normalizer in ``theta``.

    Solved from ``E_theta[(U - psi') / s] = 0`` with
    ``s = sqrt(1 + kappa² (theta U - psi)²)``; reduces to ``E_theta[U]`` at
    ``kappa == 0``. Pass ``point`` to reuse an already solved density.
    """
    if point is None:
        point = gibbs_density(kappa, model, theta)
    p = point.weights * _inv_scale(point)
    return float(np.dot(p, model.energy) / p.sum())


def moment_identity_residual(kappa, point: GibbsPoint) -> float:
    """``E_theta[(U - psi'(theta)) / s]``, zero along the model."""
    if as_kappa(kappa) != point.kappa:
        raise ValueError("kappa does not match the point's kappa")
    dpsi = psi_prime(kappa, point.model, point.theta, point=point)
    return float(np.dot(point.weights, (point.model.energy - dpsi) * _inv_scale(point)))
