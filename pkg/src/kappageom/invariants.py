"""Lattice invariants of the kappa-Gibbs model.

Integer vectors ``v`` orthogonal to ``1`` and ``U`` give binomial-type
equations in the deformed product that every model density satisfies::

    ⊗_{v>0} p(x)^{⊗ v+(x)}  ==  ⊗_{v<0} p(x)^{⊗ v-(x)}

The additive form ``sum_x v(x) kln p(x) == 0`` is equivalent on strictly
positive densities; the product form extends by continuity to the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from ._normalize import solve_normalizer
from .core import as_kappa, kexp, kln, kpow, kprod, kprod_reduce
from .densities import FiniteDensity, StateSpace
from .gibbs import GIBBS_SIMPLEX_TOL, EnergyModel

__all__ = [
    "LatticeVector",
    "ToricParams",
    "integer_kernel",
    "orthogonal_lattice_basis",
    "kbinomial_residual",
    "kbinomial_residual_boundary",
    "two_state_mean_form",
    "additive_invariant_residual",
    "toric_eval",
    "toric_normalize",
    "elimination_check",
    "ELIMINATION_VECTOR",
]


@dataclass(frozen=True)
class LatticeVector:
    """Integer vector on a state space, split as ``v = v+ - v-``."""

    space: StateSpace
    values: np.ndarray

    def __post_init__(self):
        raw = np.asarray(self.values)
        v = np.round(raw).astype(np.int64)
        if v.shape != (len(self.space),) or np.any(v != raw):
            raise ValueError("lattice vector needs one integer per state")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def for_model(cls, model: EnergyModel, values) -> "LatticeVector":
        """Build ``v`` and check that it is orthogonal to ``1`` and ``U``."""
        v = cls(model.space, values)
        if not v.is_orthogonal_to(model):
            raise ValueError(f"{list(v.values)} is not orthogonal to 1 and U")
        return v

    def is_orthogonal_to(self, model: EnergyModel) -> bool:
        if model.space != self.space:
            return False
        if int(self.values.sum()) != 0:
            return False
        if model.lattice_step is not None:
            return int(np.dot(self.values, model.lattice_levels())) == 0
        return abs(float(np.dot(self.values, model.energy))) <= 1e-9 * max(
            1.0, float(np.abs(model.energy).max())
        )

    @property
    def positive_part(self) -> np.ndarray:
        return np.maximum(self.values, 0)

    @property
    def negative_part(self) -> np.ndarray:
        return np.maximum(-self.values, 0)

    @property
    def level(self) -> int:
        """``lambda = sum v+ = sum v-``."""
        return int(self.positive_part.sum())


@dataclass(frozen=True)
class ToricParams:
    zeta0: float
    zeta1: float

    def __post_init__(self):
        if not self.zeta0 > 0:
            raise ValueError("zeta0 must be strictly positive")
        if not self.zeta1 >= 0:
            raise ValueError("zeta1 must be nonnegative")


def _column_hnf(A):
    """Column-reduce integer ``A`` (list of rows) by unimodular ``T``.

    Returns ``(rank, T)`` with ``A @ T`` lower echelon: its last ``n - rank``
    columns vanish, so the matching columns of ``T`` are a basis of the
    integer kernel.
    """
    m, n = len(A), len(A[0])
    A = [list(map(int, row)) for row in A]
    T = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(i, j, a, b, c, d):
        # (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j), det = ±1
        for M in (A, T):
            for row in M:
                x, y = row[i], row[j]
                row[i], row[j] = a * x + b * y, c * x + d * y

    c = 0
    for r in range(m):
        if c == n:
            break
        for j in range(c + 1, n):
            x, y = A[r][c], A[r][j]
            if y == 0:
                continue
            # extended Euclid: s x + t y = g
            s0, t0, s1, t1, a, b = 1, 0, 0, 1, x, y
            while b:
                q = a // b
                a, b = b, a - q * b
                s0, s1 = s1, s0 - q * s1
                t0, t1 = t1, t0 - q * t1
            g = a
            colop(c, j, s0, t0, -y // g, x // g)
        if A[r][c] != 0:
            c += 1
    return c, T


def integer_kernel(A) -> np.ndarray:
    """Basis (as rows) of ``{v in Z^n : A v = 0}`` for an integer matrix ``A``.

    The basis generates every integer kernel vector, not just a full-rank
    sublattice. Rows are LLL-reduced, sign-normalized (first nonzero entry
    positive) and sorted by L1 norm then lexicographically.
    """
    A = np.atleast_2d(np.asarray(A))
    if np.any(A != np.round(A)):
        raise ValueError("integer_kernel needs an integer matrix")
    rank, T = _column_hnf(A.astype(object).tolist())
    n = A.shape[1]
    basis = [[T[i][j] for i in range(n)] for j in range(rank, n)]
    if not basis:
        return np.zeros((0, n), dtype=np.int64)
    dm = DomainMatrix([[ZZ(x) for x in row] for row in basis], (len(basis), n), ZZ)
    reduced = [[int(x) for x in row] for row in dm.lll().to_Matrix().tolist()]
    out = []
    for row in reduced:
        g = 0
        for x in row:
            g = gcd(g, x)
        row = [x // g for x in row]
        lead = next(x for x in row if x != 0)
        out.append([-x for x in row] if lead < 0 else row)
    out.sort(key=lambda r: (sum(abs(x) for x in r), [-x for x in r]))
    return np.array(out, dtype=np.int64)


def orthogonal_lattice_basis(model: EnergyModel) -> list[LatticeVector]:
    """Integer basis of the vectors orthogonal to ``1`` and ``U``.

    Needs ``model.lattice_step`` and a non-constant energy; returns ``N - 2``
    vectors.
    """
    levels = model.lattice_levels()
    if np.all(levels == levels[0]):
        raise ValueError("constant energy: 1 and U are linearly dependent")
    K = integer_kernel(np.vstack([np.ones_like(levels), levels]))
    assert K.shape[0] == model.n_states - 2
    return [LatticeVector(model.space, row) for row in K]


def _vec(v, p: FiniteDensity) -> np.ndarray:
    if isinstance(v, LatticeVector):
        if v.space != p.space:
            raise ValueError("lattice vector lives on a different state space")
        return v.values
    v = np.asarray(v)
    if v.shape != (len(p.space),):
        raise ValueError("vector length does not match the density")
    return v


def _strict(p: FiniteDensity):
    if not p.is_strict:
        raise ValueError(
            "density has zeros; use kbinomial_residual_boundary for boundary points"
        )


def kbinomial_residual(kappa, p: FiniteDensity, v) -> float:
    """``sum_x v(x) kln p(x)`` for a strictly positive density."""
    _strict(p)
    return float(np.dot(_vec(v, p), kln(kappa, p.weights)))


def kbinomial_residual_boundary(kappa, p: FiniteDensity, v) -> float:
    """Product-form residual ``⊗ p^{⊗v+} - ⊗ p^{⊗v-}``.

    Zero factors are absorbing, so this is defined on the closed simplex.
    """
    k = as_kappa(kappa)
    v = _vec(v, p)
    lhs = kprod_reduce(k, p.weights, np.maximum(v, 0))
    rhs = kprod_reduce(k, p.weights, np.maximum(-v, 0))
    return lhs - rhs


def two_state_mean_form(kappa, p: FiniteDensity, v) -> tuple[float, float]:
    """``(E_r1[kln p], E_r2[kln p])`` with ``r1 = v+/lambda``, ``r2 = v-/lambda``."""
    _strict(p)
    v = _vec(v, p)
    if not np.any(v):
        raise ValueError("v must be nonzero")
    lam = np.maximum(v, 0).sum()
    lp = kln(kappa, p.weights)
    return (
        float(np.dot(np.maximum(v, 0) / lam, lp)),
        float(np.dot(np.maximum(-v, 0) / lam, lp)),
    )


def additive_invariant_residual(kappa, p: FiniteDensity, v) -> float:
    """``sum_x v(x) (p^kappa - p^-kappa)``, i.e. ``2 kappa`` times the kln form."""
    k = as_kappa(kappa)
    _strict(p)
    w = p.weights
    return float(np.dot(_vec(v, p), w**k - w**-k))


def toric_eval(kappa, model: EnergyModel, params: ToricParams) -> np.ndarray:
    """``zeta0 ⊗ zeta1^{⊗ U(x)/Delta}`` per state; not normalized."""
    k = as_kappa(kappa)
    n = model.lattice_levels()
    return np.asarray(kprod(k, params.zeta0, kpow(k, params.zeta1, n)), dtype=float)


def toric_normalize(kappa, model: EnergyModel, zeta1: float) -> tuple[float, FiniteDensity]:
    """Solve for the ``zeta0`` that makes :func:`toric_eval` a density.

    ``zeta1 == 0`` gives the uniform density on the zero-energy states.
    """
    k = as_kappa(kappa)
    if not zeta1 >= 0:
        raise ValueError("zeta1 must be nonnegative")
    n = model.lattice_levels()
    if zeta1 > 0:
        a = n * float(kln(k, zeta1))
    else:
        a = np.zeros(int(np.sum(n == 0)))
        if a.size == 0:
            raise ValueError("zeta1 = 0 needs a state with zero energy")
    if k == 0.0:
        psi = float(np.logaddexp.reduce(a))
    else:
        psi = solve_normalizer(k, a)
    zeta0 = float(kexp(k, -psi))
    w = toric_eval(k, model, ToricParams(zeta0, zeta1))
    return zeta0, FiniteDensity(model.space, w, tol=GIBBS_SIMPLEX_TOL)


ELIMINATION_VECTOR = (0, -1, 2, 0, -1)


def elimination_check(kappa, p: FiniteDensity, model: EnergyModel | None = None) -> float:
    """``p(3)^{⊗2} - p(2) ⊗ p(5)`` on a five-state density.

    The relation follows by eliminating the toric parameters when
    ``(0, -1, 2, 0, -1)`` is orthogonal to ``1`` and ``U``; pass ``model`` to
    have that checked.
    """
    if len(p.space) != 5:
        raise ValueError("elimination_check needs a five-state density")
    if model is not None:
        LatticeVector.for_model(model, ELIMINATION_VECTOR)
    k = as_kappa(kappa)
    w = p.weights
    return float(kpow(k, w[2], 2) - kprod(k, w[1], w[4]))
