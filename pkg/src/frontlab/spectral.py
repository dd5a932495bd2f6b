"""Schrodinger operators H = -(1-eps) d2/dx2 + q and their rank-one updates.

The operator is discretized by second-order central differences with
Dirichlet walls at the grid ends, giving a symmetric tridiagonal matrix.
Eigenvalue counts and selected eigenvalues come from LAPACK's
Sturm-sequence bisection (eigvalsh_tridiagonal); the rank-one update
H + gamma |q><q| is handled through the secular function

    R(lambda) = 1 + gamma <q, (H - lambda)^-1 q>,

a Herglotz (increasing) function between consecutive eigenvalues of H,
whose root in the first gap is the perturbed ground energy.  The inner
product carries the grid weight h so the discrete threshold matches the
continuum one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal, solve_banded

from .errors import ConfigError, ResolutionError, ResolventError
from .sampled import SampledFunction

_DEFAULT_EIG_TOL_COEFF = 1e-8  # counting cutoff is this over h^2 (matrix-norm scale)


@dataclass(frozen=True)
class SchrodingerOperator:
    """Symmetric tridiagonal discretization of -(1-eps) d2/dx2 + q, Dirichlet ends."""

    potential: SampledFunction
    epsilon: float
    h: float
    diag: np.ndarray = field(repr=False)
    offdiag: float = field(repr=False)

    @property
    def size(self) -> int:
        return self.diag.size

    def default_tol(self) -> float:
        return _DEFAULT_EIG_TOL_COEFF / (self.h * self.h)


@dataclass(frozen=True)
class SpectrumReport:
    """Negative-eigenvalue census of one operator (optionally perturbed)."""

    negative_count: int
    eigenvalues: list[float]
    epsilon: float
    nu: float | None = None
    gamma: float | None = None
    min_eig_perturbed: float | None = None

    def to_dict(self) -> dict:
        return {
            "nu": self.nu,
            "epsilon": self.epsilon,
            "gamma": self.gamma,
            "negative_count": self.negative_count,
            "eigenvalues": self.eigenvalues,
            "min_eig_perturbed": self.min_eig_perturbed,
        }


def build_operator(q: SampledFunction, epsilon: float = 0.0) -> SchrodingerOperator:
    """Assemble the tridiagonal operator; rejects grids too coarse for q."""
    if not 0.0 <= epsilon < 1.0:
        raise ConfigError("epsilon must lie in [0, 1)")
    h = q.spacing
    qmax = float(np.max(np.abs(q.values)))
    if h * h * qmax > 0.1:
        raise ResolutionError(f"h^2 * max|q| = {h * h * qmax:.3e} exceeds 0.1")
    kin = (1.0 - epsilon) / (h * h)
    diag = 2.0 * kin + q.values
    return SchrodingerOperator(potential=q, epsilon=float(epsilon), h=h,
                               diag=diag, offdiag=-kin)


def sturm_count(op: SchrodingerOperator, sigma: float) -> int:
    """Number of eigenvalues strictly below sigma, by the LDL^T sign sweep."""
    e2 = op.offdiag * op.offdiag
    d = op.diag
    count = 0
    piv = d[0] - sigma
    if piv < 0.0:
        count += 1
    for k in range(1, d.size):
        if piv == 0.0:
            piv = 1e-300
        piv = d[k] - sigma - e2 / piv
        if piv < 0.0:
            count += 1
    return count


def _eig_range(op: SchrodingerOperator, lo: float, hi: float) -> np.ndarray:
    e = np.full(op.size - 1, op.offdiag)
    return eigvalsh_tridiagonal(op.diag, e, select="v", select_range=(lo, hi),
                                lapack_driver="stebz")


def _eig_index(op: SchrodingerOperator, i0: int, i1: int) -> np.ndarray:
    e = np.full(op.size - 1, op.offdiag)
    return eigvalsh_tridiagonal(op.diag, e, select="i", select_range=(i0, i1),
                                lapack_driver="stebz")


def count_negative_eigenvalues(op: SchrodingerOperator,
                               tol: float | None = None,
                               nu: float | None = None) -> SpectrumReport:
    """Count eigenvalues below -tol and list them plus the first nonnegative one."""
    if tol is None:
        tol = op.default_tol()
    # Gershgorin floor: rows sum to q_i at the bottom of the spectrum.
    lower = float(np.min(op.diag + 2.0 * op.offdiag)) - 1.0
    neg = _eig_range(op, lower, 0.0)
    neg = neg[neg < 0.0]
    count = int(np.sum(neg < -tol))
    edge = _eig_index(op, neg.size, neg.size)  # smallest eigenvalue >= 0
    eigs = [float(v) for v in neg] + [float(edge[0])]
    return SpectrumReport(negative_count=count, eigenvalues=eigs,
                          epsilon=op.epsilon, nu=nu)


def _shifted_solve(op: SchrodingerOperator, lam: float, rhs: np.ndarray) -> np.ndarray:
    n = op.size
    ab = np.zeros((3, n))
    ab[0, 1:] = op.offdiag
    ab[1, :] = op.diag - lam
    ab[2, :-1] = op.offdiag
    return solve_banded((1, 1), ab, rhs)


def herglotz_R(op: SchrodingerOperator, gamma: float, lam: float,
               guard: float = 1e-9) -> float:
    """R(lambda) = 1 + gamma * <q, (H - lambda)^-1 q> with h-weighted inner product.

    Increasing in lambda between consecutive eigenvalues of H; blows down to
    -inf at the ground eigenvalue and approaches 1 + gamma <q, 1> as
    lambda -> 0- for a front potential (up to finite-wall effects).
    """
    if sturm_count(op, lam - guard) != sturm_count(op, lam + guard):
        raise ResolventError(f"lambda = {lam!r} is within {guard:.1e} of a discrete eigenvalue")
    q = op.potential.values
    u = _shifted_solve(op, lam, q)
    return float(1.0 + gamma * op.h * np.dot(q, u))


def _lowest_pair(op: SchrodingerOperator) -> tuple[float, float]:
    mu = _eig_index(op, 0, 1)
    return float(mu[0]), float(mu[1])


def rank_one_min_eigenvalue(op: SchrodingerOperator, gamma: float) -> float:
    """Smallest eigenvalue of H + gamma |q><q| (h-weighted outer product).

    For gamma > 0 the update is positive semi-definite, so the perturbed
    ground energy sits in [mu0, mu1] (the two lowest eigenvalues of H) and
    is the unique root there of the secular function R; bisection on R is
    exact up to the tridiagonal solves.
    """
    if gamma < 0.0:
        raise ConfigError("gamma must be nonnegative")
    mu0, mu1 = _lowest_pair(op)
    if gamma == 0.0:
        return mu0
    gap = mu1 - mu0
    lo = mu0 + 1e-12 * max(1.0, abs(mu0))
    hi = mu1 - 1e-12 * max(1.0, abs(mu1))
    if hi <= lo:
        return mu0
    q = op.potential.values

    def R(lam: float) -> float:
        u = _shifted_solve(op, lam, q)
        return 1.0 + gamma * op.h * np.dot(q, u)

    if R(lo) >= 0.0:
        return mu0  # projection onto the ground mode is (numerically) zero
    if R(hi) <= 0.0:
        return mu1  # root indistinguishable from the gap's upper end
    while hi - lo > 1e-15 * max(1.0, abs(mu0)) and hi - lo > 1e-16 * gap:
        mid = 0.5 * (lo + hi)
        if R(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def rank_one_negative_count(op: SchrodingerOperator, gamma: float,
                            tol: float | None = None) -> int:
    """Number of eigenvalues of H + gamma |q><q| below -tol.

    Interlacing places each perturbed eigenvalue between neighbours of the
    unperturbed ones, so the count is the Sturm count of H at -tol minus one
    when the secular function is negative there (the root of the gap
    straddling -tol has not yet passed it).
    """
    if tol is None:
        tol = op.default_tol()
    base = sturm_count(op, -tol)
    if gamma == 0.0:
        return base
    q = op.potential.values
    u = _shifted_solve(op, -tol, q)
    r = 1.0 + gamma * op.h * np.dot(q, u)
    return base - (1 if r < 0.0 else 0)


def eigenvalue_vs_gamma(op: SchrodingerOperator, gammas: list[float],
                        tol: float | None = None) -> list[float | None]:
    """Perturbed ground energy along a gamma grid; None once it leaves (-inf, -tol).

    Strictly increasing in gamma while present (the derivative is the
    squared projection onto the perturbed mode).
    """
    if tol is None:
        tol = op.default_tol()
    out: list[float | None] = []
    for g in gammas:
        lam = rank_one_min_eigenvalue(op, g)
        out.append(float(lam) if lam < -tol else None)
    return out
