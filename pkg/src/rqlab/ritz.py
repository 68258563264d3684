"""Variational cross-check: Ritz values from exact rational Gram matrices.

Trial functions ``(1-x^2)^n x^(2k)`` (symmetric) or ``(1-x^2)^n x^(2k+1)``
(antisymmetric) satisfy the clamped conditions by construction.  Both Gram
matrices are assembled in exact rational arithmetic (monomial integrals
``int x^m = 2/(m+1)`` for even m), so quadrature is never a shared failure
mode with the determinant solver.

The trial basis is Hilbert-matrix-like: floating-point Cholesky of the mass
matrix already breaks down around K ~ 16.  The symmetric-definite reduction
(LDL^T Cholesky of the mass matrix plus the two-sided triangular congruence)
is therefore carried out in exact rationals as well, with a single
float conversion of the reduced symmetric matrix before the eigensolve;
that keeps K = 20 reliable to ~1e-10 relative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

from .errors import ConfigError, RitzConditioningError
from .exppoly import ExpPoly, inner_product
from .problem import ProblemSpec

MAX_BASIS_SIZE = 64  # far beyond the useful double-precision envelope (K ~ 25)

RationalPoly = tuple[Fraction, ...]  # ascending coefficients


def _poly_mul(a: RationalPoly, b: RationalPoly) -> RationalPoly:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return tuple(out)


def _poly_diff(a: RationalPoly, times: int = 1) -> RationalPoly:
    for _ in range(times):
        a = tuple(Fraction(k) * a[k] for k in range(1, len(a))) or (Fraction(0),)
    return a


def _poly_integral_unit(a: RationalPoly) -> Fraction:
    total = Fraction(0)
    for m, c in enumerate(a):
        if m % 2 == 0 and c != 0:
            total += c * Fraction(2, m + 1)
    return total


def _trial_poly(spec: ProblemSpec, k: int) -> RationalPoly:
    # (1 - x^2)^n via binomial theorem, shifted by x^(2k [+1])
    n = spec.n
    base = [Fraction(0)] * (2 * n + 1)
    for j in range(n + 1):
        base[2 * j] = Fraction((-1) ** j * math.comb(n, j))
    shift = 2 * k + (0 if spec.symmetric else 1)
    return tuple([Fraction(0)] * shift + base)


@dataclass(frozen=True)
class RitzSystem:
    """Exact Gram matrices of derivative inner products on the trial space."""

    spec: ProblemSpec
    K: int
    stiffness_exact: tuple[tuple[Fraction, ...], ...]  # <phi_k^(n) phi_l^(n)>
    mass_exact: tuple[tuple[Fraction, ...], ...]  # <phi_k^(n-p) phi_l^(n-p)>

    @property
    def stiffness(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.stiffness_exact])

    @property
    def mass(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.mass_exact])

    def trial_function(self, k: int) -> ExpPoly:
        coeffs = [complex(float(c)) for c in _trial_poly(self.spec, k)]
        return ExpPoly.build([(0j, tuple(coeffs))])


def assemble(spec: ProblemSpec, K: int) -> RitzSystem:
    """Exact Gram matrices for the first K trial functions."""
    if K < 1:
        raise ConfigError("K must be >= 1")
    if K > MAX_BASIS_SIZE:
        raise ConfigError(f"K={K} exceeds the supported basis size {MAX_BASIS_SIZE}")
    d_hi = [_poly_diff(_trial_poly(spec, k), spec.n) for k in range(K)]
    d_lo = [_poly_diff(_trial_poly(spec, k), spec.n - spec.p) for k in range(K)]
    a = [[Fraction(0)] * K for _ in range(K)]
    b = [[Fraction(0)] * K for _ in range(K)]
    for i in range(K):
        for j in range(i, K):
            a[i][j] = a[j][i] = _poly_integral_unit(_poly_mul(d_hi[i], d_hi[j]))
            b[i][j] = b[j][i] = _poly_integral_unit(_poly_mul(d_lo[i], d_lo[j]))
    return RitzSystem(
        spec=spec,
        K=K,
        stiffness_exact=tuple(tuple(row) for row in a),
        mass_exact=tuple(tuple(row) for row in b),
    )


def _exact_ldl(system: RitzSystem):
    """Exact LDL^T factorization of the mass matrix (unit lower L, pivots d)."""
    K = system.K
    b = system.mass_exact
    lower = [[Fraction(0)] * K for _ in range(K)]
    pivots = [Fraction(0)] * K
    for j in range(K):
        s = b[j][j] - sum(lower[j][k] * lower[j][k] * pivots[k] for k in range(j))
        if s <= 0:
            # mathematically impossible for a Gram matrix of independent
            # functions; would signal a broken assembly
            raise RitzConditioningError(f"exact mass pivot {j} is not positive")
        pivots[j] = s
        lower[j][j] = Fraction(1)
        for i in range(j + 1, K):
            lower[i][j] = (
                b[i][j] - sum(lower[i][k] * lower[j][k] * pivots[k] for k in range(j))
            ) / pivots[j]
    return lower, pivots


def _reduced_matrix(system: RitzSystem):
    """Float image of D^(-1/2) L^(-1) A L^(-T) D^(-1/2), reduction in rationals."""
    K = system.K
    lower, pivots = _exact_ldl(system)
    work = [list(row) for row in system.stiffness_exact]
    for i in range(K):  # forward solve L W = A
        for k in range(i):
            lik = lower[i][k]
            if lik:
                row_k = work[k]
                row_i = work[i]
                for j in range(K):
                    row_i[j] -= lik * row_k[j]
    for j in range(K):  # and W L^(-T) by columns
        for k in range(j):
            ljk = lower[j][k]
            if ljk:
                for i in range(K):
                    work[i][j] -= ljk * work[i][k]
    inv_sqrt = [1.0 / math.sqrt(float(v)) for v in pivots]
    reduced = np.array(
        [[float(work[i][j]) * inv_sqrt[i] * inv_sqrt[j] for j in range(K)] for i in range(K)]
    )
    return reduced, lower, inv_sqrt


def ritz_values(system: RitzSystem, count: int) -> list[float]:
    """The smallest `count` Ritz values (upper bounds for true eigenvalues)."""
    if not 1 <= count <= system.K:
        raise ConfigError(f"need 1 <= count <= K={system.K}")
    reduced, _, _ = _reduced_matrix(system)
    values = np.linalg.eigvalsh(reduced)
    return [float(v) for v in values[:count]]


def ritz_vector(system: RitzSystem, index: int = 0) -> tuple[float, ExpPoly]:
    """(Ritz value, assembled trial-space function) for the given index."""
    if not 0 <= index < system.K:
        raise ConfigError("index out of range")
    reduced, lower, inv_sqrt = _reduced_matrix(system)
    values, vectors = np.linalg.eigh(reduced)
    lower_f = np.array([[float(v) for v in row] for row in lower])
    y = vectors[:, index] * np.asarray(inv_sqrt)
    coeffs = scipy.linalg.solve_triangular(lower_f.T, y, lower=False)
    fn = ExpPoly.zero()
    for k, c in enumerate(coeffs):
        if c != 0.0:
            fn = fn + system.trial_function(k).scaled(float(c))
    return float(values[index]), fn


def rayleigh_quotient(spec: ProblemSpec, fn: ExpPoly) -> float:
    """<(u^(n))^2> / <(u^(n-p))^2> evaluated in exact ExpPoly arithmetic."""
    hi = fn.differentiate(spec.n)
    lo = fn.differentiate(spec.n - spec.p)
    num = inner_product(hi, hi).real
    den = inner_product(lo, lo).real
    if den <= 0:
        raise ConfigError("trial function has vanishing constraint norm")
    return num / den
