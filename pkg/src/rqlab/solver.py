"""Spectrum scanning and eigenfunction extraction.

Eigenvalues are located as zeros of a scaled boundary-condition determinant
swept in the root coordinate ``lambda = Lambda^(1/2p)`` (the determinant
oscillates roughly periodically in lambda, not Lambda), bracketed by sign
changes and polished with Brent's method.  Eigenfunctions come from the
null direction of the boundary matrix via SVD.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .errors import ConfigError, DegenerateSystemError, NonSimpleEigenvalueError, SolverError
from .exppoly import ExpPoly, inner_product, l2_norm_sq
from .problem import ProblemSpec, SolutionBasis, build_operator, root_system, solution_basis
from .reports import IdentityReport, equality_report

DEFAULT_SCAN_STEP = 0.05
DEFAULT_LAMBDA_CEILING = 200.0  # in the lambda = Lambda^(1/2p) coordinate
NULLSPACE_QUALITY_LIMIT = 1e-6
SIGN_TRUST_RATIO = 1e-14  # |det| / Hadamard bound below this: sign is roundoff noise


def _boundary_rows(spec: ProblemSpec, basis: SolutionBasis):
    """Derivative values at x=1 (rows j=0..n-1) plus per-row magnitude bounds."""
    values = np.empty((spec.n, basis.size))
    bounds = np.empty((spec.n, basis.size))
    current = list(basis.functions)
    for j in range(spec.n):
        for i, fn in enumerate(current):
            values[j, i] = fn.evaluate(1.0).real
            bounds[j, i] = fn.magnitude_bound()
        if j + 1 < spec.n:
            current = [fn.differentiate() for fn in current]
    return values, bounds


def boundary_matrix(spec: ProblemSpec, Lambda: float) -> np.ndarray:
    """Row-scaled clamped-condition matrix whose null space holds eigenfunctions.

    Each row is divided by the largest a-priori magnitude bound among its
    entries.  Unlike scaling by the max actual entry, the bound cannot vanish
    and does not re-inflate a row that legitimately passes through zero at an
    eigenvalue, so determinant zeros stay put and the smallest singular value
    is a faithful null-space quality measure.  Scaling is positive, so the
    null space is untouched.
    """
    basis = solution_basis(spec, Lambda)
    values, bounds = _boundary_rows(spec, basis)
    scaled = np.empty_like(values)
    for j in range(spec.n):
        bound = np.max(bounds[j])
        if bound == 0.0 or not np.any(values[j]):
            raise DegenerateSystemError(
                f"boundary row {j} vanishes identically for {spec.label()}, Lambda={Lambda}"
            )
        scaled[j] = values[j] / bound
    return scaled


def _indicator_from_matrix(matrix: np.ndarray) -> tuple[float, bool]:
    """(sign * |det|^(1/n), sign-trust flag via the Hadamard ratio)."""
    n = matrix.shape[0]
    sign, logabs = np.linalg.slogdet(matrix)
    row_norms = np.sqrt((matrix * matrix).sum(axis=1))
    if np.any(row_norms == 0.0):
        return 0.0, False
    log_hadamard = float(np.log(row_norms).sum())
    trusted = logabs - log_hadamard > math.log(SIGN_TRUST_RATIO)
    if sign == 0.0:
        return 0.0, False
    return float(sign * math.exp(logabs / n)), bool(trusted)


def det_indicator(spec: ProblemSpec, Lambda: float) -> float:
    """Sign-stable scaled determinant; changes sign at simple eigenvalues.

    Returns sign(det) * |det|^(1/n) of the row-scaled boundary matrix, which
    keeps values comparable across nearby Lambda.
    """
    value, _ = _indicator_from_matrix(boundary_matrix(spec, Lambda))
    return value


@dataclass(frozen=True)
class EigenResiduals:
    det_indicator: float
    nullspace_quality: float
    operator_residual: float  # L2 norm of the operator applied to z
    operator_scale: float  # L2 norm of z^(2n)
    boundary_residual: float  # max |z^(j)(+-1)| over j < n
    boundary_scale: float  # magnitude bound of the worst derivative order


@dataclass(frozen=True)
class EigenPair:
    """One eigenvalue with its eigenfunction and quality diagnostics.

    ``kernel_coeffs[j]`` is the coefficient of exp(i * root_j * x) in z,
    aligned with ``root_system(p, Lambda).roots``; ``poly_coeffs`` are
    the real coefficients of the polynomial part.
    """

    spec: ProblemSpec
    Lambda: float
    index: int
    z: ExpPoly
    kernel_coeffs: tuple[complex, ...]
    poly_coeffs: tuple[float, ...]
    residuals: EigenResiduals
    normalized: bool = True

    @property
    def kernel_part(self) -> ExpPoly:
        return self.z.nonzero_frequency_part()

    @property
    def poly_part(self) -> ExpPoly:
        return self.z.zero_frequency_part()

    def mean(self) -> float:
        return self.z.integrate_unit().real


def _kernel_and_poly_views(spec: ProblemSpec, Lambda: float, z: ExpPoly):
    roots = root_system(spec.p, Lambda).roots
    kernel_coeffs = []
    for lam in roots:
        coeffs = z.coefficient_at(1j * lam)
        kernel_coeffs.append(coeffs[0] if coeffs else 0j)
    poly = tuple(c.real for c in z.zero_frequency_coefficients())
    return tuple(kernel_coeffs), poly


def _residuals(spec: ProblemSpec, Lambda: float, z: ExpPoly, indicator: float, quality: float):
    operator = build_operator(spec, Lambda)
    op_res = math.sqrt(max(l2_norm_sq(operator.apply(z)), 0.0))
    op_scale = math.sqrt(max(l2_norm_sq(z.differentiate(2 * spec.n)), 0.0))
    boundary = 0.0
    bscale = 0.0
    deriv = z
    for j in range(spec.n):
        boundary = max(boundary, abs(deriv.evaluate(1.0)), abs(deriv.evaluate(-1.0)))
        bscale = max(bscale, deriv.magnitude_bound())
        deriv = deriv.differentiate()
    return EigenResiduals(
        det_indicator=indicator,
        nullspace_quality=quality,
        operator_residual=op_res,
        operator_scale=op_scale,
        boundary_residual=boundary,
        boundary_scale=bscale,
    )


def _fix_sign(z: ExpPoly) -> ExpPoly:
    """First nonzero of (<z>, leading poly coefficient, z(0)) is made positive."""
    scale = max(z.magnitude_bound(), 1e-300)
    poly = z.zero_frequency_coefficients()
    candidates = (
        z.integrate_unit().real,
        poly[-1].real if poly else 0.0,
        z.evaluate(0.0).real,
    )
    for v in candidates:
        if abs(v) > 1e-9 * scale:
            return z.scaled(-1.0) if v < 0 else z
    return z


def extract_eigenfunction(
    spec: ProblemSpec, Lambda: float, index: int = -1, normalize: bool = True
) -> EigenPair:
    """Assemble the eigenfunction at a refined eigenvalue.

    The coefficient vector is the smallest singular direction of the
    row-scaled boundary matrix.  Fails when the null-space quality is poor
    (eigenvalue not refined enough) or a second pivot is also tiny (the
    eigenvalue looks multiple; flagged rather than split heuristically).
    """
    matrix = boundary_matrix(spec, Lambda)
    _, svals, vt = np.linalg.svd(matrix)
    smax = max(float(svals[0]), 1.0)
    quality = float(svals[-1]) / smax
    if quality > NULLSPACE_QUALITY_LIMIT:
        raise SolverError(
            f"null-space quality {quality:.3e} too poor at Lambda={Lambda!r} for {spec.label()}; "
            "refine the eigenvalue first"
        )
    if spec.n >= 2 and float(svals[-2]) / smax < NULLSPACE_QUALITY_LIMIT:
        raise NonSimpleEigenvalueError(
            f"two near-zero pivots at Lambda={Lambda!r} for {spec.label()}"
        )
    coeffs = vt[-1]
    basis = solution_basis(spec, Lambda)
    z = ExpPoly.zero()
    for c, fn in zip(coeffs, basis.functions):
        if c != 0.0:
            z = z + fn.scaled(float(c))
    if normalize:
        w = z.differentiate(spec.n - spec.p)
        norm_sq = inner_product(w, w).real
        if not norm_sq > 0:
            raise SolverError("degenerate normalization integral")
        z = z.scaled(1.0 / math.sqrt(norm_sq))
    z = _fix_sign(z)
    kernel_coeffs, poly_coeffs = _kernel_and_poly_views(spec, Lambda, z)
    indicator = det_indicator(spec, Lambda)
    return EigenPair(
        spec=spec,
        Lambda=Lambda,
        index=index,
        z=z,
        kernel_coeffs=kernel_coeffs,
        poly_coeffs=poly_coeffs,
        residuals=_residuals(spec, Lambda, z, indicator, quality),
        normalized=normalize,
    )


def eigenpair_from_function(
    spec: ProblemSpec, Lambda: float, z: ExpPoly, index: int = -1
) -> EigenPair:
    """Wrap a closed-form eigenfunction (any scaling) as an EigenPair."""
    kernel_coeffs, poly_coeffs = _kernel_and_poly_views(spec, Lambda, z)
    return EigenPair(
        spec=spec,
        Lambda=Lambda,
        index=index,
        z=z,
        kernel_coeffs=kernel_coeffs,
        poly_coeffs=poly_coeffs,
        residuals=_residuals(spec, Lambda, z, det_indicator(spec, Lambda), 0.0),
        normalized=False,
    )


@dataclass(frozen=True)
class ScanMetadata:
    grid_step: float
    bracket_count: int
    refinement_iterations: tuple[int, ...]
    suspects: tuple[float, ...]  # lambda locations of sign-preserving near-zero dips
    lambda_ceiling: float
    untrusted_points: int = 0  # grid points with determinant below the sign-trust floor


@dataclass(frozen=True)
class SpectrumSlice:
    spec: ProblemSpec
    Lambda_max: float
    eigenvalues: tuple[float, ...]
    pairs: tuple[EigenPair | None, ...]
    metadata: ScanMetadata

    def __post_init__(self):
        for a, b in zip(self.eigenvalues, self.eigenvalues[1:]):
            if not b > a:
                raise SolverError(f"spectrum not strictly increasing: {a} !< {b}")


def scan_spectrum(
    spec: ProblemSpec,
    count: int,
    Lambda_hint: float | None = None,
    *,
    step: float = DEFAULT_SCAN_STEP,
    lambda_ceiling: float = DEFAULT_LAMBDA_CEILING,
    with_eigenfunctions: bool = True,
) -> SpectrumSlice:
    """First ``count`` parity eigenvalues below the ceiling.

    Brackets come from sign changes of the determinant indicator on a uniform
    grid in lambda = Lambda^(1/2p); each bracket is polished by Brent root
    iteration to ~1e-13 relative.  Sign-preserving near-zero dips are recorded
    as suspected double roots instead of being split heuristically.
    """
    if count < 1:
        raise ConfigError("count must be >= 1")
    if step <= 0:
        raise ConfigError("scan step must be positive")
    ceiling = lambda_ceiling
    if Lambda_hint is not None:
        if Lambda_hint <= 0:
            raise ConfigError("Lambda_hint must be positive")
        ceiling = Lambda_hint ** (1.0 / (2 * spec.p))

    def indicator_at(lam: float) -> float:
        return det_indicator(spec, lam ** (2 * spec.p))

    def sample(lam: float) -> tuple[float, bool]:
        return _indicator_from_matrix(boundary_matrix(spec, lam ** (2 * spec.p)))

    found: list[float] = []
    iterations: list[int] = []
    suspects: list[float] = []
    bracket_count = 0
    untrusted_points = 0
    window: list[tuple[float, float]] = []  # trailing trusted (lambda, f) samples

    lam = step
    f_prev, prev_trusted = sample(lam)
    if prev_trusted:
        window.append((lam, f_prev))
    else:
        untrusted_points += 1
    while len(found) < count and lam < ceiling:
        lam_next = lam + step
        f_next, trusted = sample(lam_next)
        if not trusted:
            # basis numerically rank-deficient (e.g. Lambda -> 0): the sign is
            # noise, so never bracket against this point
            untrusted_points += 1
            window.clear()
            lam, f_prev, prev_trusted = lam_next, f_next, False
            continue
        if prev_trusted and f_prev * f_next < 0.0:
            bracket_count += 1
            root, info = brentq(
                indicator_at, lam, lam_next, xtol=1e-15, rtol=4e-15, full_output=True
            )
            iterations.append(int(info.iterations))
            found.append(float(root))
        window.append((lam_next, f_next))
        if len(window) > 3:
            window.pop(0)
        if len(window) == 3:
            (l0, f0), (l1, f1), (l2, f2) = window
            if (
                f0 * f2 > 0.0
                and abs(f1) < abs(f0)
                and abs(f1) < abs(f2)
                and abs(f1) <= 1e-8 * max(abs(f0), abs(f2))
            ):
                suspects.append(l1)
        lam, f_prev, prev_trusted = lam_next, f_next, True

    if len(found) < count:
        raise SolverError(
            f"found only {len(found)} of {count} eigenvalues for {spec.label()} below "
            f"lambda={ceiling} (raise the ceiling)"
        )

    eigenvalues = tuple(lam_root ** (2 * spec.p) for lam_root in found)
    pairs: list[EigenPair | None] = []
    if with_eigenfunctions:
        for idx, Lam in enumerate(eigenvalues):
            try:
                pairs.append(extract_eigenfunction(spec, Lam, index=idx))
            except NonSimpleEigenvalueError:
                suspects.append(found[idx])
                pairs.append(None)
    else:
        pairs = [None] * len(eigenvalues)

    metadata = ScanMetadata(
        grid_step=step,
        bracket_count=bracket_count,
        refinement_iterations=tuple(iterations),
        suspects=tuple(suspects),
        lambda_ceiling=ceiling,
        untrusted_points=untrusted_points,
    )
    return SpectrumSlice(
        spec=spec,
        Lambda_max=eigenvalues[-1],
        eigenvalues=eigenvalues,
        pairs=tuple(pairs),
        metadata=metadata,
    )


@functools.lru_cache(maxsize=None)
def cached_spectrum(
    n: int, p: int, parity: str, count: int, with_eigenfunctions: bool = True
) -> SpectrumSlice:
    """Memoized scan; everything downstream is pure, so sharing is safe."""
    return scan_spectrum(
        ProblemSpec(n, p, parity), count, with_eigenfunctions=with_eigenfunctions
    )


def cached_eigenpair(n: int, p: int, parity: str, index: int) -> EigenPair:
    slice_ = cached_spectrum(n, p, parity, index + 1)
    pair = slice_.pairs[index]
    if pair is None:
        raise SolverError(f"eigenpair {index} of ({n},{p},{parity}) flagged non-simple")
    return pair


def antisym_equals_next_sym(n: int, p: int, count: int, tol: float) -> list[IdentityReport]:
    """Compare the antisymmetric spectrum of order n with the symmetric one of n+1."""
    if count < 1:
        raise ConfigError("count must be >= 1")
    anti = cached_spectrum(n, p, "antisymmetric", count, with_eigenfunctions=False)
    sym = cached_spectrum(n + 1, p, "symmetric", count, with_eigenfunctions=False)
    reports = []
    for i, (la, ls) in enumerate(zip(anti.eigenvalues, sym.eigenvalues)):
        reports.append(
            equality_report(
                "parity-shift",
                (n, p, i),
                la,
                ls,
                tol,
                notes=f"antisym order {n} vs sym order {n + 1}, index {i}",
            )
        )
    return reports


def rescaled(pair: EigenPair, factor: float) -> EigenPair:
    """Same eigenpair with z scaled by factor (identities are homogeneous)."""
    z = pair.z.scaled(factor)
    kernel = tuple(c * factor for c in pair.kernel_coeffs)
    poly = tuple(c * factor for c in pair.poly_coeffs)
    return replace(pair, z=z, kernel_coeffs=kernel, poly_coeffs=poly, normalized=False)
