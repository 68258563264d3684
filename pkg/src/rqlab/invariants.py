"""Stones, stone polynomials, moments, brackets, and the identity suite.

For an eigenpair (Lambda, z) of order n with offset p < n, repeatedly
peeling two derivative orders off the operator leaves polynomial residues:

* the stone ``c = [reduced operator of order n-1](z)`` is a constant
  (degree <= 1 for odd parity) and never vanishes on a true eigenfunction;
* the stone polynomials ``h^k = (-1)^k [reduced operator of order n-k-1](z)``
  are even polynomials of degree 2k whose coefficients extend the stone;
* moments ``a_k = <z x^{2k}/(2k)!>`` pair with stone coefficients through a
  signed convolution bracket.

Every checkable relation between these objects is exposed here as a pure
function returning an :class:`IdentityReport`.  All relations are
homogeneous in each eigenfunction, so normalized and unnormalized pairs
verify identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import IdentityViolationError
from .exppoly import ExpPoly, SigmaPolynomial, hermitian_inner_product, inner_product, l2_norm_sq
from .problem import reduced_operator, root_system
from .reports import (
    FAIL,
    PASS,
    IdentityReport,
    equality_report,
    not_applicable,
    relative_residual,
)
from .solver import EigenPair, cached_spectrum

STONE_FLOOR = 1e-6  # |stone| must exceed this times the natural scale
COEFF_CONSISTENCY_TOL = 1e-9
DEFAULT_IDENTITY_TOL = 1e-8


def lambda_sq(pair: EigenPair) -> float:
    """Square of the positive real characteristic root, Lambda^(1/p)."""
    return pair.Lambda ** (1.0 / pair.spec.p)


def epsilon(pair: EigenPair) -> float:
    return pair.Lambda ** (-1.0 / pair.spec.p)


def _reduced_operator(pair: EigenPair, order: int) -> SigmaPolynomial:
    """sigma^{2*order-2p}(sigma^{2p} - Lambda) at the pair's own Lambda."""
    return reduced_operator(pair.spec, pair.Lambda, order)


def annihilation_factor(pair: EigenPair, order: int) -> SigmaPolynomial:
    """Half-factorization A_order = sigma^{order-p-1}(sigma^2 - lambda0^2) prod(sigma - lambda_i).

    ``lambda_i`` runs over one representative per conjugate root pair (upper
    half plane, angle ascending); conjugating the coefficients gives the
    other half, and the product of the two halves equals
    (sigma^2 - lambda0^2/...)-free reduced operator difference used in the
    stone identity.  Requires order >= p + 1.
    """
    p = pair.spec.p
    if order < p + 1:
        raise ValueError(f"annihilation factor needs order >= p+1, got {order}")
    rs = root_system(p, pair.Lambda)
    roots = [complex(rs.rho), complex(-rs.rho)]
    roots.extend(rs.upper_half_representatives())
    factor = SigmaPolynomial.from_roots(roots)
    if order - p - 1 > 0:
        factor = SigmaPolynomial.sigma_power(order - p - 1) * factor
    return factor


def _polynomial_image(pair: EigenPair, order: int, annihilation_tol: float = 1e-9) -> ExpPoly:
    """Apply the reduced operator and return the polynomial residue.

    The kernel part of z must be annihilated; its exact image is compared
    against the size it would have without cancellation.
    """
    image = _reduced_operator(pair, order).apply(pair.z)
    kernel_residue = image.nonzero_frequency_part()
    scale = pair.kernel_part.differentiate(2 * order).magnitude_bound()
    if kernel_residue.magnitude_bound() > annihilation_tol * max(scale, 1e-300):
        raise IdentityViolationError(
            f"kernel not annihilated by reduced operator (order {order}) for "
            f"{pair.spec.label()}, Lambda={pair.Lambda!r}: bad eigenpair"
        )
    return image.zero_frequency_part()


def kernel_annihilation_residual(pair: EigenPair, order: int | None = None) -> float:
    """How well the reduced operator kills the kernel part, relative to its size."""
    if order is None:
        order = pair.spec.n - 1
    image = _reduced_operator(pair, order).apply(pair.z)
    scale = pair.kernel_part.differentiate(2 * order).magnitude_bound()
    return image.nonzero_frequency_part().magnitude_bound() / max(scale, 1e-300)


def stone(pair: EigenPair) -> float:
    """The stone: constant residue of the order-(n-1) reduced operator.

    For symmetric pairs this is the constant itself; for antisymmetric
    pairs the residue is linear and the slope is returned.
    """
    spec = pair.spec
    if not spec.has_stones:
        raise ValueError(f"stone undefined for n = p = {spec.n}")
    residue = _polynomial_image(pair, spec.n - 1)
    coeffs = residue.zero_frequency_coefficients()
    if len(coeffs) > 2:
        raise IdentityViolationError(f"stone residue has degree {len(coeffs) - 1} > 1")
    if spec.symmetric:
        return coeffs[0].real if coeffs else 0.0
    return coeffs[1].real if len(coeffs) == 2 else 0.0


@dataclass(frozen=True)
class StonePolynomials:
    """h^0..h^kmax plus the coefficient ladder c_0..c_kmax."""

    pair: EigenPair
    polynomials: tuple[ExpPoly, ...]
    coefficients: tuple[float, ...]

    def h(self, k: int) -> ExpPoly:
        """h^k with the zero convention for negative k."""
        if k < 0:
            return ExpPoly.zero()
        return self.polynomials[k]


def stone_polynomials(
    pair: EigenPair,
    k_max: int | None = None,
    annihilation_tol: float = 1e-9,
    consistency_tol: float = COEFF_CONSISTENCY_TOL,
) -> StonePolynomials:
    """Stone polynomials h^k = (-1)^k [order n-k-1 reduced operator](z), k = 0..k_max.

    The expansion h^k = sum_j c_j x^{2(k-j)}/(2(k-j))! is overdetermined:
    every admissible k re-derives each c_j, and the extractions must agree
    to ~1e-9 relative or the eigenpair is rejected.  The two tolerances are
    only loosened for diagnostic evaluation of deliberately perturbed pairs.
    """
    spec = pair.spec
    if not spec.symmetric:
        raise ValueError("stone polynomials are defined on symmetric eigenpairs")
    if not spec.has_stones:
        raise ValueError(f"stone polynomials undefined for n = p = {spec.n}")
    top = spec.n - spec.p - 1
    if k_max is None:
        k_max = top
    if not 0 <= k_max <= top:
        raise ValueError(f"need 0 <= k_max <= n-p-1 = {top}")

    hs = []
    for k in range(k_max + 1):
        image = _polynomial_image(pair, spec.n - k - 1, annihilation_tol)
        hs.append(image if k % 2 == 0 else image.scaled(-1.0))

    # c_j extracted from every h^k with k >= j must agree
    extracted: list[list[float]] = [[] for _ in range(k_max + 1)]
    for k, h in enumerate(hs):
        coeffs = h.zero_frequency_coefficients()
        for j in range(k + 1):
            power = 2 * (k - j)
            value = coeffs[power].real if power < len(coeffs) else 0.0
            extracted[j].append(value * math.factorial(power))
    canonical = []
    for j, values in enumerate(extracted):
        ref = values[0]  # h^j's constant term is c_j itself
        for k_off, v in enumerate(values):
            if relative_residual(v, ref) > consistency_tol:
                raise IdentityViolationError(
                    f"stone coefficient c_{j} disagrees between h^{j} and h^{j + k_off}: "
                    f"{ref!r} vs {v!r}"
                )
        canonical.append(ref)
    return StonePolynomials(pair=pair, polynomials=tuple(hs), coefficients=tuple(canonical))


def moments(pair: EigenPair, k_max: int) -> list[float]:
    """Weighted moments <z x^{2k}/(2k)!> for k = 0..k_max."""
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    out = []
    for k in range(k_max + 1):
        raw = inner_product(pair.z, ExpPoly.monomial(2 * k)).real
        out.append(raw / math.factorial(2 * k))
    return out


def bracket(f, g, k: int) -> float:
    """Signed convolution (f, g)_k = (-1)^k sum_{i+j=k} f_i g_j; zero for k < 0."""
    if k < 0:
        return 0.0
    if k >= len(f) or k >= len(g):
        raise IndexError(f"bracket index {k} needs {k + 1} entries, got {len(f)} and {len(g)}")
    acc = 0.0
    for i in range(k + 1):
        acc += f[k - i] * g[i]
    return (-1) ** k * acc


@dataclass(frozen=True)
class StoneMomentData:
    """Stone/moment view of one eigenpair, ready for bracket arithmetic."""

    owner: EigenPair
    stone: float | None
    stone_coeffs: tuple[float, ...]
    moments: tuple[float, ...]
    eps: float
    lambda_sq: float


def stone_moment_data(pair: EigenPair, moment_count: int | None = None) -> StoneMomentData:
    spec = pair.spec
    if moment_count is None:
        moment_count = max(spec.n - spec.p - 1, 0) + 4
    if spec.has_stones and spec.symmetric:
        sp = stone_polynomials(pair)
        stone_value: float | None = sp.coefficients[0]
        coeffs = sp.coefficients
    else:
        stone_value = None
        coeffs = ()
    return StoneMomentData(
        owner=pair,
        stone=stone_value,
        stone_coeffs=coeffs,
        moments=tuple(moments(pair, moment_count)),
        eps=epsilon(pair),
        lambda_sq=lambda_sq(pair),
    )


# --------------------------------------------------------------------------
# identity checks
# --------------------------------------------------------------------------


def check_stone_identity(pair: EigenPair, tol: float = DEFAULT_IDENTITY_TOL) -> IdentityReport:
    """Norm of the half-factorized operator image vs -lambda^2 * stone * <z>."""
    spec = pair.spec
    if not spec.has_stones:
        return not_applicable("stone-identity", (spec.n, spec.p), notes="n = p")
    factor = annihilation_factor(pair, spec.n)
    lhs = l2_norm_sq(factor.apply(pair.z))
    c = stone(pair)
    mean = pair.mean()
    rhs = -lambda_sq(pair) * c * mean
    notes = ""
    if abs(mean) <= 1e-12 * max(pair.z.magnitude_bound(), 1e-300):
        notes = "mean of z is ~0: identity forces a vanishing norm (lemma-relevant anomaly)"
    return equality_report(
        "stone-identity",
        (spec.n, spec.p, pair.index),
        lhs,
        rhs,
        tol,
        notes=notes,
        details={"stone": c, "mean": mean, "normalized": pair.normalized},
    )


def check_cross_identity(
    z_prev: EigenPair, pair: EigenPair, tol: float = DEFAULT_IDENTITY_TOL
) -> IdentityReport:
    """(Lambda_{n-1} - Lambda_n) <z_n^(n-p-1) z_{n-1}^(n-p-1)> = stone_n <z_{n-1}>."""
    spec, prev = pair.spec, z_prev.spec
    if prev.p != spec.p or prev.n != spec.n - 1:
        raise ValueError("cross identity needs same p and orders differing by one")
    if not spec.has_stones:
        return not_applicable("cross-order", (spec.n, spec.p), notes="n = p")
    order = spec.n - spec.p - 1
    coupling = inner_product(
        pair.z.differentiate(order), z_prev.z.differentiate(order)
    ).real
    lhs = (z_prev.Lambda - pair.Lambda) * coupling
    mean_prev = z_prev.mean()
    rhs = stone(pair) * mean_prev
    notes = ""
    if abs(mean_prev) <= 1e-12 * max(z_prev.z.magnitude_bound(), 1e-300):
        notes = "lower-order mean ~0: both sides must vanish (degenerate instance)"
    return equality_report(
        "cross-order",
        (prev.n, spec.n, spec.p, z_prev.index, pair.index),
        lhs,
        rhs,
        tol,
        notes=notes,
        details={
            "coupling": coupling,
            "mean_prev": mean_prev,
            "normalized": (z_prev.normalized, pair.normalized),
        },
    )


def check_bilinear_family(
    zn: EigenPair,
    zm: EigenPair,
    k: int,
    tol: float = DEFAULT_IDENTITY_TOL,
    consistency_tol: float = 1e-9,
) -> IdentityReport:
    """Two-route check of the order-bridging bilinear identity at shift k.

    Direct route: <z_m h_n^k> - (-1)^Delta <z_n h_m^{k+Delta}> against
    (Lambda_m - Lambda_n) (-1)^k <z_n^(n-p-k-1) z_m^(n-p-k-1)>.  Bracket
    route: (b,c)_k - (a,d)_{k+Delta} against the same right side without the
    (-1)^k factor.  The relative placement of (-1)^k between the two printed
    forms is ambiguous, so both sign variants of the bracket route are
    evaluated and the matching one is recorded.
    """
    sn, sm = zn.spec, zm.spec
    if sn.p != sm.p:
        raise ValueError("bilinear family needs equal p")
    if sm.n <= sn.n:
        raise ValueError("bilinear family needs m > n")
    if not (sn.symmetric and sm.symmetric):
        raise ValueError("bilinear family is defined on symmetric eigenpairs")
    p = sn.p
    delta_order = sm.n - sn.n
    q = delta_order // 2
    k_lo, k_hi = -1 - q, sn.n - p - 1
    if not k_lo <= k <= k_hi:
        return not_applicable(
            "bilinear",
            (sn.n, sm.n, p, k),
            notes=f"k outside [{k_lo}, {k_hi}]",
        )

    h_n = stone_polynomials(zn).h(k) if k >= 0 else ExpPoly.zero()
    h_m = stone_polynomials(zm).h(k + delta_order)
    lhs_direct = (
        inner_product(zm.z, h_n).real
        - (-1) ** delta_order * inner_product(zn.z, h_m).real
    )
    d_ord = sn.n - p - k - 1
    coupling = inner_product(zn.z.differentiate(d_ord), zm.z.differentiate(d_ord)).real
    gap = zm.Lambda - zn.Lambda
    rhs_direct = gap * (-1) ** k * coupling

    b = moments(zm, max(k, 0))
    a = moments(zn, k + delta_order)
    c = stone_polynomials(zn).coefficients if sn.has_stones else ()
    d = stone_polynomials(zm).coefficients
    term_bc = bracket(b, c, k) if k >= 0 else 0.0
    lhs_bracket = term_bc - bracket(a, d, k + delta_order)
    rhs_plain = gap * coupling
    rhs_alternating = gap * (-1) ** k * coupling

    rel_direct = relative_residual(lhs_direct, rhs_direct)
    rel_plain = relative_residual(lhs_bracket, rhs_plain)
    rel_alternating = relative_residual(lhs_bracket, rhs_alternating)
    matched = "plain" if rel_plain <= rel_alternating else "alternating"
    rel_bracket = min(rel_plain, rel_alternating)
    translation = relative_residual(lhs_direct, (-1) ** k * lhs_bracket)

    ok = rel_direct <= tol and rel_bracket <= tol and translation <= consistency_tol
    return IdentityReport(
        identity_id="bilinear",
        index=(sn.n, sm.n, p, k, zn.index, zm.index),
        lhs=lhs_direct,
        rhs=rhs_direct,
        abs_residual=abs(lhs_direct - rhs_direct),
        rel_residual=rel_direct,
        verdict=PASS if ok else FAIL,
        notes=f"bracket route matches the {matched} sign variant",
        details={
            "bracket_lhs": lhs_bracket,
            "bracket_rel_residual": rel_bracket,
            "matched_variant": matched,
            "rel_plain": rel_plain,
            "rel_alternating": rel_alternating,
            "route_consistency": translation,
            "normalized": (zn.normalized, zm.normalized),
        },
    )


def check_positivity_family(
    pair: EigenPair,
    k: int,
    tol: float = DEFAULT_IDENTITY_TOL,
    margin: float = 1e-9,
) -> IdentityReport:
    """Three-route evaluation of the strictly positive stepped-norm quantity.

    (i) squared norm of the order-(n-k) half-factor image of z;
    (ii) (-1)^(k-1) <z h^(k-1)> - (-1)^k lambda^2 <z h^k>;
    (iii) (a,c)_{k-1} - lambda^2 (a,c)_k via moments and brackets.
    All three must agree and be strictly positive.
    """
    spec = pair.spec
    if not spec.has_stones or not spec.symmetric:
        return not_applicable("positivity", (spec.n, spec.p, k), notes="needs symmetric n > p")
    if not 0 <= k <= spec.n - spec.p - 1:
        return not_applicable(
            "positivity", (spec.n, spec.p, k), notes=f"k outside [0, {spec.n - spec.p - 1}]"
        )
    lam2 = lambda_sq(pair)
    v_norm = l2_norm_sq(annihilation_factor(pair, spec.n - k).apply(pair.z))
    sp = stone_polynomials(pair)
    ip_prev = inner_product(pair.z, sp.h(k - 1)).real
    ip_cur = inner_product(pair.z, sp.h(k)).real
    v_h = (-1) ** (k - 1) * ip_prev - (-1) ** k * lam2 * ip_cur
    a = moments(pair, max(k, 0))
    v_bracket = (bracket(a, sp.coefficients, k - 1) if k > 0 else 0.0) - lam2 * bracket(
        a, sp.coefficients, k
    )
    scale = max(abs(v_norm), abs(ip_prev) + lam2 * abs(ip_cur), 1e-300)
    rel_nh = relative_residual(v_norm, v_h)
    rel_nb = relative_residual(v_norm, v_bracket)
    rel_hb = relative_residual(v_h, v_bracket)
    agree = max(rel_nh, rel_nb, rel_hb)
    positive = min(v_norm, v_h, v_bracket) > margin * scale
    return IdentityReport(
        identity_id="positivity",
        index=(spec.n, spec.p, k, pair.index),
        lhs=v_norm,
        rhs=v_h,
        abs_residual=abs(v_norm - v_h),
        rel_residual=agree,
        verdict=PASS if (agree <= tol and positive) else FAIL,
        notes="" if positive else "positivity margin violated",
        details={
            "norm_route": v_norm,
            "h_route": v_h,
            "bracket_route": v_bracket,
            "positivity_margin": min(v_norm, v_h, v_bracket) / scale,
            "normalized": pair.normalized,
        },
    )


def check_cauchy_schwarz(
    zn: EigenPair,
    zm: EigenPair,
    l: int,
    k: int,
    tol: float = 1e-10,
) -> IdentityReport:
    """|<u, v>|^2 <= ||u||^2 ||v||^2 for the two half-factor images.

    u = A_{mu-2k+l}(z_m), v = A_{n-l}(z_n) with mu = n + 2*floor((m-n)/2).
    Equality only when the images are proportional (flagged).  Index ranges
    follow the conditional-collision system; out-of-range indices are
    not-applicable.
    """
    sn, sm = zn.spec, zm.spec
    if sn.p != sm.p:
        raise ValueError("needs equal p")
    if sm.n < sn.n:
        raise ValueError("needs m >= n")
    p = sn.p
    delta_order = sm.n - sn.n
    q = delta_order // 2
    delta = delta_order - 2 * q
    mu_order = sn.n + 2 * q
    idx = (sn.n, sm.n, p, l, k)
    if not 0 <= l <= sn.n - p - 1:
        return not_applicable("cauchy-schwarz", idx, notes="l out of range")
    if not 0 <= k <= sn.n - p - 1 + q:
        return not_applicable("cauchy-schwarz", idx, notes="k out of range")
    if not -delta <= 2 * k - l <= sn.n - p - 1 + 2 * q:
        return not_applicable("cauchy-schwarz", idx, notes="2k-l out of range")
    other = mu_order - 2 * k + l
    if other < p + 1 or sn.n - l < p + 1:
        return not_applicable("cauchy-schwarz", idx, notes="operator order below p+1")
    v = annihilation_factor(zn, sn.n - l).apply(zn.z)
    u = annihilation_factor(zm, other).apply(zm.z)
    cross = hermitian_inner_product(u, v)
    lhs = abs(cross) ** 2
    rhs = l2_norm_sq(u) * l2_norm_sq(v)
    slack = rhs - lhs
    proportional = slack <= 1e-10 * max(rhs, 1e-300)
    ok = lhs <= rhs * (1.0 + tol)
    return IdentityReport(
        identity_id="cauchy-schwarz",
        index=idx,
        lhs=lhs,
        rhs=rhs,
        abs_residual=max(lhs - rhs, 0.0),
        rel_residual=max(lhs - rhs, 0.0) / max(rhs, 1e-300),
        verdict=PASS if ok else FAIL,
        notes="proportional (equality case)" if proportional else "",
        details={"slack": slack, "proportional": proportional},
    )


def check_root_completeness(pair: EigenPair, tol: float = 1e-8) -> IdentityReport:
    """Every characteristic root must appear in the kernel with a nonzero weight."""
    magnitudes = [abs(c) for c in pair.kernel_coeffs]
    top = max(magnitudes) if magnitudes else 0.0
    if top == 0.0:
        return IdentityReport(
            identity_id="root-completeness",
            index=(pair.spec.n, pair.spec.p, pair.index),
            verdict=FAIL,
            notes="kernel part is empty",
        )
    worst = min(magnitudes) / top
    return IdentityReport(
        identity_id="root-completeness",
        index=(pair.spec.n, pair.spec.p, pair.index),
        lhs=worst,
        rhs=tol,
        abs_residual=0.0,
        rel_residual=0.0,
        verdict=PASS if worst > tol else FAIL,
        notes=f"min/max kernel weight ratio {worst:.3e}",
        details={"weight_ratios": tuple(m / top for m in magnitudes)},
    )


@dataclass(frozen=True)
class SquareVariableDerivative:
    """Expansion of (d/d(x^2))^k as sum_j t_{kj} x^{j-2k} d^j with exact t."""

    order: int
    coefficients: tuple[Fraction, ...]  # index j-1 holds t_{kj}, j = 1..k


def square_variable_derivative(order: int) -> SquareVariableDerivative:
    if order < 1:
        raise ValueError("order must be >= 1")
    t = [Fraction(1, 2)]  # k = 1: (1/(2x)) d
    for k in range(1, order):
        nxt = [Fraction(0)] * (k + 1)
        for j0, val in enumerate(t):
            j = j0 + 1
            nxt[j0] += Fraction(j - 2 * k, 2) * val
            nxt[j] += Fraction(1, 2) * val
        t = nxt
    return SquareVariableDerivative(order=order, coefficients=tuple(t))


def _xi_derivative_at_one(fn: ExpPoly, order: int) -> tuple[float, float]:
    """(value, magnitude scale) of (d/d(x^2))^order fn at x = 1."""
    if order == 0:
        return fn.evaluate(1.0).real, fn.magnitude_bound()
    expansion = square_variable_derivative(order)
    value = 0.0
    scale = 0.0
    deriv = fn
    for j0, t in enumerate(expansion.coefficients):
        deriv = deriv.differentiate()  # j = j0 + 1
        value += float(t) * deriv.evaluate(1.0).real
        scale += abs(float(t)) * deriv.magnitude_bound()
    return value, scale


def check_xi_derivatives(pair: EigenPair, tol: float = 1e-8) -> IdentityReport:
    """Kernel flatness in the squared variable xi = x^2 at xi = 1.

    For an order-n eigenfunction the kernel part R satisfies
    d^k R / d xi^k |_{xi=1} = 0 for k = n-p .. n-1: the polynomial part,
    rewritten in powers of (x^2 - 1), cannot reach those orders.  The
    clamped conditions themselves are re-verified on the full z for
    k = 0 .. n-1 (the xi-form is equivalent to the x-form).
    """
    spec = pair.spec
    if not spec.symmetric:
        return not_applicable(
            "xi-flatness", (spec.n, spec.p, pair.index), notes="defined for symmetric pairs"
        )
    kernel = pair.kernel_part
    worst_rel = 0.0
    values = {}
    for k in range(spec.n - spec.p, spec.n):
        value, scale = _xi_derivative_at_one(kernel, k)
        rel = abs(value) / max(scale, 1e-300)
        values[f"kernel_k{k}"] = value
        worst_rel = max(worst_rel, rel)
    for k in range(spec.n):
        value, scale = _xi_derivative_at_one(pair.z, k)
        rel = abs(value) / max(scale, 1e-300)
        values[f"full_k{k}"] = value
        worst_rel = max(worst_rel, rel)
    return IdentityReport(
        identity_id="xi-flatness",
        index=(spec.n, spec.p, pair.index),
        lhs=worst_rel,
        rhs=tol,
        abs_residual=worst_rel,
        rel_residual=worst_rel,
        verdict=PASS if worst_rel <= tol else FAIL,
        details=values,
    )


def gamma_expansion(pair: EigenPair) -> list[float]:
    """Polynomial part re-expanded in powers of (x^2 - 1), exact round trip."""
    spec = pair.spec
    if not spec.symmetric:
        raise ValueError("expansion in (x^2 - 1) powers needs a symmetric pair")
    if not spec.has_stones:
        raise ValueError("no polynomial part for n = p")
    coeffs = pair.poly_coeffs
    g = [coeffs[2 * j] if 2 * j < len(coeffs) else 0.0 for j in range(spec.n - spec.p)]
    nu = spec.n - spec.p - 1
    gamma = [sum(math.comb(j, k) * g[j] for j in range(k, nu + 1)) for k in range(nu + 1)]
    rebuilt = [
        sum(math.comb(k, j) * (-1) ** (k - j) * gamma[k] for k in range(j, nu + 1))
        for j in range(nu + 1)
    ]
    scale = max(max(abs(v) for v in g), 1e-300)
    worst = max(abs(a - b) for a, b in zip(rebuilt, g))
    if worst > 1e-12 * scale:
        raise IdentityViolationError(f"(x^2-1) expansion round trip off by {worst:.3e}")
    return gamma


def check_stone_lemma(pair: EigenPair, tol: float = DEFAULT_IDENTITY_TOL) -> IdentityReport:
    """Stone is bounded away from zero and opposes the sign of <z>."""
    spec = pair.spec
    if not spec.has_stones or not spec.symmetric:
        return not_applicable("stone-lemma", (spec.n, spec.p), notes="needs symmetric n > p")
    c = stone(pair)
    mean = pair.mean()
    # the stone is a difference of pieces the size of z^(2n-2), so that norm
    # is the honest "could it have cancelled to zero" yardstick
    scale = max(math.sqrt(l2_norm_sq(pair.z.differentiate(2 * spec.n - 2))), 1e-300)
    nonzero = abs(c) > STONE_FLOOR * scale
    mean_negligible = abs(mean) <= 1e-12 * max(pair.z.magnitude_bound(), 1e-300)
    sign_ok = mean_negligible or c * mean < 0
    return IdentityReport(
        identity_id="stone-lemma",
        index=(spec.n, spec.p, pair.index),
        lhs=c,
        rhs=0.0,
        abs_residual=abs(c),
        rel_residual=abs(c) / scale,
        verdict=PASS if (nonzero and sign_ok) else FAIL,
        notes="" if not mean_negligible else "mean ~0: sign condition vacuous",
        details={"stone": c, "mean": mean, "stone_over_scale": abs(c) / scale},
    )


def check_h_ladder(pair: EigenPair, tol: float = 1e-12) -> IdentityReport:
    """d^2 h^k must reproduce h^(k-1) coefficient by coefficient."""
    spec = pair.spec
    if not spec.has_stones or not spec.symmetric:
        return not_applicable("h-ladder", (spec.n, spec.p), notes="needs symmetric n > p")
    sp = stone_polynomials(pair)
    worst = 0.0
    for k in range(1, len(sp.polynomials)):
        diff = sp.h(k).differentiate(2) - sp.h(k - 1)
        worst = max(worst, diff.magnitude_bound() / max(sp.h(k - 1).magnitude_bound(), 1e-300))
    return IdentityReport(
        identity_id="h-ladder",
        index=(spec.n, spec.p, pair.index),
        lhs=worst,
        rhs=0.0,
        abs_residual=worst,
        rel_residual=worst,
        verdict=PASS if worst <= tol else FAIL,
        details={"k_max": len(sp.polynomials) - 1},
    )


def check_gamma_roundtrip(pair: EigenPair) -> IdentityReport:
    spec = pair.spec
    if not spec.has_stones or not spec.symmetric:
        return not_applicable("gamma-roundtrip", (spec.n, spec.p), notes="needs symmetric n > p")
    try:
        gamma = gamma_expansion(pair)
    except IdentityViolationError as exc:
        return IdentityReport(
            identity_id="gamma-roundtrip",
            index=(spec.n, spec.p, pair.index),
            verdict=FAIL,
            notes=str(exc),
        )
    return IdentityReport(
        identity_id="gamma-roundtrip",
        index=(spec.n, spec.p, pair.index),
        verdict=PASS,
        details={"gamma": tuple(gamma)},
    )


# --------------------------------------------------------------------------
# suite runner
# --------------------------------------------------------------------------


def run_identity_suite(
    n: int,
    p: int,
    count: int = 3,
    m: int | None = None,
    tol: float = DEFAULT_IDENTITY_TOL,
) -> list[IdentityReport]:
    """Every applicable check on the first `count` symmetric eigenpairs.

    Cross-order checks couple (n-1, p) with (n, p); the bilinear and
    Cauchy-Schwarz families couple (n, p) with (m, p), default m = n + 1
    replaced by the adjacent lower order when only that is available.
    """
    reports: list[IdentityReport] = []
    pairs = [pr for pr in cached_spectrum(n, p, "symmetric", count).pairs if pr is not None]

    for pair in pairs:
        reports.append(check_stone_lemma(pair, tol))
        reports.append(check_stone_identity(pair, tol))
        reports.append(check_h_ladder(pair))
        reports.append(check_gamma_roundtrip(pair))
        reports.append(check_root_completeness(pair))
        reports.append(check_xi_derivatives(pair))
        top = n - p - 1
        for k in range(0, max(top, 0) + 1):
            reports.append(check_positivity_family(pair, k, tol))

    if n - 1 >= p:
        lower = [
            pr for pr in cached_spectrum(n - 1, p, "symmetric", count).pairs if pr is not None
        ]
        for prev in lower:
            for pair in pairs:
                reports.append(check_cross_identity(prev, pair, tol))

    if m is not None and m > n:
        left = pairs
        right = [pr for pr in cached_spectrum(m, p, "symmetric", count).pairs if pr is not None]
        lo, hi = n, m
    elif n - 1 >= p:
        left = [pr for pr in cached_spectrum(n - 1, p, "symmetric", count).pairs if pr is not None]
        right = pairs
        lo, hi = n - 1, n
    else:
        left, right, lo, hi = [], [], 0, 0
    if left and right:
        delta_order = hi - lo
        q = delta_order // 2
        for zl in left:
            for zr in right:
                for k in range(-1 - q, lo - p):
                    reports.append(check_bilinear_family(zl, zr, k, tol))
                for l in range(0, lo - p):
                    for k in range(0, lo - p + q):
                        reports.append(check_cauchy_schwarz(zl, zr, l, k))
    return reports
