"""Built-in smoke battery: closed forms, identity anchors, property sweeps.

These checks mirror the heart of the acceptance suite so a deployed copy
can vouch for itself in about a minute: closed-form spectra, the two
hand-computable identity anchors, and seeded randomized property sweeps of
the exponential-polynomial core.
"""

from __future__ import annotations

import math

import warnings

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .exppoly import ExpPoly, inner_product, l2_norm_sq
from .problem import ProblemSpec
from .reports import IdentityReport, bound_report, equality_report
from .solver import cached_spectrum, eigenpair_from_function
from . import invariants

PI = math.pi


def _bisect(fn, lo: float, hi: float, iters: int = 200) -> float:
    flo = fn(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fmid = fn(mid)
        if flo * fmid <= 0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def closed_form_spectrum_checks() -> list[IdentityReport]:
    """Scanned spectra against independent closed forms and bisection roots."""
    reports = []

    def compare(name, n, p, parity, expected, tol):
        got = cached_spectrum(n, p, parity, len(expected), with_eigenfunctions=False).eigenvalues
        for i, (g, e) in enumerate(zip(got, expected)):
            reports.append(equality_report(name, (n, p, i), g, e, tol))

    compare("closed-form", 1, 1, "symmetric", [((k + 0.5) * PI) ** 2 for k in range(3)], 1e-9)
    compare("closed-form", 1, 1, "antisymmetric", [(k * PI) ** 2 for k in (1, 2)], 1e-9)
    compare("closed-form", 2, 1, "symmetric", [(k * PI) ** 2 for k in (1, 2)], 1e-9)
    root = _bisect(lambda t: math.tan(t) - t, PI, 1.5 * PI - 1e-9)
    compare("closed-form", 3, 1, "symmetric", [root**2], 1e-7)
    root = _bisect(lambda t: math.tan(t) + math.tanh(t), 0.5 * PI + 1e-9, PI)
    compare("closed-form", 2, 2, "symmetric", [root**4], 1e-7)
    return reports


def closed_form_anchor_pairs():
    """The two closed-form eigenpairs used by hand-value anchors."""
    z1 = eigenpair_from_function(
        ProblemSpec(1, 1, "symmetric"), PI * PI / 4, ExpPoly.cosine(PI / 2), index=0
    )
    z2 = eigenpair_from_function(
        ProblemSpec(2, 1, "symmetric"), PI * PI, ExpPoly.constant(1) + ExpPoly.cosine(PI), index=0
    )
    return z1, z2


def identity_anchor_checks() -> list[IdentityReport]:
    """Hand-computed anchor values of the cross-order and positivity checks."""
    z1, z2 = closed_form_anchor_pairs()
    reports = []
    cross = invariants.check_cross_identity(z1, z2)
    for side, value in (("lhs", cross.lhs), ("rhs", cross.rhs)):
        reports.append(equality_report(f"anchor-cross-{side}", (), value, -4 * PI, 1e-10))
    pos = invariants.check_positivity_family(z2, 0)
    for route in ("norm_route", "h_route", "bracket_route"):
        reports.append(
            equality_report(f"anchor-positivity-{route}", (), pos.details[route], 2 * PI**4, 1e-10)
        )
    st = invariants.stone(z2)
    reports.append(equality_report("anchor-stone", (), st, -PI * PI, 1e-10))
    return reports


def random_exppoly(rng: np.random.RandomState, freq_scale: float = 50.0, max_degree: int = 8,
                   terms: int = 3) -> ExpPoly:
    """Random complex exponential-polynomial within the tested envelope."""
    raw = []
    for _ in range(rng.randint(1, terms + 1)):
        mu = complex(rng.uniform(-freq_scale, freq_scale), rng.uniform(-freq_scale, freq_scale))
        degree = rng.randint(0, max_degree + 1)
        coeffs = [complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(degree + 1)]
        raw.append((mu, tuple(coeffs)))
    return ExpPoly.build(raw)


def random_real_exppoly(rng: np.random.RandomState, **kw) -> ExpPoly:
    f = random_exppoly(rng, **kw)
    return f + f.conjugate()


def quadrature_integral(f: ExpPoly) -> complex:
    """Adaptive-quadrature reference for the closed-form integrator."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        re, _ = quad(lambda x: f.evaluate(x).real, -1.0, 1.0, limit=800, epsabs=0.0, epsrel=1e-12)
        im, _ = quad(lambda x: f.evaluate(x).imag, -1.0, 1.0, limit=800, epsabs=0.0, epsrel=1e-12)
    return complex(re, im)


def property_checks(seed: int = 2024, cases: int = 200) -> list[IdentityReport]:
    """Seeded randomized property sweeps; each report aggregates one family."""
    rng = np.random.RandomState(seed)
    reports = []

    worst = 0.0
    for _ in range(cases):
        f = random_exppoly(rng, freq_scale=30.0, max_degree=5, terms=2)
        g = random_exppoly(rng, freq_scale=30.0, max_degree=5, terms=2)
        al, be = complex(rng.uniform(-2, 2)), complex(rng.uniform(-2, 2))
        lhs = (f.scaled(al) + g.scaled(be)).integrate_unit()
        rhs = al * f.integrate_unit() + be * g.integrate_unit()
        scale = max(abs(lhs), abs(rhs), abs(f.integrate_unit()), abs(g.integrate_unit()), 1e-30)
        worst = max(worst, abs(lhs - rhs) / scale)
    reports.append(bound_report("prop-linearity", (cases,), worst, 1e-12))

    worst = 0.0
    window = ExpPoly.build([(0j, (1 + 0j, 0j, -1 + 0j))])  # 1 - x^2
    for _ in range(cases):
        f = random_real_exppoly(rng, freq_scale=20.0, max_degree=3, terms=2) * window
        g = random_real_exppoly(rng, freq_scale=20.0, max_degree=3, terms=2) * window
        lhs = inner_product(f.differentiate(), g)
        rhs = -inner_product(f, g.differentiate())
        norms = math.sqrt(l2_norm_sq(f.differentiate()) * l2_norm_sq(g))
        scale = max(abs(lhs), abs(rhs), norms, 1e-30)
        worst = max(worst, abs(lhs - rhs) / scale)
    reports.append(bound_report("prop-integration-by-parts", (cases,), worst, 1e-10))

    worst = 0.0
    for trial in range(cases):
        k = 1 + trial % 3
        clamp = window
        for _ in range(k - 1):
            clamp = clamp * window
        # moderate frequencies: with |Re mu| ~ 15 the e^{2|mu|} dynamic range of
        # the product integrand already eats the 1e-10 headroom in an honest
        # norm-relative comparison
        f = random_real_exppoly(rng, freq_scale=8.0, max_degree=2, terms=2) * clamp
        g = random_real_exppoly(rng, freq_scale=8.0, max_degree=2, terms=2) * clamp
        sig_f = f
        sig_g = g
        for _ in range(k):
            sig_f = sig_f.differentiate().scaled(1j)
            sig_g = sig_g.differentiate().scaled(1j)
        lhs = inner_product(sig_f, g.conjugate())
        rhs = inner_product(f, sig_g.conjugate())
        norms = math.sqrt(l2_norm_sq(sig_f) * l2_norm_sq(g))
        scale = max(abs(lhs), abs(rhs), norms, 1e-30)
        worst = max(worst, abs(lhs - rhs) / scale)
    reports.append(bound_report("prop-hermiticity", (cases,), worst, 1e-10))

    worst = 0.0
    for _ in range(cases):
        f = random_exppoly(rng, freq_scale=50.0, max_degree=8, terms=2)
        closed = f.integrate_unit()
        reference = quadrature_integral(f)
        scale = max(abs(closed), abs(reference), 1e-10 * f.magnitude_bound(), 1e-30)
        worst = max(worst, abs(closed - reference) / scale)
    reports.append(bound_report("prop-quadrature-agreement", (cases,), worst, 1e-10))

    worst_b = worst_o = 0.0
    for (n, p) in ((2, 1), (3, 2), (4, 2)):
        for pair in cached_spectrum(n, p, "symmetric", 2).pairs:
            r = pair.residuals
            worst_b = max(worst_b, r.boundary_residual / max(r.boundary_scale, 1e-300))
            worst_o = max(worst_o, r.operator_residual / max(r.operator_scale, 1e-300))
    reports.append(bound_report("prop-boundary-residual", (), worst_b, 1e-9))
    reports.append(bound_report("prop-operator-residual", (), worst_o, 1e-8))
    return reports


def run_selftest(seed: int = 2024, cases: int = 200) -> list[IdentityReport]:
    reports = []
    reports.extend(closed_form_spectrum_checks())
    reports.extend(identity_anchor_checks())
    reports.extend(property_checks(seed=seed, cases=cases))
    return reports
