"""Machine-readable verdicts for identity and inequality checks."""

from __future__ import annotations

from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not-applicable"

RESIDUAL_FLOOR = 1e-30  # avoids 0/0 verdicts on identically-zero identities


def relative_residual(lhs: float, rhs: float) -> float:
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), RESIDUAL_FLOOR)


@dataclass(frozen=True)
class IdentityReport:
    """One checked identity/inequality instance.

    ``identity_id`` names the relation, ``index`` carries whatever index
    tuple applies (k, l, order gap, ...).  ``details`` holds auxiliary
    residuals (alternate evaluation routes, sign-variant diagnostics).
    """

    identity_id: str
    index: tuple = ()
    lhs: float = 0.0
    rhs: float = 0.0
    abs_residual: float = 0.0
    rel_residual: float = 0.0
    verdict: str = PASS
    notes: str = ""
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    @property
    def applicable(self) -> bool:
        return self.verdict != NOT_APPLICABLE


def equality_report(identity_id, index, lhs, rhs, tol, notes="", details=None) -> IdentityReport:
    rel = relative_residual(lhs, rhs)
    return IdentityReport(
        identity_id=identity_id,
        index=tuple(index),
        lhs=float(lhs),
        rhs=float(rhs),
        abs_residual=abs(lhs - rhs),
        rel_residual=rel,
        verdict=PASS if rel <= tol else FAIL,
        notes=notes,
        details=details or {},
    )


def bound_report(identity_id, index, value, bound, notes="", details=None) -> IdentityReport:
    """Pass when value <= bound (one-sided smallness check)."""
    return IdentityReport(
        identity_id=identity_id,
        index=tuple(index),
        lhs=float(value),
        rhs=float(bound),
        abs_residual=max(value - bound, 0.0),
        rel_residual=float(value) / max(abs(bound), RESIDUAL_FLOOR),
        verdict=PASS if value <= bound else FAIL,
        notes=notes,
        details=details or {},
    )


def not_applicable(identity_id, index, notes="") -> IdentityReport:
    return IdentityReport(
        identity_id=identity_id, index=tuple(index), verdict=NOT_APPLICABLE, notes=notes
    )
