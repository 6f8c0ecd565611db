"""Margin-aware inequality records shared by every checking module.

A check compares a computed left side against a claimed right side.  The
verdict policy is deliberately one-directional: "holds" needs the whole
left side (finite part plus any residual majorant) to clear the bound by
more than MARGIN_FACTOR times the accumulated numeric error, while
"fails" needs the certified finite part alone to already exceed the
bound by the same safety factor.  Anything in between is "indeterminate".
Checks whose hypotheses are unreachable at desk scale are emitted with
verdict "diagnostic" and never influence exit codes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

VERDICT_HOLDS = "holds"
VERDICT_FAILS = "fails"
VERDICT_INDETERMINATE = "indeterminate"
VERDICT_DIAGNOSTIC = "diagnostic"

# A margin only counts when it exceeds this multiple of the numeric error.
MARGIN_FACTOR = 10.0


@dataclass
class BoundCheckRecord:
    """Outcome of one inequality check.

    check_id    stable identifier, must appear in CHECK_REGISTRY
    claim       self-contained statement of the inequality being tested
    lhs         left side including any residual majorant (upper estimate)
    rhs         right side of the claimed bound
    margin      rhs - lhs
    verdict     holds | fails | indeterminate | diagnostic
    err         accumulated numeric error budget for lhs and rhs
    lhs_low     certified lower part of the left side (no majorant)
    notes       free-form context, kept short and deterministic
    """

    check_id: str
    claim: str
    lhs: float
    rhs: float
    margin: float
    verdict: str
    err: float = 0.0
    lhs_low: float | None = None
    notes: str = ""

    def as_dict(self) -> dict:
        d = {
            "check_id": self.check_id,
            "claim": self.claim,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "verdict": self.verdict,
            "err": self.err,
        }
        if self.lhs_low is not None:
            d["lhs_low"] = self.lhs_low
        if self.notes:
            d["notes"] = self.notes
        return d


def bound_check(
    check_id: str,
    claim: str,
    lhs: float,
    rhs: float,
    err: float = 0.0,
    *,
    lhs_low: float | None = None,
    diagnostic: bool = False,
    notes: str = "",
) -> BoundCheckRecord:
    """Build a record for the claim lhs <= rhs.

    lhs must be an upper estimate of the true left side.  lhs_low, when
    given, is a certified lower estimate used for the "fails" direction;
    it defaults to lhs (exact left side).
    """
    low = lhs if lhs_low is None else lhs_low
    margin = rhs - lhs
    if diagnostic:
        verdict = VERDICT_DIAGNOSTIC
        inner = "would hold" if margin > MARGIN_FACTOR * err else (
            "finite part exceeds bound" if low - rhs > MARGIN_FACTOR * err
            else "unresolved at this truncation")
        notes = f"{inner}; {notes}" if notes else inner
    elif margin > MARGIN_FACTOR * err:
        verdict = VERDICT_HOLDS
    elif low - rhs > MARGIN_FACTOR * err:
        verdict = VERDICT_FAILS
    else:
        verdict = VERDICT_INDETERMINATE
    return BoundCheckRecord(
        check_id=check_id, claim=claim, lhs=float(lhs), rhs=float(rhs),
        margin=float(margin), verdict=verdict, err=float(err),
        lhs_low=None if lhs_low is None else float(lhs_low), notes=notes,
    )


def equality_check(
    check_id: str,
    claim: str,
    value: float,
    target: float,
    tol: float,
    err: float = 0.0,
    notes: str = "",
) -> BoundCheckRecord:
    """Record for |value - target| <= tol, margin measured against tol."""
    return bound_check(
        check_id, claim, abs(value - target), tol, err, notes=notes)


# Registry of every check_id the package can emit.  Tests assert that all
# emitted records resolve here, so adding a check means documenting it.
CHECK_REGISTRY: dict[str, str] = {}


def register_check(check_id: str, description: str) -> str:
    if check_id in CHECK_REGISTRY and CHECK_REGISTRY[check_id] != description:
        raise ValueError(f"check_id {check_id!r} registered twice")
    CHECK_REGISTRY[check_id] = description
    return check_id
