"""Exception hierarchy.

Precondition failures and theorem violations are kept apart because the CLI
maps them to different exit codes (3 and 2).
"""

from dataclasses import dataclass, field


class GroupoidGaloisError(Exception):
    pass


@dataclass(frozen=True)
class Violation:
    """One failed axiom, with the morphisms/indices that witness it."""

    kind: str
    detail: str
    witness: tuple = field(default=())

    def as_dict(self):
        return {"kind": self.kind, "detail": self.detail, "witness": list(self.witness)}


class ValidationError(GroupoidGaloisError):
    def __init__(self, violations):
        self.violations = list(violations)
        kinds = sorted({v.kind for v in self.violations})
        super().__init__(f"{len(self.violations)} violation(s): {', '.join(kinds)}")

    @property
    def kinds(self):
        return {v.kind for v in self.violations}


class GroupoidValidationError(ValidationError):
    pass


class ActionValidationError(ValidationError):
    pass


class ParseError(GroupoidGaloisError):
    pass


class OverlappingBlocks(ParseError):
    pass


class NotAnObject(GroupoidGaloisError):
    pass


class CapExceeded(GroupoidGaloisError):
    pass


class EnumerationInconsistent(GroupoidGaloisError):
    pass


class AlgebraMismatch(GroupoidGaloisError):
    pass


class SupportTooLarge(GroupoidGaloisError):
    pass


class NotCoarsening(GroupoidGaloisError):
    pass


class BadFamily(GroupoidGaloisError):
    pass


class VerificationFailed(GroupoidGaloisError):
    pass


class GlobalizationVerificationFailed(VerificationFailed):
    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class PreconditionError(GroupoidGaloisError):
    """A theorem's hypotheses do not hold for the given input."""


class NotConnected(PreconditionError):
    pass


class NotWide(PreconditionError):
    pass


class NotOrthogonal(PreconditionError):
    pass


class NotGalois(PreconditionError):
    pass


class NotGlobal(PreconditionError):
    pass


class EmptySupport(PreconditionError):
    pass


class NotStronglyGalois(PreconditionError):
    pass


class TheoremViolation(GroupoidGaloisError):
    """A proved statement failed on concrete data: always a bug here."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)
