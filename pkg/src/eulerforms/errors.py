"""Exception types shared across the package.

Everything computational raises a subclass of EulerformsError so the CLI can
map faults to exit code 1 and usage problems to exit code 2.
"""


class EulerformsError(Exception):
    """Base class for all computational faults raised by this package."""


class AmbiguousBoundary(EulerformsError):
    """A certified interval straddles an integer (or another decision
    boundary), so the requested discrete quantity is not determined.
    Callers normally escalate precision and retry."""


class AmbiguousQuotient(AmbiguousBoundary):
    """A continued-fraction partial quotient could not be certified from the
    input interval."""


class PrecisionExhausted(EulerformsError):
    """Escalation hit the configured precision ceiling before the target
    error bound was met."""


class OverCap(EulerformsError):
    """An exact result would exceed a configured size cap."""


class DepthCap(EulerformsError):
    """A recursion/tower depth cap was exceeded."""


class SelfCheckFailed(EulerformsError):
    """A computed constant disagrees with the bundled reference digits.
    Hard fault: do not trust further output from this process."""


class MethodDisagreement(EulerformsError):
    """Two independent evaluations of the same quantity differ by more than
    their combined certified error. Hard fault."""


class IntegralityFailure(EulerformsError):
    """A combination that must be an integer landed too far from one."""


class IdentityMismatch(EulerformsError):
    """Two algebraically identical computations disagree beyond certified
    error. Hard fault."""


class BranchBoundary(EulerformsError):
    """A piecewise formula was evaluated exactly on its excluded boundary."""


class CheckpointMismatch(EulerformsError):
    """A checkpoint file's header does not match the current run
    configuration; resuming would silently mix incompatible data."""
