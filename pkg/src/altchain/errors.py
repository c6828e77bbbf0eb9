"""Exception taxonomy shared by every module.

Validation problems (bad parameters, wrong parity, out-of-range nodes)
derive from ValueError; numeric trouble (overflow horizons, resource
guards, solver breakdown) derives from RuntimeError.  The command line
maps the two families to distinct exit codes.
"""

from __future__ import annotations


class ValidationError(ValueError):
    """Caller passed parameters outside an operation's domain."""


class RegimeError(ValidationError):
    """Closed-form branch requested outside its validity window.

    The numeric eigensolver handles every parameter combination; this
    error tells the caller to route there instead.
    """


class NumericError(RuntimeError):
    """A numeric routine failed to meet its accuracy contract."""


class HorizonError(NumericError):
    """Requested evaluation lies beyond the trustworthy numeric range."""


class ResourceError(NumericError):
    """Requested problem size exceeds a hard memory or time guard."""


class VerificationError(RuntimeError):
    """A cross-check between independent computation routes failed."""
