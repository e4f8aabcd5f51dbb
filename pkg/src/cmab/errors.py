"""Shared exception types."""


class GuardExceeded(RuntimeError):
    """Raised when an exact computation would blow past its size guard.

    Guards protect the exact evaluators (exhaustive enumeration, support
    convolution, signature dynamic program) from combinatorial blowup.
    Callers should shrink the instance or relax the parameter the message
    names; results are never silently approximated.
    """
