"""Exception taxonomy shared by the library and the CLI.

The CLI maps these onto exit codes: InputError -> 2, CapabilityError -> 3,
VerificationError -> 4.
"""


class InputError(ValueError):
    """Malformed or out-of-contract input."""


class CapabilityError(RuntimeError):
    """Request exceeds an implementation working bound."""


class VerificationError(AssertionError):
    """A verification suite found a violated invariant."""
