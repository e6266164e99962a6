"""Shared exception types."""


class InputError(ValueError):
    """Bad input: malformed files, unknown ids, violated preconditions."""


class VerificationError(RuntimeError):
    """An identity the library promises to verify failed to hold.

    Reaching this always means a bug or a genuine mathematical finding,
    never a recoverable user mistake.
    """
