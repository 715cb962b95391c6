"""Exception taxonomy shared across the package.

The CLI maps each class to a distinct exit code, so library code should
raise these rather than bare ValueError/RuntimeError where the distinction
matters to a caller.
"""


class InputError(ValueError):
    """Rejected input: out-of-domain parameter, malformed sequence, bad size."""


class UnsupportedRangeError(ValueError):
    """Parameter outside the range an algorithm is validated for."""


class NumericalFailureError(RuntimeError):
    """An iteration failed to converge within its documented cap."""
