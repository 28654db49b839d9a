# errors.py
"""Exception hierarchy shared by every layer.

The CLI maps these onto exit codes (see ``EXIT_CODES``).
"""


class SlideNormError(Exception):
    """Base class for all library errors."""


class ParameterError(SlideNormError, ValueError):
    """A parameter or config value is outside its allowed range."""


class RangeError(SlideNormError, ValueError):
    """An item id lies outside the universe [1, n]."""


class CapacityError(SlideNormError):
    """A norm's mmc bound exceeds what the grid was sized for."""


class NumericError(SlideNormError):
    """Root bracketing, LP or solver failure."""


class InputError(SlideNormError, ValueError):
    """Malformed vector, row or stream file."""


EXIT_CODES = {
    ParameterError: 2,
    RangeError: 2,
    InputError: 2,
    CapacityError: 3,
    NumericError: 4,
}


def exit_code_for(exc: BaseException) -> int:
    for cls in type(exc).__mro__:
        if cls in EXIT_CODES:
            return EXIT_CODES[cls]
    if isinstance(exc, OSError):
        return 2
    return 1
