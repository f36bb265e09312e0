"""
Exit codes for every exception a command can raise.

The tables are keyed by exception class name and grouped by the module
family that raises them. Anything not listed falls back to the family's
UNKNOWN entry:

- 0: success
- 2: input error (unreadable or malformed input, bad flags)
- 3: numeric failure (and anything unexpected)
"""
from frozendict import frozendict

UNKNOWN_KEY = "UNKNOWN"

SUCCESS = 0
INPUT_ERROR = 2
NUMERIC_ERROR = 3


def get_exit_code(err: Exception) -> int:
    """
    Return an exit code, given an exception.

    Args:
        err: the Exception for which we need a code.

    Returns:
        2 for input errors, 3 otherwise.
    """
    err_module = err.__class__.__module__
    err_name = err.__class__.__name__
    if err_module.startswith("builtin"):
        return builtin_error_map.get(err_name, builtin_error_map[UNKNOWN_KEY])
    elif err_module.startswith("tangra"):
        return tangra_error_map.get(err_name, tangra_error_map[UNKNOWN_KEY])
    else:
        return other_error_map.get(err_name, other_error_map[UNKNOWN_KEY])


builtin_error_map = frozendict({
    UNKNOWN_KEY: NUMERIC_ERROR,
    "FileNotFoundError": INPUT_ERROR,
    "IsADirectoryError": INPUT_ERROR,
    "NotADirectoryError": INPUT_ERROR,
    "PermissionError": INPUT_ERROR,
    "OSError": INPUT_ERROR,
    "UnicodeDecodeError": INPUT_ERROR,
    "ValueError": INPUT_ERROR,
    "FloatingPointError": NUMERIC_ERROR,
    "OverflowError": NUMERIC_ERROR,
    "ZeroDivisionError": NUMERIC_ERROR,
})


tangra_error_map = frozendict({
    UNKNOWN_KEY: NUMERIC_ERROR,
    "PolynomialFormatError": INPUT_ERROR,
    "ZeroPolynomialError": INPUT_ERROR,
    "ConstantPolynomialError": INPUT_ERROR,
    "DegreeOutOfRangeError": INPUT_ERROR,
    "InvalidSolveOptions": INPUT_ERROR,
    "InvalidRunConfig": INPUT_ERROR,
    "DegenerateThetaError": NUMERIC_ERROR,
    "RootAtPoleError": NUMERIC_ERROR,
    "ClassicalOverflowError": NUMERIC_ERROR,
    "EndpointVanishedError": NUMERIC_ERROR,
    "PairingError": NUMERIC_ERROR,
    "RootSetMismatchError": NUMERIC_ERROR,
})


other_error_map = frozendict({
    UNKNOWN_KEY: NUMERIC_ERROR,
})
