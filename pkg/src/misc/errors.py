"""
Error families. The command dispatcher maps each family to an exit status.
"""


class UsageError(Exception):
    """ Bad flags or config values (exit 1) """
    exit_code = 1


class DataError(Exception):
    """ Unreadable or malformed inputs, shape contract violations (exit 2) """
    exit_code = 2


class DivergenceError(ArithmeticError):
    """ Non-finite loss during training or validation (exit 3) """
    exit_code = 3


class ShapeError(DataError, ValueError):
    """
    Shape contract violation. Names the offending dimension and both values.
    """

    def __init__(self, dim, expected, got, where=''):
        self.dim      = dim
        self.expected = expected
        self.got      = got
        self.where    = where

        prefix = f'{where}: ' if where else ''
        DataError.__init__(self, f'{prefix}{dim} mismatch (expected {expected}, got {got})')
