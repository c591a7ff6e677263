"""
Error types raised by trapecho.

The command-line runner maps these onto exit codes, so library code should
raise one of them whenever a user-controlled input is at fault.
"""


class ConfigError(ValueError):
    """
    A configuration field is missing, malformed or violates a physical
    invariant.

    :param field: Dotted path of the offending field, e.g.
    ``trap.temperature_T``.
    :param message: What rule was violated.
    """
    exit_code = 2

    def __init__(self, field, message):
        self.field = field
        self.message = message
        super().__init__("{}: {}".format(field, message))


class NumericalValidityError(RuntimeError):
    """
    A numerical invariant failed (domain too small, norm drift, incomplete
    basis window, ...). Usually fixed by enlarging the grid or the basis.
    """
    exit_code = 3


class CsvFormatError(ValueError):
    exit_code = 2

    def __init__(self, path, row, message):
        self.path = path
        self.row = row
        super().__init__("{} (row {}): {}".format(path, row, message))
