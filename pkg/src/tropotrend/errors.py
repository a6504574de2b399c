"""Exception hierarchy shared by the library and the command line."""


class TropoTrendError(Exception):
    """Base class for all errors raised by tropotrend."""


class InputError(TropoTrendError):
    """Problems with user-supplied files or documents (CLI exit code 2)."""


class ParseError(InputError, ValueError):
    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = []
        if source is not None:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        prefix = ":".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class SchemaError(InputError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ConfigError(InputError, ValueError):
    def __init__(self, key, message):
        self.key = key
        super().__init__(f"config key {key!r}: {message}")


class DomainError(TropoTrendError, ValueError):
    """An argument is outside the mathematical domain of an operation (exit code 3)."""


class RangeError(DomainError):
    """A requested calendar window is not covered by the data."""


class DegenerateInput(DomainError):
    """Input carries no usable variation (constant series, too few samples)."""


class DofTooSmall(DomainError):
    """Effective degrees of freedom <= 2, so the adjusted standard error is undefined."""


class NonConvergence(DomainError):
    def __init__(self, message, bracket=None):
        self.bracket = bracket
        if bracket is not None:
            message = f"{message} (bracket [{bracket[0]:.10g}, {bracket[1]:.10g}])"
        super().__init__(message)
