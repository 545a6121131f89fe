"""Exception hierarchy shared by all stages.

Each class carries the CLI exit code it maps to.
"""


class CociteError(Exception):
    exit_code = 1


class ValidationError(CociteError):
    exit_code = 2


class ParseError(ValidationError):
    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class UnknownNodeError(CociteError, KeyError):
    exit_code = 2

    def __str__(self):
        return Exception.__str__(self)


class UndefinedMetricError(CociteError, ValueError):
    exit_code = 4


class InfeasibleError(CociteError, ValueError):
    exit_code = 4


class ParameterError(CociteError, ValueError):
    exit_code = 4
