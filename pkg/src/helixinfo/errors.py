"""Exception hierarchy shared by every helixinfo module."""


class HelixError(ValueError):
    """Base class; the CLI maps every subclass to exit status 1."""


class ValidationError(HelixError):
    pass


class ConsistencyError(HelixError):
    """Overlapping counts violate Boolean consistency."""


class DomainError(HelixError):
    """A quantity is undefined for the given input (e.g. log of zero)."""


class DegenerateDistributionError(DomainError):
    pass


class ConfigurationError(HelixError):
    pass


class ParseError(ValidationError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
