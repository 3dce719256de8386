# src/errors.py


class XregoError(Exception):
    """Base class for all errors raised by the library"""


class DimensionError(XregoError, ValueError):
    """Matrix or point dimensions are inconsistent"""


class DomainError(XregoError, ValueError):
    """An argument lies outside the domain of a formula"""


class PreconditionError(XregoError, ValueError):
    """A documented precondition of an operation does not hold"""


class ConfigError(XregoError):
    """Experiment or CLI configuration could not be loaded or validated"""
