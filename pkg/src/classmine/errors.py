"""Exception hierarchy shared by every stage of the toolkit."""


class ClassMineError(Exception):
    """Base class for all toolkit errors."""


class DataValidationError(ClassMineError, ValueError):
    """Input data violates a precondition (bad cell, wrong schema, ...)."""


class ParseError(DataValidationError):
    """Malformed CSV document."""


class SchemaError(DataValidationError):
    """Schema lookup or compatibility failure."""


class FitError(DataValidationError):
    """A model or filter cannot be fitted on the given data."""
