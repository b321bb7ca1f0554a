"""
Exceptions raised by the optimal_designs library.
"""


class OptimalDesignError(Exception):
    """
    Base class for every error raised by this package.
    """


class ConfigurationError(OptimalDesignError, ValueError):
    """
    Invalid run, search or criterion configuration.
    """


class ModelSpecificationError(OptimalDesignError, ValueError):
    """
    A factor or model specification breaks its invariants.
    """


class UnknownModelError(ModelSpecificationError):
    """
    A builtin model name that does not exist was requested.
    """


class DomainError(OptimalDesignError, ValueError):
    """
    Argument outside the domain of a special function.
    """


class SingularMatrixError(OptimalDesignError, ArithmeticError):
    """
    A matrix expected to be positive definite is singular.
    """


class SingularDesignError(SingularMatrixError):
    """
    The information matrix of a design is singular under the model.
    """


class InfeasibleDesignError(OptimalDesignError):
    """
    No design with a positive criterion value exists for the requested problem.
    """


class MissingReferenceError(OptimalDesignError):
    """
    An efficiency was requested without the reference optimum it is relative to.
    """


class DesignFileError(OptimalDesignError):
    """
    A design file cannot be read or does not match the candidate set.
    """

    def __init__(self, message, row=None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row
