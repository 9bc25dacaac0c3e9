"""
Exceptions raised by the orbit analysis library.

Management commands map InputError and PreconditionError to exit code 2
and TierError to exit code 3 when exact computation was demanded.
"""


class OrbitRegError(Exception):
    """Base class for every error raised by the orbits app"""


# ============================================================================
# Input errors
# ============================================================================

class InputError(OrbitRegError):
    """Malformed input document, literal or option"""


class ScalarSyntaxError(InputError):
    """A scalar literal does not follow the scalar grammar"""


class UnknownConstantError(InputError):
    """A literal refers to a constant that was not declared"""

    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown constant '{name}'")


# ============================================================================
# Precondition errors
# ============================================================================

class PreconditionError(OrbitRegError):
    """A mathematical precondition of an operation does not hold"""


class NonCommutingError(PreconditionError):
    def __init__(self, first, second):
        self.pair = (first, second)
        super().__init__(f'generators {first} and {second} do not commute')


class SingularGeneratorError(PreconditionError):
    """A generator (or a triangular block) is not invertible"""


class NotInRegularRegionError(PreconditionError):
    """A vector has a vanishing block-leading coordinate"""

    def __init__(self, message, block=None):
        self.block = block
        super().__init__(message)


class NonInvariantSubspaceError(PreconditionError):
    pass


class PropertyDHypothesisError(PreconditionError):
    """The vectors are not arranged as the D(m) rank condition requires"""


class InsufficientPointsError(PreconditionError):
    def __init__(self, found, needed):
        self.found = found
        self.needed = needed
        super().__init__(f'only {found} points inside the window, at least {needed} needed')


class InconsistentSystemError(PreconditionError):
    """A linear system has no solution at the working precision"""


# ============================================================================
# Tier errors
# ============================================================================

class TierError(OrbitRegError):
    """The requested arithmetic tier cannot carry out a computation"""


class NotRepresentableError(TierError):
    """A result leaves the rational span of the declared constants"""


class EigenClusterError(TierError):
    """Numeric eigenvalues cannot be grouped without guessing"""


class ThresholdError(TierError):
    pass


class InternalInconsistencyError(OrbitRegError):
    """Raised when a computed object contradicts a structural guarantee"""
