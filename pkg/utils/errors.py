"""Exception hierarchy shared by the numerical modules, the CLI and the routes."""


class HelmholtzError(ValueError):
    """Base class for every domain-level failure raised by the library."""


class DomainError(HelmholtzError):
    """An argument lies outside the domain of the operation."""


class SingularityError(DomainError):
    """A closed form was evaluated at, or too close to, one of its poles."""


class SingularEnvelopeError(SingularityError):
    """The envelope exponent f = -i*ln(...) hit a zero of its log argument."""


class BranchCrossingError(DomainError):
    """A finite-difference stencil straddles the |kR| = pi/4 branch switch."""


class IntegrationError(HelmholtzError):
    """The complex ODE integrator could not reach the end of the interval."""


class PoleEncounteredError(IntegrationError):
    def __init__(self, message, last_good_t):
        super().__init__(message)
        self.last_good_t = last_good_t


class StiffnessError(IntegrationError):
    def __init__(self, message, t):
        super().__init__(message)
        self.t = t


class GridExportError(OSError):
    """Writing an exported grid to its destination failed."""
