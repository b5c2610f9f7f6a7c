"""Exception types shared across the package."""


class RootRegError(Exception):
    """Base class for all package errors."""


class NonConvergence(RootRegError):
    """Iterative solver hit its iteration cap before reaching tolerance."""


class AllCoefficientsZero(RootRegError):
    """Every reduced coefficient vanishes; there is no dominant index."""


class ZeroDominant(RootRegError):
    """Requested rescaling by a vanishing dominant coefficient."""


class NoSplit(RootRegError):
    """No binary root partition met the requested gap factor."""

    def __init__(self, message, best_ratio=None):
        super().__init__(message)
        self.best_ratio = best_ratio


class SingularJacobian(RootRegError):
    """Coefficient-map Jacobian is numerically singular (zero resultant)."""


class SingularMatrix(RootRegError):
    """Node matrix is numerically singular."""

    def __init__(self, message, condition_number=None):
        super().__init__(message)
        self.condition_number = condition_number


class InsufficientData(RootRegError):
    """Too few samples for the requested derivative order."""


class NonvanishingBoundary(RootRegError):
    """Function does not vanish where a support component meets the zero set."""


class OutsideDomain(RootRegError):
    """Base point lies in the common zero set of the budget radicals."""


class BudgetExhausted(RootRegError):
    """Growth budget unreachable even after clamping to the domain."""


class NonterminatingChain(RootRegError):
    """Interval chain failed to cover its component within the record cap."""


class RefinementCeiling(RootRegError):
    """Adaptive grid refinement hit the depth cap."""


class OrderOutOfRange(RootRegError):
    """Requested derivative order is outside the admissible range."""


class SignChange(RootRegError):
    """Sign hypothesis fails; carries a witness point."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SizeMismatch(RootRegError):
    """Operands have different cardinality."""


class MonodromyObstruction(RootRegError):
    """Nontrivial root permutation around a cycle obstructs a continuous branch.

    Carries the witness cell (grid indices) and the permutation.
    """

    def __init__(self, message, cell=None, permutation=None):
        super().__init__(message)
        self.cell = cell
        self.permutation = tuple(permutation) if permutation is not None else None


class ConfigError(RootRegError):
    """Invalid experiment or CLI configuration."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
