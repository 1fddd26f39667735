"""Exception hierarchy shared by all modules."""


class OnofriLabError(Exception):
    """Base class for every error raised by the package."""


class GridError(OnofriLabError):
    pass


class GeometryError(OnofriLabError):
    pass


class MeanNonzeroError(OnofriLabError):
    """Raised when an operator defined on mean-zero functions gets something else."""


class OverflowRisk(OnofriLabError):
    pass


class InadmissibleInput(OnofriLabError):
    pass


class FlowError(OnofriLabError):
    pass


class TransportError(OnofriLabError):
    pass


class ExprSyntaxError(OnofriLabError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ExprDomainError(OnofriLabError):
    pass
