class IsotauError(Exception):
    pass


class PoleError(IsotauError):
    pass


class NonConvergence(IsotauError):
    pass


class ResonanceError(IsotauError):
    pass


class EvaluationError(IsotauError):
    pass


class MalformedDiagram(IsotauError):
    pass


class GenericityError(IsotauError):
    """Raised when parameters hit an excluded (resonant) point."""

    def __init__(self, violations):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


class AliasingWarning(UserWarning):
    pass


class QuadratureWarning(UserWarning):
    pass
