"""Exception types shared across the package."""


class InfeasibleAngleError(ValueError):
    """Requested contact angles cannot be realized by a unit tangent."""


class DegenerateDirectionError(ValueError):
    """A contact-distribution direction is required but the supplied one is zero."""


class InvalidParamsError(ValueError):
    """Closed-form parameter set violates one of its constraints."""


class WrongCaseError(InvalidParamsError):
    """Parameter set belongs to the other closed-form family."""


class InvalidGridError(ValueError):
    """Trajectory time grid is not uniform."""


class InsufficientDataError(ValueError):
    """Too few trajectory samples for the requested computation."""


class InconsistentCaseError(ValueError):
    """Inverse-strength request mixes incompatible case and curvature data."""


class DivergenceError(RuntimeError):
    """Integration produced a nonfinite state.

    Carries the last time at which the state was still finite.
    """

    def __init__(self, message: str, t_last: float):
        super().__init__(message)
        self.t_last = t_last
