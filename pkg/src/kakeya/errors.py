"""Exception types shared by all modules."""


class KakeyaError(Exception):
    """Base class for errors raised by this package."""


class EmptyBody(KakeyaError):
    pass


class UnboundedInDirection(KakeyaError):
    def __init__(self, direction=None, msg: str = "polytope is unbounded"):
        super().__init__(msg if direction is None else f"{msg} in direction {list(direction)}")
        self.direction = direction


class Unbounded(UnboundedInDirection):
    pass


class DegenerateInput(KakeyaError):
    pass


class PreconditionViolated(KakeyaError):
    pass


class InfeasibleAuxiliary(KakeyaError):
    """No auxiliary placement exists (the body is not Kakeya in some direction)."""


class NotKakeyaAtAngle(KakeyaError):
    def __init__(self, angle: float):
        super().__init__(f"no valid placement of the probe at angle {angle!r}")
        self.angle = angle


class NotKakeya(KakeyaError):
    def __init__(self, direction):
        super().__init__(f"body contains no unit segment in direction {list(direction)}")
        self.direction = direction


class NoPathAtResolution(KakeyaError):
    def __init__(self, detail: str = ""):
        msg = ("no path found at this resolution; this is not a proof that none exists "
               "(refining the direction graph or lowering the margin may succeed)")
        super().__init__(msg + (f": {detail}" if detail else ""))


class DomainError(KakeyaError):
    pass


class BudgetExceeded(KakeyaError):
    pass


class OutOfRegime(KakeyaError):
    pass
