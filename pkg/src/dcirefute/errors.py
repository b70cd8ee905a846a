"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the domain an operation accepts."""


class CapacityError(RuntimeError):
    """A search or enumeration would exceed its configured budget."""


class VerificationError(AssertionError):
    """A named mathematical check failed."""

    def __init__(self, check, detail=""):
        self.check = check
        self.detail = detail
        msg = f"check {check!r} failed"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
