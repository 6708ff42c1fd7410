"""Exception types shared across the package."""


class InvalidParameter(ValueError):
    """An argument violates an operation's precondition."""


class Unsupported(RuntimeError):
    """The request exceeds a configured capacity (e.g. the brute-force cap)."""


class ParseError(ValueError):
    def __init__(self, lineno: int, reason: str):
        super().__init__(f"line {lineno}: {reason}")
        self.lineno = lineno
        self.reason = reason
