"""Exception types shared across the package."""


class DebateLabError(Exception):
    """Base class for all package errors."""


class ZeroProbabilityEvent(DebateLabError):
    """Conditioning event has zero probability under the prior."""


class IndexOutOfRange(DebateLabError, IndexError):
    pass


class NotPromotedWithin(DebateLabError):
    """No truth-promoting round count was found below the search cap."""

    def __init__(self, max_rounds: int, which: str = ""):
        self.max_rounds = max_rounds
        self.which = which
        super().__init__(f"{which or 'question'} not truth-promoting within {max_rounds} rounds")


class AnswersOutsideLambda(DebateLabError, ValueError):
    pass


class NashMismatch(DebateLabError):
    """Grid game equilibria disagree with the closed-form answer interval."""

    def __init__(self, report):
        self.report = report
        super().__init__(
            f"equilibrium mismatch: unexpected={report.unexpected} missing={report.missing}"
        )


class UnsupportedValue(DebateLabError, ValueError):
    pass


class BoundInapplicable(DebateLabError, ValueError):
    pass


class OutOfOrderBit(DebateLabError, ValueError):
    pass


class UntruthfulBit(DebateLabError, ValueError):
    pass


class ConfigError(DebateLabError, ValueError):
    """Invalid scenario configuration; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")
