"""Exception types shared across the package."""


class DecoysynthError(Exception):
    """Base class for all package errors."""


class ParseError(DecoysynthError):
    """A config file could not be parsed."""


class ValidationError(DecoysynthError):
    """An input violated a structural invariant; the message names it."""


class StateCapExceeded(DecoysynthError):
    """State-space construction hit the configured cap."""

    def __init__(self, cap: int, what: str = "state space"):
        self.cap = cap
        super().__init__(f"{what} exceeded the configured cap of {cap} states")


class ProductDeterminismError(DecoysynthError):
    """Two observation-equivalent symbols drive the second automaton to
    different successors, so the masked product is not deterministic."""
