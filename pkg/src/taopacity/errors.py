"""Exception hierarchy shared by every module of the package."""


class OpacityError(Exception):
    """Base class for all errors raised by taopacity."""


class ModelError(OpacityError):
    """The automaton (or something referring to it) is malformed."""


class SemanticGraphUndefined(ModelError):
    """The zero valuation violates the invariant of the initial location."""


class DeterminismError(ModelError):
    def __init__(self, state, event, successors):
        self.state = state
        self.event = event
        self.successors = tuple(successors)
        super().__init__(
            f"nondeterministic event {event!r} at {state}: "
            f"{len(self.successors)} distinct successors"
        )


class ConfigError(OpacityError):
    """Bad observation, secret, language or budget configuration."""


class IllFormedSecretError(OpacityError):
    """A secret set is not closed under delay fragmentation / zero delays."""

    def __init__(self, pair):
        self.pair = pair
        first, second = pair
        super().__init__(
            "ill-formed secret set: secrecy differs between "
            f"{first} and its delay-equivalent {second}"
        )


class ParseError(ModelError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + message)


class CheckError(OpacityError):
    """A requested check could not be evaluated; carries the check name."""

    def __init__(self, check: str, cause: Exception):
        self.check = check
        self.cause = cause
        super().__init__(f"check {check!r}: {cause}")


class InvariantViolation(OpacityError):
    """A result failed self-revalidation; indicates a bug, not bad input."""
