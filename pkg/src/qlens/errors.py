"""Exception types shared across the engine."""


class QLensError(Exception):
    """Base class for all engine errors."""


class ManifestError(QLensError):
    """A question manifest is structurally invalid."""


class UnknownQuestion(QLensError):
    """No manifest exists for the requested question."""


class EmptyInput(QLensError):
    """An event stream produced no usable events."""


class ConditionSyntaxError(QLensError):
    """A condition expression does not conform to the grammar."""

    def __init__(self, text: str, position: int, expected: str):
        self.text = text
        self.position = position
        self.expected = expected
        super().__init__(f"at position {position}: expected {expected} in {text!r}")


class UnknownReference(QLensError):
    """A condition references a slot or element the manifest does not declare."""


class NoSuchState(QLensError):
    """The transition model has no state at the requested (step, stage)."""


class UnknownStudent(QLensError):
    """The session does not belong to the model's group."""


class InvalidQuery(QLensError):
    """A group query violates its invariants (e.g. negative min_count)."""


class UnknownErrorRank(QLensError):
    """The requested rank is beyond the current common-error list."""


class InvalidConfig(QLensError):
    """A synthetic-corpus configuration violates its invariants."""


class StoreUnavailable(QLensError):
    """The on-disk store root cannot be used."""
