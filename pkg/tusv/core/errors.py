"""Domain errors raised by the core and service layers."""

from typing import Optional


class FormParseError(ValueError):
    """A form or term string does not match the mini-grammar."""

    def __init__(self, message: str, position: int, text: str = "") -> None:
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class AnchorError(ValueError):
    """An anchor value claimed non-representable is attained."""

    def __init__(self, anchor: int, representation: str) -> None:
        self.anchor = anchor
        self.representation = representation
        super().__init__(f"anchor {anchor} is representable: {representation}")


class WitnessContradiction(ValueError):
    """A cited non-representable value turned out to be representable."""

    def __init__(
        self, form: str, value: int, triple: Optional[tuple[int, int, int]]
    ) -> None:
        self.form = form
        self.value = value
        self.triple = triple
        super().__init__(f"{value} is attained by {form} at (x, y, z) = {triple}")


class BoundTooLarge(ValueError):
    """A mask bound exceeds the configured memory cap."""

    def __init__(self, bound: int, limit: int) -> None:
        self.bound = bound
        self.limit = limit
        super().__init__(f"bound {bound} exceeds the mask limit {limit}")


class MaskFileError(ValueError):
    """A cached mask file has a bad header or length."""
