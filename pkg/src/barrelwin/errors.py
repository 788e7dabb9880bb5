"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class BarrelwinError(Exception):
    """Base class for every error raised by this package."""


class HypothesisError(BarrelwinError):
    """A structural hypothesis on the input does not hold.

    ``anchor`` is a short stable identifier of the violated hypothesis
    (for example ``"main-setup"``) so that reports and exit paths can
    name it without parsing the message.
    """

    def __init__(self, anchor: str, message: str):
        super().__init__(f"[{anchor}] {message}")
        self.anchor = anchor
        self.detail = message


class InvalidLabelError(BarrelwinError):
    """An irreducible label is not valid for the group (e.g. not dominant)."""


class BudgetError(BarrelwinError):
    """A computation would exceed a configured resource budget."""


class UnboundedWindowError(BarrelwinError):
    """A window region is not bounded, so its lattice points cannot be listed."""


class SearchExhaustedError(BarrelwinError):
    """A deterministic parameter search ran out of candidates."""


class ProofMismatchError(BarrelwinError):
    """A reduction edge violated the measure decrease it is supposed to obey."""


class ConfigError(BarrelwinError):
    """A job configuration could not be parsed."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field
