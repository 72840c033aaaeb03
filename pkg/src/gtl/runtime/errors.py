"""Errors raised while loading or running a program.

Every error carries the cost counters as they stood when it was raised, so
error rows in a lattice report still have meaningful costs.
"""
from __future__ import annotations


class GTLRuntimeError(Exception):
    category = "runtime"

    def __init__(self, message):
        super().__init__(message)
        self.message = message
        self.counters = None


class ShapeError(GTLRuntimeError):
    """A Shallow check failed.  ``blame`` is a BlameReport in SB mode."""

    category = "shape"

    def __init__(self, site, witness, blame=None):
        self.site = site
        self.loc = site.loc
        self.expected = site.shape
        self.witness = witness
        self.blame = blame
        super().__init__(f"shallow: {site.label} check at {site.loc}: expected {site.shape}, got {witness}")


class ContractError(GTLRuntimeError):
    """A Deep contract failed; names exactly one boundary and one party."""

    category = "contract"

    def __init__(self, boundary, party, expected, witness):
        self.boundary = boundary
        self.party = party
        self.expected = expected
        self.witness = witness
        super().__init__(
            f"deep: boundary {boundary.importer_loc} / {boundary.exporter_loc}: blamed {party}:"
            f" expected {expected}, got {witness}"
        )


class DynamicError(GTLRuntimeError):
    """A primitive was misused; detected by the language itself, in every mode."""

    category = "dynamic"

    def __init__(self, loc, primitive, witness, detail=""):
        self.loc = loc
        self.primitive = primitive
        self.witness = witness
        msg = f"{primitive}: contract violation at {loc}: got {witness}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class UnsupportedBoundaryType(GTLRuntimeError):
    """A type that cannot be enforced at a boundary; raised at load time."""

    category = "unsupported"

    def __init__(self, loc, type_, mode, reason):
        self.loc = loc
        self.type = type_
        self.mode = mode
        self.reason = reason
        super().__init__(f"{mode}: cannot enforce {type_} at {loc}: {reason}")


class StepBudgetExceeded(GTLRuntimeError):
    category = "timeout"

    def __init__(self, budget):
        self.budget = budget
        super().__init__(f"step budget of {budget} exceeded")
