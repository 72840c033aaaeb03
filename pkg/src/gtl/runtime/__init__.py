"""Runtime values, errors and the evaluator."""
from .errors import (
    ContractError, DynamicError, GTLRuntimeError, ShapeError, StepBudgetExceeded,
    UnsupportedBoundaryType,
)
from .values import EOF, render, sketch

__all__ = [
    "ContractError", "DynamicError", "EOF", "GTLRuntimeError", "ShapeError",
    "StepBudgetExceeded", "UnsupportedBoundaryType", "render", "sketch",
]
