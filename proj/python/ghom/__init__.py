"""Homogenized heat conduction on periodic graph lattices."""

from ._ghom import (
    GhomError,
    converge,
    fitted_order,
    observed_order,
    simulate,
    tensor,
    validate,
)

__all__ = ["GhomError", "converge", "fitted_order", "observed_order", "simulate", "tensor", "validate"]
