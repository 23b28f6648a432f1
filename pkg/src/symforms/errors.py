"""Exceptions shared across the package."""

from __future__ import annotations

__all__ = ["CapExceeded", "NormalFormError"]


class CapExceeded(RuntimeError):
    """An enumeration would exceed the configured resource cap."""

    def __init__(self, required: int, cap: int, what: str = "enumeration"):
        self.required = required
        self.cap = cap
        super().__init__(f"{what} needs {required} items, cap is {cap}")


class NormalFormError(RuntimeError):
    """Block-triangularisation via a witness radical failed verification."""
