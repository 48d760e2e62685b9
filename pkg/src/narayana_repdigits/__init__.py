"""Narayana numbers that are products of repdigits: bounds, reduction and search."""

from .narayana import compute_constants, narayana
from .repdigit import as_repdigit, repdigit_value, two_repdigit_factorizations

__all__ = ["compute_constants", "narayana", "as_repdigit", "repdigit_value", "two_repdigit_factorizations"]
__version__ = "0.1.0"
