"""Exact computation of Hilbert modular form q-expansions over real quadratic fields."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__all__ = [n for n in dir() if not n.startswith("_")]
