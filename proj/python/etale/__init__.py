"""Finite ample groupoids, their convolution algebras, modules and sheaves."""

from ._etale import *  # noqa: F401,F403
from ._etale import __doc__  # noqa: F401

__version__ = "0.1.0"
