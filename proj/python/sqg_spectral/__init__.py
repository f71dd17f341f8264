"""Spectral toolkit for the dissipative surface quasi-geostrophic equation.

Fields are numpy arrays of shape (ny, nx); row j holds y = 2*pi*j/ny.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"
