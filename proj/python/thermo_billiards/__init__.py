"""Random billiards with Gaussian thermostats on the 2-torus."""

from ._core import *  # noqa: F401,F403
from ._core import Error  # noqa: F401

__version__ = "0.1.0"
