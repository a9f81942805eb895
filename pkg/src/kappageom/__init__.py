"""Kaniadakis kappa-deformed exponential families on finite state spaces."""

from .core import *  # noqa: F401,F403
from .densities import *  # noqa: F401,F403
from .gibbs import *  # noqa: F401,F403
from .invariants import *  # noqa: F401,F403
from .manifold import *  # noqa: F401,F403
from ._normalize import ConvergenceError  # noqa: F401

__version__ = "0.1.0"
