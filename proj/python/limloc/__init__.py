"""Brownian paths with limited local time at the origin.

Thin Python wrapper over the C++ core: path generators, local-time
estimators, constraint events, conditioned samplers, and the closed-form
oracles used by the verification suite.
"""

from ._limloc import *  # noqa: F401,F403
from ._limloc import __version__  # noqa: F401
