"""Metropolis-Hastings reversiblizations of finite-state Markov generators."""

from ._mhrev import *  # noqa: F401,F403
from ._mhrev import __doc__  # noqa: F401

__version__ = "0.1.0"
