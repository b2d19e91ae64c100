"""Python bindings for the enf C++ library."""

from ._enf import *  # noqa: F401,F403
from ._enf import __version__  # noqa: F401
