"""RIS-assisted learning-centric link optimizer.

Thin package wrapper around the compiled extension; everything public lives
in the C++ core.
"""

from ._risopt import *  # noqa: F401,F403
from ._risopt import __version__  # noqa: F401
