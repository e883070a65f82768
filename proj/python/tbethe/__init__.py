"""Twisted Bethe equations for XXX/XXZ spin chains.

Solving and classification of Bethe roots, twist expansions of singular
solutions, algebraic-Bethe-ansatz operators and exact-diagonalization
cross-checks. Everything heavy runs in the C++ core; see `tbethe._core`
for the full surface.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__, aba, ed  # noqa: F401
