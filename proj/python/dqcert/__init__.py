"""Certifying DQBF solver: definition extraction inside a synthesis loop.

The heavy lifting lives in the compiled extension ``dqcert._core``; this
package re-exports its public names.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
