"""Binary cubic forms: enumeration, shapes and twisted Weyl sums."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
