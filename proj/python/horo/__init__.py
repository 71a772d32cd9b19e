from ._horo import *  # noqa: F401,F403
from ._horo import PreconditionError, __doc__  # noqa: F401
