from ._uniqd import *  # noqa: F401,F403
from ._uniqd import __doc__  # noqa: F401
