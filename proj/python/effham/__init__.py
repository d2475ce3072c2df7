from ._effham import *  # noqa: F401,F403
