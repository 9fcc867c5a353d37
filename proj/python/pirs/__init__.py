"""Progressive IRS channel estimation and discrete-phase beamforming."""

from ._pirs import *  # noqa: F401,F403
from ._pirs import __doc__  # noqa: F401
