"""Strategic bidding in two-stage repeated auctions.

Thin re-export of the compiled extension module.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
