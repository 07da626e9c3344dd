"""Hot-kernel backend selection.

The compiled Cython extension is preferred; the numpy fallback is used
when the extension is missing or when SSPP_PURE_PYTHON is set.
"""

import os

from . import pykernels


def _select():
    if os.environ.get("SSPP_PURE_PYTHON"):
        return pykernels
    try:
        from . import _core

        return _core
    except ImportError:
        return pykernels


impl = _select()

BACKEND = impl.BACKEND
add_disc = impl.add_disc
ball_area = impl.ball_area
count_within = impl.count_within
any_within = impl.any_within
min_dist = impl.min_dist
