"""Select the compiled kernels when available, else the pure-Python ones.

Set ``FRACCKN_BACKEND=python`` to force the fallback.
"""
import os

from . import _specfun_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_want = os.environ.get("FRACCKN_BACKEND", "auto").lower()
if _want == "python" or _compiled is None:
    kernels = _specfun_py
    NAME = "python"
else:
    kernels = _compiled
    NAME = "compiled"

BACKENDS = {"python": _specfun_py}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled
