"""Hot-loop kernels with a compiled core and a pure-Python fallback.

The Cython extension ``_native`` is built at install time; when it is
missing (or ``STEPFREEZE_FORCE_FALLBACK=1`` is set) the pure-Python
``_fallback`` module is used instead.  Both backends perform identical
floating-point operations in identical order, so results are bitwise
equal; only speed differs (see ``benchmarks/bench_kernels.py``).
"""

import os

from . import _fallback

if os.environ.get("STEPFREEZE_FORCE_FALLBACK") == "1":
    _impl = _fallback
    BACKEND = "fallback"
else:
    try:
        from . import _native as _impl  # type: ignore[attr-defined]

        BACKEND = "native"
    except ImportError:
        _impl = _fallback
        BACKEND = "fallback"

em_cartesian = _impl.em_cartesian
em_polar = _impl.em_polar
em_cartesian_escape = _impl.em_cartesian_escape
surrogate_walk = _impl.surrogate_walk
