"""Backend selection for group arithmetic.

Prefers the compiled kernel (primematch.algebra._core, built from Cython)
and falls back to the pure-Python implementation when the extension is not
available. Set PRIMEMATCH_PURE_GROUP=1 to force the fallback, e.g. for the
backend comparison benchmark.

Both backends expose the same flat interface: P, L, IDENTITY, BASE, NAME,
point_add, point_double, point_neg, point_eq, is_identity, point_mul,
point_mul_base, double_mul, encode, decode, from_uniform. Point values are
opaque to callers and must not be mixed across backends.
"""

import os

from . import reference

if os.environ.get("PRIMEMATCH_PURE_GROUP") == "1":
    _core = None
else:
    try:
        from . import _core  # type: ignore[attr-defined]
    except ImportError:
        _core = None

impl = _core if _core is not None else reference

HAVE_COMPILED = impl is not reference
