"""Pick the compiled kernels when available, else the numpy fallback.

Set ``WEILNEG_PURE=1`` to force the fallback (used by the benchmark and by the
test that cross-checks both backends).
"""
import os

from . import _pykernels as python_backend

compiled_backend = None
try:
    from . import _ckernels as compiled_backend
except ImportError:
    pass

if compiled_backend is not None and os.environ.get("WEILNEG_PURE") != "1":
    backend = compiled_backend
else:
    backend = python_backend

BACKEND = backend.NAME
digamma_re = backend.digamma_re
digamma_re_array = backend.digamma_re_array
fejer_f = backend.fejer_f
ell_integrand = backend.ell_integrand
zero_sum = backend.zero_sum
