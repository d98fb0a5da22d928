"""Kernel backend dispatch.

The numba backend is used when available; set TBICM_NO_NUMBA=1 to force
the pure-numpy fallback (e.g. for debugging or environments without a
working JIT).  Both backends expose the same functions and produce
numerically equivalent results.
"""

import os

from . import numpy_backend

_disabled = os.environ.get("TBICM_NO_NUMBA", "0") == "1"

if not _disabled:
    try:
        from . import numba_backend as _backend

        BACKEND_NAME = "numba"
    except ImportError:        # pragma: no cover - numba is a hard dep
        _backend = numpy_backend
        BACKEND_NAME = "numpy"
else:
    _backend = numpy_backend
    BACKEND_NAME = "numpy"


def backend_name():
    return BACKEND_NAME


bcjr_alpha_beta = _backend.bcjr_alpha_beta
bcjr_soft = _backend.bcjr_soft
bcjr_feedback = _backend.bcjr_feedback
euclid_distances = _backend.euclid_distances
demap_llrs = _backend.demap_llrs
srandom_attempt = _backend.srandom_attempt
rsc_pass = _backend.rsc_pass
