"""Backend selection for the hot kernels.

The compiled extension is used when importable.  Setting ``COVO_PURE_PYTHON=1``
forces the NumPy fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("COVO_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels

evaluate_batch = _impl.evaluate_batch
penalty = _impl.penalty
chaotic_step = _impl.chaotic_step
signed_rank_null = _impl.signed_rank_null
dedupe_mask = _impl.dedupe_mask


def backends():
    """Return every importable backend module keyed by name."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
