"""Kernel selection: compiled extension when available, numpy fallback otherwise.

Set ROOTREG_PURE_PYTHON=1 to force the fallback (used by the benchmark and
by backend-equivalence tests).
"""

from __future__ import annotations

import os

from . import _aberth_py

if os.environ.get("ROOTREG_PURE_PYTHON"):
    _impl = _aberth_py
else:
    try:
        from . import _aberth as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _aberth_py

BACKEND = _impl.BACKEND_NAME

if _impl is _aberth_py:
    solve_batch = _impl.solve_batch
else:
    def solve_batch(coeffs, tol=1e-12, maxiter=300):
        # the compiled kernel uses a fixed-size root buffer; very high
        # degrees fall back to the numpy implementation
        if coeffs.shape[1] > 64:
            return _aberth_py.solve_batch(coeffs, tol=tol, maxiter=maxiter)
        return _impl.solve_batch(coeffs, tol=tol, maxiter=maxiter)


def available_backends():
    out = {"python": _aberth_py.solve_batch}
    try:
        from . import _aberth  # type: ignore[attr-defined]

        out["compiled"] = _aberth.solve_batch
    except ImportError:
        pass
    return out
