"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python kernel
is the fallback. Set TEMPALIGN_FORCE_PY=1 to force the fallback (used by the
backend-equivalence tests and the benchmark).
"""

from __future__ import annotations

import os

from . import _kernel_py

_FORCE_PY = os.environ.get("TEMPALIGN_FORCE_PY", "") not in ("", "0")

try:
    from . import _kernel as _compiled  # type: ignore[attr-defined]
except ImportError:
    _compiled = None


def kernel_backend() -> str:
    """Name of the backend `run_kernel` dispatches to: 'compiled' or 'python'."""
    return "python" if (_compiled is None or _FORCE_PY) else "compiled"


def get_kernel(backend: str | None = None):
    """Return the kernel module for `backend` (default: the selected one)."""
    if backend is None:
        backend = kernel_backend()
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernel is not available")
        return _compiled
    if backend == "python":
        return _kernel_py
    raise ValueError(f"unknown backend {backend!r}")


def available_backends() -> tuple[str, ...]:
    return ("compiled", "python") if _compiled is not None else ("python",)
