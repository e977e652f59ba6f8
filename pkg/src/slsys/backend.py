"""Kernel backend selection.

The hot numerical kernels ship twice: a Cython extension (``slsys._core``)
and a pure-Python twin (``slsys._kernels_py``) with identical signatures and
semantics.  The compiled one is used when importable; set the environment
variable ``SLSYS_KERNELS`` to ``py`` or ``c`` to force a choice (``c`` raises
if the extension is missing).  ``benchmarks/bench_kernels.py`` compares the
two.
"""

from __future__ import annotations

import os

_choice = os.environ.get("SLSYS_KERNELS", "auto").strip().lower()
if _choice not in ("auto", "c", "py"):
    raise ImportError(f"SLSYS_KERNELS must be 'auto', 'c' or 'py', not {_choice!r}")

_impl = None
if _choice in ("auto", "c"):
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        if _choice == "c":
            raise
if _impl is None:
    from . import _kernels_py as _impl

backend_name: str = _impl.BACKEND_NAME

POT_FREE = _impl.POT_FREE
POT_CONST = _impl.POT_CONST
POT_TABLE = _impl.POT_TABLE

q_eval = _impl.q_eval
riccati_backward = _impl.riccati_backward
cauchy_integrate = _impl.cauchy_integrate
hermitian_eigenvalues = _impl.hermitian_eigenvalues


def get_backend(name: str):
    """Return a kernel module by name ('python' or 'compiled'), for benchmarks."""
    if name == "python":
        from . import _kernels_py
        return _kernels_py
    if name == "compiled":
        from . import _core  # raises ImportError when not built
        return _core
    raise ValueError(f"unknown backend {name!r}")
