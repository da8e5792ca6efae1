"""Kernel backend selection.

The hot loops (billiard collisions, intermittent-map iteration) live in a
compiled Cython module `_kernels`; `_pykernels` is a pure-Python twin with
identical arithmetic, selected automatically when the extension is missing.
Set CUSPLEVY_BACKEND=python to force the fallback (used by the parity tests
and the backend benchmark).
"""

import os

_forced = os.environ.get("CUSPLEVY_BACKEND", "").strip().lower()

if _forced == "python":
    from . import _pykernels as kernels

    HAVE_COMPILED = False
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        HAVE_COMPILED = True
    except ImportError:
        if _forced == "compiled":
            raise
        from . import _pykernels as kernels

        HAVE_COMPILED = False

BACKEND = "compiled" if HAVE_COMPILED else "python"


def get_kernels(name: str | None = None):
    """Kernel module by name ('compiled' or 'python'); default is the active one."""
    if name is None:
        return kernels
    if name == "python":
        from . import _pykernels

        return _pykernels
    if name == "compiled":
        from . import _kernels  # type: ignore[attr-defined]

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
