"""Kernel backend selection.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``FOCK_PRESERVE_PURE_PYTHON`` is set to a non-empty
value, the numpy implementation is used.  ``BACKEND`` names the active one.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("FOCK_PRESERVE_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

line_restrict_batch = _impl.line_restrict_batch
ising_energies = _impl.ising_energies


def max_threads() -> int:
    """Thread cap from ``FOCK_PRESERVE_THREADS`` (default: CPU count, at most 4)."""
    raw = os.environ.get("FOCK_PRESERVE_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"FOCK_PRESERVE_THREADS must be an integer, got {raw!r}") from None
    return max(1, min(4, os.cpu_count() or 1))
