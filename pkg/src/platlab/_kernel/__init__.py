"""Kernel selection: compiled extension when available, pure Python otherwise.

Set PLATLAB_PURE=1 to force the pure-Python kernel.  Callers must route
spaces wider than 64 atoms through ``pykernel`` directly (see closure module);
the helpers here dispatch on width automatically.
"""

import os

from . import pykernel

if os.environ.get("PLATLAB_PURE"):
    _impl = pykernel
else:
    try:
        from . import ckernel as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = pykernel

IMPLEMENTATION = _impl.IMPLEMENTATION


def _pick(n_atoms):
    if n_atoms > 64:
        return pykernel
    return _impl


def polar(rows, mask, full, n_atoms):
    return _pick(n_atoms).polar(rows, mask, full)


def biclosure(rows, mask, full, n_atoms):
    return _pick(n_atoms).biclosure(rows, mask, full)


def intersection_closure(seeds, full, n_atoms, max_sets=0):
    return _pick(n_atoms).intersection_closure(seeds, full, max_sets)
