"""Backend selection for the hot loop.

``first_meet_counts(acts_i, cls_i, acts_ii, cls_ii, tables, n_cls_i,
n_cls_ii, block_len)`` walks every pair of action sequences under every
labeling table and histograms the first meeting step (0 = never) by the
pair's classes.  The compiled extension is used when it imports; set
``RENDEZVOUS_KERNEL=python`` to force the numpy fallback.
"""
from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

if _compiled is not None and os.environ.get("RENDEZVOUS_KERNEL", "auto").lower() != "python":
    BACKEND = "cython"
    _impl = _compiled.first_meet_counts
else:
    BACKEND = "python"
    _impl = _kernels_py.first_meet_counts


def available_backends() -> dict:
    out = {"python": _kernels_py.first_meet_counts}
    if _compiled is not None:
        out["cython"] = _compiled.first_meet_counts
    return out


def prepare(acts_i, cls_i, acts_ii, cls_ii, tables):
    return (
        np.ascontiguousarray(acts_i, dtype=np.int8),
        np.ascontiguousarray(cls_i, dtype=np.intc),
        np.ascontiguousarray(acts_ii, dtype=np.int8),
        np.ascontiguousarray(cls_ii, dtype=np.intc),
        np.ascontiguousarray(tables, dtype=np.int8),
    )


def first_meet_counts(acts_i, cls_i, acts_ii, cls_ii, tables, n_cls_i, n_cls_ii, block_len, backend=None):
    fn = _impl if backend is None else available_backends()[backend]
    args = prepare(acts_i, cls_i, acts_ii, cls_ii, tables)
    return fn(*args, int(n_cls_i), int(n_cls_ii), int(block_len))
