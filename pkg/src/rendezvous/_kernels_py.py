"""Numpy implementation of the first-meeting histogram, used when the
compiled extension is unavailable."""
from __future__ import annotations

import numpy as np


def first_meet_counts(acts_i, cls_i, acts_ii, cls_ii, tables, n_cls_i, n_cls_ii, block_len):
    acts_i = np.asarray(acts_i, dtype=np.int8)
    acts_ii = np.asarray(acts_ii, dtype=np.int8)
    cls_i = np.asarray(cls_i, dtype=np.int64)
    cls_ii = np.asarray(cls_ii, dtype=np.int64)
    tables = np.asarray(tables, dtype=np.int8)
    n_blocks = acts_i.shape[1]
    if acts_ii.shape[1] != n_blocks:
        raise ValueError("paths of the two players have different lengths")
    n_steps = n_blocks * block_len + 1
    size = n_steps * n_cls_i * n_cls_ii
    pair_cls = (cls_i[:, None] * n_cls_ii + cls_ii[None, :]).ravel()
    out = np.zeros(size, dtype=np.int64)
    for table in tables:
        first = np.zeros((len(acts_i), len(acts_ii)), dtype=np.int64)
        for b in range(n_blocks):
            code = table[acts_i[:, b][:, None], acts_ii[:, b][None, :]].astype(np.int64)
            hit = (first == 0) & (code > 0)
            first[hit] = b * block_len + code[hit]
        out += np.bincount(first.ravel() * (n_cls_i * n_cls_ii) + pair_cls, minlength=size)
    return out.reshape(n_steps, n_cls_i, n_cls_ii)
