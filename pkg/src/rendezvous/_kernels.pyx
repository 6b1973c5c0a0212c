# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled first-meeting histogram over all pairs of player paths."""
import numpy as np


def first_meet_counts(const signed char[:, ::1] acts_i, const int[::1] cls_i,
                      const signed char[:, ::1] acts_ii, const int[::1] cls_ii,
                      const signed char[:, :, ::1] tables,
                      int n_cls_i, int n_cls_ii, int block_len):
    cdef Py_ssize_t n_i = acts_i.shape[0]
    cdef Py_ssize_t n_ii = acts_ii.shape[0]
    cdef Py_ssize_t n_blocks = acts_i.shape[1]
    cdef Py_ssize_t n_lab = tables.shape[0]
    if acts_ii.shape[1] != n_blocks:
        raise ValueError("paths of the two players have different lengths")
    out = np.zeros((n_blocks * block_len + 1, n_cls_i, n_cls_ii), dtype=np.int64)
    cdef long long[:, :, ::1] o = out
    cdef Py_ssize_t l, i, j, b
    cdef int step, code
    with nogil:
        for l in range(n_lab):
            for i in range(n_i):
                for j in range(n_ii):
                    step = 0
                    for b in range(n_blocks):
                        code = tables[l, acts_i[i, b], acts_ii[j, b]]
                        if code:
                            step = <int>(b * block_len) + code
                            break
                    o[step, cls_i[i], cls_ii[j]] += 1
    return out
