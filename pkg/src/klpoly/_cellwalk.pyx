# cython: language_level=3
# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled mask walk.

Same contract as _cellwalk_py.walk_masks; see that module for the layout of
masks, tables and the prefix-reuse argument.  The loop is pure machine-int
table lookups, which is the whole point of compiling it.
"""

import numpy as np

MAX_WORD_LENGTH = 24


def walk_masks(word, mult, sign, int identity_index=0):
    word_arr = np.ascontiguousarray(word, dtype=np.int32)
    mult_arr = np.ascontiguousarray(mult, dtype=np.int32)
    sign_arr = np.ascontiguousarray(sign, dtype=np.uint8)

    cdef const int[::1] wv = word_arr
    cdef const int[:, ::1] mv = mult_arr
    cdef const unsigned char[:, ::1] sv = sign_arr

    cdef Py_ssize_t r = wv.shape[0]
    if r > MAX_WORD_LENGTH:
        raise ValueError(
            f"word length {r} exceeds the mask-walk limit of {MAX_WORD_LENGTH}"
        )

    cdef unsigned long long total = 1ULL << r
    endpoints_arr = np.empty(total, dtype=np.int32)
    jmasks_arr = np.empty(total, dtype=np.uint64)
    pre_arr = np.empty(r + 1, dtype=np.int32)
    jacc_arr = np.zeros(r + 1, dtype=np.uint64)

    cdef int[::1] endpoints = endpoints_arr
    cdef unsigned long long[::1] jmasks = jmasks_arr
    cdef int[::1] pre = pre_arr
    cdef unsigned long long[::1] jacc = jacc_arr

    cdef unsigned long long m, low
    cdef Py_ssize_t start, i, ctz
    cdef int cur, g

    pre[0] = identity_index
    jacc[0] = 0
    start = 0
    with nogil:
        for m in range(total):
            if m:
                low = m & (~m + 1)
                ctz = 0
                while not (low & 1):
                    low >>= 1
                    ctz += 1
                start = r - 1 - ctz
            for i in range(start, r):
                g = wv[i]
                cur = pre[i]
                if (m >> (r - 1 - i)) & 1:
                    cur = mv[cur, g]
                pre[i + 1] = cur
                jacc[i + 1] = jacc[i] | ((<unsigned long long> sv[cur, g]) << (r - 1 - i))
            endpoints[m] = pre[r]
            jmasks[m] = jacc[r]
    return endpoints_arr, jmasks_arr
