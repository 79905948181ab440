"""Pure-Python mask walk, the fallback for the compiled kernel.

Given a reduced word of length r, enumerate all 2^r subexpression masks and
return, per mask, the endpoint (the product of the chosen letters) and the
set of positions where the running prefix sends -alpha_(letter) to a
positive root.  The prefix at position i includes position i's own choice.

Masks are integers 0 .. 2^r - 1 with bit (r - 1 - i) standing for word
position i (0-based), so iteration order is lexicographic over mask tuples
with the leftmost position most significant.  J sets are packed the same
way.  Incrementing the counter only changes a suffix of positions, so the
prefix stack is reused and the amortized cost is O(1) table lookups per
mask.
"""

from __future__ import annotations

import numpy as np

MAX_WORD_LENGTH = 24


def walk_masks(word, mult, sign, identity_index: int = 0):
    """Return (endpoints, jmasks) arrays of length 2^r.

    word: generator index (0-based) per position, length r.
    mult[k][g]: element index of element_k * s_(g+1).
    sign[k][g]: 1 iff element_k sends -alpha_(g+1) to a positive root.
    """
    wl = [int(g) for g in word]
    r = len(wl)
    if r > MAX_WORD_LENGTH:
        raise ValueError(
            f"word length {r} exceeds the mask-walk limit of {MAX_WORD_LENGTH}"
        )
    mult_l = [tuple(int(x) for x in row) for row in np.asarray(mult)]
    sign_l = [tuple(int(x) for x in row) for row in np.asarray(sign)]

    total = 1 << r
    endpoints = np.empty(total, dtype=np.int32)
    jmasks = np.empty(total, dtype=np.uint64)

    pre = [int(identity_index)] * (r + 1)
    jacc = [0] * (r + 1)
    start = 0
    for m in range(total):
        if m:
            # Bits 0..ctz(m) flipped, i.e. positions r-1-ctz(m) .. r-1.
            start = r - (m & -m).bit_length()
        for i in range(start, r):
            g = wl[i]
            cur = pre[i]
            if (m >> (r - 1 - i)) & 1:
                cur = mult_l[cur][g]
            pre[i + 1] = cur
            jacc[i + 1] = jacc[i] | (sign_l[cur][g] << (r - 1 - i))
        endpoints[m] = pre[r]
        jmasks[m] = jacc[r]
    return endpoints, jmasks
