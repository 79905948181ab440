"""Deodhar's decomposition of a Schubert cell, combinatorial side only.

Fix a reduced word (s_1, ..., s_r) for w.  A mask picks gamma_i in
{1, s_i} at each position; I(gamma) is the set of active positions, and
J(gamma) collects the positions i where the prefix product
gamma_1 ... gamma_i (including position i's own choice) sends -alpha_i to a
positive root.  A mask names an empty piece of the cell exactly when J is
not contained in I; otherwise its piece is an affine space of dimension
|I - J| times a torus of dimension r - |I|, contributing
q^|I-J| (q-1)^(r-|I|) points over a field with q elements.  Summing the
point-count polynomials of the non-empty masks with a given endpoint v
recovers the R-polynomial R_vw, and summing over all masks recovers
q^l(w), the count for the full cell.

classify() walks one mask through the group directly and is the reference
semantics; the catalog and counting routines drive the mask-walk kernel
(see cellwalk) over precomputed index tables instead.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cellwalk import walk_masks
from .coxeter import Element, WeylGroup
from .laurent import HalfLaurent

__all__ = [
    "Subexpression",
    "CellShape",
    "CellDescriptor",
    "NotReduced",
    "classify",
    "cell_catalog",
    "r_poly_from_cells",
    "point_count_identity",
]

MAX_CATALOG_LENGTH = 16


class NotReduced(ValueError):
    """The supplied word is not a reduced word of its product."""


@dataclass(frozen=True)
class Subexpression:
    """A mask over a fixed reduced word; True means the letter is taken."""

    word: tuple[int, ...]
    mask: tuple[bool, ...]

    def __post_init__(self):
        if len(self.word) != len(self.mask):
            raise ValueError("mask length must match word length")

    @property
    def active_positions(self) -> frozenset[int]:
        """I(gamma), one-based."""
        return frozenset(i + 1 for i, b in enumerate(self.mask) if b)


@dataclass(frozen=True)
class CellShape:
    affine_dim: int
    torus_dim: int


@dataclass(frozen=True)
class CellDescriptor:
    """One mask together with everything the decomposition says about it.

    shape is None exactly when the piece is empty (J not a subset of I).
    """

    gamma: Subexpression
    endpoint: Element
    I: frozenset[int]
    J: frozenset[int]
    shape: CellShape | None

    @property
    def is_empty(self) -> bool:
        return self.shape is None


def _checked_word(group: WeylGroup, w: Element | None, word) -> tuple[tuple[int, ...], Element]:
    if word is None:
        if w is None:
            raise ValueError("need an element or a reduced word")
        word = group.reduced_word(w)
    word = tuple(int(i) for i in word)
    for i in word:
        if not 1 <= i <= group.rank:
            raise NotReduced(f"generator index {i} out of range 1..{group.rank}")
    product = group.element_from_word(word)
    if group.length(product) != len(word):
        raise NotReduced(
            f"word {'.'.join(map(str, word)) or 'e'} is not reduced "
            f"(product has length {group.length(product)})"
        )
    if w is not None and product != w:
        raise NotReduced("word is reduced but does not multiply to the given element")
    return word, product


def classify(group: WeylGroup, gamma: Subexpression) -> CellDescriptor:
    """Classify a single mask by walking prefixes through the group."""
    word, _ = _checked_word(group, None, gamma.word)
    prefix = group.identity
    j_set = set()
    for pos, (letter, taken) in enumerate(zip(word, gamma.mask), start=1):
        if taken:
            prefix = group.right_mult_gen(prefix, letter)
        if group.act(prefix, -group.simple_root(letter)).is_positive:
            j_set.add(pos)
    i_set = set(gamma.active_positions)
    if j_set <= i_set:
        shape = CellShape(len(i_set - j_set), len(word) - len(i_set))
    else:
        shape = None
    return CellDescriptor(
        gamma=gamma,
        endpoint=prefix,
        I=frozenset(i_set),
        J=frozenset(j_set),
        shape=shape,
    )


def _walk(group: WeylGroup, word: tuple[int, ...]):
    mult, sign = group.kernel_tables()
    word0 = np.asarray([i - 1 for i in word], dtype=np.int32)
    endpoints, jmasks = walk_masks(word0, mult, sign, group.element_index(group.identity))
    r = len(word)
    masks = np.arange(1 << r, dtype=np.uint64)
    return endpoints, jmasks, masks


def _bits_to_positions(bits: int, r: int) -> frozenset[int]:
    # Bit (r - 1 - i) of a packed mask stands for one-based position i + 1.
    return frozenset(i + 1 for i in range(r) if (bits >> (r - 1 - i)) & 1)


def cell_catalog(
    group: WeylGroup, w: Element | None = None, word: Sequence[int] | None = None
) -> list[CellDescriptor]:
    """Classify all 2^r masks of a reduced word, in lexicographic mask
    order (inactive before active, leftmost position most significant)."""
    word, _ = _checked_word(group, w, word)
    r = len(word)
    if r > MAX_CATALOG_LENGTH:
        raise ValueError(
            f"word length {r} exceeds the catalog limit of {MAX_CATALOG_LENGTH} "
            f"({1 << r} masks)"
        )
    endpoints, jmasks, masks = _walk(group, word)
    elements = group.enumerate_group()
    out = []
    for m in range(1 << r):
        jbits = int(jmasks[m])
        i_set = _bits_to_positions(m, r)
        j_set = _bits_to_positions(jbits, r)
        if jbits & ~m:
            shape = None
        else:
            shape = CellShape(bin(m & ~jbits).count("1"), r - len(i_set))
        out.append(
            CellDescriptor(
                gamma=Subexpression(
                    word=word,
                    mask=tuple(bool((m >> (r - 1 - i)) & 1) for i in range(r)),
                ),
                endpoint=elements[int(endpoints[m])],
                I=i_set,
                J=j_set,
                shape=shape,
            )
        )
    return out


def _shape_counts(group: WeylGroup, word: tuple[int, ...], v: Element | None):
    """Multiset of (affine_dim, torus_dim) over non-empty masks, optionally
    restricted to masks with a given endpoint."""
    r = len(word)
    endpoints, jmasks, masks = _walk(group, word)
    keep = (jmasks & ~masks) == 0
    if v is not None:
        keep &= endpoints == group.element_index(v)
    kept = masks[keep]
    if kept.size == 0:
        return Counter()
    affine = np.bitwise_count(kept & ~jmasks[keep]).astype(np.int64)
    torus = r - np.bitwise_count(kept).astype(np.int64)
    return Counter(zip(affine.tolist(), torus.tolist()))


def r_poly_from_cells(
    group: WeylGroup,
    v: Element,
    w: Element,
    word: Sequence[int] | None = None,
) -> HalfLaurent:
    """R_vw as the point-count polynomial sum t^a (t-1)^b over the
    non-empty masks with endpoint v.  Returns 0 when there are none,
    which happens exactly when v is not below w."""
    word, _ = _checked_word(group, w, word)
    counts = _shape_counts(group, word, v)
    t_minus_1 = HalfLaurent.t_power(1) - 1
    total = HalfLaurent.zero()
    for (a, b), n in sorted(counts.items()):
        total = total + n * HalfLaurent.t_power(a) * t_minus_1**b
    return total


def point_count_identity(
    group: WeylGroup, w: Element, word: Sequence[int] | None = None, q: int = 2
) -> tuple[int, int]:
    """Counts the points of the whole cell mask by mask over a q-element
    field: returns (total, q^l(w)); the caller asserts equality."""
    if q < 2:
        raise ValueError(f"field size must be at least 2, got {q}")
    word, w = _checked_word(group, w, word)
    counts = _shape_counts(group, word, None)
    total = sum(n * q**a * (q - 1) ** b for (a, b), n in counts.items())
    return total, q ** group.length(w)
