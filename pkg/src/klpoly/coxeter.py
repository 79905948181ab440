"""Weyl groups realized exactly from crystallographic Cartan data.

A group element is an integer matrix acting on the simple-root basis of the
reflection representation.  The reflection convention is the row one,

    s_i(alpha_j) = alpha_j - a_ij * alpha_i,

where A = (a_ij) is the Cartan matrix; the transpose convention is equally
common, so the choice is pinned here at the API boundary.  Lengths, descents
and the Bruhat order are all derived from exact sign tests on root
coordinate vectors (a produced root has all coordinates >= 0 or all <= 0,
and it is positive iff its first nonzero coordinate is positive).  No
floating point is involved anywhere.

Elements are canonicalized and interned per group, so equality and hashing
are structural on the matrix, and cached lengths, reduced words and inverse
matrices are shared by every code path that touches the same element.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "CartanDatum",
    "Root",
    "Element",
    "WeylGroup",
    "NonFiniteType",
    "GroupTooLarge",
    "DEFAULT_MAX_ORDER",
    "weyl_group",
]

# E6 is the largest group this tool enumerates without an explicit override.
DEFAULT_MAX_ORDER = 51840
DEFAULT_MAX_POSITIVE_ROOTS = 200


class NonFiniteType(ValueError):
    """Root closure exceeded its bound: the datum is not finite type."""


class GroupTooLarge(ValueError):
    """Group order exceeds the configured enumeration cap."""


Matrix = tuple[tuple[int, ...], ...]


def _identity_matrix(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(ra[k] * cb[k] for k in range(n)) for cb in bt) for ra in a
    )


def _mat_vec(m: Matrix, v: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sum(row[k] * v[k] for k in range(len(v))) for row in m)


def _mat_inverse(m: Matrix) -> Matrix:
    """Exact inverse of an integer matrix with determinant +-1."""
    n = len(m)
    aug = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    inv = tuple(tuple(int(aug[i][n + j]) for j in range(n)) for i in range(n))
    if _mat_mul(m, inv) != _identity_matrix(n):
        raise ValueError("matrix is not invertible over the integers")
    return inv


# ---------------------------------------------------------------------------
# Cartan data


_LABEL_RE = re.compile(r"^([A-G])\s*(\d+)$")

# |W| per family, for refusing oversized groups before enumerating anything.
_EXCEPTIONAL_ORDERS = {"G2": 12, "F4": 1152, "E6": 51840, "E7": 2903040, "E8": 696729600}


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _catalog_matrix(family: str, n: int) -> Matrix:
    def chain(bonds: dict[tuple[int, int], int]) -> Matrix:
        a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for (i, j), v in bonds.items():
            a[i][j] = v
        return tuple(tuple(row) for row in a)

    simple = {}
    if family == "A":
        if n < 1:
            raise ValueError("type A needs rank >= 1")
        for i in range(n - 1):
            simple[(i, i + 1)] = simple[(i + 1, i)] = -1
        return chain(simple)
    if family in ("B", "C"):
        if n < 2:
            raise ValueError(f"type {family} needs rank >= 2")
        for i in range(n - 1):
            simple[(i, i + 1)] = simple[(i + 1, i)] = -1
        # B: last simple root short; C is the transpose.
        if family == "B":
            simple[(n - 1, n - 2)] = -2
        else:
            simple[(n - 2, n - 1)] = -2
        return chain(simple)
    if family == "D":
        if n < 3:
            raise ValueError("type D needs rank >= 3")
        for i in range(n - 2):
            simple[(i, i + 1)] = simple[(i + 1, i)] = -1
        simple[(n - 3, n - 1)] = simple[(n - 1, n - 3)] = -1
        return chain(simple)
    if family == "E":
        if n not in (6, 7, 8):
            raise ValueError("type E exists for ranks 6, 7, 8")
        edges = [(1, 3), (3, 4), (4, 5), (2, 4)] + [(i, i + 1) for i in range(5, n)]
        for i, j in edges:
            simple[(i - 1, j - 1)] = simple[(j - 1, i - 1)] = -1
        return chain(simple)
    if family == "F":
        if n != 4:
            raise ValueError("type F exists only in rank 4")
        return ((2, -1, 0, 0), (-1, 2, -1, 0), (0, -2, 2, -1), (0, 0, -1, 2))
    if family == "G":
        if n != 2:
            raise ValueError("type G exists only in rank 2")
        return ((2, -1), (-3, 2))
    raise ValueError(f"unknown family {family!r}")


@dataclass(frozen=True)
class CartanDatum:
    """A crystallographic Cartan matrix with an optional type label."""

    rank: int
    cartan: Matrix
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        a = self.cartan
        if self.rank < 1 or len(a) != self.rank or any(len(r) != self.rank for r in a):
            raise ValueError("Cartan matrix shape does not match the rank")
        for i in range(self.rank):
            if a[i][i] != 2:
                raise ValueError(f"diagonal entry a[{i}][{i}] must be 2")
            for j in range(self.rank):
                if i == j:
                    continue
                if a[i][j] > 0:
                    raise ValueError(f"off-diagonal entry a[{i}][{j}] must be <= 0")
                if (a[i][j] == 0) != (a[j][i] == 0):
                    raise ValueError(f"zero pattern must be symmetric at ({i},{j})")
                if a[i][j] * a[j][i] not in (0, 1, 2, 3):
                    raise ValueError(
                        f"a[{i}][{j}]*a[{j}][{i}] must lie in {{0,1,2,3}} "
                        "(crystallographic, finite bond orders)"
                    )

    @classmethod
    def from_label(cls, label: str) -> "CartanDatum":
        m = _LABEL_RE.match(label.strip().upper())
        if not m:
            raise ValueError(f"cannot parse Cartan type label {label!r}")
        family, n = m.group(1), int(m.group(2))
        return cls(rank=n, cartan=_catalog_matrix(family, n), label=f"{family}{n}")

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[int]], label: str | None = None) -> "CartanDatum":
        cartan = tuple(tuple(int(x) for x in row) for row in rows)
        return cls(rank=len(cartan), cartan=cartan, label=label)

    def known_order(self) -> int | None:
        """|W| when the label is a recognized type matching the matrix."""
        if self.label is None:
            return None
        m = _LABEL_RE.match(self.label)
        if not m:
            return None
        family, n = m.group(1), int(m.group(2))
        try:
            if _catalog_matrix(family, n) != self.cartan:
                return None
        except ValueError:
            return None
        if family == "A":
            return _factorial(n + 1)
        if family in ("B", "C"):
            return (1 << n) * _factorial(n)
        if family == "D":
            return (1 << (n - 1)) * _factorial(n)
        return _EXCEPTIONAL_ORDERS.get(f"{family}{n}")


# ---------------------------------------------------------------------------
# Roots and elements


@dataclass(frozen=True)
class Root:
    """Integer coordinate vector in the simple-root basis."""

    coords: tuple[int, ...]

    @property
    def is_positive(self) -> bool:
        for x in self.coords:
            if x:
                return x > 0
        return False

    @property
    def is_negative(self) -> bool:
        for x in self.coords:
            if x:
                return x < 0
        return False

    def __neg__(self) -> "Root":
        return Root(tuple(-x for x in self.coords))


class Element:
    """A Weyl group element, canonicalized by its action matrix.

    Length and the ShortLex-minimal reduced word are attached lazily by the
    owning group; instances are interned per group so the caches are shared.
    """

    __slots__ = ("matrix", "_length", "_word")

    def __init__(self, matrix: Matrix):
        self.matrix = matrix
        self._length: int | None = None
        self._word: tuple[int, ...] | None = None

    def __eq__(self, other) -> bool:
        return isinstance(other, Element) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        if self._word is not None:
            return f"<Element {'.'.join(map(str, self._word)) or 'e'}>"
        return f"<Element {self.matrix!r}>"


def word_to_string(word: Sequence[int]) -> str:
    """External rendering: one-based dot-separated indices, 'e' for identity."""
    return ".".join(str(i) for i in word) if word else "e"


def word_from_string(s: str) -> tuple[int, ...]:
    s = s.strip()
    if s in ("", "e"):
        return ()
    try:
        word = tuple(int(part) for part in s.split("."))
    except ValueError:
        raise ValueError(f"cannot parse word {s!r}: expected dot-separated indices") from None
    if any(i < 1 for i in word):
        raise ValueError(f"generator indices are one-based, got {s!r}")
    return word


# ---------------------------------------------------------------------------
# The group


class WeylGroup:
    """Reflection representation, Bruhat order and enumeration for a datum.

    All mutable state is memoization of pure functions, so concurrent reads
    interleaved with cache fills stay deterministic.
    """

    def __init__(
        self,
        datum: CartanDatum,
        max_order: int = DEFAULT_MAX_ORDER,
        max_positive_roots: int = DEFAULT_MAX_POSITIVE_ROOTS,
    ):
        self.datum = datum
        self.rank = datum.rank
        self.max_order = max_order
        self.max_positive_roots = max_positive_roots

        n = datum.rank
        a = datum.cartan
        self._gen_matrices: tuple[Matrix, ...] = tuple(
            tuple(
                tuple((1 if k == j else 0) - (a[i][j] if k == i else 0) for j in range(n))
                for k in range(n)
            )
            for i in range(n)
        )

        self._intern: dict[Matrix, Element] = {}
        self._inverse: dict[Element, Element] = {}
        self.identity = self._make(_identity_matrix(n))
        self._inverse[self.identity] = self.identity
        self.generators = tuple(self._make(m) for m in self._gen_matrices)
        for s in self.generators:
            self._inverse[s] = s

        self._positive_roots: tuple[Root, ...] | None = None
        self._elements: tuple[Element, ...] | None = None
        self._element_index: dict[Element, int] | None = None
        self._kernel_tables = None
        self._bruhat: dict[tuple[Element, Element], bool] = {}
        self._intervals: dict[tuple[Element, Element], tuple[Element, ...]] = {}
        self._all_words: dict[Element, tuple[tuple[int, ...], ...]] = {}
        self.bruhat_stats = {"hits": 0, "misses": 0}

    # -- element plumbing ----------------------------------------------------

    def _make(self, matrix: Matrix) -> Element:
        el = self._intern.get(matrix)
        if el is None:
            el = Element(matrix)
            self._intern[matrix] = el
        return el

    def element_from_matrix(self, matrix: Sequence[Sequence[int]]) -> Element:
        m = tuple(tuple(int(x) for x in row) for row in matrix)
        el = self._make(m)
        if el not in self._inverse:
            self._inverse[el] = self._make(_mat_inverse(m))
        return el

    def generator(self, i: int) -> Element:
        """Simple reflection s_i, one-based."""
        if not 1 <= i <= self.rank:
            raise ValueError(f"generator index {i} out of range 1..{self.rank}")
        return self.generators[i - 1]

    def inverse(self, w: Element) -> Element:
        inv = self._inverse.get(w)
        if inv is None:
            inv = self._make(_mat_inverse(w.matrix))
            self._inverse[w] = inv
            self._inverse[inv] = w
        return inv

    def multiply(self, a: Element, b: Element) -> Element:
        prod = self._make(_mat_mul(a.matrix, b.matrix))
        if prod not in self._inverse and a in self._inverse and b in self._inverse:
            inv = self._make(_mat_mul(self._inverse[b].matrix, self._inverse[a].matrix))
            self._inverse[prod] = inv
            self._inverse[inv] = prod
        return prod

    def right_mult_gen(self, w: Element, i: int) -> Element:
        return self.multiply(w, self.generator(i))

    def left_mult_gen(self, i: int, w: Element) -> Element:
        return self.multiply(self.generator(i), w)

    def element_from_word(self, word: Sequence[int]) -> Element:
        el = self.identity
        for i in word:
            el = self.right_mult_gen(el, i)
        return el

    # -- roots ----------------------------------------------------------------

    def simple_root(self, i: int) -> Root:
        return Root(tuple(1 if j == i - 1 else 0 for j in range(self.rank)))

    def act_on_root(self, i: int, r: Root) -> Root:
        """Apply the simple reflection s_i to a root."""
        return Root(_mat_vec(self._gen_matrices[i - 1], r.coords))

    def act(self, w: Element, r: Root) -> Root:
        return Root(_mat_vec(w.matrix, r.coords))

    @property
    def positive_roots(self) -> tuple[Root, ...]:
        """Closure of the simple roots under the reflection action,
        intersected with the positive cone."""
        if self._positive_roots is None:
            found = {self.simple_root(i).coords for i in range(1, self.rank + 1)}
            frontier = list(found)
            while frontier:
                nxt = []
                for coords in frontier:
                    for gm in self._gen_matrices:
                        img = _mat_vec(gm, coords)
                        if img not in found and Root(img).is_positive:
                            found.add(img)
                            nxt.append(img)
                if len(found) > self.max_positive_roots:
                    raise NonFiniteType(
                        f"root closure exceeded {self.max_positive_roots} roots; "
                        "the Cartan datum is not finite type"
                    )
                frontier = nxt
            self._positive_roots = tuple(
                Root(c) for c in sorted(found, key=lambda c: (sum(c), c))
            )
        return self._positive_roots

    # -- length, descents, words ----------------------------------------------

    def length(self, w: Element) -> int:
        """Number of positive roots sent to negative roots."""
        if w._length is None:
            w._length = sum(
                1 for r in self.positive_roots if self.act(w, r).is_negative
            )
        return w._length

    def is_right_descent(self, w: Element, i: int) -> bool:
        # w(alpha_i) is column i-1 of the matrix.
        col = i - 1
        for row in w.matrix:
            if row[col]:
                return row[col] < 0
        return False

    def is_left_descent(self, w: Element, i: int) -> bool:
        return self.is_right_descent(self.inverse(w), i)

    def right_descents(self, w: Element) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.rank + 1) if self.is_right_descent(w, i))

    def left_descents(self, w: Element) -> tuple[int, ...]:
        return self.right_descents(self.inverse(w))

    def reduced_word(self, w: Element) -> tuple[int, ...]:
        """ShortLex-minimal reduced word, by stripping the smallest left
        descent until the identity is reached."""
        if w._word is None:
            word: list[int] = []
            cur = w
            while cur is not self.identity and cur != self.identity:
                i = next(
                    g for g in range(1, self.rank + 1) if self.is_left_descent(cur, g)
                )
                word.append(i)
                cur = self.left_mult_gen(i, cur)
            w._word = tuple(word)
        return w._word

    def word_string(self, w: Element) -> str:
        return word_to_string(self.reduced_word(w))

    def all_reduced_words(self, w: Element) -> tuple[tuple[int, ...], ...]:
        """Every reduced word of w, by full descent-tree enumeration."""
        cached = self._all_words.get(w)
        if cached is not None:
            return cached
        if w == self.identity:
            out: tuple[tuple[int, ...], ...] = ((),)
        else:
            words: list[tuple[int, ...]] = []
            for i in range(1, self.rank + 1):
                if self.is_left_descent(w, i):
                    for tail in self.all_reduced_words(self.left_mult_gen(i, w)):
                        words.append((i,) + tail)
            out = tuple(words)
        self._all_words[w] = out
        return out

    def is_reduced(self, word: Sequence[int]) -> bool:
        return self.length(self.element_from_word(word)) == len(word)

    # -- enumeration ------------------------------------------------------------

    def order_hint(self) -> int | None:
        return self.datum.known_order()

    def enumerate_group(self) -> tuple[Element, ...]:
        """All elements, sorted by (length, ShortLex word).

        BFS over right multiplication by generators; the BFS level is the
        length.  Raises GroupTooLarge beyond the configured cap, using the
        known order formula for labeled types to refuse early.
        """
        if self._elements is not None:
            return self._elements
        hint = self.order_hint()
        if hint is not None and hint > self.max_order:
            raise GroupTooLarge(
                f"group of type {self.datum.label} has order {hint}, "
                f"cap is {self.max_order}"
            )
        self.positive_roots  # NonFiniteType fires before a runaway BFS
        seen = {self.identity}
        self.identity._length = 0
        frontier = [self.identity]
        level = 0
        while frontier:
            level += 1
            nxt = []
            for w in frontier:
                for i in range(1, self.rank + 1):
                    ws = self.right_mult_gen(w, i)
                    if ws not in seen:
                        seen.add(ws)
                        ws._length = level
                        nxt.append(ws)
            if len(seen) > self.max_order:
                raise GroupTooLarge(
                    f"enumeration exceeded the cap of {self.max_order} elements"
                )
            frontier = nxt
        elements = sorted(seen, key=lambda w: (self.length(w), self.reduced_word(w)))
        self._elements = tuple(elements)
        self._element_index = {w: k for k, w in enumerate(elements)}
        return self._elements

    def element_index(self, w: Element) -> int:
        self.enumerate_group()
        assert self._element_index is not None
        return self._element_index[w]

    def longest_element(self) -> Element:
        return self.enumerate_group()[-1]

    def kernel_tables(self):
        """Integer tables driving the mask-walk kernel.

        Returns (mult, sign): mult[k][g] is the index of element_k * s_(g+1),
        and sign[k][g] is 1 iff element_k sends -alpha_(g+1) to a positive
        root.  Indices follow enumerate_group order, identity first.
        """
        if self._kernel_tables is None:
            elements = self.enumerate_group()
            index = self._element_index
            assert index is not None and index[self.identity] == 0
            n, k = len(elements), self.rank
            mult = np.empty((n, k), dtype=np.int32)
            sign = np.empty((n, k), dtype=np.uint8)
            for ei, w in enumerate(elements):
                for g in range(1, k + 1):
                    mult[ei, g - 1] = index[self.right_mult_gen(w, g)]
                    # w(-alpha_g) is positive iff w(alpha_g) is negative.
                    sign[ei, g - 1] = 1 if self.is_right_descent(w, g) else 0
            self._kernel_tables = (mult, sign)
        return self._kernel_tables

    # -- Bruhat order -------------------------------------------------------------

    def bruhat_leq(self, v: Element, w: Element) -> bool:
        """Bruhat order via the descent recursion, memoized.

        v <= w iff v == w, or taking any s with l(sw) < l(w):
        sv <= sw when l(sv) < l(v), else v <= sw.
        """
        if v == w:
            return True
        lv, lw = self.length(v), self.length(w)
        if lv >= lw:
            return False
        key = (v, w)
        cached = self._bruhat.get(key)
        if cached is not None:
            self.bruhat_stats["hits"] += 1
            return cached
        self.bruhat_stats["misses"] += 1
        s = next(i for i in range(1, self.rank + 1) if self.is_left_descent(w, i))
        sw = self.left_mult_gen(s, w)
        sv = self.left_mult_gen(s, v)
        if self.length(sv) < lv:
            out = self.bruhat_leq(sv, sw)
        else:
            out = self.bruhat_leq(v, sw)
        self._bruhat[key] = out
        return out

    def interval(self, v: Element, w: Element) -> tuple[Element, ...]:
        """The closed interval {y : v <= y <= w}, sorted by (length, word).

        Empty when v and w are incomparable.
        """
        key = (v, w)
        cached = self._intervals.get(key)
        if cached is None:
            if not self.bruhat_leq(v, w):
                cached = ()
            else:
                cached = tuple(
                    y
                    for y in self.enumerate_group()
                    if self.bruhat_leq(v, y) and self.bruhat_leq(y, w)
                )
            self._intervals[key] = cached
        return cached

    def comparable_pairs(self) -> Iterator[tuple[Element, Element]]:
        """All pairs v <= w, in deterministic (w, v) enumeration order."""
        elements = self.enumerate_group()
        for w in elements:
            for v in elements:
                if self.bruhat_leq(v, w):
                    yield v, w


def weyl_group(datum: CartanDatum, max_order: int = DEFAULT_MAX_ORDER) -> WeylGroup:
    return WeylGroup(datum, max_order=max_order)
