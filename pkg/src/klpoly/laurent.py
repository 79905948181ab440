"""Exact Laurent polynomials in a formal square root of t.

Every scalar in this package lives in Z[t^(1/2), t^(-1/2)].  A value is a
finite map from the half-exponent index i to a nonzero integer coefficient,
where key i stands for the monomial t^(i/2): the polynomial t - 1 is stored
as {2: 1, 0: -1}, and t^(1/2) as {1: 1}.  Working on the half grading makes
the truncation operator exact for both integer and genuine half powers:
truncating at bound d keeps exactly the monomials t^(i/2) with i <= d, so
integer powers t^j survive iff 2j <= d.

Coefficients are plain Python ints, so arithmetic is arbitrary precision.
Zero coefficients are dropped eagerly and equality is structural.  Values
are immutable and hashable, safe to share between threads.
"""

from __future__ import annotations

import operator
import re
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "HalfLaurent",
    "NonIntegralExponent",
    "truncate",
    "multiply",
    "evaluate",
    "poly_to_string",
    "poly_from_string",
]


class NonIntegralExponent(ValueError):
    """An object carrying genuine half powers of t reached a context that
    expected an honest polynomial, typically a point-count evaluation."""


def _check_bound(d) -> int:
    # Truncation bounds are integer half-exponent indices.  Fractional
    # bounds are rejected rather than guessed.
    try:
        return operator.index(d)
    except TypeError:
        raise TypeError(
            f"truncation bound must be an integer half-exponent index, got {d!r}"
        ) from None


class HalfLaurent:
    """Immutable element of Z[t^(1/2), t^(-1/2)].

    >>> p = HalfLaurent.t_power(1) - HalfLaurent.one()
    >>> str(p * p)
    't^2-2t+1'
    >>> str((p * p).truncate(2))
    '-2t+1'
    >>> str(HalfLaurent.half_power(1) * HalfLaurent.half_power(1))
    't'
    """

    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        data: dict[int, int] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for i, c in items:
            i = operator.index(i)
            c = operator.index(c)
            if c:
                data[i] = data.get(i, 0) + c
                if not data[i]:
                    del data[i]
        self._coeffs = data
        self._hash: int | None = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "HalfLaurent":
        return _ZERO

    @classmethod
    def one(cls) -> "HalfLaurent":
        return _ONE

    @classmethod
    def from_int(cls, n: int) -> "HalfLaurent":
        return cls({0: n})

    @classmethod
    def t_power(cls, j: int) -> "HalfLaurent":
        """The integer power t^j (stored at half-exponent index 2j)."""
        return cls({2 * operator.index(j): 1})

    @classmethod
    def half_power(cls, i: int) -> "HalfLaurent":
        """The monomial t^(i/2)."""
        return cls({operator.index(i): 1})

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "HalfLaurent":
        return cls(pairs)

    # -- views -------------------------------------------------------------

    def items(self) -> tuple[tuple[int, int], ...]:
        """Coefficient pairs (half_exponent, coefficient), ascending."""
        return tuple(sorted(self._coeffs.items()))

    def to_pairs(self) -> list[list[int]]:
        """Serialization form: ordered [half_exponent, coefficient] pairs."""
        return [[i, c] for i, c in sorted(self._coeffs.items())]

    def coefficient(self, i: int) -> int:
        return self._coeffs.get(i, 0)

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def is_integral(self) -> bool:
        """True when every stored half-exponent index is even."""
        return all(i % 2 == 0 for i in self._coeffs)

    @property
    def min_index(self) -> int:
        if not self._coeffs:
            raise ValueError("zero polynomial has no support")
        return min(self._coeffs)

    @property
    def max_index(self) -> int:
        if not self._coeffs:
            raise ValueError("zero polynomial has no support")
        return max(self._coeffs)

    def integer_degree(self) -> int:
        """Degree in t of an integral value with nonnegative support."""
        if not self.is_integral:
            raise NonIntegralExponent(f"{self} carries half powers of t")
        return self.max_index // 2

    # -- ring operations ---------------------------------------------------

    @staticmethod
    def _coerce(other) -> "HalfLaurent | None":
        if isinstance(other, HalfLaurent):
            return other
        try:
            return HalfLaurent({0: operator.index(other)})
        except TypeError:
            return None

    def __add__(self, other) -> "HalfLaurent":
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        data = dict(self._coeffs)
        for i, c in q._coeffs.items():
            s = data.get(i, 0) + c
            if s:
                data[i] = s
            elif i in data:
                del data[i]
        return _wrap(data)

    __radd__ = __add__

    def __sub__(self, other) -> "HalfLaurent":
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return self + (-q)

    def __rsub__(self, other) -> "HalfLaurent":
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return q + (-self)

    def __neg__(self) -> "HalfLaurent":
        return _wrap({i: -c for i, c in self._coeffs.items()})

    def __mul__(self, other) -> "HalfLaurent":
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        a, b = self._coeffs, q._coeffs
        if len(a) > len(b):
            a, b = b, a
        data: dict[int, int] = {}
        for i, c in a.items():
            for j, d in b.items():
                k = i + j
                s = data.get(k, 0) + c * d
                if s:
                    data[k] = s
                elif k in data:
                    del data[k]
        return _wrap(data)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "HalfLaurent":
        n = operator.index(n)
        if n < 0:
            raise ValueError("negative powers are not defined for general values")
        out = _ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, di: int) -> "HalfLaurent":
        """Multiply by t^(di/2): add di to every half-exponent index."""
        di = operator.index(di)
        return _wrap({i + di: c for i, c in self._coeffs.items()})

    # -- the truncation operator -------------------------------------------

    def truncate(self, d: int) -> "HalfLaurent":
        """Keep exactly the monomials t^(i/2) with i <= d."""
        d = _check_bound(d)
        return _wrap({i: c for i, c in self._coeffs.items() if i <= d})

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, q_val: int) -> Fraction:
        """Exact value at t = q_val for an integral polynomial.

        Negative even indices are allowed, hence the rational result.
        Raises NonIntegralExponent when any odd index is present: an object
        carrying genuine half powers was evaluated where a point count was
        expected.
        """
        q_val = operator.index(q_val)
        if q_val < 2:
            raise ValueError(f"evaluation point must be at least 2, got {q_val}")
        total = Fraction(0)
        for i, c in self._coeffs.items():
            if i % 2:
                raise NonIntegralExponent(
                    f"cannot evaluate {self}: odd half-exponent index {i}"
                )
            total += Fraction(c) * Fraction(q_val) ** (i // 2)
        return total

    # -- value semantics -----------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, HalfLaurent):
            return self._coeffs == other._coeffs
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return self._coeffs == q._coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.items())
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __str__(self) -> str:
        return poly_to_string(self)

    def __repr__(self) -> str:
        return f"HalfLaurent.from_pairs({self.to_pairs()!r})"


def _wrap(data: dict[int, int]) -> HalfLaurent:
    p = HalfLaurent.__new__(HalfLaurent)
    p._coeffs = data
    p._hash = None
    return p


_ZERO = HalfLaurent()
_ONE = HalfLaurent({0: 1})


# -- operation-style aliases -------------------------------------------------


def truncate(p: HalfLaurent, d: int) -> HalfLaurent:
    return p.truncate(d)


def multiply(p: HalfLaurent, q: HalfLaurent) -> HalfLaurent:
    return p * q


def evaluate(p: HalfLaurent, q_val: int) -> Fraction:
    return p.evaluate(q_val)


# -- human-readable rendering -------------------------------------------------


def poly_to_string(p: HalfLaurent) -> str:
    """Render with descending exponents, e.g. 't^3-2t^2+2t-1' or 't^(1/2)+2'."""
    if p.is_zero:
        return "0"
    parts: list[str] = []
    for i, c in sorted(p.items(), reverse=True):
        sign = "-" if c < 0 else ("+" if parts else "")
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            if i % 2 == 0:
                j = i // 2
                power = "t" if j == 1 else f"t^{j}"
            else:
                power = f"t^({i}/2)"
            body = power if mag == 1 else f"{mag}{power}"
        parts.append(sign + body)
    return "".join(parts)


_TERM_RE = re.compile(
    r"""^(?P<coeff>\d+)?
         (?P<var>t(?:\^(?P<iexp>-?\d+)|\^\((?P<hexp>-?\d+)/2\))?)?$""",
    re.VERBOSE,
)


def _split_terms(s: str) -> list[str]:
    # Split on top-level +/- only; minus signs directly after '^' or '('
    # belong to an exponent.
    terms: list[str] = []
    cur = ""
    for ch in s:
        if ch in "+-" and cur and cur[-1] not in "^(":
            terms.append(cur)
            cur = ch if ch == "-" else ""
        elif ch == "-" and not cur:
            cur = "-"
        elif ch != "+" or cur:
            if ch == "+" and (not cur or cur[-1] in "^("):
                raise ValueError(f"misplaced '+' in polynomial string {s!r}")
            cur += ch
    if cur:
        terms.append(cur)
    return terms


def poly_from_string(s: str) -> HalfLaurent:
    """Parse the format produced by poly_to_string."""
    s = s.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial string")
    if s == "0":
        return HalfLaurent.zero()
    pairs: list[tuple[int, int]] = []
    for term in _split_terms(s):
        neg = term.startswith("-")
        body = term[1:] if neg else term
        m = _TERM_RE.match(body)
        if not m or (m.group("coeff") is None and m.group("var") is None):
            raise ValueError(f"cannot parse term {term!r} in {s!r}")
        coeff = int(m.group("coeff") or 1)
        if m.group("var") is None:
            index = 0
        elif m.group("hexp") is not None:
            index = int(m.group("hexp"))
        elif m.group("iexp") is not None:
            index = 2 * int(m.group("iexp"))
        else:
            index = 2
        pairs.append((index, -coeff if neg else coeff))
    return HalfLaurent.from_pairs(pairs)
