"""Hecke algebra of a Weyl group in the T-basis.

Scalars are Laurent polynomials in t^(1/2); the structure constants of the
T-basis live in Z[t], but inverses need t^(-1), which is why the wider ring
is used.  The generators satisfy the quadratic relation

    (T_s + 1)(T_s - t) = 0,    i.e.  T_s^2 = (t - 1) T_s + t,

and T_w T_w' = T_ww' whenever lengths add.  Inverting T_w one generator at
a time and reading off coefficients yields the R-polynomials:

    R_vw = (-1)^(l(w) - l(v)) * t^l(w) * [T_v] T_w^(-1),

which must come out as honest integer polynomials of degree exactly
l(w) - l(v); extract_R asserts that rather than assuming it.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .coxeter import Element, WeylGroup
from .laurent import HalfLaurent

__all__ = ["HeckeElt", "HeckeAlgebra", "NonPolynomialR"]

_ZERO = HalfLaurent.zero()
_ONE = HalfLaurent.one()
_T = HalfLaurent.t_power(1)
_T_MINUS_ONE = _T - _ONE
_INV_T = HalfLaurent.t_power(-1)
_INV_T_MINUS_ONE = _INV_T - _ONE


class NonPolynomialR(ArithmeticError):
    """An extracted R-coefficient carried half or negative powers of t,
    which signals an arithmetic bug upstream."""


class HeckeElt:
    """Finite T-basis combination: a map Element -> HalfLaurent.

    Immutable by convention; zero scalars are never stored.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Element, HalfLaurent] | Iterable[tuple[Element, HalfLaurent]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        self._terms = {w: c for w, c in items if not c.is_zero}

    def coefficient(self, w: Element) -> HalfLaurent:
        return self._terms.get(w, _ZERO)

    def support(self) -> frozenset[Element]:
        return frozenset(self._terms)

    def terms(self) -> dict[Element, HalfLaurent]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, HeckeElt) and self._terms == other._terms

    def __add__(self, other: "HeckeElt") -> "HeckeElt":
        data = dict(self._terms)
        for w, c in other._terms.items():
            s = data.get(w, _ZERO) + c
            if s.is_zero:
                data.pop(w, None)
            else:
                data[w] = s
        return HeckeElt(data)

    def scale(self, c: HalfLaurent) -> "HeckeElt":
        if c.is_zero:
            return HeckeElt()
        return HeckeElt({w: x * c for w, x in self._terms.items()})

    def to_json_dict(self, group: WeylGroup) -> dict[str, list[list[int]]]:
        """Serialization: reduced word string -> coefficient pair list,
        sorted by (length, word) for deterministic output."""
        ordered = sorted(
            self._terms.items(),
            key=lambda item: (group.length(item[0]), group.reduced_word(item[0])),
        )
        return {group.word_string(w): c.to_pairs() for w, c in ordered}

    def __repr__(self) -> str:
        return f"HeckeElt({len(self._terms)} terms)"


class HeckeAlgebra:
    """T-basis operations bound to one Weyl group.

    Products fold one generator at a time (right-multiplication normal
    form); there is no precomputed multiplication table.  Basis inversions
    are memoized per element.
    """

    def __init__(self, group: WeylGroup):
        self.group = group
        self._invert_memo: dict[Element, HeckeElt] = {}
        self._r_memo: dict[Element, dict[Element, HalfLaurent]] = {}

    def unit(self) -> HeckeElt:
        return HeckeElt({self.group.identity: _ONE})

    def t_basis(self, w: Element) -> HeckeElt:
        return HeckeElt({w: _ONE})

    def mul_by_generator(self, x: HeckeElt, s: int) -> HeckeElt:
        """Right-multiply by T_s.

        Per term: T_w T_s = T_ws when the length goes up, and
        (t-1) T_w + t T_ws when it goes down.
        """
        g = self.group
        data: dict[Element, HalfLaurent] = {}

        def add(w: Element, c: HalfLaurent):
            acc = data.get(w, _ZERO) + c
            if acc.is_zero:
                data.pop(w, None)
            else:
                data[w] = acc

        for w, c in x.terms().items():
            ws = g.right_mult_gen(w, s)
            if g.is_right_descent(w, s):
                add(w, c * _T_MINUS_ONE)
                add(ws, c * _T)
            else:
                add(ws, c)
        return HeckeElt(data)

    def invert_generator(self, s: int) -> HeckeElt:
        """T_s^(-1) = t^(-1) T_s + (t^(-1) - 1) T_e."""
        g = self.group
        return HeckeElt({g.generator(s): _INV_T, g.identity: _INV_T_MINUS_ONE})

    def _mul_by_inverse_generator(self, x: HeckeElt, s: int) -> HeckeElt:
        # x * T_s^(-1) = t^(-1) (x T_s) + (t^(-1) - 1) x
        return self.mul_by_generator(x, s).scale(_INV_T) + x.scale(_INV_T_MINUS_ONE)

    def mul(self, x: HeckeElt, y: HeckeElt) -> HeckeElt:
        """General product, folding each right factor's reduced word."""
        g = self.group
        out = HeckeElt()
        for w, c in y.terms().items():
            z = x
            for i in g.reduced_word(w):
                z = self.mul_by_generator(z, i)
            out = out + z.scale(c)
        return out

    def invert_basis(self, w: Element) -> HeckeElt:
        """T_w^(-1), computed as T_s^(-1) factors over a reduced word.

        For w = s u with l(u) = l(w) - 1 this is T_u^(-1) T_s^(-1), so the
        memo table fills in one generator fold per group element.
        """
        cached = self._invert_memo.get(w)
        if cached is not None:
            return cached
        g = self.group
        if w == g.identity:
            out = self.unit()
        else:
            s = g.reduced_word(w)[0]
            tail = g.left_mult_gen(s, w)
            out = self._mul_by_inverse_generator(self.invert_basis(tail), s)
        self._invert_memo[w] = out
        return out

    def extract_R(self, w: Element) -> dict[Element, HalfLaurent]:
        """R-polynomials for all v <= w, read off T_w^(-1).

        The honest inverse of T_w is supported on the interval [e, w^(-1)]
        (its top term is T_(w^(-1)), forced by associativity), so the
        coefficient belonging to v is the one on T_(v^(-1)).  Reading it
        there is the same as reading T_v off the inverse of T_(w^(-1)),
        via the anti-automorphism T_x -> T_(x^(-1)); either way the returned
        map is keyed by exactly {v : v <= w}.

        Each value is checked to be an integral polynomial of degree exactly
        l(w) - l(v) with no negative powers; anything else raises
        NonPolynomialR.
        """
        cached = self._r_memo.get(w)
        if cached is not None:
            return dict(cached)
        g = self.group
        lw = g.length(w)
        inv = self.invert_basis(w)
        out: dict[Element, HalfLaurent] = {}
        for x, coeff in inv.terms().items():
            v = g.inverse(x)
            lv = g.length(v)
            sign = -1 if (lw - lv) % 2 else 1
            r = coeff.shift(2 * lw) * sign
            if not r.is_integral or r.min_index < 0:
                raise NonPolynomialR(
                    f"R for v={g.word_string(v)}, w={g.word_string(w)} "
                    f"is not a polynomial: {r}"
                )
            if r.max_index != 2 * (lw - lv):
                raise NonPolynomialR(
                    f"R for v={g.word_string(v)}, w={g.word_string(w)} "
                    f"has degree {r.max_index // 2}, expected {lw - lv}"
                )
            out[v] = r
        self._r_memo[w] = out
        return dict(out)
