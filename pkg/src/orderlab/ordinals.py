"""Ordinal arithmetic in Cantor normal form, capped below w^(w^3).

An ordinal is written as a descending sum ``w^e1*c1 + ... + w^ek*ck`` with
ordinal exponents and positive integer coefficients.  The cap keeps every
exponent strictly below w^3, which makes arithmetic total and fast while
covering everything the rest of the package needs (Z-powers, well-order
witnesses, indecomposable bounds).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Tuple


class OrdinalCapError(ValueError):
    """Raised when an operation would leave the supported universe."""


@dataclass(frozen=True)
class Ordinal:
    # terms: ((exponent, coefficient), ...) with strictly descending exponents
    terms: Tuple[Tuple["Ordinal", int], ...] = ()

    def __post_init__(self):
        prev = None
        for exp, coeff in self.terms:
            if not isinstance(exp, Ordinal) or not isinstance(coeff, int):
                raise TypeError("malformed CNF term")
            if coeff < 1:
                raise ValueError("CNF coefficients must be >= 1")
            if prev is not None and cmp(exp, prev) >= 0:
                raise ValueError("CNF exponents must strictly descend")
            prev = exp

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero())

    def finite_value(self) -> int:
        if not self.is_finite():
            raise ValueError("not a finite ordinal: %s" % format_ordinal(self))
        return self.terms[0][1] if self.terms else 0

    def finite_part(self) -> int:
        """The n in a = limit + n."""
        if self.terms and self.terms[-1][0].is_zero():
            return self.terms[-1][1]
        return 0

    def limit_part(self) -> "Ordinal":
        if self.terms and self.terms[-1][0].is_zero():
            return Ordinal(self.terms[:-1])
        return self

    def is_successor(self) -> bool:
        return self.finite_part() > 0

    def is_limit(self) -> bool:
        return bool(self.terms) and self.finite_part() == 0

    def leading_exponent(self) -> "Ordinal":
        if not self.terms:
            raise ValueError("zero has no leading exponent")
        return self.terms[0][0]

    def is_indecomposable(self) -> bool:
        """True for 0-free additively indecomposable values w^e."""
        return len(self.terms) == 1 and self.terms[0][1] == 1

    # -- operators ----------------------------------------------------------

    def __lt__(self, other):
        return cmp(self, other) < 0

    def __le__(self, other):
        return cmp(self, other) <= 0

    def __gt__(self, other):
        return cmp(self, other) > 0

    def __ge__(self, other):
        return cmp(self, other) >= 0

    def __add__(self, other):
        return add(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __repr__(self):
        return "Ordinal[%s]" % format_ordinal(self)


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))


def from_int(n: int) -> Ordinal:
    if n < 0:
        raise ValueError("ordinals are nonnegative")
    return Ordinal(((ZERO, n),)) if n else ZERO


OMEGA = Ordinal(((ONE, 1),))
W_CUBED = Ordinal(((from_int(3), 1),))  # exponent cap: all exponents < w^3


def _check_cap(o: Ordinal) -> Ordinal:
    for exp, _ in o.terms:
        if cmp(exp, W_CUBED) >= 0:
            raise OrdinalCapError(
                "ordinal exceeds the supported universe w^(w^3): %s" % format_ordinal(o)
            )
    return o


def cmp(a: Ordinal, b: Ordinal) -> int:
    """Total order on CNF: -1, 0, or 1."""
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = cmp(ea, eb)
        if c != 0:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    if len(a.terms) != len(b.terms):
        return -1 if len(a.terms) < len(b.terms) else 1
    return 0


def add(a: Ordinal, b: Ordinal) -> Ordinal:
    if b.is_zero():
        return a
    lead = b.terms[0][0]
    kept = [(e, c) for e, c in a.terms if cmp(e, lead) > 0]
    rest = list(b.terms)
    for e, c in a.terms:
        if cmp(e, lead) == 0:
            rest[0] = (lead, c + rest[0][1])
            break
    return _check_cap(Ordinal(tuple(kept) + tuple(rest)))


def mul(a: Ordinal, b: Ordinal) -> Ordinal:
    if a.is_zero() or b.is_zero():
        return ZERO
    lead_exp = a.terms[0][0]
    out: list[Tuple[Ordinal, int]] = []
    for e, c in b.terms:
        if e.is_zero():
            # a * n: the finite tail of a survives only in the last copy
            scaled = [(a.terms[0][0], a.terms[0][1] * c)] + list(a.terms[1:])
            tail = Ordinal(tuple(scaled))
            return _check_cap(add(Ordinal(tuple(out)), tail))
        out.append((add(lead_exp, e), c))
    return _check_cap(Ordinal(tuple(out)))


def left_subtract(a: Ordinal, b: Ordinal) -> Ordinal:
    """The unique g with a + g = b, for a <= b."""
    if cmp(a, b) > 0:
        raise ValueError("left_subtract needs a <= b")
    for i, (ea, ca) in enumerate(a.terms):
        if i >= len(b.terms):
            break
        eb, cb = b.terms[i]
        if cmp(ea, eb) != 0:
            return Ordinal(b.terms[i:])
        if ca != cb:
            rest = ((eb, cb - ca),) + b.terms[i + 1 :]
            return Ordinal(rest)
    return Ordinal(b.terms[len(a.terms) :])


def next_indecomposable(a: Ordinal) -> Ordinal:
    """Least w^d strictly above a; every sum of two smaller values stays below it."""
    if a.is_zero():
        return ONE
    return _check_cap(Ordinal(((add(a.leading_exponent(), ONE), 1),)))


def enumerate_below(a: Ordinal) -> Iterator[Ordinal]:
    """Every ordinal < a exactly once, staged by a syntactic weight (fair, exact)."""
    if a.is_finite():
        for n in range(a.finite_value()):
            yield from_int(n)
        return
    for w in itertools.count():
        for o in _cnfs_of_weight(0, w, None):
            if cmp(o, a) < 0:
                yield o


def _weight(o: Ordinal) -> int:
    return sum(1 + _weight(e) + c for e, c in o.terms)


def _cnfs_of_weight(level: int, w: int, max_exp) -> Iterator[Ordinal]:
    """CNFs of the given weight; exponents valid for `level` and < max_exp if set.

    Level 0 holds order types (exponents below w^3); level 1 holds those
    exponents (their own exponents are the naturals 0, 1, 2).
    """
    if w == 0:
        yield ZERO
        return
    for we in range(w):
        for e in _exponents_of_weight(level, we):
            if max_exp is not None and cmp(e, max_exp) >= 0:
                continue
            for c in range(1, w - we):
                rest = w - (1 + we + c)
                for tail in _cnfs_of_weight(level, rest, e):
                    yield Ordinal(((e, c),) + tail.terms)


def _exponents_of_weight(level: int, we: int):
    if level == 0:
        yield from _cnfs_of_weight(1, we, None)
        return
    # level 1: exponents are the naturals 0, 1, 2 (weights 0, 2, 3)
    if we == 0:
        yield ZERO
    elif we >= 2 and we - 1 <= 2:
        yield from_int(we - 1)


# -- text form ---------------------------------------------------------------


def format_ordinal(o: Ordinal) -> str:
    if o.is_zero():
        return "0"
    parts = []
    for e, c in o.terms:
        if e.is_zero():
            parts.append(str(c))
            continue
        if e == ONE:
            base = "w"
        elif e.is_finite():
            base = "w^%d" % e.finite_value()
        else:
            base = "w^(%s)" % format_ordinal(e)
        parts.append(base if c == 1 else "%s*%d" % (base, c))
    return "+".join(parts)


def parse_ordinal(text: str) -> Ordinal:
    """Grammar: sum of terms; term = factor ['*' int]; factor = int | 'w' ['^' exp];
    exp = int | 'w' | '(' ordinal ')'."""
    tokens = _tokenize(text)
    o, pos = _parse_sum(tokens, 0)
    if pos != len(tokens):
        raise ValueError("trailing input in ordinal at token %d: %r" % (pos, text))
    return o


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j])))
            i = j
        elif ch in "w^*+()":
            tokens.append((ch, ch))
            i += 1
        else:
            raise ValueError("bad character %r in ordinal %r" % (ch, text))
    return tokens


def _parse_sum(tokens, pos):
    total, pos = _parse_term(tokens, pos)
    while pos < len(tokens) and tokens[pos][0] == "+":
        nxt, pos = _parse_term(tokens, pos + 1)
        total = add(total, nxt)
    return total, pos


def _parse_term(tokens, pos):
    if pos >= len(tokens):
        raise ValueError("unexpected end of ordinal")
    kind, val = tokens[pos]
    if kind == "int":
        return from_int(val), pos + 1
    if kind != "w":
        raise ValueError("expected ordinal term at token %d" % pos)
    pos += 1
    exp = ONE
    if pos < len(tokens) and tokens[pos][0] == "^":
        pos += 1
        kind, val = tokens[pos] if pos < len(tokens) else (None, None)
        if kind == "int":
            exp = from_int(val)
            pos += 1
        elif kind == "w":
            exp = OMEGA
            pos += 1
        elif kind == "(":
            exp, pos = _parse_sum(tokens, pos + 1)
            if pos >= len(tokens) or tokens[pos][0] != ")":
                raise ValueError("unclosed ( in ordinal exponent")
            pos += 1
        else:
            raise ValueError("bad ordinal exponent")
    coeff = 1
    if pos < len(tokens) and tokens[pos][0] == "*":
        kind, val = tokens[pos + 1] if pos + 1 < len(tokens) else (None, None)
        if kind != "int":
            raise ValueError("expected integer coefficient")
        coeff = val
        pos += 2
    return _check_cap(Ordinal(((exp, coeff),))), pos
