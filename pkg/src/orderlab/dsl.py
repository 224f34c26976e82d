"""Text syntax for every value the command line touches.

Order terms:

    1, 2, ...          finite orders
    w  w*  z  e        the four infinite atoms
    ord(w^2+3)         well orders written in base-w normal form
    Z^(w)  Z^3  Z^w    integer powers with an ordinal exponent
    zpow(1+e)          integer power of an arbitrary term
    shuffle{1,2}       dense shuffle of finite block sizes
    ival(0,1/2)        rational-interval shuffle; -inf / inf open a side
    rev(t)             reversal
    a + b              sum
    a * b              product; the right factor is the index order

Circular orders are written C[t].  A bare integer inside the brackets
gives the finite circle on that many points, anything else wraps the
term.

Arc descriptors start with "arc:" and list atoms separated by commas:

    triv               an unknotted segment
    p3                 registered prime arc number 3
    bsum{2,3 mod 5}    primes accumulating at one endpoint
    bsumrep{4}         one prime repeated against the endpoint
    isum{0 mod 1}      primes accumulating at an interior point
    sing(e; {0 mod 2}) singular points arranged like an order term

Knot descriptors start with "knot:" and are built by trivial,
circularize(...), of_arc(...) on an arc descriptor, or f(C[t]) on a
circular term.

Set bodies in braces follow the eventually periodic grammar of
parse_setdesc: "{1,2,3}", "{2,3 mod 5}", "{0 mod 1 from 4}",
"{pre=0110;per=10}".

parse(print(x)) is the identity on normalized values; the printers live
next to the grammar so the two stay in step.
"""

from fractions import Fraction
from typing import List, Optional, Tuple, Union

from . import arcknot, ordinals, terms
from .arcknot import (
    ArcDescriptor,
    BSum,
    CircSing,
    ISum,
    KnotDescriptor,
    OrderSing,
    Prime,
    TRIVIAL,
    TRIVIAL_KNOT,
    TrivialSeg,
)
from .circular import CircTerm, FinCirc, format_circ
from .embed import format_term
from .setdesc import format_setdesc, parse_setdesc
from .terms import (
    Eta,
    Fin,
    IntervalShuffle,
    Ord,
    Prod,
    Rev,
    Shuffle,
    Sum,
    Term,
    ZPow,
    ZPowOf,
    fin,
)


class ParseError(ValueError):
    """Syntax error with the offset where scanning stopped."""

    def __init__(self, msg: str, pos: int):
        super().__init__("%s (at position %d)" % (msg, pos))
        self.pos = pos


# ---------------------------------------------------------------------------
# tokens

_PUNCT = "+*^(),;:[]"


def _tokenize(src: str) -> List[Tuple[str, str, int]]:
    """Tokens are (kind, text, pos); kind in int, name, punct, setblob.

    A star straight after w is part of the atom unless an operand
    follows it, so "w*w" multiplies while "w* + 1" reverses.
    """
    out = []
    i, n = 0, len(src)
    while i < n:
        c = src[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            out.append(("int", src[i:j], i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            name = src[i:j]
            if name == "w" and j < n and src[j] == "*":
                k = j + 1
                while k < n and src[k].isspace():
                    k += 1
                if k >= n or not (src[k].isalnum() or src[k] in "(_-"):
                    out.append(("name", "w*", i))
                    i = j + 1
                    continue
            out.append(("name", name, i))
            i = j
            continue
        if c == "{":
            j = src.find("}", i)
            if j < 0:
                raise ParseError("unclosed brace", i)
            out.append(("setblob", src[i : j + 1], i))
            i = j + 1
            continue
        if c == "-":
            out.append(("punct", "-", i))
            i += 1
            continue
        if c == "/":
            out.append(("punct", "/", i))
            i += 1
            continue
        if c in _PUNCT:
            out.append(("punct", c, i))
            i += 1
            continue
        raise ParseError("unexpected character %r" % c, i)
    return out


class _Scan:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.pos = 0

    def peek(self) -> Optional[Tuple[str, str, int]]:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self) -> Tuple[str, str, int]:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of input", len(self.src))
        self.pos += 1
        return t

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[str]:
        t = self.peek()
        if t and t[0] == kind and (text is None or t[1] == text):
            self.pos += 1
            return t[1]
        return None

    def expect(self, kind: str, text: Optional[str] = None) -> str:
        t = self.peek()
        if t is None:
            raise ParseError("expected %s, found end of input" % (text or kind), len(self.src))
        if t[0] != kind or (text is not None and t[1] != text):
            raise ParseError("expected %s, found %r" % (text or kind, t[1]), t[2])
        self.pos += 1
        return t[1]

    def here(self) -> int:
        t = self.peek()
        return t[2] if t else len(self.src)

    def done(self):
        t = self.peek()
        if t is not None:
            raise ParseError("trailing input %r" % t[1], t[2])


# ---------------------------------------------------------------------------
# order terms


def _balanced_paren(sc: _Scan) -> str:
    """Raw source between an opening paren just consumed and its mate."""
    depth = 1
    start = sc.here()
    end = start
    while depth:
        t = sc.next()
        if t[0] == "punct" and t[1] == "(":
            depth += 1
        elif t[0] == "punct" and t[1] == ")":
            depth -= 1
            end = t[2]
        else:
            end = t[2] + len(t[1])
    return sc.src[start:end].strip()


def _parse_sum(sc: _Scan) -> Term:
    parts = [_parse_prod(sc)]
    while sc.accept("punct", "+"):
        parts.append(_parse_prod(sc))
    return parts[0] if len(parts) == 1 else Sum(tuple(parts))


def _parse_prod(sc: _Scan) -> Term:
    t = _parse_atom(sc)
    while sc.accept("punct", "*"):
        t = Prod(t, _parse_atom(sc))
    return t


def _parse_rational(sc: _Scan) -> Optional[Fraction]:
    """A signed fraction, or None for an unbounded side (-inf / inf)."""
    neg = sc.accept("punct", "-") is not None
    if sc.accept("name", "inf"):
        return None
    num = int(sc.expect("int"))
    if sc.accept("punct", "/"):
        den = int(sc.expect("int"))
        q = Fraction(num, den)
    else:
        q = Fraction(num)
    return -q if neg else q


def _parse_ord_arg(sc: _Scan) -> ordinals.Ordinal:
    """Exponent after Z^: an integer, w, or a parenthesized normal form."""
    if sc.accept("punct", "("):
        return ordinals.parse_ordinal(_balanced_paren(sc))
    t = sc.next()
    if t[0] == "int":
        return ordinals.from_int(int(t[1]))
    if t[0] == "name" and t[1] == "w":
        return ordinals.OMEGA
    raise ParseError("expected an ordinal exponent", t[2])


def _parse_atom(sc: _Scan) -> Term:
    t = sc.next()
    kind, text, pos = t
    if kind == "int":
        n = int(text)
        if n < 1:
            raise ParseError("finite orders start at 1", pos)
        return fin(n)
    if kind == "punct" and text == "(":
        inner = _parse_sum(sc)
        sc.expect("punct", ")")
        return inner
    if kind != "name":
        raise ParseError("expected a term atom, found %r" % text, pos)
    if text == "w":
        return terms.OMEGA
    if text == "w*":
        return terms.OMEGA_STAR
    if text == "z":
        return terms.ZETA
    if text == "e":
        return terms.ETA
    if text == "Z":
        sc.expect("punct", "^")
        return ZPow(_parse_ord_arg(sc))
    if text == "ord":
        sc.expect("punct", "(")
        return Ord(ordinals.parse_ordinal(_balanced_paren(sc)))
    if text == "rev":
        sc.expect("punct", "(")
        inner = _parse_sum(sc)
        sc.expect("punct", ")")
        return Rev(inner)
    if text == "zpow":
        sc.expect("punct", "(")
        inner = _parse_sum(sc)
        sc.expect("punct", ")")
        return ZPowOf(inner)
    if text == "shuffle":
        blob = sc.expect("setblob")
        return Shuffle(parse_setdesc(blob))
    if text == "ival":
        sc.expect("punct", "(")
        lo = _parse_rational(sc)
        sc.expect("punct", ",")
        hi = _parse_rational(sc)
        sc.expect("punct", ")")
        return IntervalShuffle(lo, hi)
    raise ParseError("unknown atom %r" % text, pos)


# ---------------------------------------------------------------------------
# arc and knot descriptors


def _parse_arc_atom(sc: _Scan):
    t = sc.next()
    kind, text, pos = t
    if kind != "name":
        raise ParseError("expected an arc atom, found %r" % text, pos)
    if text == "triv":
        return TRIVIAL
    if text.startswith("p") and text[1:].isdigit():
        return Prime(int(text[1:]))
    if text == "bsum":
        return BSum(parse_setdesc(sc.expect("setblob")))
    if text == "bsumrep":
        return BSum(parse_setdesc(sc.expect("setblob")), repeated=True)
    if text == "isum":
        return ISum(parse_setdesc(sc.expect("setblob")))
    if text == "sing":
        sc.expect("punct", "(")
        order = _parse_sum(sc)
        sc.expect("punct", ";")
        sd = parse_setdesc(sc.expect("setblob"))
        sc.expect("punct", ")")
        return OrderSing(order, sd)
    raise ParseError("unknown arc atom %r" % text, pos)


def _parse_arc_body(sc: _Scan) -> ArcDescriptor:
    atoms = [_parse_arc_atom(sc)]
    while sc.accept("punct", ","):
        atoms.append(_parse_arc_atom(sc))
    return ArcDescriptor(tuple(atoms))


def _parse_circ(sc: _Scan) -> Union[FinCirc, CircTerm]:
    sc.expect("name", "C")
    sc.expect("punct", "[")
    t = sc.peek()
    if t and t[0] == "int":
        nxt = sc.toks[sc.pos + 1] if sc.pos + 1 < len(sc.toks) else None
        if nxt and nxt[0] == "punct" and nxt[1] == "]":
            sc.next()
            sc.next()
            return FinCirc.from_linear(int(t[1]))
    inner = _parse_sum(sc)
    sc.expect("punct", "]")
    return CircTerm(inner)


def _parse_knot_body(sc: _Scan) -> KnotDescriptor:
    t = sc.next()
    kind, text, pos = t
    if kind != "name":
        raise ParseError("expected a knot constructor, found %r" % text, pos)
    if text == "trivial":
        return TRIVIAL_KNOT
    if text in ("circularize", "of_arc"):
        sc.expect("punct", "(")
        nt = sc.peek()
        if nt and nt[0] == "name" and nt[1] == "arc":
            sc.next()
            sc.expect("punct", ":")
        body = _parse_arc_body(sc)
        sc.expect("punct", ")")
        mode = "circularize" if text == "circularize" else "knot_of_arc"
        return arcknot.make_knot(mode, body)
    if text == "f":
        sc.expect("punct", "(")
        circ = _parse_circ(sc)
        sc.expect("punct", ")")
        if isinstance(circ, FinCirc):
            raise ParseError("f takes a wrapped term, not a finite circle", pos)
        return arcknot.make_knot("f_knot", circ)
    raise ParseError("unknown knot constructor %r" % text, pos)


# ---------------------------------------------------------------------------
# entry points

Value = Union[Term, FinCirc, CircTerm, ArcDescriptor]


def parse_term(src: str) -> Value:
    """Parse an order term, a circular order, or an arc descriptor."""
    sc = _Scan(src)
    t = sc.peek()
    if t is None:
        raise ParseError("empty input", 0)
    if t[0] == "name" and t[1] == "arc":
        sc.next()
        sc.expect("punct", ":")
        v = _parse_arc_body(sc)
    elif t[0] == "name" and t[1] == "knot":
        raise ParseError("knot descriptors are only accepted by the knot command", t[2])
    elif t[0] == "name" and t[1] == "C":
        nxt = sc.toks[1] if len(sc.toks) > 1 else None
        if nxt and nxt[0] == "punct" and nxt[1] == "[":
            v = _parse_circ(sc)
        else:
            v = _parse_sum(sc)
    else:
        v = _parse_sum(sc)
    sc.done()
    return v


def parse_knot(src: str) -> KnotDescriptor:
    sc = _Scan(src)
    t = sc.peek()
    if t and t[0] == "name" and t[1] == "knot":
        sc.next()
        sc.expect("punct", ":")
    v = _parse_knot_body(sc)
    sc.done()
    return v


def parse_linear(src: str) -> Term:
    v = parse_term(src)
    if not isinstance(v, Term):
        raise ParseError("expected an order term, got %s" % type(v).__name__, 0)
    return v


# ---------------------------------------------------------------------------
# printers


def format_atom(a) -> str:
    if isinstance(a, TrivialSeg):
        return "triv"
    if isinstance(a, Prime):
        return "p%d" % a.index
    if isinstance(a, BSum):
        return ("bsumrep%s" if a.repeated else "bsum%s") % format_setdesc(a.indices)
    if isinstance(a, ISum):
        return "isum%s" % format_setdesc(a.indices)
    if isinstance(a, OrderSing):
        return "sing(%s; %s)" % (format_term(a.order), format_setdesc(a.indices))
    if isinstance(a, CircSing):
        return "close(%s)" % format_circ(a.circ)
    raise TypeError("not an arc atom: %r" % (a,))


def format_arc(a: ArcDescriptor) -> str:
    return "arc: " + ", ".join(format_atom(x) for x in a.atoms)


def format_knot(k: KnotDescriptor) -> str:
    mode, arg = k.origin
    if mode == "circularize":
        return "knot: circularize(%s)" % format_arc(arg)
    if mode == "knot_of_arc":
        return "knot: of_arc(%s)" % format_arc(arg)
    return "knot: f(%s)" % format_circ(arg)


def format_value(v) -> str:
    if isinstance(v, Term):
        return format_term(v)
    if isinstance(v, (FinCirc, CircTerm)):
        return format_circ(v)
    if isinstance(v, ArcDescriptor):
        return format_arc(v)
    if isinstance(v, KnotDescriptor):
        return format_knot(v)
    raise TypeError("cannot print %r" % (v,))
