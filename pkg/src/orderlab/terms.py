"""The term algebra of countable linear orders.

Atoms: Fin(n), Omega (type w), OmegaStar (w*), Zeta (the integers), Eta (the
rationals).  Constructors: Sum, antilexicographic Prod (the right factor is
the index: Prod(l, r) = sum of one copy of l per point of r), Rev, Z-powers
by an ordinal (ZPow) or by an arbitrary term (ZPowOf), Shuffle(S) (dense mix
of finite blocks with sizes from S), IntervalShuffle(lo, hi) (the convex part
of the canonically labeled shuffle spanned by blocks whose label falls in the
open interval), and Ord(a) for an ordinal written as one atom.

normalize() applies only the documented absorption rules; it is idempotent
and preserves the denoted isomorphism type.  Deeper rewriting (the kind that
identifies w*+w with z) lives in the decision modules.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

from . import ordinals
from .ordinals import Ordinal
from .setdesc import SetDesc


class Term:
    """Base class; all order terms are immutable and hashable."""

    __slots__ = ()


@dataclass(frozen=True)
class Fin(Term):
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("Fin needs n >= 1")


@dataclass(frozen=True)
class Omega(Term):
    pass


@dataclass(frozen=True)
class OmegaStar(Term):
    pass


@dataclass(frozen=True)
class Zeta(Term):
    pass


@dataclass(frozen=True)
class Eta(Term):
    pass


@dataclass(frozen=True)
class Sum(Term):
    parts: Tuple[Term, ...]

    def __post_init__(self):
        if len(self.parts) < 1:
            raise ValueError("Sum needs at least one part")
        if any(not isinstance(p, Term) for p in self.parts):
            raise TypeError("Sum parts must be terms")


@dataclass(frozen=True)
class Prod(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Rev(Term):
    arg: Term


@dataclass(frozen=True)
class ZPow(Term):
    exp: Ordinal


@dataclass(frozen=True)
class ZPowOf(Term):
    arg: Term


@dataclass(frozen=True)
class Shuffle(Term):
    sizes: SetDesc

    def __post_init__(self):
        if self.sizes.is_empty():
            raise ValueError("Shuffle needs a nonempty size set")
        if self.sizes.member(0):
            raise ValueError("Shuffle block sizes must be >= 1")


@dataclass(frozen=True)
class IntervalShuffle(Term):
    lo: Optional[Fraction]  # None = unbounded below
    hi: Optional[Fraction]  # None = unbounded above

    def __post_init__(self):
        if self.lo is not None and self.hi is not None and not self.lo < self.hi:
            raise ValueError("IntervalShuffle needs lo < hi")


@dataclass(frozen=True)
class Ord(Term):
    alpha: Ordinal

    def __post_init__(self):
        if self.alpha.is_zero():
            raise ValueError("Ord(0) denotes the empty order; not a term")


OMEGA = Omega()
OMEGA_STAR = OmegaStar()
ZETA = Zeta()
ETA = Eta()
ONE = Fin(1)


def fin(n: int) -> Term:
    return Fin(n)


def total(*parts: Term) -> Term:
    return Sum(tuple(parts)) if len(parts) != 1 else parts[0]


# -- normalization ------------------------------------------------------------


def normalize(t: Term) -> Term:
    """Canonical form under the documented absorptions; isomorphism-preserving."""
    return _norm(t)


def _norm(t: Term) -> Term:
    if isinstance(t, Fin):
        return t
    if isinstance(t, (Omega, OmegaStar, Zeta, Eta)):
        return t
    if isinstance(t, Ord):
        return _norm_ord(t.alpha)
    if isinstance(t, ZPow):
        return _norm_zpow(t.exp)
    if isinstance(t, ZPowOf):
        return ZPowOf(_norm(t.arg))
    if isinstance(t, Shuffle):
        return Shuffle(t.sizes.canonical())
    if isinstance(t, IntervalShuffle):
        return t
    if isinstance(t, Rev):
        return _norm_rev(_norm(t.arg))
    if isinstance(t, Prod):
        left, right = _norm(t.left), _norm(t.right)
        if left == Fin(1):
            return right
        if right == Fin(1):
            return left
        return Prod(left, right)
    if isinstance(t, Sum):
        parts = []
        for p in t.parts:
            q = _norm(p)
            if isinstance(q, Sum):
                parts.extend(q.parts)
            else:
                parts.append(q)
        parts = _absorb(parts)
        return parts[0] if len(parts) == 1 else Sum(tuple(parts))
    raise TypeError("not an order term: %r" % (t,))


def _norm_ord(a: Ordinal) -> Term:
    if a.is_finite():
        return Fin(a.finite_value())
    if a == ordinals.OMEGA:
        return OMEGA
    return Ord(a)


def _norm_zpow(a: Ordinal) -> Term:
    if a.is_zero():
        return Fin(1)  # the empty function is the only point of Z^0
    if a == ordinals.ONE:
        return ZETA
    return ZPow(a)


def _norm_rev(t: Term) -> Term:
    if isinstance(t, Fin):
        return t
    if isinstance(t, Omega):
        return OMEGA_STAR
    if isinstance(t, OmegaStar):
        return OMEGA
    if isinstance(t, (Zeta, Eta)):
        return t
    if isinstance(t, Rev):
        return t.arg
    if isinstance(t, ZPow):
        return t  # reversal fixes Z-powers
    if isinstance(t, ZPowOf):
        return t
    if isinstance(t, Shuffle):
        return t  # mirror of a dense block mix is a dense block mix, same sizes
    if isinstance(t, Sum):
        return _norm(Sum(tuple(Rev(p) for p in reversed(t.parts))))
    if isinstance(t, Prod):
        return _norm(Prod(Rev(t.left), Rev(t.right)))
    if isinstance(t, Ord):
        if t.alpha == ordinals.OMEGA:
            return OMEGA_STAR
        return Rev(t)
    return Rev(t)  # IntervalShuffle mirrors stay explicit


def _absorb(parts: list) -> list:
    changed = True
    while changed:
        changed = False
        out = []
        i = 0
        while i < len(parts):
            a = parts[i]
            b = parts[i + 1] if i + 1 < len(parts) else None
            c = parts[i + 2] if i + 2 < len(parts) else None
            if isinstance(a, Fin) and isinstance(b, Fin):
                out.append(Fin(a.n + b.n))
                i += 2
                changed = True
            elif isinstance(a, Fin) and isinstance(b, Omega):
                out.append(b)
                i += 2
                changed = True
            elif isinstance(a, OmegaStar) and isinstance(b, Fin):
                out.append(a)
                i += 2
                changed = True
            elif isinstance(a, Eta) and isinstance(b, Eta):
                out.append(a)
                i += 2
                changed = True
            elif isinstance(a, Eta) and b == Fin(1) and isinstance(c, Eta):
                out.append(a)
                i += 3
                changed = True
            else:
                out.append(a)
                i += 1
        parts = out
    return parts


# -- structural analyses -------------------------------------------------------

YES, NO, UNKNOWN = "yes", "no", "unknown"


def size_if_finite(t: Term) -> Optional[int]:
    if isinstance(t, Fin):
        return t.n
    if isinstance(t, Sum):
        sizes = [size_if_finite(p) for p in t.parts]
        return None if any(s is None for s in sizes) else sum(sizes)
    if isinstance(t, Prod):
        a, b = size_if_finite(t.left), size_if_finite(t.right)
        return None if a is None or b is None else a * b
    if isinstance(t, Rev):
        return size_if_finite(t.arg)
    if isinstance(t, Ord):
        return t.alpha.finite_value() if t.alpha.is_finite() else None
    if isinstance(t, ZPow):
        return 1 if t.exp.is_zero() else None
    return None


def has_min(t: Term) -> bool:
    if isinstance(t, (Fin, Omega)):
        return True
    if isinstance(t, Ord):
        return True
    if isinstance(t, (OmegaStar, Zeta, Eta, Shuffle, IntervalShuffle)):
        return False
    if isinstance(t, ZPow):
        return t.exp.is_zero()
    if isinstance(t, ZPowOf):
        return False  # the exponent order is nonempty, so a top coordinate can always drop
    if isinstance(t, Sum):
        return has_min(t.parts[0])
    if isinstance(t, Prod):
        return has_min(t.left) and has_min(t.right)
    if isinstance(t, Rev):
        return has_max(t.arg)
    raise TypeError(repr(t))


def has_max(t: Term) -> bool:
    if isinstance(t, (Fin, OmegaStar)):
        return True
    if isinstance(t, Ord):
        return t.alpha.is_successor()
    if isinstance(t, (Omega, Zeta, Eta, Shuffle, IntervalShuffle)):
        return False
    if isinstance(t, ZPow):
        return t.exp.is_zero()
    if isinstance(t, ZPowOf):
        return False
    if isinstance(t, Sum):
        return has_max(t.parts[-1])
    if isinstance(t, Prod):
        return has_max(t.left) and has_max(t.right)
    if isinstance(t, Rev):
        return has_min(t.arg)
    raise TypeError(repr(t))


def is_well_order(t: Term):
    """(\"yes\", type) | (\"no\",) | (\"unknown\",) on the structural fragment."""
    if isinstance(t, Fin):
        return (YES, ordinals.from_int(t.n))
    if isinstance(t, Omega):
        return (YES, ordinals.OMEGA)
    if isinstance(t, Ord):
        return (YES, t.alpha)
    if isinstance(t, (OmegaStar, Zeta, Eta, Shuffle, IntervalShuffle)):
        return (NO,)
    if isinstance(t, ZPow):
        return (YES, ordinals.ONE) if t.exp.is_zero() else (NO,)
    if isinstance(t, ZPowOf):
        return (NO,)  # nonempty exponent order always embeds z
    if isinstance(t, Rev):
        if isinstance(t.arg, (Eta, Shuffle, IntervalShuffle)):
            return (NO,)  # mirrors of dense mixes stay dense
        inner = is_well_order(t.arg)
        if inner[0] == YES:
            return inner if inner[1].is_finite() else (NO,)
        return (UNKNOWN,)
    if isinstance(t, Sum):
        acc = ordinals.ZERO
        for p in t.parts:
            w = is_well_order(p)
            if w[0] == NO:
                return (NO,)
            if w[0] == UNKNOWN:
                return (UNKNOWN,)
            acc = ordinals.add(acc, w[1])
        return (YES, acc)
    if isinstance(t, Prod):
        wl, wr = is_well_order(t.left), is_well_order(t.right)
        if wl[0] == NO or wr[0] == NO:
            return (NO,)
        if wl[0] == UNKNOWN or wr[0] == UNKNOWN:
            return (UNKNOWN,)
        return (YES, ordinals.mul(wl[1], wr[1]))
    return (UNKNOWN,)


def is_reverse_well_order(t: Term):
    """Mirror of is_well_order: the type reported is that of the reversal."""
    return is_well_order(normalize(Rev(t)))


def maximal_wo_initial(t: Term) -> Optional[Ordinal]:
    """Order type of the largest well-ordered initial segment; None if unknown."""
    w = is_well_order(t)
    if w[0] == YES:
        return w[1]
    if w[0] == UNKNOWN:
        return None
    if not has_min(t):
        return ordinals.ZERO
    if isinstance(t, Rev):
        inner = is_well_order(t.arg)
        if inner[0] == YES:
            # reversal of a limit+n well-order starts with n isolated points
            return ordinals.from_int(inner[1].finite_part())
        return None
    if isinstance(t, Sum):
        acc = ordinals.ZERO
        for p in t.parts:
            w = is_well_order(p)
            if w[0] == YES:
                acc = ordinals.add(acc, w[1])
                continue
            if w[0] == UNKNOWN:
                return None
            head = maximal_wo_initial(p)
            if head is None:
                return None
            return ordinals.add(acc, head)
        return acc
    if isinstance(t, Prod):
        wl = is_well_order(t.left)
        if wl[0] == YES:
            gamma = maximal_wo_initial(t.right)
            if gamma is None:
                return None
            return ordinals.mul(wl[1], gamma)
        if wl[0] == NO:
            if not has_min(t.right):
                return ordinals.ZERO
            return maximal_wo_initial(t.left)
        return None
    return None


def zpow_normalize(t: Term) -> Optional[Term]:
    """Resolve ZPowOf into ZPow(a) or Prod(ZPow(a), Eta); None when undecided."""
    t = normalize(t)
    if not isinstance(t, ZPowOf):
        return t
    base = normalize(t.arg)
    w = is_well_order(base)
    if w[0] == YES:
        return _norm_zpow(w[1])
    if w[0] == UNKNOWN:
        return None
    alpha = maximal_wo_initial(base)
    if alpha is None:
        return None
    return normalize(Prod(_norm_zpow(alpha), ETA))
