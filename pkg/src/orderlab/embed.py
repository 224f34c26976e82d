"""Canonical words and decision procedures for order comparison.

Every supported expression is rewritten into a canonical word: a finite
sequence of rigid parts (finite blocks, ordinals, reversed ordinals, the
rational line, shuffles, interval shuffles and z-power stacks) glued by
absorption rules.  On the supported fragment two terms denote isomorphic
orders exactly when their words are equal, so word equality decides
isomorphism and word piece matching decides convex embeddability.

The piece calculus tracks cut partitions: an entry (piece, strict, comp)
says the part splits as comp followed by piece, and strict records whether
the cut sits directly against an element of comp (finals: comp has a
maximum; initials: comp has a minimum).  Strictness is what lets a z-power
stack grow an omega head or tail when a cut lands inside one of its copies.

Everything here is pure; unknown is always an acceptable outcome and is
preferred to a guess.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Dict, List, Optional, Sequence, Set, Tuple

from . import ordinals
from .condense import Refutation, UnsupportedTerm, refute_cvx
from .ordinals import Ordinal, left_subtract
from .present import index_of_rat, rat_of_index
from .setdesc import SetDesc, format_setdesc, from_finite
from .terms import (
    ETA,
    Eta,
    Fin,
    IntervalShuffle,
    Omega,
    OmegaStar,
    Ord,
    Prod,
    Rev,
    Shuffle,
    Sum,
    Term,
    ZPow,
    ZPowOf,
    Zeta,
    normalize,
    total,
    zpow_normalize,
)

Word = Tuple[Term, ...]

_ZERO = ordinals.ZERO
_ONE = ordinals.ONE
_W = ordinals.OMEGA

YES, NO, UNKNOWN = "yes", "no", "unknown"

_DEPTH_CAP = 24
_ZPROD_DEPTH_CAP = 8
_FAMILY_CAP = 256


class NotFinitelyDescribable(Exception):
    """The requested interval family has infinitely many iso classes."""


@dataclass(frozen=True)
class Witness:
    """Positive certificate.

    kind is one of iso, embed, convex-embed.  For convex-embed with
    decomposed=True the target is isomorphic to left + source + right,
    where a None flank means the empty order.  Otherwise the rule trace
    names the lemma rules that forced the answer.
    """

    kind: str
    left: Optional[Term] = None
    right: Optional[Term] = None
    decomposed: bool = False
    rule_trace: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Decision:
    relation: str
    left: Term
    right: Term
    outcome: str
    witness: Optional[Witness] = None
    refutation: Optional[Refutation] = None
    rule_trace: Tuple[str, ...] = ()


@dataclass(frozen=True)
class CompressClass:
    value: str  # LeftOnly | RightOnly | Bi | Incompressible | Unknown


# -- z-factor plumbing --
# A z-factor part denotes Z^g * x: Zeta is Z^1, ZPow(g) is Z^g, and
# Prod(Zeta|ZPow(g), x) is the general stack over a single rigid body x.


def _zfactor(p: Term) -> Optional[Tuple[Ordinal, Term]]:
    if isinstance(p, Zeta):
        return (_ONE, Fin(1))
    if isinstance(p, ZPow):
        return (p.exp, Fin(1))
    if isinstance(p, Prod):
        if isinstance(p.left, Zeta):
            return (_ONE, p.right)
        if isinstance(p.left, ZPow):
            return (p.left.exp, p.right)
    return None


def _mk_pure(g: Ordinal) -> Term:
    if g.is_zero():
        return Fin(1)
    if g == _ONE:
        return Zeta()
    return ZPow(g)


def _mk_zfac(g: Ordinal, x: Term) -> Term:
    """The part for Z^g * x, folding nested stacks into the exponent."""
    if g.is_zero():
        return x
    inner = _zfactor(x)
    if inner is not None:
        return _mk_zfac(ordinals.add(g, inner[0]), inner[1])
    if isinstance(x, Fin):
        if x.n == 1:
            return _mk_pure(g)
        raise ValueError("finite bodies above 1 must be expanded, not stacked")
    return Prod(_mk_pure(g), x)


# -- precanonical expansion --


def _pc(t: Term) -> Word:
    if isinstance(t, Fin):
        return (t,)
    if isinstance(t, Omega):
        return (Ord(_W),)
    if isinstance(t, OmegaStar):
        return (Rev(Ord(_W)),)
    if isinstance(t, (Zeta, Eta)):
        return (t,)
    if isinstance(t, Ord):
        if t.alpha.is_finite():
            return (Fin(t.alpha.finite_value()),)
        return (t,)
    if isinstance(t, Shuffle):
        s = t.sizes.canonical()
        if s.is_empty():
            raise ValueError("empty shuffle denotes the empty order")
        if s.is_finite_set() and s.finite_members() == (1,):
            return (ETA,)
        return (Shuffle(s),)
    if isinstance(t, IntervalShuffle):
        return (t,)
    if isinstance(t, ZPow):
        if t.exp.is_zero():
            return (Fin(1),)
        if t.exp == _ONE:
            return (Zeta(),)
        return (t,)
    if isinstance(t, ZPowOf):
        resolved = zpow_normalize(t)
        if resolved is None or isinstance(resolved, ZPowOf):
            return (t,)  # outside the fragment; kept opaque
        return _pc(resolved)
    if isinstance(t, Rev):
        a = t.arg
        if isinstance(a, (Zeta, Eta)):
            return (a,)
        if isinstance(a, (Shuffle, ZPow)):
            return _pc(a)  # these are their own mirrors
        if isinstance(a, Ord):
            if a.alpha.is_finite():
                return (Fin(a.alpha.finite_value()),)
            return (t,)
        return (t,)  # mirrored interval shuffles and such stay opaque
    if isinstance(t, Sum):
        out: List[Term] = []
        for p in t.parts:
            out.extend(_pc(p))
        return tuple(out)
    if isinstance(t, Prod):
        return _pc_prod(t.left, t.right)
    return (t,)


def _pc_zlayer(a: Ordinal, body: Term) -> Word:
    """Canonical word of Z^a * body (a may be zero)."""
    rw = merge_word(_pc(body))
    if a.is_zero():
        return rw
    out: List[Term] = []
    for p in rw:
        if isinstance(p, Fin):
            out.extend([_mk_pure(a)] * p.n)
            continue
        zf = _zfactor(p)
        if zf is not None:
            out.append(_mk_zfac(ordinals.add(a, zf[0]), zf[1]))
            continue
        out.append(Prod(_mk_pure(a), p))
    return merge_word(tuple(out))


def _pc_prod(lt: Term, rt: Term) -> Word:
    lw = merge_word(_pc(lt))
    rw = merge_word(_pc(rt))
    if rw == (Fin(1),):
        return lw
    if lw == (Fin(1),):
        return rw
    # the right factor indexes copies, so sums on the right distribute
    if len(rw) > 1:
        out: List[Term] = []
        for p in rw:
            out.extend(_pc_prod(word_term(lw), p))
        return merge_word(tuple(out))
    r = rw[0]
    if isinstance(r, Fin):
        return merge_word(lw * r.n)
    if len(lw) == 1:
        p = lw[0]
        zf = _zfactor(p)
        if zf is not None:
            g, x = zf
            if isinstance(x, Fin) and x.n == 1:
                return _pc_zlayer(g, r)
            return _pc_zlayer(g, Prod(x, r))
        if isinstance(p, Eta):
            return (ETA,)  # eta absorbs any countable index
        if isinstance(p, Shuffle):
            return (p,)  # a shuffle stacked over any index is itself
        if isinstance(p, Fin):
            return _fin_times(p.n, r)
        if isinstance(p, Ord):
            if isinstance(r, Ord):
                return _pc(Ord(ordinals.mul(p.alpha, r.alpha)))
            return (Prod(p, r),)
        if isinstance(p, Rev) and isinstance(p.arg, Ord):
            if isinstance(r, Rev) and isinstance(r.arg, Ord):
                return _pc(Rev(Ord(ordinals.mul(p.arg.alpha, r.arg.alpha))))
            return (Prod(p, r),)
        return (Prod(p, r),)
    if isinstance(r, Eta) and all(isinstance(p, (Fin, Eta)) for p in lw):
        sizes = sorted({p.n for p in lw if isinstance(p, Fin)})
        if any(isinstance(p, Eta) for p in lw):
            sizes = sorted(set(sizes) | {1})
        if sizes == [1]:
            return (ETA,)
        return (Shuffle(from_finite(sizes)),)
    return (Prod(word_term(lw), r),)


def _fin_times(m: int, r: Term) -> Word:
    # m copies of a point per point of r
    if isinstance(r, Ord):
        return _pc(Ord(ordinals.mul(ordinals.from_int(m), r.alpha)))
    if isinstance(r, Rev) and isinstance(r.arg, Ord):
        return _pc(Rev(Ord(ordinals.mul(ordinals.from_int(m), r.arg.alpha))))
    if isinstance(r, Zeta):
        return (Zeta(),)
    if isinstance(r, Eta):
        return (ETA,) if m == 1 else (Shuffle(from_finite([m])),)
    if isinstance(r, Shuffle):
        return (Shuffle(r.sizes.scale(m)),)
    if _zfactor(r) is not None:
        return (r,)  # finite blocks dissolve into the bottom z layer
    return (Prod(Fin(m), r),)


# -- merging --


def _ord_word(b: Ordinal) -> Word:
    if b.is_zero():
        return ()
    if b.is_finite():
        return (Fin(b.finite_value()),)
    return (Ord(b),)


def _rev_word(b: Ordinal) -> Word:
    if b.is_zero():
        return ()
    if b.is_finite():
        return (Fin(b.finite_value()),)
    return (Rev(Ord(b)),)


def _try_pair(a: Term, b: Term) -> Optional[List[Term]]:
    if isinstance(a, Fin) and isinstance(b, Fin):
        return [Fin(a.n + b.n)]
    if isinstance(a, Fin) and isinstance(b, Ord) and not b.alpha.is_finite():
        return [b]
    if isinstance(a, Ord) and isinstance(b, Fin):
        return [Ord(ordinals.add(a.alpha, ordinals.from_int(b.n)))]
    if isinstance(a, Ord) and isinstance(b, Ord):
        return [Ord(ordinals.add(a.alpha, b.alpha))]
    if isinstance(a, Fin) and isinstance(b, Rev) and isinstance(b.arg, Ord):
        return [Rev(Ord(ordinals.add(b.arg.alpha, ordinals.from_int(a.n))))]
    if isinstance(a, Rev) and isinstance(a.arg, Ord) and isinstance(b, Fin):
        return [a]  # a top finite run slides into the reversed ordinal
    if (
        isinstance(a, Rev)
        and isinstance(a.arg, Ord)
        and isinstance(b, Rev)
        and isinstance(b.arg, Ord)
    ):
        return [Rev(Ord(ordinals.add(b.arg.alpha, a.arg.alpha)))]
    if isinstance(a, Rev) and isinstance(a.arg, Ord) and isinstance(b, Ord):
        # reversed ordinal meeting an ordinal fuses into a zeta seam
        lrest = left_subtract(_W, a.arg.alpha)
        brest = left_subtract(_W, b.alpha)
        return list(_rev_word(lrest)) + [Zeta()] + list(_ord_word(brest))
    if isinstance(a, Eta) and isinstance(b, Eta):
        return [a]
    if isinstance(a, Shuffle) and isinstance(b, Shuffle) and a.sizes.equals(b.sizes):
        return [a]
    return None


def _try_triple(a: Term, b: Term, c: Term) -> Optional[List[Term]]:
    if isinstance(a, Eta) and b == Fin(1) and isinstance(c, Eta):
        return [a]
    if (
        isinstance(a, Shuffle)
        and isinstance(b, Fin)
        and isinstance(c, Shuffle)
        and a.sizes.equals(c.sizes)
        and a.sizes.member(b.n)
    ):
        return [a]
    if (
        isinstance(a, IntervalShuffle)
        and isinstance(b, Fin)
        and isinstance(c, IntervalShuffle)
        and a.hi is not None
        and a.hi == c.lo
        and b.n == index_of_rat(a.hi) + 1
    ):
        return [IntervalShuffle(a.lo, c.hi)]
    return None


def _collapse_zrun(run: List[Term], g: Ordinal) -> Optional[List[Term]]:
    k = len(run)
    for span in range(k, 1, -1):
        for s in range(0, k - span + 1):
            bodies = tuple(_zfactor(p)[1] for p in run[s : s + span])
            bw = merge_word(bodies)
            if len(bw) == 1 and not isinstance(bw[0], Fin):
                return run[:s] + [_mk_zfac(g, bw[0])] + run[s + span :]
    return None


def merge_word(parts: Sequence[Term]) -> Word:
    w = list(parts)
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(w):
            zf = _zfactor(w[i])
            if zf is None:
                i += 1
                continue
            j = i
            while j + 1 < len(w):
                nxt = _zfactor(w[j + 1])
                if nxt is None or ordinals.cmp(nxt[0], zf[0]) != 0:
                    break
                j += 1
            if j > i:
                rep = _collapse_zrun(w[i : j + 1], zf[0])
                if rep is not None:
                    w[i : j + 1] = rep
                    changed = True
                    continue
            i = j + 1
        if changed:
            continue
        for i in range(len(w) - 2):
            rep = _try_triple(w[i], w[i + 1], w[i + 2])
            if rep is not None:
                w[i : i + 3] = rep
                changed = True
                break
        if changed:
            continue
        for i in range(len(w) - 1):
            rep = _try_pair(w[i], w[i + 1])
            if rep is not None:
                w[i : i + 2] = rep
                changed = True
                break
    return tuple(w)


def _join(a: Word, b: Word) -> Word:
    if not a:
        return b
    if not b:
        return a
    return merge_word(a + b)


# -- the canonical map --

_CANON: Dict[Term, Word] = {}


def canon_word(t: Term) -> Word:
    try:
        return _CANON[t]
    except (KeyError, TypeError):
        pass
    w = merge_word(_pc(normalize(t)))
    try:
        _CANON[t] = w
    except TypeError:
        pass
    return w


def word_term(w: Word) -> Term:
    if not w:
        raise ValueError("the empty word denotes the empty order")
    return total(*w)


def canon_term(t: Term) -> Term:
    return normalize(word_term(canon_word(t)))


def canon_eq(t: Term, u: Term) -> bool:
    return canon_word(t) == canon_word(u)


def part_supported(p: Term) -> bool:
    if isinstance(p, (Fin, Zeta, Eta, Shuffle, IntervalShuffle)):
        return True
    if isinstance(p, Ord):
        return True
    if isinstance(p, Rev):
        return isinstance(p.arg, Ord)
    if isinstance(p, ZPow):
        return True
    zf = _zfactor(p)
    if zf is not None:
        body = zf[1]
        return not isinstance(body, (Sum, Prod, ZPowOf, Rev)) and part_supported(body)
    return False


def word_supported(w: Word) -> bool:
    return all(part_supported(p) for p in w)


def word_has_min(w: Word) -> bool:
    if not w:
        return False
    p = w[0]
    if isinstance(p, (Fin, Ord)):
        return True
    if isinstance(p, Rev) and isinstance(p.arg, Ord):
        return p.arg.alpha.finite_part() > 0
    return False


def word_has_max(w: Word) -> bool:
    if not w:
        return False
    p = w[-1]
    if isinstance(p, Fin):
        return True
    if isinstance(p, Rev) and isinstance(p.arg, Ord):
        return True
    if isinstance(p, Ord):
        return p.alpha.finite_part() > 0
    return False


def _drop_last(w: Word) -> Word:
    """Remove the maximum element; only valid when word_has_max(w)."""
    p = w[-1]
    if isinstance(p, Fin):
        return w[:-1] if p.n == 1 else w[:-1] + (Fin(p.n - 1),)
    if isinstance(p, Rev) and isinstance(p.arg, Ord):
        return w  # a reversed ordinal sheds its top point invisibly
    if isinstance(p, Ord):
        fp = p.alpha.finite_part()
        a2 = ordinals.add(p.alpha.limit_part(), ordinals.from_int(fp - 1))
        return w[:-1] + tuple(_ord_word(a2))
    raise ValueError("word has no maximum")


def _drop_first(w: Word) -> Word:
    p = w[0]
    if isinstance(p, Fin):
        return w[1:] if p.n == 1 else (Fin(p.n - 1),) + w[1:]
    if isinstance(p, Ord):
        return w  # an infinite ordinal sheds its bottom point invisibly
    if isinstance(p, Rev) and isinstance(p.arg, Ord):
        fp = p.arg.alpha.finite_part()
        a2 = ordinals.add(p.arg.alpha.limit_part(), ordinals.from_int(fp - 1))
        return tuple(_rev_word(a2)) + w[1:]
    raise ValueError("word has no minimum")


# -- printing --


def format_term(t: Term) -> str:
    return _fmt(normalize(t), 0)


def format_word(w: Word) -> str:
    return format_term(word_term(w)) if w else "(empty)"


def _fmt(t: Term, prec: int) -> str:
    # prec 0 sum context, 1 product context, 2 atom context
    if isinstance(t, Fin):
        return str(t.n)
    if isinstance(t, Omega):
        return "w"
    if isinstance(t, OmegaStar):
        return "w*"
    if isinstance(t, Zeta):
        return "z"
    if isinstance(t, Eta):
        return "e"
    if isinstance(t, Ord):
        if t.alpha == _W:
            return "w"
        return "ord(%s)" % ordinals.format_ordinal(t.alpha)
    if isinstance(t, Rev):
        if isinstance(t.arg, Ord) and t.arg.alpha == _W:
            return "w*"
        return "rev(%s)" % _fmt(t.arg, 0)
    if isinstance(t, ZPow):
        return "Z^(%s)" % ordinals.format_ordinal(t.exp)
    if isinstance(t, ZPowOf):
        return "zpow(%s)" % _fmt(t.arg, 0)
    if isinstance(t, Shuffle):
        return "shuffle%s" % format_setdesc(t.sizes)
    if isinstance(t, IntervalShuffle):
        lo = "-inf" if t.lo is None else str(t.lo)
        hi = "inf" if t.hi is None else str(t.hi)
        return "ival(%s,%s)" % (lo, hi)
    if isinstance(t, Prod):
        s = "%s*%s" % (_fmt(t.left, 2), _fmt(t.right, 2))
        return "(%s)" % s if prec > 1 else s
    if isinstance(t, Sum):
        s = " + ".join(_fmt(p, 1) for p in t.parts)
        return "(%s)" % s if prec > 0 else s
    return repr(t)


# -- the candidate pool --


@dataclass(frozen=True)
class Pool:
    fins: Tuple[int, ...]
    ords: Tuple[Ordinal, ...]
    rats: Tuple[Fraction, ...]


def _collect_parts(w: Word, base: Set[Ordinal], fins: Set[int], rats: Set[Fraction]) -> None:
    for p in w:
        if isinstance(p, Fin):
            fins.add(p.n)
        elif isinstance(p, Ord):
            base.add(p.alpha)
            fins.add(max(1, p.alpha.finite_part()))
        elif isinstance(p, Rev) and isinstance(p.arg, Ord):
            base.add(p.arg.alpha)
            fins.add(max(1, p.arg.alpha.finite_part()))
        elif isinstance(p, IntervalShuffle):
            if p.lo is not None:
                rats.add(p.lo)
            if p.hi is not None:
                rats.add(p.hi)
        else:
            zf = _zfactor(p)
            if zf is not None:
                base.add(zf[0])
                _collect_parts((zf[1],), base, fins, rats)


def build_pool(*words: Word) -> Pool:
    fins: Set[int] = {1, 2}
    base: Set[Ordinal] = {_W}
    rats: Set[Fraction] = set()
    for w in words:
        _collect_parts(w, base, fins, rats)
    # close finite values under sums and differences: window seams only
    # ever need a single combination of visible values
    snap = sorted(fins)
    for a in snap:
        for b in snap:
            if a > b:
                fins.add(a - b)
            if a + b <= 512:
                fins.add(a + b)
    cands: Set[Ordinal] = set(base)
    for o in base:
        ts = o.terms
        for i in range(len(ts)):
            e, c = ts[i]
            for cc in range(1, c + 1):
                cands.add(Ordinal(ts[:i] + ((e, cc),)))  # prefixes
                cands.add(Ordinal(((e, cc),) + ts[i + 1 :]))  # suffixes
    for n in sorted(fins)[:64]:
        cands.add(ordinals.from_int(n))
    cands.add(_ZERO)
    cands.add(_ONE)
    for o in list(cands):
        cands.add(ordinals.add(_W, o))
        cands.add(ordinals.add(o, _ONE))
    ordered = sorted(cands, key=cmp_to_key(ordinals.cmp))
    return Pool(tuple(sorted(fins)), tuple(ordered), tuple(sorted(rats)))


# -- cut enumeration per part --
# finals_enum lists proper nonempty final pieces of one part as entries
# (piece, strict, comp) with comp + piece the whole part; initials mirror.

Piece = Tuple[Word, bool, Word]


def _ord_cuts(alpha: Ordinal) -> List[Tuple[Ordinal, Ordinal]]:
    """(tail, head) pairs with head + tail = alpha, covering every tail
    type in every achievable strictness (head successor vs head limit)."""
    res: List[Tuple[Ordinal, Ordinal]] = []
    ts = alpha.terms
    for i in range(len(ts)):
        e_i, c_i = ts[i]
        for c in range(1, c_i + 1):
            delta = Ordinal(((e_i, c),) + ts[i + 1 :])
            if i == 0 and c == c_i:
                if not e_i.is_zero():
                    res.append((delta, _ONE))
                    if ordinals.cmp(e_i, ordinals.from_int(2)) >= 0:
                        res.append((delta, _W))
                continue
            if c < c_i:
                gamma = Ordinal(ts[:i] + ((e_i, c_i - c),))
            else:
                gamma = Ordinal(ts[:i])
            res.append((delta, gamma))
            if not delta.is_finite():
                if gamma.finite_part() > 0:
                    res.append((delta, ordinals.add(gamma.limit_part(), _W)))
                else:
                    res.append((delta, ordinals.add(gamma, _ONE)))
    return res


def _least_geq(s: SetDesc, a: int) -> Optional[int]:
    for n in itertools.islice(s.members(), a + 1024):
        if n >= a:
            return n
    return None


def _is_block(p: IntervalShuffle, q: Fraction) -> bool:
    return (p.lo is None or p.lo < q) and (p.hi is None or q < p.hi)


def _dedupe(entries: List[Piece]) -> List[Piece]:
    return list(dict.fromkeys(entries))


def finals_enum(part: Term, pool: Pool, depth: int = 0) -> Tuple[List[Piece], bool]:
    zf = _zfactor(part)
    if zf is not None:
        return _finals_zprod(zf[0], zf[1], pool, depth)
    if isinstance(part, Fin):
        out = [((Fin(j),), True, (Fin(part.n - j),)) for j in range(1, part.n)]
        return out, True
    if isinstance(part, Ord):
        out = []
        for delta, gamma in _ord_cuts(part.alpha):
            comp = _ord_word(gamma)
            out.append((_ord_word(delta), word_has_max(comp), comp))
        return _dedupe(out), True
    if isinstance(part, Rev) and isinstance(part.arg, Ord):
        lam = part.arg.alpha
        out = []
        for mu in pool.ords:
            if ordinals.cmp(mu, _ZERO) > 0 and ordinals.cmp(mu, lam) < 0:
                rho = left_subtract(mu, lam)
                out.append((_rev_word(mu), True, _rev_word(rho)))
        return _dedupe(out), True  # any matching head pins an ordinal equation
    if isinstance(part, Eta):
        out = [
            ((ETA,), True, (ETA, Fin(1))),
            ((ETA,), False, (ETA,)),
            ((Fin(1), ETA), False, (ETA,)),
        ]
        return out, True
    if isinstance(part, Shuffle):
        s = part.sizes
        nmin = s.min_element()
        out = [
            ((part,), False, (part,)),
            ((part,), True, (part, Fin(nmin))),
        ]
        for a in pool.fins:
            n = _least_geq(s, a)
            if n is None:
                continue
            if n > a:
                out.append(((Fin(a), part), True, (part, Fin(n - a))))
            else:
                out.append(((Fin(a), part), False, (part,)))
                n2 = _least_geq(s, a + 1)
                if n2 is not None:
                    out.append(((Fin(a), part), True, (part, Fin(n2 - a))))
        return _dedupe(out), True
    if isinstance(part, IntervalShuffle):
        out = []
        for q in pool.rats:
            if not _is_block(part, q):
                continue
            sz = index_of_rat(q) + 1
            lword: Word = (IntervalShuffle(part.lo, q),)
            rword: Word = (IntervalShuffle(q, part.hi),)
            out.append((rword, True, lword + (Fin(sz),)))
            for a in pool.fins:
                if a > sz:
                    continue
                if a < sz:
                    out.append(((Fin(a),) + rword, True, lword + (Fin(sz - a),)))
                else:
                    out.append(((Fin(a),) + rword, False, lword))
        return _dedupe(out), True
    return [], False


def initials_enum(part: Term, pool: Pool, depth: int = 0) -> Tuple[List[Piece], bool]:
    zf = _zfactor(part)
    if zf is not None:
        return _initials_zprod(zf[0], zf[1], pool, depth)
    if isinstance(part, Fin):
        out = [((Fin(j),), True, (Fin(part.n - j),)) for j in range(1, part.n)]
        return out, True
    if isinstance(part, Ord):
        out = []
        for g in pool.ords:
            if ordinals.cmp(g, _ZERO) > 0 and ordinals.cmp(g, part.alpha) < 0:
                rest = left_subtract(g, part.alpha)
                out.append((_ord_word(g), True, _ord_word(rest)))
        return _dedupe(out), True
    if isinstance(part, Rev) and isinstance(part.arg, Ord):
        out = []
        for delta, gamma in _ord_cuts(part.arg.alpha):
            piece = _rev_word(delta)
            comp = _rev_word(gamma)
            out.append((piece, word_has_min(comp), comp))
        return _dedupe(out), True
    if isinstance(part, Eta):
        out = [
            ((ETA,), True, (Fin(1), ETA)),
            ((ETA,), False, (ETA,)),
            ((ETA, Fin(1)), False, (ETA,)),
        ]
        return out, True
    if isinstance(part, Shuffle):
        s = part.sizes
        nmin = s.min_element()
        out = [
            ((part,), False, (part,)),
            ((part,), True, (Fin(nmin), part)),
        ]
        for b in pool.fins:
            n = _least_geq(s, b)
            if n is None:
                continue
            if n > b:
                out.append(((part, Fin(b)), True, (Fin(n - b), part)))
            else:
                out.append(((part, Fin(b)), False, (part,)))
                n2 = _least_geq(s, b + 1)
                if n2 is not None:
                    out.append(((part, Fin(b)), True, (Fin(n2 - b), part)))
        return _dedupe(out), True
    if isinstance(part, IntervalShuffle):
        out = []
        for q in pool.rats:
            if not _is_block(part, q):
                continue
            sz = index_of_rat(q) + 1
            lword = (IntervalShuffle(part.lo, q),)
            rword = (IntervalShuffle(q, part.hi),)
            out.append((lword, True, (Fin(sz),) + rword))
            for b in pool.fins:
                if b > sz:
                    continue
                if b < sz:
                    out.append((lword + (Fin(b),), True, (Fin(sz - b),) + rword))
                else:
                    out.append((lword + (Fin(b),), False, rword))
        return _dedupe(out), True
    return [], False


def _zmul(w: Word) -> Word:
    if not w:
        return ()
    return _pc_zlayer(_ONE, word_term(w))


def _finals_zprod(g: Ordinal, body: Term, pool: Pool, depth: int) -> Tuple[List[Piece], bool]:
    if depth > _ZPROD_DEPTH_CAP:
        return [], False
    peel = _pc_zlayer(left_subtract(_ONE, g), body)
    inner, complete = finals_word(peel, pool, depth + 1)
    out: List[Piece] = []
    for f, s, c in inner:
        zf = _zmul(f)
        zc = _zmul(c)
        out.append((zf, False, zc))
        if s:
            comp = _join(_zmul(_drop_last(c)), (Rev(Ord(_W)),))
            out.append((_join((Ord(_W),), zf), True, comp))
    if word_has_max(peel):
        out.append(((Ord(_W),), True, _join(_zmul(_drop_last(peel)), (Rev(Ord(_W)),))))
    return _dedupe(out), complete


def _initials_zprod(g: Ordinal, body: Term, pool: Pool, depth: int) -> Tuple[List[Piece], bool]:
    if depth > _ZPROD_DEPTH_CAP:
        return [], False
    peel = _pc_zlayer(left_subtract(_ONE, g), body)
    inner, complete = initials_word(peel, pool, depth + 1)
    out: List[Piece] = []
    for f, s, c in inner:
        zf = _zmul(f)
        zc = _zmul(c)
        out.append((zf, False, zc))
        if s:
            piece = _join(zf, (Rev(Ord(_W)),))
            out.append((piece, True, _join((Ord(_W),), _zmul(_drop_first(c)))))
    if word_has_min(peel):
        out.append(((Rev(Ord(_W)),), True, _join((Ord(_W),), _zmul(_drop_first(peel)))))
    return _dedupe(out), complete


def finals_word(w: Word, pool: Pool, depth: int = 0) -> Tuple[List[Piece], bool]:
    out: List[Piece] = []
    complete = True
    for i in range(len(w)):
        fs, ok = finals_enum(w[i], pool, depth)
        complete = complete and ok
        rest = w[i + 1 :]
        for f, s, c in fs:
            out.append((_join(f, rest), s, _join(w[:i], c)))
    for i in range(1, len(w)):
        out.append((w[i:], word_has_max(w[:i]), w[:i]))
    return _dedupe(out), complete


def initials_word(w: Word, pool: Pool, depth: int = 0) -> Tuple[List[Piece], bool]:
    out: List[Piece] = []
    complete = True
    for i in range(len(w)):
        iss, ok = initials_enum(w[i], pool, depth)
        complete = complete and ok
        for f, s, c in iss:
            out.append((_join(w[:i], f), s, _join(c, w[i + 1 :])))
    for i in range(1, len(w)):
        out.append((w[:i], word_has_min((w[i],)), w[i:]))
    return _dedupe(out), complete


# -- hosting inside a single part --


def _word_ordinal(w: Word) -> Optional[Ordinal]:
    if len(w) != 1:
        return None
    p = w[0]
    if isinstance(p, Fin):
        return ordinals.from_int(p.n)
    if isinstance(p, Ord):
        return p.alpha
    return None


def _word_rev_ordinal(w: Word) -> Optional[Ordinal]:
    if len(w) != 1:
        return None
    p = w[0]
    if isinstance(p, Fin):
        return ordinals.from_int(p.n)
    if isinstance(p, Rev) and isinstance(p.arg, Ord):
        return p.arg.alpha
    return None


HostAnswer = Tuple[Optional[bool], Optional[Tuple[Word, Word]]]


def _hosted_in(sw: Word, part: Term, pool: Pool, depth: int) -> HostAnswer:
    """Is sw the word of some convex subset of the single part?

    Returns (verdict, decomposition): verdict None means undecided; the
    decomposition gives the flanks inside the part when one is explicit.
    """
    if sw == (part,):
        return True, ((), ())
    zf = _zfactor(part)
    if zf is not None:
        return _host_zprod(sw, zf[0], zf[1], pool, depth), None
    if isinstance(part, Fin):
        if len(sw) == 1 and isinstance(sw[0], Fin) and sw[0].n < part.n:
            return True, ((), (Fin(part.n - sw[0].n),))
        return False, None
    if isinstance(part, Ord):
        b = _word_ordinal(sw)
        if b is None or ordinals.cmp(b, part.alpha) > 0:
            return False, None
        return True, ((), _ord_word(left_subtract(b, part.alpha)))
    if isinstance(part, Rev) and isinstance(part.arg, Ord):
        b = _word_rev_ordinal(sw)
        if b is None or ordinals.cmp(b, part.arg.alpha) > 0:
            return False, None
        return True, (_rev_word(left_subtract(b, part.arg.alpha)), ())
    if isinstance(part, Eta):
        table = {
            (Fin(1),): ((ETA,), (ETA,)),
            (ETA,): ((), (Fin(1), ETA)),
            (Fin(1), ETA): ((ETA,), ()),
            (ETA, Fin(1)): ((), (ETA,)),
            (Fin(1), ETA, Fin(1)): ((ETA,), (ETA,)),
        }
        hit = table.get(sw)
        return (True, hit) if hit is not None else (False, None)
    if isinstance(part, Shuffle):
        return _host_shuffle(sw, part)
    if isinstance(part, IntervalShuffle):
        return _host_ishuffle(sw, part)
    return None, None  # opaque part


def _host_shuffle(sw: Word, part: Shuffle) -> HostAnswer:
    s = part.sizes

    def block_left(a: int) -> Optional[Word]:
        n = _least_geq(s, a)
        if n is None:
            return None
        return (part, Fin(n - a)) if n > a else (part,)

    def block_right(b: int) -> Optional[Word]:
        n = _least_geq(s, b)
        if n is None:
            return None
        return (Fin(n - b), part) if n > b else (part,)

    if len(sw) == 1 and isinstance(sw[0], Fin):
        right = block_right(sw[0].n)
        if right is None:
            return False, None
        return True, ((part,), right)
    if len(sw) == 2 and isinstance(sw[0], Fin) and sw[1] == part:
        left = block_left(sw[0].n)
        return (True, (left, ())) if left is not None else (False, None)
    if len(sw) == 2 and sw[0] == part and isinstance(sw[1], Fin):
        right = block_right(sw[1].n)
        return (True, ((), right)) if right is not None else (False, None)
    if (
        len(sw) == 3
        and isinstance(sw[0], Fin)
        and sw[1] == part
        and isinstance(sw[2], Fin)
    ):
        left = block_left(sw[0].n)
        right = block_right(sw[2].n)
        if left is None or right is None:
            return False, None
        return True, (left, right)
    return False, None


def _host_ishuffle(sw: Word, part: IntervalShuffle) -> HostAnswer:
    if len(sw) == 1 and isinstance(sw[0], Fin):
        j = sw[0].n
        for k in range(j - 1, j + 4096):
            q = rat_of_index(k)
            if _is_block(part, q):
                sz = k + 1
                rest: Word = (Fin(sz - j),) if sz > j else ()
                return True, (
                    (IntervalShuffle(part.lo, q),),
                    rest + (IntervalShuffle(q, part.hi),),
                )
        return True, None  # a large enough block exists, index scan gave up
    core = [p for p in sw if isinstance(p, IntervalShuffle)]
    if len(core) != 1:
        return False, None
    mid = core[0]
    idx = sw.index(mid)
    head, tail = sw[:idx], sw[idx + 1 :]
    if len(head) > 1 or len(tail) > 1:
        return False, None
    if head and not isinstance(head[0], Fin):
        return False, None
    if tail and not isinstance(tail[0], Fin):
        return False, None
    if part.lo is not None and (mid.lo is None or mid.lo < part.lo):
        return False, None
    if part.hi is not None and (mid.hi is None or part.hi < mid.hi):
        return False, None
    lflank: Word = ()
    rflank: Word = ()
    if head:
        q1 = mid.lo
        if q1 is None or not _is_block(part, q1):
            return False, None
        sz = index_of_rat(q1) + 1
        a = head[0].n
        if a > sz:
            return False, None
        lflank = (IntervalShuffle(part.lo, q1),)
        if sz > a:
            lflank = lflank + (Fin(sz - a),)
    elif mid.lo != part.lo:
        lflank = (IntervalShuffle(part.lo, mid.lo),)
    if tail:
        q2 = mid.hi
        if q2 is None or not _is_block(part, q2):
            return False, None
        sz = index_of_rat(q2) + 1
        b = tail[0].n
        if b > sz:
            return False, None
        rflank = (IntervalShuffle(q2, part.hi),)
        if sz > b:
            rflank = (Fin(sz - b),) + rflank
    elif mid.hi != part.hi:
        rflank = (IntervalShuffle(mid.hi, part.hi),)
    return True, (lflank, rflank)


def _host_zprod(sw: Word, g: Ordinal, body: Term, pool: Pool, depth: int) -> Optional[bool]:
    """Convex hosting of sw inside Z^g * body, viewed as zeta layers over
    the peel Z^d * body where 1 + d = g."""
    if len(sw) == 1:
        p = sw[0]
        if isinstance(p, Fin):
            return True
        zf = _zfactor(p)
        if zf is None:
            if p == Ord(_W) or p == Rev(Ord(_W)):
                return True
            if part_supported(p):
                return False  # no other rigid atom survives inside a z stack
            return None
        h, y = zf
        c = ordinals.cmp(h, g)
        if c > 0:
            return False  # more z layers than the stack offers
        if c == 0:
            if y == body:
                return True
            return _rec_cvx(canon_word(y), canon_word(body), depth)
        return _rec_cvx(canon_word(y), _pc_zlayer(left_subtract(h, g), body), depth)
    lflag = sw[0] == Ord(_W)
    rflag = sw[-1] == Rev(Ord(_W))
    core = sw[1 if lflag else 0 : len(sw) - 1 if rflag else len(sw)]
    peel = _pc_zlayer(left_subtract(_ONE, g), body)
    if not core:
        # the word is w + w*: one cut inside each of two adjacent copies
        return _rec_cvx((Fin(2),), peel, depth)
    probe: List[Term] = [Fin(1)] if lflag else []
    for p in core:
        zf = _zfactor(p)
        if zf is None:
            return False if part_supported(p) else None
        h, y = zf
        if ordinals.cmp(h, _ONE) < 0:
            return False
        probe.extend(_pc_zlayer(left_subtract(_ONE, h), y))
    if rflag:
        probe.append(Fin(1))
    return _rec_cvx(merge_word(tuple(probe)), peel, depth)


def _rec_cvx(aw: Word, bw: Word, depth: int) -> Optional[bool]:
    if aw == bw:
        return True
    d = decide("cvx", word_term(aw), word_term(bw), _depth=depth + 1)
    if d.outcome == YES:
        return True
    if d.outcome == NO:
        return False
    return None


# -- hosting search over the whole word --


@dataclass(frozen=True)
class Hosting:
    left: Optional[Word]
    right: Optional[Word]
    note: str


def find_hosting(sw: Word, uw: Word, pool: Pool, depth: int = 0) -> Tuple[Optional[Hosting], bool]:
    """Leftmost hosting of sw as a convex piece of uw, plus a flag telling
    whether the candidate space was exhausted (a miss then refutes)."""
    exhausted = True
    n = len(uw)
    for i in range(n):
        verdict, decomp = _hosted_in(sw, uw[i], pool, depth)
        if verdict is None:
            exhausted = False
        elif verdict:
            if decomp is not None:
                return (
                    Hosting(
                        _join(uw[:i], decomp[0]),
                        _join(decomp[1], uw[i + 1 :]),
                        "inside part %d" % i,
                    ),
                    exhausted,
                )
            return Hosting(None, None, "inside part %d by stack rules" % i), exhausted
    for i in range(n - 1):
        fopts = None
        for j in range(i + 1, n):
            mids = uw[i + 1 : j]
            if not word_supported(mids):
                continue
            if fopts is None:
                fo, fc = finals_enum(uw[i], pool, depth)
                if not fc:
                    exhausted = False
                fopts = fo + [((uw[i],), False, ())]
            io, ic = initials_enum(uw[j], pool, depth)
            if not ic:
                exhausted = False
            iopts = io + [((uw[j],), False, ())]
            for f, _, cf in fopts:
                fm = _join(f, mids)
                for ii, _, ci in iopts:
                    if _join(fm, ii) == sw:
                        return (
                            Hosting(
                                _join(uw[:i], cf),
                                _join(ci, uw[j + 1 :]),
                                "parts %d..%d" % (i, j),
                            ),
                            exhausted,
                        )
    return None, exhausted


# -- decisions --

_DECIDED: Dict[Tuple[str, Term, Term], Decision] = {}


def decide(rel: str, t: Term, u: Term, _depth: int = 0) -> Decision:
    """Decide rel in {iso, embed, cvx, bicvx} between t and u.

    yes and no come with certificates; unknown is returned whenever the
    fragment rules run out, never a guess.
    """
    if rel not in ("iso", "embed", "cvx", "bicvx"):
        raise ValueError("unknown relation %r" % rel)
    t = normalize(t)
    u = normalize(u)
    key = (rel, t, u)
    hit = _DECIDED.get(key)
    if hit is not None:
        return hit
    if _depth > _DEPTH_CAP:
        return Decision(rel, t, u, UNKNOWN, rule_trace=("depth cap",))
    if rel == "iso":
        d = _decide_iso(t, u)
    elif rel == "cvx":
        d = _decide_cvx(t, u, _depth)
    elif rel == "bicvx":
        d = _decide_bicvx(t, u, _depth)
    else:
        d = _decide_embed(t, u, _depth)
    if d.outcome != UNKNOWN:
        _DECIDED[key] = d
    return d


def _decide_iso(t: Term, u: Term) -> Decision:
    tw, uw = canon_word(t), canon_word(u)
    if tw == uw:
        return Decision(
            "iso", t, u, YES, witness=Witness("iso", rule_trace=("equal canonical words",))
        )
    if word_supported(tw) and word_supported(uw):
        return Decision(
            "iso",
            t,
            u,
            NO,
            refutation=Refutation(
                "CanonicalWordsDiffer",
                "%s versus %s" % (format_word(tw), format_word(uw)),
            ),
        )
    return Decision("iso", t, u, UNKNOWN, rule_trace=("word outside fragment",))


def _decide_cvx(t: Term, u: Term, depth: int) -> Decision:
    tw, uw = canon_word(t), canon_word(u)
    if tw == uw:
        return Decision(
            "cvx", t, u, YES, witness=Witness("iso", rule_trace=("equal canonical words",))
        )
    exhausted = False
    if word_supported(tw) and word_supported(uw):
        pool = build_pool(tw, uw)
        host, exhausted = find_hosting(tw, uw, pool, depth)
        if host is not None:
            if host.left is not None or host.right is not None:
                return Decision(
                    "cvx",
                    t,
                    u,
                    YES,
                    witness=Witness(
                        "convex-embed",
                        left=word_term(host.left) if host.left else None,
                        right=word_term(host.right) if host.right else None,
                        decomposed=True,
                        rule_trace=(host.note,),
                    ),
                )
            return Decision(
                "cvx",
                t,
                u,
                YES,
                witness=Witness("convex-embed", rule_trace=(host.note,)),
            )
    skel = None
    if depth < 6:
        skel = lambda a, b: decide("cvx", a, b, _depth=depth + 1).outcome
    try:
        ref = refute_cvx(t, u, skel_decider=skel)
    except UnsupportedTerm:
        ref = None
    if ref is not None:
        return Decision("cvx", t, u, NO, refutation=ref)
    if exhausted:
        return Decision(
            "cvx",
            t,
            u,
            NO,
            refutation=Refutation(
                "NoConvexHosting",
                "all candidate pieces of %s enumerated; none matches %s"
                % (format_word(uw), format_word(tw)),
            ),
        )
    return Decision("cvx", t, u, UNKNOWN)


def _decide_bicvx(t: Term, u: Term, depth: int) -> Decision:
    d1 = _decide_cvx(t, u, depth)
    d2 = _decide_cvx(u, t, depth)
    if d1.outcome == YES and d2.outcome == YES:
        trace = tuple("forward: " + s for s in d1.witness.rule_trace) + tuple(
            "backward: " + s for s in d2.witness.rule_trace
        )
        return Decision(
            "bicvx", t, u, YES, witness=Witness("convex-embed", rule_trace=trace)
        )
    if d1.outcome == NO:
        return Decision("bicvx", t, u, NO, refutation=d1.refutation)
    if d2.outcome == NO:
        ref = d2.refutation or Refutation("ReverseDirectionFails", "")
        return Decision(
            "bicvx",
            t,
            u,
            NO,
            refutation=Refutation(ref.reason, "reverse direction: " + ref.detail),
        )
    return Decision("bicvx", t, u, UNKNOWN)


def _has_dense_part(w: Word) -> bool:
    for p in w:
        if isinstance(p, (Eta, Shuffle, IntervalShuffle)):
            return True
        zf = _zfactor(p)
        if zf is not None and isinstance(zf[1], (Eta, Shuffle, IntervalShuffle)):
            return True
    return False


def _decide_embed(t: Term, u: Term, depth: int) -> Decision:
    tw, uw = canon_word(t), canon_word(u)
    if tw == uw:
        return Decision(
            "embed", t, u, YES, witness=Witness("iso", rule_trace=("equal canonical words",))
        )
    if _has_dense_part(uw):
        return Decision(
            "embed",
            t,
            u,
            YES,
            witness=Witness(
                "embed",
                rule_trace=(
                    "target has a dense interval, which hosts every countable order",
                ),
            ),
        )
    c = _decide_cvx(t, u, depth + 1)
    if c.outcome == YES:
        trace = ("via convex embedding",)
        if c.witness is not None:
            trace = trace + c.witness.rule_trace
        return Decision("embed", t, u, YES, witness=Witness("embed", rule_trace=trace))
    if word_supported(tw) and word_supported(uw):
        if _has_dense_part(tw):
            return Decision(
                "embed",
                t,
                u,
                NO,
                refutation=Refutation(
                    "DenseIntoScattered",
                    "the source has a dense interval and the target is scattered",
                ),
            )
        a, b = _word_ordinal(tw), _word_ordinal(uw)
        if a is not None and b is not None:
            if ordinals.cmp(a, b) > 0:
                return Decision(
                    "embed",
                    t,
                    u,
                    NO,
                    refutation=Refutation(
                        "OrdinalTooLarge",
                        "a well order only embeds into one of at least its type",
                    ),
                )
            return Decision(
                "embed",
                t,
                u,
                YES,
                witness=Witness("embed", rule_trace=("ordinal comparison",)),
            )
        ar, br = _word_rev_ordinal(tw), _word_rev_ordinal(uw)
        if ar is not None and br is not None:
            if ordinals.cmp(ar, br) > 0:
                return Decision(
                    "embed",
                    t,
                    u,
                    NO,
                    refutation=Refutation(
                        "OrdinalTooLarge", "mirrored well order comparison fails"
                    ),
                )
            return Decision(
                "embed",
                t,
                u,
                YES,
                witness=Witness("embed", rule_trace=("mirrored ordinal comparison",)),
            )
        if _word_ordinal(uw) is not None and _word_ordinal(tw) is None:
            # every supported non-well-ordered word has a part containing w*
            return Decision(
                "embed",
                t,
                u,
                NO,
                refutation=Refutation(
                    "DescendingIntoWellOrder",
                    "the source has an infinite descending suborder",
                ),
            )
        if _word_rev_ordinal(uw) is not None and _word_rev_ordinal(tw) is None:
            return Decision(
                "embed",
                t,
                u,
                NO,
                refutation=Refutation(
                    "AscendingIntoMirroredWellOrder",
                    "the source has an infinite ascending suborder",
                ),
            )
        if uw == (Zeta(),):
            if tw in ((Ord(ordinals.OMEGA),), (Rev(Ord(ordinals.OMEGA)),)) or (
                len(tw) == 1 and isinstance(tw[0], Fin)
            ):
                return Decision(
                    "embed",
                    t,
                    u,
                    YES,
                    witness=Witness("embed", rule_trace=("realized as a set of integers",)),
                )
            return Decision(
                "embed",
                t,
                u,
                NO,
                refutation=Refutation(
                    "NotAnIntegerSuborder",
                    "the infinite suborders of the integer line are w, w*, and"
                    " the whole line",
                ),
            )
        if len(tw) == 1 and isinstance(tw[0], Fin):
            if any(not isinstance(p, Fin) for p in uw) or (
                isinstance(uw[0], Fin) and uw[0].n >= tw[0].n
            ):
                return Decision(
                    "embed",
                    t,
                    u,
                    YES,
                    witness=Witness(
                        "embed", rule_trace=("finite source, target large enough",)
                    ),
                )
            return Decision(
                "embed",
                t,
                u,
                NO,
                refutation=Refutation("TargetTooSmall", "finite counting"),
            )
    return Decision("embed", t, u, UNKNOWN)


def in_fragment(rel: str, t: Term, u: Term) -> bool:
    """Where a definite answer is promised.  iso: both words supported.
    cvx and bicvx: additionally every z-stack exponent is finite, so the
    piece enumerations are exhaustive.  embed: the handled shapes only."""
    tw, uw = canon_word(t), canon_word(u)
    if not (word_supported(tw) and word_supported(uw)):
        return False
    if rel == "iso":
        return True
    if rel in ("cvx", "bicvx"):
        return _finite_stacks(tw) and _finite_stacks(uw)
    if rel == "embed":
        if _has_dense_part(uw):
            return True
        if _has_dense_part(tw):
            return True
        if _word_ordinal(tw) is not None and _word_ordinal(uw) is not None:
            return True
        if _word_ordinal(uw) is not None or _word_rev_ordinal(uw) is not None:
            return True
        if uw == (Zeta(),):
            return True
        if len(tw) == 1 and isinstance(tw[0], Fin):
            return True
        return False
    return False


def _finite_stacks(w: Word) -> bool:
    for p in w:
        zf = _zfactor(p)
        if zf is not None and not zf[0].is_finite():
            return False
    return True


# -- compressibility --

_LEFT_ONLY = CompressClass("LeftOnly")
_RIGHT_ONLY = CompressClass("RightOnly")
_BI = CompressClass("Bi")
_INCOMPRESSIBLE = CompressClass("Incompressible")
_UNKNOWN_CLASS = CompressClass("Unknown")


def compressibility(t: Term) -> CompressClass:
    """LeftOnly means the order is isomorphic to one of its proper final
    pieces (an initial chunk can be shed) but not to any initial piece."""
    w = canon_word(t)
    if not word_supported(w):
        return _UNKNOWN_CLASS
    pool = build_pool(w)
    left = _self_similar(w, finals_word(w, pool))
    right = _self_similar(w, initials_word(w, pool))
    if left == YES and right == YES:
        return _BI
    if left == YES and right == NO:
        return _LEFT_ONLY
    if left == NO and right == YES:
        return _RIGHT_ONLY
    if left == NO and right == NO:
        return _INCOMPRESSIBLE
    return _UNKNOWN_CLASS


def _self_similar(w: Word, pieces: Tuple[List[Piece], bool]) -> str:
    entries, complete = pieces
    for piece, _, comp in entries:
        if piece == w and comp:
            return YES
    if complete:
        return NO
    # the only enumeration gaps come from deep z stacks; a pure power has
    # no proper piece of its own type, so pure gaps cannot hide a match
    if all(_pure_or_shallow(p) for p in w):
        return NO
    return UNKNOWN


def _pure_or_shallow(p: Term) -> bool:
    zf = _zfactor(p)
    if zf is None:
        return True
    if zf[0].is_finite():
        return True
    return isinstance(zf[1], Fin) and zf[1].n == 1


# -- interval families --


def infinite_intervals(t: Term, kind: str) -> List[Term]:
    """All infinite interval classes of the requested shape: final means
    final segments with a first point, initial means initial segments with
    a last point, closed means pieces with both endpoints."""
    if kind not in ("final", "initial", "closed"):
        raise ValueError("kind must be final, initial or closed")
    w = canon_word(t)
    if not word_supported(w):
        raise UnsupportedTerm("interval families need a supported word")
    found: List[Word] = []
    if kind == "final":
        for i in range(len(w)):
            unb, fam = _family_final_min(w[i])
            rest = w[i + 1 :]
            if unb and rest:
                if _join((Fin(1),), rest) != _join((Fin(2),), rest):
                    raise NotFinitelyDescribable(format_term(t))
                fam = fam + [(Fin(1),)]
            for f in fam:
                found.append(_join(f, rest))
            if word_has_min((w[i],)):
                found.append(w[i:])
    elif kind == "initial":
        for i in range(len(w)):
            unb, fam = _family_initial_max(w[i])
            head = w[:i]
            if unb and head:
                if _join(head, (Fin(1),)) != _join(head, (Fin(2),)):
                    raise NotFinitelyDescribable(format_term(t))
                fam = fam + [(Fin(1),)]
            for f in fam:
                found.append(_join(head, f))
            if word_has_max((w[i],)):
                found.append(w[: i + 1])
    else:
        for i in range(len(w)):
            for j in range(i, len(w)):
                if i == j:
                    found.extend(_closed_family(w[i]))
                    continue
                mids = w[i + 1 : j]
                for s in _start_options(w, i):
                    for e in _end_options(w, j):
                        found.append(_join(_join(s, mids), e))
    out: List[Word] = []
    for piece in dict.fromkeys(found):
        if not piece:
            continue
        if len(piece) == 1 and isinstance(piece[0], Fin):
            continue  # finite classes are out of scope here
        out.append(piece)
    if len(out) > _FAMILY_CAP:
        raise NotFinitelyDescribable(format_term(t))
    terms = [normalize(word_term(p)) for p in out]
    return sorted(dict.fromkeys(terms), key=format_term)


def _start_options(w: Word, i: int) -> List[Word]:
    unb, fam = _family_final_min(w[i])
    if unb:
        probe = w[i + 1 : i + 2]
        if probe and _join((Fin(1),), probe) != _join((Fin(2),), probe):
            raise NotFinitelyDescribable(format_word(w))
        fam = fam + [(Fin(1),)]
    out = list(fam)
    if word_has_min((w[i],)):
        out.append((w[i],))
    return out


def _end_options(w: Word, j: int) -> List[Word]:
    unb, fam = _family_initial_max(w[j])
    if unb:
        probe = w[j - 1 : j]
        if probe and _join(probe, (Fin(1),)) != _join(probe, (Fin(2),)):
            raise NotFinitelyDescribable(format_word(w))
        fam = fam + [(Fin(1),)]
    out = list(fam)
    if word_has_max((w[j],)):
        out.append((w[j],))
    return out


def _family_final_min(part: Term) -> Tuple[bool, List[Word]]:
    """(finite pieces unbounded, infinite final segments with a first
    point).  Raises when the family is not finitely describable."""
    zf = _zfactor(part)
    if zf is not None:
        peel = _pc_zlayer(left_subtract(_ONE, zf[0]), zf[1])
        fam = [_join((Ord(_W),), _zmul(f)) for f in _strict_finals_family(peel, 0)]
        if word_has_max(peel):
            fam.append((Ord(_W),))
        return False, _cap(fam)
    if isinstance(part, Fin):
        return False, []  # all proper finals finite and bounded
    if isinstance(part, Ord):
        tails = dict.fromkeys(d for d, _ in _ord_cuts(part.alpha))
        return False, _cap([_ord_word(d) for d in tails if not d.is_finite()])
    if isinstance(part, Rev) and isinstance(part.arg, Ord):
        lam = part.arg.alpha
        if ordinals.cmp(lam, ordinals.mul(_W, ordinals.from_int(2))) >= 0:
            raise NotFinitelyDescribable(format_term(part))
        n = lam.finite_part()
        fam = [_rev_word(ordinals.add(_W, ordinals.from_int(k))) for k in range(1, n)]
        return True, fam
    if isinstance(part, Zeta):
        return False, [(Ord(_W),)]
    if isinstance(part, Eta):
        return False, [(Fin(1), ETA)]
    if isinstance(part, Shuffle):
        if not part.sizes.is_finite_set():
            raise NotFinitelyDescribable(format_term(part))
        mx = max(part.sizes.finite_members())
        return False, _cap([(Fin(a), part) for a in range(1, mx + 1)])
    raise NotFinitelyDescribable(format_term(part))


def _family_initial_max(part: Term) -> Tuple[bool, List[Word]]:
    zf = _zfactor(part)
    if zf is not None:
        peel = _pc_zlayer(left_subtract(_ONE, zf[0]), zf[1])
        fam = [_join(_zmul(f), (Rev(Ord(_W)),)) for f in _strict_initials_family(peel, 0)]
        if word_has_min(peel):
            fam.append((Rev(Ord(_W)),))
        return False, _cap(fam)
    if isinstance(part, Fin):
        return False, []
    if isinstance(part, Ord):
        alpha = part.alpha
        if ordinals.cmp(alpha, ordinals.mul(_W, ordinals.from_int(2))) >= 0:
            raise NotFinitelyDescribable(format_term(part))
        n = alpha.finite_part()
        fam = [_ord_word(ordinals.add(_W, ordinals.from_int(k))) for k in range(1, n + 1)]
        return True, fam
    if isinstance(part, Rev) and isinstance(part.arg, Ord):
        tails = dict.fromkeys(d for d, _ in _ord_cuts(part.arg.alpha))
        return False, _cap([_rev_word(d) for d in tails if not d.is_finite()])
    if isinstance(part, Zeta):
        return False, [(Rev(Ord(_W)),)]
    if isinstance(part, Eta):
        return False, [(ETA, Fin(1))]
    if isinstance(part, Shuffle):
        if not part.sizes.is_finite_set():
            raise NotFinitelyDescribable(format_term(part))
        mx = max(part.sizes.finite_members())
        return False, _cap([(part, Fin(b)) for b in range(1, mx + 1)])
    raise NotFinitelyDescribable(format_term(part))


def _closed_family(part: Term) -> List[Word]:
    if isinstance(part, (Fin, Zeta)):
        return []
    if isinstance(part, Ord):
        alpha = part.alpha
        if ordinals.cmp(alpha, ordinals.mul(_W, ordinals.from_int(2))) >= 0:
            raise NotFinitelyDescribable(format_term(part))
        n = alpha.finite_part()
        return [_ord_word(ordinals.add(_W, ordinals.from_int(k))) for k in range(1, n + 1)]
    if isinstance(part, Rev) and isinstance(part.arg, Ord):
        lam = part.arg.alpha
        if ordinals.cmp(lam, ordinals.mul(_W, ordinals.from_int(2))) >= 0:
            raise NotFinitelyDescribable(format_term(part))
        n = lam.finite_part()
        return [_rev_word(ordinals.add(_W, ordinals.from_int(k))) for k in range(1, n + 1)]
    if isinstance(part, Eta):
        return [(Fin(1), ETA, Fin(1))]
    if isinstance(part, Shuffle):
        if not part.sizes.is_finite_set():
            raise NotFinitelyDescribable(format_term(part))
        mx = max(part.sizes.finite_members())
        return _cap(
            [(Fin(a), part, Fin(b)) for a in range(1, mx + 1) for b in range(1, mx + 1)]
        )
    raise NotFinitelyDescribable(format_term(part))


def _strict_finals_family(w: Word, depth: int) -> List[Word]:
    """Every type realizable as a final segment directly above an element."""
    if depth > _ZPROD_DEPTH_CAP:
        raise NotFinitelyDescribable(format_word(w))
    out: List[Word] = []
    for i in range(len(w)):
        rest = w[i + 1 :]
        for f in _strict_finals_part(w[i], depth):
            out.append(_join(f, rest))
    for i in range(1, len(w)):
        if word_has_max(w[:i]):
            out.append(w[i:])
    return _cap(list(dict.fromkeys(out)))


def _strict_finals_part(part: Term, depth: int) -> List[Word]:
    zf = _zfactor(part)
    if zf is not None:
        delta = left_subtract(_ONE, zf[0])
        if not zf[0].is_finite() and ordinals.cmp(delta, zf[0]) == 0:
            raise NotFinitelyDescribable(format_term(part))
        peel = _pc_zlayer(delta, zf[1])
        strict = _strict_finals_family(peel, depth + 1)
        fam = [_join((Ord(_W),), _zmul(f)) for f in strict]
        if word_has_max(peel):
            fam.append((Ord(_W),))
        return _cap(fam)
    if isinstance(part, Fin):
        return [(Fin(j),) for j in range(1, part.n)]
    if isinstance(part, Ord):
        # a tail qualifies when some head realizing it is a successor
        cuts = _ord_cuts(part.alpha)
        fam = []
        for d in dict.fromkeys(dd for dd, _ in cuts):
            if any(d2 == d and word_has_max(_ord_word(g2)) for d2, g2 in cuts):
                fam.append(_ord_word(d))
        return _cap(fam)
    if isinstance(part, Zeta):
        return [(Ord(_W),)]
    if isinstance(part, Eta):
        return [(ETA,)]
    if isinstance(part, Shuffle):
        if not part.sizes.is_finite_set():
            raise NotFinitelyDescribable(format_term(part))
        mx = max(part.sizes.finite_members())
        return _cap([(part,)] + [(Fin(a), part) for a in range(1, mx)])
    raise NotFinitelyDescribable(format_term(part))


def _strict_initials_family(w: Word, depth: int) -> List[Word]:
    if depth > _ZPROD_DEPTH_CAP:
        raise NotFinitelyDescribable(format_word(w))
    out: List[Word] = []
    for i in range(len(w)):
        head = w[:i]
        for f in _strict_initials_part(w[i], depth):
            out.append(_join(head, f))
    for i in range(1, len(w)):
        if word_has_min((w[i],)):
            out.append(w[:i])
    return _cap(list(dict.fromkeys(out)))


def _strict_initials_part(part: Term, depth: int) -> List[Word]:
    zf = _zfactor(part)
    if zf is not None:
        delta = left_subtract(_ONE, zf[0])
        if not zf[0].is_finite() and ordinals.cmp(delta, zf[0]) == 0:
            raise NotFinitelyDescribable(format_term(part))
        peel = _pc_zlayer(delta, zf[1])
        strict = _strict_initials_family(peel, depth + 1)
        fam = [_join(_zmul(f), (Rev(Ord(_W)),)) for f in strict]
        if word_has_min(peel):
            fam.append((Rev(Ord(_W)),))
        return _cap(fam)
    if isinstance(part, Fin):
        return [(Fin(j),) for j in range(1, part.n)]
    if isinstance(part, Ord):
        # every initial segment sits below an element, so the family is
        # all smaller ordinals: never finite for an infinite ordinal
        raise NotFinitelyDescribable(format_term(part))
    if isinstance(part, Rev) and isinstance(part.arg, Ord):
        cuts = _ord_cuts(part.arg.alpha)
        fam = []
        for d in dict.fromkeys(dd for dd, _ in cuts):
            if any(d2 == d and g2.finite_part() > 0 for d2, g2 in cuts):
                fam.append(_rev_word(d))
        return _cap(fam)
    if isinstance(part, Zeta):
        return [(Rev(Ord(_W)),)]
    if isinstance(part, Eta):
        return [(ETA,)]
    if isinstance(part, Shuffle):
        if not part.sizes.is_finite_set():
            raise NotFinitelyDescribable(format_term(part))
        mx = max(part.sizes.finite_members())
        return _cap([(part,)] + [(part, Fin(b)) for b in range(1, mx)])
    raise NotFinitelyDescribable(format_term(part))


def _cap(fam: List[Word]) -> List[Word]:
    if len(fam) > _FAMILY_CAP:
        raise NotFinitelyDescribable("family larger than %d entries" % _FAMILY_CAP)
    return fam


# -- well ordered piece bounds --

Sup = Tuple[Ordinal, bool]  # (sup, attained)


def _sup_add(a: Sup, b: Sup) -> Sup:
    if b[0].is_zero():
        return a
    if a[0].is_zero():
        return b
    if a[1]:
        return (ordinals.add(a[0], b[0]), b[1])
    ts = a[0].terms
    e, c = ts[-1]
    head = Ordinal(ts[:-1] + (((e, c - 1),) if c > 1 else ()))
    if ordinals.cmp(b[0].leading_exponent(), e) >= 0:
        return (ordinals.add(head, b[0]), b[1])
    return (a[0], False)


def _sup_max(a: Sup, b: Sup) -> Sup:
    c = ordinals.cmp(a[0], b[0])
    if c > 0:
        return a
    if c < 0:
        return b
    return (a[0], a[1] or b[1])


def _wo_stats(part: Term) -> Tuple[Sup, Sup, Sup]:
    """(initial, final, interior) sups of well ordered convex pieces."""
    zf = _zfactor(part)
    if zf is not None:
        peel = _pc_zlayer(left_subtract(_ONE, zf[0]), zf[1])
        fin: Sup = (_W, True) if word_has_max(peel) else (_ZERO, True)
        return (_ZERO, True), fin, (_W, True)
    if isinstance(part, Fin):
        v = ordinals.from_int(part.n)
        return (v, True), (v, True), (v, True)
    if isinstance(part, Ord):
        return (part.alpha, True), (part.alpha, True), (part.alpha, True)
    if isinstance(part, Rev) and isinstance(part.arg, Ord):
        fp = ordinals.from_int(part.arg.alpha.finite_part())
        return (fp, True), (_W, False), (_W, False)
    if isinstance(part, Zeta):
        return (_ZERO, True), (_W, True), (_W, True)
    if isinstance(part, Eta):
        return (_ZERO, True), (_ZERO, True), (_ONE, True)
    if isinstance(part, Shuffle):
        if part.sizes.is_finite_set():
            mx = ordinals.from_int(max(part.sizes.finite_members()))
            return (_ZERO, True), (_ZERO, True), (mx, True)
        return (_ZERO, True), (_ZERO, True), (_W, False)
    if isinstance(part, IntervalShuffle):
        return (_ZERO, True), (_ZERO, True), (_W, False)
    raise UnsupportedTerm("no well order profile for %r" % (part,))


def _is_wo_part(p: Term) -> bool:
    return isinstance(p, (Fin, Ord))


def _part_type(p: Term) -> Ordinal:
    return p.alpha if isinstance(p, Ord) else ordinals.from_int(p.n)


def wo_interval_sup(w: Word) -> Sup:
    """Sup of order types of well ordered convex subsets of the word."""
    stats = [_wo_stats(p) for p in w]
    best: Sup = (_ZERO, True)
    for s in stats:
        best = _sup_max(best, s[2])
    n = len(w)
    i = 0
    while i <= n:
        j = i
        while j < n and _is_wo_part(w[j]):
            j += 1
        # a candidate spans the run w[i:j], plus the final piece of the
        # left neighbour and the initial piece of the right neighbour
        if i == j and (i == 0 or i == n):
            i += 1
            continue
        cur: Sup = stats[i - 1][1] if i > 0 else (_ZERO, True)
        for k in range(i, j):
            cur = _sup_add(cur, (_part_type(w[k]), True))
        if j < n:
            cur = _sup_add(cur, stats[j][0])
        best = _sup_max(best, cur)
        i = j + 1
    return best


def word_wo_edges(w: Word) -> Tuple[Sup, Sup]:
    """(initial, final) sups of well ordered end segments of the word."""
    init: Sup = (_ZERO, True)
    for k in range(len(w)):
        if _is_wo_part(w[k]):
            init = _sup_add(init, (_part_type(w[k]), True))
        else:
            init = _sup_add(init, _wo_stats(w[k])[0])
            break
    run: List[Sup] = []
    for k in range(len(w) - 1, -1, -1):
        if _is_wo_part(w[k]):
            run.append((_part_type(w[k]), True))
        else:
            run.append(_wo_stats(w[k])[1])
            break
    fin: Sup = (_ZERO, True)
    for s in reversed(run):
        fin = _sup_add(fin, s)
    return init, fin


def wo_unbounded_witness(t: Term) -> Ordinal:
    """An ordinal a such that Ord(a)+1 has no convex copy in t: the sup of
    well ordered convex pieces, floored at the first infinite ordinal."""
    w = canon_word(t)
    if not word_supported(w):
        raise UnsupportedTerm(format_term(t))
    sup, _ = wo_interval_sup(w)
    if ordinals.cmp(sup, _W) < 0:
        return _W
    return sup


# -- reduction maps --

_ENDS = {
    "phi0": (Fin(1), Fin(1)),
    "phi1": (ETA, Fin(1)),
    "phi2": (Fin(1), ETA),
    "phi3": (ETA, ETA),
}


def reduce_lo(map_id: str, args) -> Term:
    """The literal image of one of the order reduction maps."""
    if map_id == "psi":
        if not isinstance(args, (tuple, list)) or len(args) != 2:
            raise ValueError("psi takes a pair of terms")
        l, lp = args
        return Sum((ZPowOf(Sum((Fin(1), lp))), ETA, ZPowOf(Sum((Fin(1), l)))))
    if map_id not in _ENDS:
        raise ValueError("unknown reduction map %r" % map_id)
    if isinstance(args, (tuple, list)):
        if len(args) != 1:
            raise ValueError("%s takes one term" % map_id)
        args = args[0]
    lo, hi = _ENDS[map_id]
    return Sum((lo, Prod(Zeta(), args), hi))
