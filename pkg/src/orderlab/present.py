"""Computable presentations of order terms on the naturals.

evaluate(t) returns a Presentation whose compare function is a linear order
on codes 0, 1, 2, ... (an initial segment for finite terms).  Codes decode to
structured points (constructor paths with local indices), so certificates can
name elements.

The fixed enumeration of the rationals used by Shuffle and IntervalShuffle is
the signed Stern-Brocot order: index 0 is 0, odd indices walk the positive
tree breadth-first, even indices mirror them negatively.  The block-label
injection f maps the rational with enumeration index k to k+1.  Shuffle
scheduling assigns block sizes by the trailing-right-step count of the tree
path, which makes every chosen size dense in every open interval (each
subtree contains paths with every trailing count).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterator, List, Optional

from . import terms as T
from . import ordinals


# -- Stern-Brocot machinery ----------------------------------------------------


def sb_positive(i: int) -> Fraction:
    """The i-th positive rational in breadth-first Stern-Brocot order."""
    lo, hi = (0, 1), (1, 0)
    node = (1, 1)
    bits = bin(i + 1)[3:]  # drop the leading 1
    for b in bits:
        if b == "0":
            hi = node
        else:
            lo = node
        node = (lo[0] + hi[0], lo[1] + hi[1])
    return Fraction(node[0], node[1])


def sb_positive_index(q: Fraction) -> int:
    if q <= 0:
        raise ValueError("positive rationals only")
    lo, hi = (0, 1), (1, 0)
    node = (1, 1)
    bits = []
    while Fraction(node[0], node[1]) != q:
        if q < Fraction(node[0], node[1]):
            bits.append("0")
            hi = node
        else:
            bits.append("1")
            lo = node
        node = (lo[0] + hi[0], lo[1] + hi[1])
    return int("1" + "".join(bits), 2) - 1


def rat_of_index(k: int) -> Fraction:
    """The fixed enumeration of all rationals."""
    if k == 0:
        return Fraction(0)
    if k % 2 == 1:
        return sb_positive((k - 1) // 2)
    return -sb_positive((k - 2) // 2)


def index_of_rat(q: Fraction) -> int:
    if q == 0:
        return 0
    if q > 0:
        return 2 * sb_positive_index(q) + 1
    return 2 * sb_positive_index(-q) + 2


def block_label(q: Fraction) -> int:
    """The canonical injection f: rationals -> {1, 2, ...}."""
    return index_of_rat(q) + 1


def _trailing_ones(n: int) -> int:
    c = 0
    while n & 1:
        c += 1
        n >>= 1
    return c


def schedule_count(k: int) -> int:
    """Scheduling class of the k-th rational: trailing ones of its heap index.

    Every class is dense in every open interval: any subtree contains, for each
    c, the node reached by one left step then c right steps.
    """
    if k == 0:
        return 0
    i = (k - 1) // 2 if k % 2 == 1 else (k - 2) // 2
    return _trailing_ones(i + 1)


def shuffle_block_size(sizes, k: int) -> int:
    """Block size at the k-th rational for Shuffle(sizes)."""
    c = schedule_count(k)
    members = sizes.first(c + 1)
    if len(members) > c:
        return members[c]
    # finite size set: cycle
    all_members = sizes.finite_members()
    return all_members[c % len(all_members)]


# -- presentations -------------------------------------------------------------


class Presentation:
    """A computable copy of the term's denotation on codes 0, 1, 2, ..."""

    def __init__(self, term: T.Term):
        self.term = term
        self._ev = _build(term)
        self._points: List[object] = []
        self._gen = self._ev.gen()
        self.size: Optional[int] = self._ev.size

    def point(self, i: int):
        while len(self._points) <= i:
            try:
                self._points.append(next(self._gen))
            except StopIteration:
                raise IndexError("code %d out of range (size %s)" % (i, self.size))
        return self._points[i]

    def compare(self, i: int, j: int) -> str:
        c = self._ev.cmp(self.point(i), self.point(j))
        return "lt" if c < 0 else ("gt" if c > 0 else "eq")

    def cmp_points(self, p, q) -> int:
        return self._ev.cmp(p, q)

    def describe(self, i: int) -> str:
        return self._ev.describe(self.point(i))


def evaluate(t: T.Term) -> Presentation:
    return Presentation(T.normalize(t))


class _Ev:
    __slots__ = ("gen", "cmp", "size", "describe")

    def __init__(self, gen, cmp, size, describe):
        self.gen = gen
        self.cmp = cmp
        self.size = size
        self.describe = describe


def _icmp(a, b) -> int:
    return (a > b) - (a < b)


def _build(t: T.Term) -> _Ev:
    if isinstance(t, T.Fin):
        n = t.n
        return _Ev(lambda: iter(range(n)), _icmp, n, str)
    if isinstance(t, T.Omega):
        return _Ev(lambda: itertools.count(), _icmp, None, str)
    if isinstance(t, T.OmegaStar):
        return _Ev(lambda: itertools.count(), lambda a, b: _icmp(b, a), None, lambda p: "-%s" % p)
    if isinstance(t, T.Zeta):
        return _Ev(lambda: _zigzag(), _icmp, None, str)
    if isinstance(t, T.Eta):
        return _Ev(
            lambda: (rat_of_index(k) for k in itertools.count()), _icmp, None, str
        )
    if isinstance(t, T.Sum):
        return _build_sum([_build(p) for p in t.parts])
    if isinstance(t, T.Prod):
        return _build_prod(_build(t.left), _build(t.right))
    if isinstance(t, T.Rev):
        sub = _build(t.arg)
        return _Ev(sub.gen, lambda a, b: sub.cmp(b, a), sub.size, lambda p: "rev:%s" % sub.describe(p))
    if isinstance(t, T.Ord):
        alpha = t.alpha
        if alpha.is_finite():
            n = alpha.finite_value()
            return _Ev(lambda: iter(range(n)), _icmp, n, str)
        return _Ev(
            lambda: ordinals.enumerate_below(alpha),
            ordinals.cmp,
            None,
            ordinals.format_ordinal,
        )
    if isinstance(t, T.Shuffle):
        sizes = t.sizes
        return _Ev(
            lambda: _gen_shuffle(sizes),
            _cmp_block,
            None,
            lambda p: "q=%s#%d" % (p[0], p[1]),
        )
    if isinstance(t, T.IntervalShuffle):
        lo, hi = t.lo, t.hi
        return _Ev(
            lambda: _gen_interval_shuffle(lo, hi),
            _cmp_block,
            None,
            lambda p: "q=%s#%d" % (p[0], p[1]),
        )
    if isinstance(t, T.ZPow):
        return _build_zpow_ordinal(t.exp)
    if isinstance(t, T.ZPowOf):
        return _build_zpow_term(_build(t.arg))
    raise TypeError("cannot evaluate %r" % (t,))


def _zigzag() -> Iterator[int]:
    yield 0
    for n in itertools.count(1):
        yield n
        yield -n


def _cmp_block(a, b) -> int:
    return _icmp((a[0], a[1]), (b[0], b[1]))


def _gen_shuffle(sizes) -> Iterator[tuple]:
    for k in itertools.count():
        q = rat_of_index(k)
        for j in range(shuffle_block_size(sizes, k)):
            yield (q, j)


def _gen_interval_shuffle(lo, hi) -> Iterator[tuple]:
    for k in itertools.count():
        q = rat_of_index(k)
        if (lo is None or lo < q) and (hi is None or q < hi):
            for j in range(k + 1):  # block size = f(q) = k + 1
                yield (q, j)


def _build_sum(subs: List[_Ev]) -> _Ev:
    sizes = [s.size for s in subs]
    total = None
    if all(s is not None for s in sizes):
        total = sum(sizes)

    def gen():
        iters = [s.gen() for s in subs]
        live = set(range(len(subs)))
        while live:
            for i in list(live):
                it = iters[i]
                try:
                    yield (i, next(it))
                except StopIteration:
                    live.discard(i)

    def cmp(a, b):
        if a[0] != b[0]:
            return _icmp(a[0], b[0])
        return subs[a[0]].cmp(a[1], b[1])

    return _Ev(gen, cmp, total, lambda p: "%d:%s" % (p[0], subs[p[0]].describe(p[1])))


def _build_prod(left: _Ev, right: _Ev) -> _Ev:
    size = None
    if left.size is not None and right.size is not None:
        size = left.size * right.size

    def gen():
        lpoints: List[object] = []
        rpoints: List[object] = []
        lgen, rgen = left.gen(), right.gen()
        for d in itertools.count():
            for a in range(d + 1):
                b = d - a
                if left.size is not None and a >= left.size:
                    continue
                if right.size is not None and b >= right.size:
                    continue
                while len(lpoints) <= a:
                    try:
                        lpoints.append(next(lgen))
                    except StopIteration:
                        break
                while len(rpoints) <= b:
                    try:
                        rpoints.append(next(rgen))
                    except StopIteration:
                        break
                if a < len(lpoints) and b < len(rpoints):
                    yield (lpoints[a], rpoints[b])
            if size is not None and d > 2 * size:
                return

    def cmp(a, b):
        # antilexicographic: the right factor indexes the copies
        c = right.cmp(a[1], b[1])
        if c != 0:
            return c
        return left.cmp(a[0], b[0])

    return _Ev(
        gen, cmp, size, lambda p: "(%s,%s)" % (left.describe(p[0]), right.describe(p[1]))
    )


def _build_zpow_ordinal(alpha) -> _Ev:
    exps: List = []
    exp_gen = ordinals.enumerate_below(alpha)

    def ensure(n):
        while len(exps) < n:
            try:
                exps.append(next(exp_gen))
            except StopIteration:
                break

    def gen():
        seen = set()
        for budget in itertools.count(1):
            ensure(budget)
            support_pool = exps[: min(budget, len(exps))]
            for size in range(0, min(budget, len(support_pool)) + 1):
                for support in itertools.combinations(range(len(support_pool)), size):
                    for values in itertools.product(
                        [v for v in range(-budget, budget + 1) if v != 0], repeat=size
                    ):
                        key = tuple(
                            sorted(
                                zip([support_pool[i] for i in support], values),
                                key=lambda ev: _OrdKey(ev[0]),
                                reverse=True,
                            )
                        )
                        if key not in seen:
                            seen.add(key)
                            yield key

    def cmp(f, g):
        fi, gi = 0, 0
        while fi < len(f) or gi < len(g):
            if fi >= len(f):
                e, gv = g[gi][0], g[gi][1]
                return -_icmp(gv, 0)
            if gi >= len(g):
                return _icmp(f[fi][1], 0)
            ef, vf = f[fi]
            eg, vg = g[gi]
            c = ordinals.cmp(ef, eg)
            if c > 0:
                return _icmp(vf, 0)
            if c < 0:
                return -_icmp(vg, 0)
            if vf != vg:
                return _icmp(vf, vg)
            fi += 1
            gi += 1
        return 0

    def describe(f):
        return (
            "{"
            + ",".join("%s:%d" % (ordinals.format_ordinal(e), v) for e, v in f)
            + "}"
        )

    return _Ev(gen, cmp, 1 if alpha.is_zero() else None, describe)


class _OrdKey:
    __slots__ = ("o",)

    def __init__(self, o):
        self.o = o

    def __lt__(self, other):
        return ordinals.cmp(self.o, other.o) < 0


def _build_zpow_term(base: _Ev) -> _Ev:
    def gen():
        pts: List = []
        pt_gen = base.gen()
        seen = set()
        for budget in itertools.count(1):
            while len(pts) < budget:
                try:
                    pts.append(next(pt_gen))
                except StopIteration:
                    break
            pool = pts[: min(budget, len(pts))]
            key_of = cmp_to_key(base.cmp)
            for size in range(0, min(budget, len(pool)) + 1):
                for support in itertools.combinations(range(len(pool)), size):
                    for values in itertools.product(
                        [v for v in range(-budget, budget + 1) if v != 0], repeat=size
                    ):
                        key = tuple(
                            sorted(
                                zip([pool[i] for i in support], values),
                                key=lambda ev: key_of(ev[0]),
                                reverse=True,
                            )
                        )
                        if key not in seen:
                            seen.add(key)
                            yield key

    def cmp(f, g):
        fi, gi = 0, 0
        while fi < len(f) or gi < len(g):
            if fi >= len(f):
                return -_icmp(g[gi][1], 0)
            if gi >= len(g):
                return _icmp(f[fi][1], 0)
            ef, vf = f[fi]
            eg, vg = g[gi]
            c = base.cmp(ef, eg)
            if c > 0:
                return _icmp(vf, 0)
            if c < 0:
                return -_icmp(vg, 0)
            if vf != vg:
                return _icmp(vf, vg)
            fi += 1
            gi += 1
        return 0

    def describe(f):
        return "{" + ",".join("%s:%d" % (base.describe(e), v) for e, v in f) + "}"

    return _Ev(gen, cmp, None, describe)
