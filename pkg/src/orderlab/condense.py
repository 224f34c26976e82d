"""Condensation profiles.

Two points of a linear order fall in the same condensation class when
only finitely many points lie between them.  The classes are finite
runs, copies of omega, reversed omega, or the integers, and the induced
order on the classes is the skeleton.  A profile records the classes in
order, in segment notation, together with the skeleton term.

Convex embeddings interact rigidly with condensation: the preimage of a
class is contained in a class, distances are preserved both ways, and a
class of the source that is not the first or last one must map onto a
class of the target of exactly the same shape.  The refutation rules in
this module exploit that rigidity.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

from . import ordinals
from .ordinals import Ordinal
from .present import index_of_rat, rat_of_index
from .setdesc import SetDesc, from_finite
from .terms import (
    ETA,
    OMEGA,
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
    zpow_normalize,
)


class UnsupportedTerm(Exception):
    """The term lies outside the profiled fragment."""


# class shapes
FIN = "fin"
W = "omega"
WSTAR = "omegastar"
Z = "zeta"


def fin(n: int) -> Tuple:
    return (FIN, n)


SHAPE_W = (W,)
SHAPE_WSTAR = (WSTAR,)
SHAPE_Z = (Z,)


@dataclass(frozen=True)
class RunSeg:
    """A finite run of consecutive classes, listed explicitly."""

    shapes: Tuple[Tuple, ...]


@dataclass(frozen=True)
class OrdSeg:
    """gamma-many omega classes, arranged as the ordinal gamma."""

    gamma: Ordinal


@dataclass(frozen=True)
class OrdStarSeg:
    """gamma-many reversed-omega classes, arranged as reversed gamma."""

    gamma: Ordinal


@dataclass(frozen=True)
class DenseSeg:
    """Densely ordered finite classes without first or last class.

    sizes: the set of class sizes, each size occurring densely.
    once: an interval of rational labels; the class at label q has
          scale*(rank(q)+1) elements and each label occurs exactly once.
    Exactly one of sizes/once is set.
    """

    sizes: Optional[SetDesc] = None
    once: Optional[Tuple[Optional[Fraction], Optional[Fraction]]] = None
    scale: int = 1


@dataclass(frozen=True)
class UniformSeg:
    """Classes of a single infinite shape arranged like a skeleton term."""

    shape: Tuple
    skel: Term


Seg = object


@dataclass(frozen=True)
class CondProfile:
    segments: Tuple[Seg, ...]
    skeleton: Term
    cyclic: bool = False


@dataclass(frozen=True)
class Refutation:
    reason: str
    detail: str


# ---------------------------------------------------------------------------
# building profiles


def _ord_div_omega(alpha: Ordinal) -> Tuple[Ordinal, int]:
    """alpha = omega*gamma + n with n finite; returns (gamma, n)."""
    n = 0
    qterms = []
    for exp, coeff in alpha.terms:
        if exp == ordinals.ZERO:
            n = coeff
        else:
            qexp = ordinals.left_subtract(ordinals.ONE, exp)
            qterms.append((qexp, coeff))
    return Ordinal(tuple(qterms)), n


def _atom_segments(p: Term) -> List[Seg]:
    if isinstance(p, Fin):
        return [RunSeg((fin(p.n),))]
    if isinstance(p, Omega):
        return [OrdSeg(ordinals.ONE)]
    if isinstance(p, OmegaStar):
        return [OrdStarSeg(ordinals.ONE)]
    if isinstance(p, Zeta):
        return [RunSeg((SHAPE_Z,))]
    if isinstance(p, Eta):
        return [DenseSeg(sizes=from_finite([1]))]
    if isinstance(p, Shuffle):
        return [DenseSeg(sizes=p.sizes.canonical())]
    if isinstance(p, IntervalShuffle):
        return [DenseSeg(once=(p.lo, p.hi))]
    if isinstance(p, Ord):
        gamma, n = _ord_div_omega(p.alpha)
        segs: List[Seg] = []
        if gamma != ordinals.ZERO:
            segs.append(OrdSeg(gamma))
        if n:
            segs.append(RunSeg((fin(n),)))
        return segs
    if isinstance(p, Rev):
        inner = _atom_segments(p.arg)
        return [_reverse_seg(s) for s in reversed(inner)]
    if isinstance(p, ZPow):
        delta = ordinals.left_subtract(ordinals.ONE, p.exp)
        return [UniformSeg(SHAPE_Z, normalize(ZPow(delta)))]
    if isinstance(p, ZPowOf):
        resolved = zpow_normalize(p)
        if resolved is None:
            raise UnsupportedTerm("integer power of an undecided exponent order")
        return _segments_of(resolved)
    if isinstance(p, Prod):
        return _prod_segments(p)
    raise UnsupportedTerm(f"no condensation rule for {type(p).__name__}")


def _reverse_seg(s: Seg) -> Seg:
    if isinstance(s, RunSeg):
        return RunSeg(
            tuple(
                (WSTAR,) if sh == SHAPE_W else (W,) if sh == SHAPE_WSTAR else sh
                for sh in reversed(s.shapes)
            )
        )
    if isinstance(s, OrdSeg):
        return OrdStarSeg(s.gamma)
    if isinstance(s, OrdStarSeg):
        return OrdSeg(s.gamma)
    if isinstance(s, DenseSeg):
        return s
    if isinstance(s, UniformSeg):
        if s.shape == SHAPE_Z:
            return UniformSeg(SHAPE_Z, normalize(Rev(s.skel)))
        raise UnsupportedTerm("reversal of a non-symmetric uniform segment")
    raise UnsupportedTerm("reversal of unknown segment")


def _scale_seg(s: Seg, k: int) -> Seg:
    if isinstance(s, RunSeg):
        return RunSeg(
            tuple(fin(sh[1] * k) if sh[0] == FIN else sh for sh in s.shapes)
        )
    if isinstance(s, (OrdSeg, OrdStarSeg, UniformSeg)):
        return s
    if isinstance(s, DenseSeg):
        if s.sizes is not None:
            return DenseSeg(sizes=s.sizes.scale(k))
        return DenseSeg(once=s.once, scale=s.scale * k)
    raise UnsupportedTerm("scaling of unknown segment")


def _prod_segments(p: Term) -> List[Seg]:
    left, right = p.left, p.right
    if isinstance(left, Zeta):
        return [UniformSeg(SHAPE_Z, normalize(right))]
    if isinstance(left, ZPow):
        delta = ordinals.left_subtract(ordinals.ONE, left.exp)
        skel = normalize(Prod(ZPow(delta), right)) if delta != ordinals.ZERO else normalize(right)
        return [UniformSeg(SHAPE_Z, skel)]
    if isinstance(left, Fin):
        inner = _segments_of(right)
        return [_scale_seg(s, left.n) for s in inner]
    raise UnsupportedTerm("product with a non-rigid left factor")


def _segments_of(t: Term) -> List[Seg]:
    t = normalize(t)
    parts = list(t.parts) if isinstance(t, Sum) else [t]
    segs: List[Seg] = []
    for p in parts:
        segs.extend(_atom_segments(p))
    return segs


# ---------------------------------------------------------------------------
# seam merging


def _first_shape(s: Seg) -> Optional[Tuple]:
    if isinstance(s, RunSeg):
        return s.shapes[0]
    if isinstance(s, OrdSeg):
        return SHAPE_W
    if isinstance(s, OrdStarSeg):
        # classes arranged as reversed gamma: a first class exists only
        # when gamma is a successor
        return SHAPE_WSTAR if _is_successor(s.gamma) else None
    if isinstance(s, DenseSeg):
        return None
    if isinstance(s, UniformSeg):
        from .terms import has_min

        return s.shape if has_min(s.skel) else None
    return None


def _last_shape(s: Seg) -> Optional[Tuple]:
    if isinstance(s, RunSeg):
        return s.shapes[-1]
    if isinstance(s, OrdSeg):
        return SHAPE_W if _is_successor(s.gamma) else None
    if isinstance(s, OrdStarSeg):
        return SHAPE_WSTAR
    if isinstance(s, DenseSeg):
        return None
    if isinstance(s, UniformSeg):
        from .terms import has_max

        return s.shape if has_max(s.skel) else None
    return None


def _is_successor(gamma: Ordinal) -> bool:
    return any(exp == ordinals.ZERO for exp, _ in gamma.terms)


def _pred(gamma: Ordinal) -> Ordinal:
    """delta with delta + 1 = gamma; gamma must be a successor."""
    terms = list(gamma.terms)
    exp, coeff = terms[-1]
    assert exp == ordinals.ZERO
    if coeff > 1:
        terms[-1] = (exp, coeff - 1)
    else:
        terms.pop()
    return Ordinal(tuple(terms))


def _drop_last(s: Seg) -> Optional[Seg]:
    if isinstance(s, RunSeg):
        rest = s.shapes[:-1]
        return RunSeg(rest) if rest else None
    if isinstance(s, OrdSeg):
        gamma = _pred(s.gamma)
        return OrdSeg(gamma) if gamma != ordinals.ZERO else None
    if isinstance(s, OrdStarSeg):
        # the last class of reversed gamma corresponds to gamma's first
        gamma = ordinals.left_subtract(ordinals.ONE, s.gamma)
        return OrdStarSeg(gamma) if gamma != ordinals.ZERO else None
    raise UnsupportedTerm("cannot drop the last class of this segment")


def _drop_first(s: Seg) -> Optional[Seg]:
    if isinstance(s, RunSeg):
        rest = s.shapes[1:]
        return RunSeg(rest) if rest else None
    if isinstance(s, OrdStarSeg):
        gamma = _pred(s.gamma)
        return OrdStarSeg(gamma) if gamma != ordinals.ZERO else None
    if isinstance(s, OrdSeg):
        gamma = ordinals.left_subtract(ordinals.ONE, s.gamma)
        return OrdSeg(gamma) if gamma != ordinals.ZERO else None
    raise UnsupportedTerm("cannot drop the first class of this segment")


def _merge_pair(a: Tuple, b: Tuple) -> Optional[Tuple]:
    """Class-level seam rule: what a+b condenses to, if they merge."""
    if a[0] == FIN and b[0] == FIN:
        return fin(a[1] + b[1])
    if a[0] == FIN and b == SHAPE_W:
        return SHAPE_W
    if a == SHAPE_WSTAR and b[0] == FIN:
        return SHAPE_WSTAR
    if a == SHAPE_WSTAR and b == SHAPE_W:
        return SHAPE_Z
    return None


def _merge_seams(segs: List[Seg]) -> List[Seg]:
    segs = [s for s in segs if s is not None]
    i = 0
    while i < len(segs) - 1:
        left, right = segs[i], segs[i + 1]
        if (
            isinstance(left, DenseSeg)
            and isinstance(right, DenseSeg)
            and left == right
            and left.sizes is not None
        ):
            segs[i : i + 2] = [left]
            continue
        a, b = _last_shape(left), _first_shape(right)
        merged = _merge_pair(a, b) if a is not None and b is not None else None
        if merged is None:
            i += 1
            continue
        new_left = _drop_last(left)
        new_right = _drop_first(right)
        repl = [s for s in (new_left, RunSeg((merged,)), new_right) if s is not None]
        segs[i : i + 2] = repl
        i = max(i - 1, 0)
    return segs


def _skeleton(segs: List[Seg]) -> Term:
    parts: List[Term] = []
    for s in segs:
        if isinstance(s, RunSeg):
            parts.append(Fin(len(s.shapes)))
        elif isinstance(s, OrdSeg):
            parts.append(Ord(s.gamma))
        elif isinstance(s, OrdStarSeg):
            parts.append(Rev(Ord(s.gamma)))
        elif isinstance(s, DenseSeg):
            parts.append(ETA)
        elif isinstance(s, UniformSeg):
            parts.append(s.skel)
    if not parts:
        return Fin(1)
    if len(parts) == 1:
        return normalize(parts[0])
    return normalize(Sum(tuple(parts)))


def condense(t: Term) -> CondProfile:
    segs = _merge_seams(_segments_of(t))
    return CondProfile(tuple(segs), _skeleton(segs))


def circ_condense(t: Term) -> CondProfile:
    """Condensation of the circular order C[t]: the ends wrap around."""
    segs = _merge_seams(_segments_of(t))
    # cyclically, the last class meets the first; keep merging until the
    # wrap seam is inert or a single class remains
    while len(segs) >= 2 or (
        len(segs) == 1 and isinstance(segs[0], RunSeg) and len(segs[0].shapes) >= 2
    ):
        last_seg, first_seg = segs[-1], segs[0]
        a, b = _last_shape(last_seg), _first_shape(first_seg)
        if a is None or b is None:
            break
        if len(segs) == 1 and len(first_seg.shapes) == 1:
            break
        merged = _merge_pair(a, b)
        if merged is None:
            break
        if len(segs) == 1:
            run = segs[0]
            segs = [RunSeg((merged,) + run.shapes[1:-1])]
            continue
        new_last = _drop_last(last_seg)
        new_first = _drop_first(first_seg)
        mid = segs[1:-1]
        segs = [RunSeg((merged,))]
        if new_first is not None:
            segs.append(new_first)
        segs.extend(mid)
        if new_last is not None:
            segs.append(new_last)
        # the merged class now heads the list; re-run linear merging
        segs = _merge_seams(segs)
    return CondProfile(tuple(segs), _skeleton(segs), cyclic=True)


# ---------------------------------------------------------------------------
# size queries


class SizeReport:
    """Which finite class sizes occur, and how often."""

    def __init__(self, profile: CondProfile):
        self.dense: List[SetDesc] = []
        self.intervals: List[Tuple[Optional[Fraction], Optional[Fraction], int]] = []
        self.isolated: List[int] = []
        self.has_omega = False
        self.has_omegastar = False
        self.has_zeta = False
        for s in profile.segments:
            if isinstance(s, RunSeg):
                for sh in s.shapes:
                    if sh[0] == FIN:
                        self.isolated.append(sh[1])
                    elif sh == SHAPE_W:
                        self.has_omega = True
                    elif sh == SHAPE_WSTAR:
                        self.has_omegastar = True
                    elif sh == SHAPE_Z:
                        self.has_zeta = True
            elif isinstance(s, OrdSeg):
                self.has_omega = True
            elif isinstance(s, OrdStarSeg):
                self.has_omegastar = True
            elif isinstance(s, DenseSeg):
                if s.sizes is not None:
                    self.dense.append(s.sizes)
                else:
                    self.intervals.append((s.once[0], s.once[1], s.scale))
            elif isinstance(s, UniformSeg):
                if s.shape == SHAPE_Z:
                    self.has_zeta = True

    def _in_interval(self, n: int, lo, hi, scale: int) -> bool:
        if n % scale:
            return False
        m = n // scale
        if m < 1:
            return False
        q = rat_of_index(m - 1)
        return (lo is None or lo < q) and (hi is None or q < hi)

    def has_size(self, n: int) -> bool:
        if n in self.isolated:
            return True
        if any(d.member(n) for d in self.dense):
            return True
        return any(self._in_interval(n, lo, hi, sc) for lo, hi, sc in self.intervals)

    def has_size_densely(self, n: int) -> bool:
        return any(d.member(n) for d in self.dense)

    def has_unbounded_sizes(self) -> bool:
        if self.intervals:
            return True
        return any(d.is_infinite() for d in self.dense)

    def max_size_at_least(self, n: int) -> bool:
        if self.has_unbounded_sizes():
            return True
        if any(m >= n for m in self.isolated):
            return True
        for d in self.dense:
            for m in d.members():
                if m >= n:
                    return True
                if m > 10 ** 9:
                    break
        return False

    def any_infinite(self) -> bool:
        return self.has_omega or self.has_omegastar or self.has_zeta


def _single_class(profile: CondProfile) -> Optional[Tuple]:
    if len(profile.segments) != 1:
        return None
    s = profile.segments[0]
    if isinstance(s, RunSeg) and len(s.shapes) == 1:
        return s.shapes[0]
    if isinstance(s, OrdSeg) and s.gamma == ordinals.ONE:
        return SHAPE_W
    if isinstance(s, OrdStarSeg) and s.gamma == ordinals.ONE:
        return SHAPE_WSTAR
    return None


def _interior_isolated_sizes(profile: CondProfile) -> List[int]:
    """Sizes of explicitly listed finite classes that are neither the
    first nor the last class of the whole order.  In a cyclic profile
    every class counts as interior."""
    out = []
    segs = profile.segments
    for si, s in enumerate(segs):
        if not isinstance(s, RunSeg):
            continue
        for j, sh in enumerate(s.shapes):
            if sh[0] != FIN:
                continue
            if not profile.cyclic:
                if si == 0 and j == 0:
                    continue
                if si == len(segs) - 1 and j == len(s.shapes) - 1:
                    continue
            out.append(sh[1])
    return out


def _dense_size_candidates(report: SizeReport, cap: int = 64) -> List[int]:
    out = []
    for d in report.dense:
        count = 0
        for m in d.members():
            out.append(m)
            count += 1
            if count >= 16 or m > cap:
                break
    for lo, hi, sc in report.intervals:
        found = 0
        for k in range(256):
            q = rat_of_index(k)
            if (lo is None or lo < q) and (hi is None or q < hi):
                out.append(sc * (k + 1))
                found += 1
                if found >= 16:
                    break
    return sorted(set(out))


def refute_cvx(
    t: Term,
    u: Term,
    skel_decider: Optional[Callable[[Term, Term], str]] = None,
) -> Optional[Refutation]:
    """A certificate that t has no convex embedding into u, or None.

    Sound, not complete: a None return decides nothing.
    """
    try:
        pt = condense(t)
        pu = condense(u)
    except UnsupportedTerm:
        return None
    rt, ru = SizeReport(pt), SizeReport(pu)

    for n in _interior_isolated_sizes(pt):
        if not ru.has_size(n):
            return Refutation(
                "MissingClassSize",
                f"an interior condensation class of {n} consecutive points "
                f"must map onto a class of exactly {n} points, and the "
                f"target has none",
            )

    for n in _dense_size_candidates(rt):
        if rt.has_size_densely(n) and not ru.has_size_densely(n):
            if not ru.has_size(n):
                return Refutation(
                    "DenseClassSizeAbsent",
                    f"classes of {n} points occur densely in the source "
                    f"but the target has no class of {n} points",
                )
            return Refutation(
                "DenseClassSizeAbsent",
                f"classes of {n} points occur densely in the source but "
                f"only finitely often in the target",
            )

    for lo, hi, sc in rt.intervals:
        for k in range(128):
            q = rat_of_index(k)
            if (lo is None or lo < q) and (hi is None or q < hi):
                n = sc * (k + 1)
                if not ru.has_size(n):
                    return Refutation(
                        "MissingClassSize",
                        f"the source contains a class of {n} consecutive "
                        f"points inside a dense block family; the target "
                        f"has no class of {n} points",
                    )

    single = _single_class(pt)
    if single is not None:
        ok = False
        if single[0] == FIN:
            ok = ru.max_size_at_least(single[1]) or ru.any_infinite()
        elif single == SHAPE_W:
            ok = ru.has_omega or ru.has_zeta
        elif single == SHAPE_WSTAR:
            ok = ru.has_omegastar or ru.has_zeta
        elif single == SHAPE_Z:
            ok = ru.has_zeta
        if not ok:
            return Refutation(
                "EndpointMismatch",
                "the source condenses to a single class and no class of "
                "the target can host its shape",
            )

    if skel_decider is not None:
        st, su = pt.skeleton, pu.skeleton
        if (st, su) != (normalize(t), normalize(u)):
            if skel_decider(st, su) == "no":
                return Refutation(
                    "SkeletonNotConvexEmbeddable",
                    "a convex embedding would induce a convex embedding of "
                    "the condensation skeletons, and the skeletons admit "
                    "none",
                )
    return None
