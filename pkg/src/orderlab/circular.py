"""Circular orders over finite ternary tables and wrapped order terms.

A linear order wraps into a circle: the ternary relation holds on
(x, y, z) exactly when y lies on the arc travelled from x towards z.
This module validates raw tables, linearizes a circle at a basepoint,
splits intersections of convex subsets, decides the circular relations
(isomorphism, embedding, convex embedding, and the finitely-piecewise
convex relation), composes piecewise witnesses, and carries the two
reduction maps into circles together with the tail-sequence
construction on eventually periodic rational sequences.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from . import embed, ordinals
from .condense import Refutation, UnsupportedTerm
from .embed import (
    NO,
    UNKNOWN,
    YES,
    Pool,
    build_pool,
    canon_word,
    finals_word,
    initials_word,
    format_term,
    merge_word,
    word_supported,
    word_term,
    word_has_min,
    wo_interval_sup,
    word_wo_edges,
)
from .ordinals import Ordinal
from .present import index_of_rat
from .terms import (
    ETA,
    OMEGA,
    OMEGA_STAR,
    ZETA,
    Eta,
    Fin,
    IntervalShuffle,
    Ord,
    Prod,
    Shuffle,
    Sum,
    Term,
    fin,
    normalize,
)

Word = embed.Word


# ---------------------------------------------------------------------------
# finite circles


@dataclass(frozen=True)
class FinCirc:
    """A finite circular order as a full ternary membership table.

    Degenerate triples (two coordinates equal) are members by
    convention, so the table stores every true triple.
    """

    n: int
    triples: frozenset

    def elements(self) -> List[int]:
        return list(range(self.n))

    def triple(self, x: int, y: int, z: int) -> bool:
        return (x, y, z) in self.triples

    def rotate_from(self, b: int) -> Tuple[int, ...]:
        arr = _fin_arrangement(self)
        i = arr.index(b)
        return arr[i:] + arr[:i]

    @staticmethod
    def from_arrangement(seq: Sequence[int]) -> "FinCirc":
        seq = tuple(seq)
        n = len(seq)
        if sorted(seq) != list(range(n)):
            raise ValueError("arrangement must be a permutation of 0..n-1")
        pos = {x: i for i, x in enumerate(seq)}
        trips = set()
        for x in seq:
            for y in seq:
                for z in seq:
                    if x == y or y == z or z == x:
                        trips.add((x, y, z))
                    elif (pos[y] - pos[x]) % n < (pos[z] - pos[x]) % n:
                        trips.add((x, y, z))
        return FinCirc(n, frozenset(trips))

    @staticmethod
    def from_linear(n: int) -> "FinCirc":
        return FinCirc.from_arrangement(range(n))


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    axiom: Optional[str] = None
    triple: Optional[tuple] = None


def validate_circ(rel, n: Optional[int] = None) -> ValidationReport:
    """Check the four circle axioms plus the chained form of transitivity.

    Accepts a FinCirc or a collection of triples (elements inferred when
    n is omitted).  Reports the first violating triple.
    """
    if isinstance(rel, FinCirc):
        trips = rel.triples
        elems = list(range(rel.n))
    else:
        trips = frozenset(tuple(t) for t in rel)
        if n is None:
            seen = sorted({c for t in trips for c in t})
            elems = seen
        else:
            elems = list(range(n))

    def m(x, y, z):
        return (x, y, z) in trips

    for x in elems:
        for y in elems:
            for z in elems:
                degenerate = x == y or y == z or z == x
                if degenerate and not (m(x, y, z) and m(y, x, z)):
                    return ValidationReport(False, "reflexivity", (x, y, z))
                if not degenerate and m(x, y, z) and m(y, x, z):
                    return ValidationReport(False, "antisymmetry", (x, y, z))
                if m(x, y, z) and not m(y, z, x):
                    return ValidationReport(False, "cyclicity", (x, y, z))
                if not m(x, y, z) and not m(y, x, z):
                    return ValidationReport(False, "totality", (x, y, z))
    for x in elems:
        for y in elems:
            for z in elems:
                if not m(x, y, z):
                    continue
                for t in elems:
                    if not (m(x, y, t) or m(t, y, z)):
                        return ValidationReport(False, "transitivity", (x, y, z))
                    # chained form: from (x,y,z) and (x,z,w) conclude (x,y,w)
                    if x != z and m(x, z, t) and not m(x, y, t):
                        return ValidationReport(False, "transitivity", (x, y, t))
    return ValidationReport(True)


def _fin_arrangement(c: FinCirc) -> Tuple[int, ...]:
    """The cyclic arrangement starting from element 0."""
    if c.n <= 1:
        return tuple(range(c.n))
    out: List[int] = []
    for y in range(1, c.n):
        i = 0
        while i < len(out) and c.triple(0, out[i], y):
            i += 1
        out.insert(i, y)
    return (0, *out)


def _fin_convex(c: FinCirc, A) -> bool:
    A = frozenset(A)
    if len(A) <= 1 or len(A) >= c.n:
        return True
    arr = _fin_arrangement(c)
    breaks = 0
    for i, x in enumerate(arr):
        if x in A and arr[(i + 1) % c.n] not in A:
            breaks += 1
    return breaks <= 1


# ---------------------------------------------------------------------------
# symbolic circles


@dataclass(frozen=True)
class CircTerm:
    base: Term


def format_circ(c) -> str:
    if isinstance(c, FinCirc):
        return "C[%d]" % c.n
    return "C[%s]" % format_term(c.base)


@dataclass(frozen=True)
class ConvexPartition:
    """Pieces in cyclic order: index sets for a finite circle, order
    terms for a wrapped term."""

    pieces: tuple


@dataclass(frozen=True)
class Arc:
    """One arc of a segmented circle: label is the piece index it
    carries, or None for a gap."""

    label: Optional[int]
    order: Term


@dataclass(frozen=True)
class CircSeg:
    """A piecewise map between wrapped terms, described by compatible
    segmentations.  Source arcs list the pieces in cyclic order (no
    gaps); target arcs interleave images with unused gaps and must join
    to a rotation of the target base."""

    source: Tuple[Arc, ...]
    target: Tuple[Arc, ...]


@dataclass(frozen=True)
class PcvxWitness:
    source: object
    target: object
    partition: ConvexPartition
    embedding: object  # mapping pairs for finite circles, a CircSeg otherwise
    images: tuple
    rule_trace: Tuple[str, ...] = ()


@dataclass(frozen=True)
class CircDecision:
    relation: str
    left: object
    right: object
    outcome: str
    witness: Optional[PcvxWitness] = None
    refutation: Optional[Refutation] = None
    rule_trace: Tuple[str, ...] = ()


_RELS = ("iso_c", "embed_c", "cvx_c", "pcvx")


# ---------------------------------------------------------------------------
# linearization and intersections


def linearize(C, basepoint):
    """The linear order starting at the basepoint and travelling once
    around the circle.  Finite circles return the element sequence,
    wrapped terms return a literal order term."""
    if isinstance(C, FinCirc):
        arr = _fin_arrangement(C)
        if basepoint not in arr:
            raise ValueError("basepoint is not an element")
        i = arr.index(basepoint)
        return arr[i:] + arr[:i]
    parts = list(C.base.parts) if isinstance(C.base, Sum) else [C.base]
    if isinstance(basepoint, tuple):
        i, off = basepoint
        part = parts[i]
        if not isinstance(part, Fin) or not 0 <= off < part.n:
            raise ValueError("offset basepoints need a finite part")
        out = []
        if part.n - off:
            out.append(Fin(part.n - off))
        out += parts[i + 1 :] + parts[:i]
        if off:
            out.append(Fin(off))
        return Sum(tuple(out)) if len(out) != 1 else out[0]
    i = basepoint
    if not 0 <= i < len(parts):
        raise ValueError("no such part")
    if not word_has_min(canon_word(parts[i])):
        raise ValueError("part %d has no least element to start from" % i)
    out = parts[i:] + parts[:i]
    return Sum(tuple(out)) if len(out) != 1 else out[0]


def decompose_intersection(C: FinCirc, A, B) -> List[frozenset]:
    """The intersection of two convex subsets, as at most two convex
    pieces.  When two pieces come back their union is the whole circle."""
    A, B = frozenset(A), frozenset(B)
    if not _fin_convex(C, A) or not _fin_convex(C, B):
        raise ValueError("inputs must be convex")
    inter = A & B
    if not inter:
        return []
    if A <= B or B <= A or _fin_convex(C, inter):
        return [inter]
    w = min(A - B)
    z = min(B - A)
    a1 = frozenset(x for x in inter if C.triple(w, x, z))
    a2 = inter - a1
    pieces = [p for p in (a1, a2) if p]
    for p in pieces:
        if not _fin_convex(C, p):
            raise RuntimeError("split produced a non-convex piece")
    if len(pieces) == 2 and A | B != frozenset(range(C.n)):
        raise RuntimeError("two pieces returned but the union is a proper subset")
    return sorted(pieces, key=min)


# ---------------------------------------------------------------------------
# finite decisions: exhaustive search over embeddings and partitions


def _fin_embeddings(c: FinCirc, d: FinCirc):
    """Every injection preserving the ternary relation: an image subset
    in cyclic position plus a rotation of the source against it."""
    if c.n == 0:
        yield {}
        return
    ac, ad = _fin_arrangement(c), _fin_arrangement(d)
    for combo in combinations(range(d.n), c.n):
        for rot in range(c.n):
            yield {ac[(j + rot) % c.n]: ad[combo[j]] for j in range(c.n)}


def _fin_pieces(c: FinCirc, d: FinCirc, f: Dict[int, int]) -> List[Tuple[int, ...]]:
    """Minimal convex partition for a fixed embedding: break wherever the
    images of cyclic neighbours are not cyclic neighbours in the target."""
    arr = _fin_arrangement(c)
    pd = {x: i for i, x in enumerate(_fin_arrangement(d))}
    n = c.n
    if n == 0:
        return []
    breaks = [
        i
        for i in range(n)
        if (pd[f[arr[(i + 1) % n]]] - pd[f[arr[i]]]) % d.n != 1
    ]
    if not breaks:
        return [tuple(arr)]
    pieces = []
    for k in range(len(breaks)):
        start = (breaks[k] + 1) % n
        end = breaks[(k + 1) % len(breaks)]
        piece = []
        i = start
        while True:
            piece.append(arr[i])
            if i == end:
                break
            i = (i + 1) % n
        pieces.append(tuple(piece))
    return pieces


def _fin_witness(c, d, f, pieces) -> PcvxWitness:
    return PcvxWitness(
        source=c,
        target=d,
        partition=ConvexPartition(tuple(pieces)),
        embedding=tuple(sorted(f.items())),
        images=tuple(tuple(f[x] for x in p) for p in pieces),
    )


def _decide_fin(rel: str, c: FinCirc, d: FinCirc) -> CircDecision:
    if rel == "iso_c" and c.n != d.n:
        return CircDecision(
            rel, c, d, NO, refutation=Refutation("SizeMismatch", "different cardinalities")
        )
    if c.n > d.n:
        return CircDecision(
            rel, c, d, NO, refutation=Refutation("TargetTooSmall", "source is larger")
        )
    best = None
    for f in _fin_embeddings(c, d):
        pieces = _fin_pieces(c, d, f)
        if rel in ("iso_c", "embed_c"):
            best = (f, pieces)
            break
        if rel == "cvx_c" and len(pieces) > 1:
            continue
        if best is None or len(pieces) < len(best[1]):
            best = (f, pieces)
        if len(best[1]) <= 1:
            break
    if best is None:
        return CircDecision(
            rel,
            c,
            d,
            NO,
            refutation=Refutation("NoConvexRealization", "no one-piece embedding exists"),
        )
    return CircDecision(rel, c, d, YES, witness=_fin_witness(c, d, *best))


# ---------------------------------------------------------------------------
# rotations of a wrapped term


def rotations(w: Word, pool: Pool) -> Tuple[Dict[Word, Tuple[Word, Word]], bool]:
    """All canonical words obtained by cutting the circle once, keyed by
    the rotated word and carrying the cut (initial, final) pair."""
    rots: Dict[Word, Tuple[Word, Word]] = {w: ((), w)}
    if not word_supported(w):
        return rots, False
    fo, fc = finals_word(w, pool)
    for piece, _, comp in fo:
        rots.setdefault(merge_word(piece + comp), (comp, piece))
    return rots, fc


def _rot_order(rots: Dict[Word, Tuple[Word, Word]], first: Word) -> List[Word]:
    """Iteration order over rotation words: the uncut circle first, then
    the rest deterministically."""
    rest = sorted((r for r in rots if r != first), key=embed.format_word)
    return ([first] if first in rots else []) + rest


def _alpha_c(w: Word) -> Ordinal:
    """Upper bound for the types of well ordered arcs of the circle: the
    best interior interval against the wrap of the two edges."""
    wint = wo_interval_sup(w)[0]
    init, fin_ = word_wo_edges(w)
    wrap = ordinals.add(fin_[0], init[0])
    return wint if ordinals.cmp(wint, wrap) >= 0 else wrap


def _indecomposable(a: Ordinal) -> bool:
    return len(a.terms) == 1 and a.terms[0][1] == 1


# ---------------------------------------------------------------------------
# the tail-sequence construction on rational sequences

_NEG_BLOCK = Prod(Sum((IntervalShuffle(None, None), ETA)), OMEGA_STAR)


def _pair_parts(x: Fraction) -> Tuple[Term, Term]:
    return IntervalShuffle(x, x + 1), ETA


def e1_term(prefix: Sequence[Fraction], cycle: Sequence[Fraction]) -> Term:
    """The two-sided block sum coding a rational sequence: a mirrored
    stream of full-line fillers, the labelled prefix blocks, then the
    periodic tail folded into an omega product."""
    cycle = tuple(Fraction(x) for x in cycle)
    prefix = tuple(Fraction(x) for x in prefix)
    if not cycle:
        raise ValueError("the periodic tail must be nonempty")
    parts: List[Term] = [_NEG_BLOCK]
    for x in prefix:
        parts.extend(_pair_parts(x))
    per: List[Term] = []
    for x in cycle:
        per.extend(_pair_parts(x))
    parts.append(Prod(Sum(tuple(per)), OMEGA))
    return Sum(tuple(parts))


def _e1_spec(t: Term) -> Optional[Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]]:
    if not isinstance(t, Sum) or len(t.parts) < 2 or t.parts[0] != _NEG_BLOCK:
        return None

    def read_pairs(parts) -> Optional[List[Fraction]]:
        if len(parts) % 2:
            return None
        vals = []
        for k in range(0, len(parts), 2):
            a, b = parts[k], parts[k + 1]
            if not (
                isinstance(a, IntervalShuffle)
                and a.lo is not None
                and a.hi == a.lo + 1
                and isinstance(b, Eta)
            ):
                return None
            vals.append(a.lo)
        return vals

    last = t.parts[-1]
    if not (isinstance(last, Prod) and last.right == OMEGA and isinstance(last.left, Sum)):
        return None
    cycle = read_pairs(last.left.parts)
    prefix = read_pairs(t.parts[1:-1])
    if cycle is None or prefix is None or not cycle:
        return None
    return tuple(prefix), tuple(cycle)


def _primitive(cycle: Tuple[Fraction, ...]) -> Tuple[Fraction, ...]:
    n = len(cycle)
    for d in range(1, n + 1):
        if n % d == 0 and cycle == cycle[:d] * (n // d):
            return cycle[:d]
    return cycle


def seq_tail_equiv(spec1, spec2) -> bool:
    """Two eventually periodic sequences share a tail exactly when their
    primitive cycles are rotations of each other."""
    c1, c2 = _primitive(tuple(spec1[1])), _primitive(tuple(spec2[1]))
    if len(c1) != len(c2):
        return False
    return any(c2 == c1[r:] + c1[:r] for r in range(len(c1)))


def _e1_value(spec, n: int) -> Fraction:
    prefix, cycle = spec
    if n < len(prefix):
        return prefix[n]
    return cycle[(n - len(prefix)) % len(cycle)]


def _e1_tail_term(spec, start: int) -> Term:
    """The block sum from position start on, with a primitive period."""
    prefix, cycle = spec
    cycle = _primitive(tuple(cycle))
    k = len(prefix)
    parts: List[Term] = []
    for n in range(start, k):
        parts.extend(_pair_parts(_e1_value(spec, n)))
    phase = ((max(start, k) - k) % len(cycle)) if cycle else 0
    rot = cycle[phase:] + cycle[:phase]
    per: List[Term] = []
    for x in rot:
        per.extend(_pair_parts(x))
    parts.append(Prod(Sum(tuple(per)), OMEGA))
    return Sum(tuple(parts)) if len(parts) != 1 else parts[0]


def _e1_shifts(spec_x, spec_y) -> Tuple[int, int]:
    cx = _primitive(tuple(spec_x[1]))
    cy = _primitive(tuple(spec_y[1]))
    for r in range(len(cx)):
        if cy == cx[r:] + cx[:r]:
            return len(spec_x[0]) + r, len(spec_y[0])
    raise ValueError("tails do not match")


def _block_size(q: Fraction) -> int:
    return index_of_rat(q) + 1


def e1_witness(spec_x, spec_y) -> PcvxWitness:
    """The finite partition and shifted block map aligning two sequences
    with a common tail."""
    nbar, mbar = _e1_shifts(spec_x, spec_y)
    pieces: List[Term] = [_NEG_BLOCK]
    for j in range(nbar):
        pieces.append(IntervalShuffle(_e1_value(spec_x, j), _e1_value(spec_x, j) + 1))
        pieces.append(ETA)
    pieces.append(_e1_tail_term(spec_x, nbar))
    src = tuple(Arc(i, p) for i, p in enumerate(pieces))
    tgt: List[Arc] = [Arc(0, _NEG_BLOCK)]
    for j in range(nbar):
        x = _e1_value(spec_x, j)
        tgt.append(Arc(None, Sum((IntervalShuffle(None, x), Fin(_block_size(x))))))
        tgt.append(Arc(2 * j + 1, IntervalShuffle(x, x + 1)))
        tgt.append(Arc(None, Sum((Fin(_block_size(x + 1)), IntervalShuffle(x + 1, None)))))
        tgt.append(Arc(2 * j + 2, ETA))
    mid: List[Term] = []
    for m in range(mbar):
        mid.extend(_pair_parts(_e1_value(spec_y, m)))
    if mid:
        tgt.append(Arc(None, Sum(tuple(mid)) if len(mid) != 1 else mid[0]))
    tgt.append(Arc(2 * nbar + 1, _e1_tail_term(spec_y, mbar)))
    return PcvxWitness(
        source=CircTerm(e1_term(*spec_x)),
        target=CircTerm(e1_term(*spec_y)),
        partition=ConvexPartition(tuple(pieces)),
        embedding=CircSeg(src, tuple(tgt)),
        images=tuple(a.order for a in tgt if a.label is not None),
        rule_trace=("tail shift", "nbar=%d" % nbar, "mbar=%d" % mbar),
    )


# ---------------------------------------------------------------------------
# symbolic decisions


def _term_eq(a: Term, b: Term) -> bool:
    a, b = normalize(a), normalize(b)
    if a == b:
        return True
    wa, wb = canon_word(a), canon_word(b)
    if word_supported(wa) and word_supported(wb):
        return wa == wb
    return False


def _iso_witness(c, d, m: Word, trace) -> PcvxWitness:
    t = word_term(m)
    return PcvxWitness(
        source=c,
        target=d,
        partition=ConvexPartition((t,)),
        embedding=CircSeg((Arc(0, t),), (Arc(0, t),)),
        images=(t,),
        rule_trace=trace,
    )


def _hosting_arcs(piece: Term, host_decision) -> Optional[List[Arc]]:
    w = host_decision.witness
    if w is None:
        return None
    if not w.decomposed:
        # only an exact match leaves nothing over; other undecomposed
        # hostings sit inside a part with complements we cannot name
        if w.kind == "iso":
            return [Arc(0, piece)]
        return None
    arcs: List[Arc] = []
    if w.left is not None:
        arcs.append(Arc(None, w.left))
    arcs.append(Arc(0, piece))
    if w.right is not None:
        arcs.append(Arc(None, w.right))
    return arcs


def _relabel(arcs: List[Arc], label: int) -> List[Arc]:
    return [Arc(label if a.label is not None else None, a.order) for a in arcs]


def _decide_term(rel: str, C: CircTerm, D: CircTerm) -> CircDecision:
    sx = _e1_spec(normalize(C.base))
    sy = _e1_spec(normalize(D.base))
    if sx is not None and sy is not None and rel == "pcvx":
        if seq_tail_equiv(sx, sy):
            w = e1_witness(sx, sy)
            return CircDecision(rel, C, D, YES, witness=w, rule_trace=w.rule_trace)
        return CircDecision(
            rel,
            C,
            D,
            NO,
            refutation=Refutation(
                "TailMismatch",
                "the eventual block-label cycles differ, so no finite"
                " partition can align the two streams",
            ),
        )

    lw, mw = canon_word(C.base), canon_word(D.base)
    pool = build_pool(lw, mw)
    rot_l, cl = rotations(lw, pool)
    rot_m, cm = rotations(mw, pool)
    sup_l, sup_m = word_supported(lw), word_supported(mw)

    if rel == "iso_c":
        if mw in rot_l:
            return CircDecision(
                rel, C, D, YES, witness=_iso_witness(C, D, mw, ("rotation",))
            )
        if lw in rot_m:
            return CircDecision(
                rel, C, D, YES, witness=_iso_witness(C, D, lw, ("rotation",))
            )
        if cl or cm:
            return CircDecision(
                rel,
                C,
                D,
                NO,
                refutation=Refutation(
                    "NoRotation", "no cut of either circle matches the other"
                ),
            )
        return CircDecision(rel, C, D, UNKNOWN)

    # cardinality screens shared by the remaining relations
    lfin = len(lw) == 1 and isinstance(lw[0], Fin)
    mfin = len(mw) == 1 and isinstance(mw[0], Fin)
    if sup_l and sup_m:
        if lfin and mfin:
            fd = _decide_fin(
                rel, FinCirc.from_linear(lw[0].n), FinCirc.from_linear(mw[0].n)
            )
            return CircDecision(
                rel, C, D, fd.outcome, witness=fd.witness, refutation=fd.refutation
            )
        if mfin and not lfin:
            return CircDecision(
                rel,
                C,
                D,
                NO,
                refutation=Refutation("TargetTooSmall", "infinite into finite"),
            )

    if rel == "cvx_c":
        return _decide_cvx_c(C, D, lw, mw, rot_l, rot_m, cl and cm)

    if rel == "embed_c":
        return _decide_embed_c(C, D, rot_l, rot_m, cl and cm, lw, mw)

    return _decide_pcvx(C, D, lw, mw, pool, rot_l, rot_m, cl, cm)


def _decide_cvx_c(C, D, lw, mw, rot_l, rot_m, complete: bool) -> CircDecision:
    rel = "cvx_c"
    all_no = True
    for m in _rot_order(rot_l, lw):
        for r in _rot_order(rot_m, mw):
            d = embed.decide("cvx", word_term(m), word_term(r))
            if d.outcome == YES:
                arcs = _hosting_arcs(word_term(m), d)
                witness = None
                if arcs is not None:
                    witness = PcvxWitness(
                        source=C,
                        target=D,
                        partition=ConvexPartition((word_term(m),)),
                        embedding=CircSeg((Arc(0, word_term(m)),), tuple(arcs)),
                        images=(word_term(m),),
                        rule_trace=("one convex arc",),
                    )
                return CircDecision(rel, C, D, YES, witness=witness)
            if d.outcome != NO:
                all_no = False
    if all_no and complete:
        return CircDecision(
            rel,
            C,
            D,
            NO,
            refutation=Refutation(
                "NoConvexRealization",
                "no cut of the source sits convexly inside any cut of the target",
            ),
        )
    return CircDecision(rel, C, D, UNKNOWN)


def _decide_embed_c(C, D, rot_l, rot_m, complete, lw, mw) -> CircDecision:
    rel = "embed_c"
    if embed._has_dense_part(mw):
        return CircDecision(
            rel,
            C,
            D,
            YES,
            witness=None,
            rule_trace=("target has a dense arc, which hosts every countable circle",),
        )
    if embed._has_dense_part(lw) and word_supported(mw):
        return CircDecision(
            rel,
            C,
            D,
            NO,
            refutation=Refutation(
                "DenseIntoScattered", "a dense circle cannot inject into a scattered one"
            ),
        )
    all_no = True
    for m in _rot_order(rot_l, lw):
        for r in _rot_order(rot_m, mw):
            d = embed.decide("embed", word_term(m), word_term(r))
            if d.outcome == YES:
                return CircDecision(rel, C, D, YES, rule_trace=("linear embedding of a cut",))
            if d.outcome != NO:
                all_no = False
    if all_no and complete:
        return CircDecision(
            rel,
            C,
            D,
            NO,
            refutation=Refutation("NoEmbedding", "every cut pair fails to embed"),
        )
    return CircDecision(rel, C, D, UNKNOWN)


def _fin_into_term(n: int, C, D, mw, rot_m) -> Optional[PcvxWitness]:
    """Place n isolated points on an infinite circle."""
    for r in _rot_order(rot_m, mw):
        d = embed.decide("cvx", fin(n), word_term(r))
        if d.outcome == YES:
            arcs = _hosting_arcs(fin(n), d)
            if arcs is not None:
                return PcvxWitness(
                    source=C,
                    target=D,
                    partition=ConvexPartition((fin(n),)),
                    embedding=CircSeg((Arc(0, fin(n)),), tuple(arcs)),
                    images=(fin(n),),
                    rule_trace=("finite run",),
                )
    # a rotation whose edge absorbs a finite run outright
    for r in _rot_order(rot_m, mw):
        for arcs in (
            (Arc(0, fin(n)), Arc(None, word_term(r))),
            (Arc(None, word_term(r)), Arc(0, fin(n))),
        ):
            joined = merge_word(tuple(x for a in arcs for x in canon_word(a.order)))
            if joined == r:
                return PcvxWitness(
                    source=C,
                    target=D,
                    partition=ConvexPartition((fin(n),)),
                    embedding=CircSeg((Arc(0, fin(n)),), arcs),
                    images=(fin(n),),
                    rule_trace=("finite run at an absorbing edge",),
                )
    single = mw[0] if len(mw) == 1 else None
    tgt: List[Arc] = []
    if isinstance(single, Eta):
        for i in range(n):
            tgt.append(Arc(None, ETA))
            tgt.append(Arc(i, fin(1)))
        tgt.append(Arc(None, ETA))
    elif isinstance(single, Shuffle):
        s = single.sizes.min_element()
        for i in range(n):
            tgt.append(Arc(None, single))
            tgt.append(Arc(i, fin(1)))
            if s > 1:
                tgt.append(Arc(None, fin(s - 1)))
        tgt.append(Arc(None, single))
    else:
        return None
    return PcvxWitness(
        source=C,
        target=D,
        partition=ConvexPartition(tuple(fin(1) for _ in range(n))),
        embedding=CircSeg(tuple(Arc(i, fin(1)) for i in range(n)), tuple(tgt)),
        images=tuple(fin(1) for _ in range(n)),
        rule_trace=("isolated points in a dense arc",),
    )


def _decide_pcvx(C, D, lw, mw, pool, rot_l, rot_m, cl, cm) -> CircDecision:
    rel = "pcvx"
    sup_l, sup_m = word_supported(lw), word_supported(mw)

    if sup_l and sup_m and len(lw) == 1 and isinstance(lw[0], Fin):
        w = _fin_into_term(lw[0].n, C, D, mw, rot_m)
        if w is not None:
            return CircDecision(rel, C, D, YES, witness=w, rule_trace=w.rule_trace)

    one = _decide_cvx_c(C, D, lw, mw, rot_l, rot_m, False)
    if one.outcome == YES:
        return CircDecision(rel, C, D, YES, witness=one.witness, rule_trace=("one piece",))

    # two pieces: a cut of the source against a split of a target cut,
    # pieces listed in rotation order so the source arcs join to a cut
    if sup_l and sup_m:
        fo, _ = finals_word(lw, pool)
        cuts = [(piece, comp) for piece, _, comp in fo if comp and piece]
        for r in _rot_order(rot_m, mw):
            ro, _ = finals_word(r, pool)
            splits = [(comp, piece) for piece, _, comp in ro if comp and piece]
            for b, a in cuts:
                tb, ta = word_term(b), word_term(a)
                for u, v in splits:
                    for swap in (False, True):
                        fu, fv = (tb, ta) if not swap else (ta, tb)
                        du = embed.decide("cvx", fu, word_term(u))
                        if du.outcome != YES:
                            continue
                        dv = embed.decide("cvx", fv, word_term(v))
                        if dv.outcome != YES:
                            continue
                        au = _hosting_arcs(fu, du)
                        av = _hosting_arcs(fv, dv)
                        if au is None or av is None:
                            continue
                        lu, lv = (0, 1) if not swap else (1, 0)
                        arcs = tuple(_relabel(au, lu) + _relabel(av, lv))
                        witness = PcvxWitness(
                            source=C,
                            target=D,
                            partition=ConvexPartition((tb, ta)),
                            embedding=CircSeg((Arc(0, tb), Arc(1, ta)), arcs),
                            images=(tb, ta),
                            rule_trace=("two pieces",),
                        )
                        return CircDecision(
                            rel, C, D, YES, witness=witness, rule_trace=("two pieces",)
                        )

    # refutations
    if sup_l and sup_m:
        if embed._has_dense_part(lw) and not embed._has_dense_part(mw):
            return CircDecision(
                rel,
                C,
                D,
                NO,
                refutation=Refutation(
                    "DenseIntoScattered",
                    "a dense arc of the source has no convex image in a scattered circle",
                ),
            )
        if (
            len(lw) == 1
            and isinstance(lw[0], Ord)
            and _indecomposable(lw[0].alpha)
            and ordinals.cmp(lw[0].alpha, _alpha_c(mw)) > 0
        ):
            return CircDecision(
                rel,
                C,
                D,
                NO,
                refutation=Refutation(
                    "WellOrderedArcTooLong",
                    "any finite partition leaves one arc of the full type, and"
                    " the target has no well ordered arc that long",
                ),
            )
        if (
            len(lw) == 1
            and isinstance(lw[0], Shuffle)
            and len(mw) == 1
            and isinstance(mw[0], Shuffle)
            and not lw[0].sizes.equals(mw[0].sizes)
        ):
            return CircDecision(
                rel,
                C,
                D,
                NO,
                refutation=Refutation(
                    "BlockSpectrumMismatch",
                    "every infinite arc realizes exactly the source block sizes"
                    " densely, and the target arcs realize a different set",
                ),
            )
    return CircDecision(rel, C, D, UNKNOWN)


def decide_c(rel: str, C, D) -> CircDecision:
    """Decide a circular relation between two circles of the same kind."""
    if rel not in _RELS:
        raise ValueError("unknown relation %r" % rel)
    if isinstance(C, FinCirc) and isinstance(D, FinCirc):
        return _decide_fin(rel, C, D)
    if isinstance(C, CircTerm) and isinstance(D, CircTerm):
        return _decide_term(rel, C, D)
    raise TypeError("cannot compare a finite table with a wrapped term")


# ---------------------------------------------------------------------------
# witness validation


def check_witness(w: PcvxWitness) -> Tuple[bool, str]:
    if isinstance(w.source, FinCirc):
        return _check_fin_witness(w)
    return _check_term_witness(w)


def _check_fin_witness(w: PcvxWitness) -> Tuple[bool, str]:
    c, d = w.source, w.target
    f = dict(w.embedding)
    if sorted(f) != c.elements():
        return False, "mapping domain is not the whole source"
    if len(set(f.values())) != len(f):
        return False, "mapping is not injective"
    for x in range(c.n):
        for y in range(c.n):
            for z in range(c.n):
                if c.triple(x, y, z) and not d.triple(f[x], f[y], f[z]):
                    return False, "triple (%d,%d,%d) not preserved" % (x, y, z)
    cover = sorted(x for p in w.partition.pieces for x in p)
    if cover != c.elements():
        return False, "pieces do not partition the source"
    for p in w.partition.pieces:
        if not _fin_convex(c, p):
            return False, "piece %r not convex" % (sorted(p),)
        if not _fin_convex(d, [f[x] for x in p]):
            return False, "image of %r not convex" % (sorted(p),)
    return True, "ok"


def _seg_labels(arcs: Sequence[Arc]) -> List[int]:
    return [a.label for a in arcs if a.label is not None]


def _cyclic_eq(a: List[int], b: List[int]) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    return any(b == a[r:] + a[:r] for r in range(len(a)))


def _check_term_witness(w: PcvxWitness) -> Tuple[bool, str]:
    sx = _e1_spec(normalize(w.source.base))
    sy = _e1_spec(normalize(w.target.base))
    if sx is not None and sy is not None:
        if not seq_tail_equiv(sx, sy):
            return False, "tails do not match"
        expect = e1_witness(sx, sy)
        same = (
            tuple(map(normalize, w.partition.pieces))
            == tuple(map(normalize, expect.partition.pieces))
            and [(a.label, normalize(a.order)) for a in w.embedding.target]
            == [(a.label, normalize(a.order)) for a in expect.embedding.target]
            and [(a.label, normalize(a.order)) for a in w.embedding.source]
            == [(a.label, normalize(a.order)) for a in expect.embedding.source]
        )
        return (same, "ok" if same else "does not replay the tail-shift construction")

    seg = w.embedding
    if not isinstance(seg, CircSeg):
        return False, "no segmentation"
    p = len(w.partition.pieces)
    if _seg_labels(seg.source) != list(range(p)):
        return False, "source arcs must list the pieces once, in order"
    if any(a.label is None for a in seg.source):
        return False, "source arcs may not contain gaps"
    for i, a in enumerate(seg.source):
        if not _term_eq(a.order, w.partition.pieces[i]):
            return False, "source arc %d does not match its piece" % i
    tl = _seg_labels(seg.target)
    if sorted(tl) != list(range(p)):
        return False, "each piece needs exactly one image arc"
    if not _cyclic_eq(tl, list(range(p))):
        return False, "image arcs break the cyclic arrangement"
    by_label = {a.label: a.order for a in seg.target if a.label is not None}
    for i in range(p):
        if not _term_eq(by_label[i], w.partition.pieces[i]):
            return False, "image of piece %d has a different order type" % i
    for base, arcs in ((w.source.base, seg.source), (w.target.base, seg.target)):
        bw = canon_word(base)
        words = [canon_word(a.order) for a in arcs]
        if not word_supported(bw) or any(not word_supported(x) for x in words):
            return False, "outside the checkable fragment"
        joined = merge_word(tuple(x for word in words for x in word))
        pool = build_pool(bw, joined)
        rots, _ = rotations(bw, pool)
        if joined not in rots:
            return False, "arcs do not join to a cut of the base circle"
    return True, "ok"


# ---------------------------------------------------------------------------
# witness composition


def compose_pcvx(w1: PcvxWitness, w2: PcvxWitness) -> PcvxWitness:
    """Chain two piecewise witnesses through a common middle circle,
    refining the partition at the intersections and splitting the at
    most one wrapped overlap into two arcs."""
    ok, why = check_witness(w1)
    if not ok:
        raise ValueError("first witness invalid: " + why)
    ok, why = check_witness(w2)
    if not ok:
        raise ValueError("second witness invalid: " + why)
    if isinstance(w1.source, FinCirc) and isinstance(w2.source, FinCirc):
        if w1.target != w2.source:
            raise ValueError("witnesses do not share the middle circle")
        return _compose_fin(w1, w2)
    if isinstance(w1.source, CircTerm) and isinstance(w2.source, CircTerm):
        if not _term_eq(w1.target.base, w2.source.base):
            raise ValueError("witnesses do not share the middle circle")
        return _compose_term(w1, w2)
    raise TypeError("mismatched witness kinds")


def _compose_fin(w1: PcvxWitness, w2: PcvxWitness) -> PcvxWitness:
    c, d, e = w1.source, w1.target, w2.target
    f1, f2 = dict(w1.embedding), dict(w2.embedding)
    mapping = {x: f2[f1[x]] for x in f1}
    chunks: List[frozenset] = []
    for P in w1.partition.pieces:
        img = frozenset(f1[x] for x in P)
        for Q in w2.partition.pieces:
            inter = img & frozenset(Q)
            if not inter:
                continue
            if _fin_convex(d, inter):
                chunks.append(inter)
            else:
                chunks.extend(decompose_intersection(d, img, frozenset(Q)))
    back = [frozenset(x for x in f1 if f1[x] in ch) for ch in chunks]
    arr = _fin_arrangement(c)
    seen = []
    for x in arr:
        piece = next(p for p in back if x in p)
        if piece not in seen:
            seen.append(piece)
    pieces = tuple(tuple(x for x in arr if x in p) for p in seen)
    out = PcvxWitness(
        source=c,
        target=e,
        partition=ConvexPartition(pieces),
        embedding=tuple(sorted(mapping.items())),
        images=tuple(tuple(mapping[x] for x in p) for p in pieces),
    )
    ok, why = _check_fin_witness(out)
    if not ok:
        raise RuntimeError("composition failed its own validation: " + why)
    return out


def _initial_splits(w: Word, pool: Pool) -> List[Tuple[Word, Word]]:
    """(head, rest) pairs cutting the word once, head nonempty."""
    io, _ = initials_word(w, pool)
    return [(piece, comp) for piece, _, comp in io if piece]


def _refine_walk(
    arcs_a: List[Arc], arcs_b: List[Arc], pool: Pool
) -> Optional[List[Tuple[Optional[int], Optional[int], Word]]]:
    """Walk two segmentations of the same circle from a shared boundary,
    splitting whichever head arc is longer, and return the common
    refinement as (label_a, label_b, word) triples."""
    la = [(a.label, canon_word(a.order)) for a in arcs_a]
    lb = [(b.label, canon_word(b.order)) for b in arcs_b]
    if any(not word_supported(w) for _, w in la + lb):
        return None
    out: List[Tuple[Optional[int], Optional[int], Word]] = []
    ia = ib = 0
    ra: Optional[Word] = None
    rb: Optional[Word] = None
    steps = 0
    while True:
        if ra is None:
            if ia == len(la):
                break
            ra = la[ia][1]
        if rb is None:
            if ib == len(lb):
                break
            rb = lb[ib][1]
        steps += 1
        if steps > 64:
            return None
        if ra == rb:
            out.append((la[ia][0], lb[ib][0], ra))
            ra = rb = None
            ia += 1
            ib += 1
            continue
        matched = False
        for head, rest in _initial_splits(ra, pool):
            if head == rb and rest:
                out.append((la[ia][0], lb[ib][0], rb))
                ra, rb = rest, None
                ib += 1
                matched = True
                break
        if matched:
            continue
        for head, rest in _initial_splits(rb, pool):
            if head == ra and rest:
                out.append((la[ia][0], lb[ib][0], ra))
                rb, ra = rest, None
                ia += 1
                matched = True
                break
        if not matched:
            return None
    if ia != len(la) or ib != len(lb) or ra is not None or rb is not None:
        return None
    return out


def _anchor_rotations(
    arcs: Tuple[Arc, ...], pool: Pool, split: bool
) -> List[List[Arc]]:
    """Candidate walk orders: each cyclic rotation of the arc list, and
    when splitting is allowed, versions cut inside the head arc so the
    walk can start at an interior point of it."""
    arcs = list(arcs)
    n = len(arcs)
    outs: List[List[Arc]] = []
    for k in range(n):
        rot = arcs[k:] + arcs[:k]
        outs.append(rot)
        if not split:
            continue
        head = rot[0]
        hw = canon_word(head.order)
        if not word_supported(hw):
            continue
        fo, _ = finals_word(hw, pool)
        for piece, _, comp in fo:
            if piece and comp:
                outs.append(
                    [Arc(head.label, word_term(piece))]
                    + rot[1:]
                    + [Arc(head.label, word_term(comp))]
                )
    return outs


def _compose_term(w1: PcvxWitness, w2: PcvxWitness) -> PcvxWitness:
    mid_a = w1.embedding.target  # arcs of the middle circle, w1 coordinates
    mid_b = w2.embedding.source  # arcs of the middle circle, w2 coordinates
    words = [canon_word(a.order) for a in tuple(mid_a) + tuple(mid_b)]
    pool = build_pool(*words)
    refined = None
    for cand_b in _anchor_rotations(tuple(mid_b), pool, split=False):
        for cand_a in _anchor_rotations(tuple(mid_a), pool, split=True):
            refined = _refine_walk(cand_a, cand_b, pool)
            if refined is not None:
                break
        if refined is not None:
            break
    if refined is None:
        raise ValueError(
            "witness composition needs a common refinement of the middle"
            " segmentations, and none is representable here"
        )
    # slices of a w1 image always land inside a piece of w2's partition,
    # because the second segmentation covers its whole circle; give each
    # carried slice a fresh piece id in walk order
    new_src: List[Arc] = []
    consumed: Dict[int, List[Tuple[Optional[int], Word]]] = {}
    for a_lab, b_lab, word in refined:
        sid = None
        if a_lab is not None:
            if b_lab is None:
                raise ValueError(
                    "an image arc of the first witness escapes the second"
                )
            sid = len(new_src)
            new_src.append(Arc(sid, word_term(word)))
        if b_lab is not None:
            consumed.setdefault(b_lab, []).append((sid, word))
    if not new_src:
        raise ValueError("nothing survives the composition")

    # rebuild the target segmentation of w2, replacing each image arc by
    # the refined slices it carries; uncarried slices become gaps
    new_tgt: List[Arc] = []
    for arc in w2.embedding.target:
        if arc.label is None:
            new_tgt.append(arc)
            continue
        slices = consumed.get(arc.label)
        if slices is None:
            raise RuntimeError("piece of the second witness was never consumed")
        for sid, word in slices:
            new_tgt.append(Arc(sid, word_term(word)))
    order = _seg_labels(new_tgt)
    if sorted(order) != list(range(len(new_src))):
        raise RuntimeError("composed images do not cover the pieces")
    pieces = tuple(a.order for a in new_src)
    out = PcvxWitness(
        source=w1.source,
        target=w2.target,
        partition=ConvexPartition(pieces),
        embedding=CircSeg(tuple(new_src), tuple(new_tgt)),
        images=tuple(
            next(a.order for a in new_tgt if a.label == i) for i in range(len(pieces))
        ),
        rule_trace=w1.rule_trace + w2.rule_trace + ("composed",),
    )
    ok, why = _check_term_witness(out)
    if not ok:
        if "join" in why or "fragment" in why:
            raise ValueError(
                "witness composition left the representable fragment: " + why
            )
        raise RuntimeError("composition failed its own validation: " + why)
    return out


# ---------------------------------------------------------------------------
# reductions into circles


def reduce_co(map_id: str, args):
    """The literal circular images of the three reduction maps."""
    if map_id == "circ_iso":
        (t,) = args if isinstance(args, tuple) else (args,)
        return CircTerm(Sum((fin(1), Prod(ZETA, t))))
    if map_id == "circ_pcvx":
        (t,) = args if isinstance(args, tuple) else (args,)
        return CircTerm(Prod(Sum((fin(1), Prod(ZETA, t))), OMEGA))
    if map_id == "e1":
        prefix, cycle = args
        return CircTerm(e1_term(prefix, cycle))
    raise ValueError("unknown reduction %r" % map_id)


def circ_unbounded_witness(C: CircTerm) -> Ordinal:
    """An ordinal whose circle admits no piecewise convex embedding into
    C: the next additively indecomposable ordinal past the longest well
    ordered arc."""
    w = canon_word(C.base)
    if not word_supported(w):
        raise UnsupportedTerm(format_term(C.base))
    return ordinals.next_indecomposable(ordinals.add(_alpha_c(w), ordinals.ONE))
