"""Symbolic arc and knot descriptors with sound containment rules.

An arc descriptor is a finite word over a small atom alphabet:

* ``TrivialSeg`` is an unknotted segment.
* ``Prime(i)`` is the i-th entry of a fixed registry of pairwise distinct
  prime arcs (documented below as torus-arc parameters).
* ``BSum(S)`` is the infinite ordered sum of the primes indexed by ``S``,
  accumulating at the far endpoint of the segment; with ``repeated=True``
  the single registered prime ``min S`` is summed infinitely often instead.
* ``ISum(S)`` is the same sum accumulating at an interior point, so the
  segment continues trivially past the singular point.
* ``OrderSing(L, P)`` is the arc whose isolated singular points are
  arranged like the linear order ``L``, each carrying a full copy of the
  interior sum over the prime family ``P``.

Knot descriptors are cyclic words of the same atoms, plus a dedicated
``CircSing(c)`` atom for knots whose singular points are arranged like a
circular term; containment between two such knots is delegated to the
circular-order engine.

No topology is computed here.  Every yes/no answer is produced by a named
rule whose hypotheses are checked exactly; when no rule applies the
decision is ``unknown``.  The rule inventory is deliberately one-sided in
places: completeness is claimed only where a rule pair covers both
answers (see the individual rule notes).
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

from . import circular, embed, setdesc, terms
from .setdesc import SetDesc
from .terms import Rev, Term


# ---------------------------------------------------------------------------
# prime alphabet


def prime_label(i: int) -> str:
    """Documented stand-in for the i-th registered prime arc.

    The registry is the family of (2, q) torus arcs with q = 2i + 3 odd,
    which are pairwise distinct primes.  Nothing downstream depends on the
    choice; indices are opaque labels.
    """
    if i < 0:
        raise ValueError("prime index must be nonnegative")
    return "torus(2,%d)" % (2 * i + 3)


# ---------------------------------------------------------------------------
# atoms


@dataclass(frozen=True)
class TrivialSeg:
    def __repr__(self):
        return "TrivialSeg"


@dataclass(frozen=True)
class Prime:
    index: int

    def __repr__(self):
        return "Prime(%d)" % self.index


@dataclass(frozen=True)
class BSum:
    """Sum of registered primes accumulating at the endpoint."""

    indices: SetDesc
    repeated: bool = False

    def __repr__(self):
        flag = ", repeated" if self.repeated else ""
        return "BSum(%r%s)" % (self.indices, flag)


@dataclass(frozen=True)
class ISum:
    """Sum of registered primes accumulating at an interior point."""

    indices: SetDesc

    def __repr__(self):
        return "ISum(%r)" % self.indices


@dataclass(frozen=True)
class OrderSing:
    """One singular point per element of a linear order.

    Each singular point carries an interior sum over the prime family
    ``indices``; the points are spread along the segment in the order
    given by ``order``.
    """

    order: Term
    indices: SetDesc

    def __repr__(self):
        return "OrderSing(%s, %r)" % (embed.format_term(self.order), self.indices)


@dataclass(frozen=True)
class CircSing:
    """Knot atom: singular points arranged like a circular term."""

    circ: "circular.CircTerm"

    def __repr__(self):
        return "CircSing(%s)" % circular.format_circ(self.circ)


Atom = Union[TrivialSeg, Prime, BSum, ISum, OrderSing]

TRIVIAL = TrivialSeg()

_WILD = (BSum, ISum, OrderSing, CircSing)


def _is_wild(atom) -> bool:
    return isinstance(atom, _WILD)


def _check_atom(atom, allow_circ: bool = False) -> None:
    if isinstance(atom, TrivialSeg):
        return
    if isinstance(atom, Prime):
        if atom.index < 0:
            raise ValueError("prime index must be nonnegative")
        return
    if isinstance(atom, BSum):
        if atom.repeated:
            if not atom.indices.is_finite_set() or len(atom.indices.finite_members()) != 1:
                raise ValueError("repeated BSum names exactly one prime")
        elif not atom.indices.is_infinite():
            raise ValueError("BSum needs an infinite index set")
        return
    if isinstance(atom, ISum):
        if not atom.indices.is_infinite():
            raise ValueError("ISum needs an infinite index set")
        return
    if isinstance(atom, OrderSing):
        if not isinstance(atom.order, Term):
            raise TypeError("OrderSing order must be an order term")
        if not atom.indices.is_infinite():
            raise ValueError("OrderSing needs an infinite prime family")
        return
    if allow_circ and isinstance(atom, CircSing):
        if not isinstance(atom.circ, circular.CircTerm):
            raise TypeError("CircSing carries a circular term")
        return
    raise TypeError("not an arc atom: %r" % (atom,))


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class ArcDescriptor:
    atoms: Tuple[Atom, ...]

    def __post_init__(self):
        if not self.atoms:
            raise ValueError("arc descriptor needs at least one atom")
        for a in self.atoms:
            _check_atom(a)

    def __repr__(self):
        return "Arc[%s]" % ", ".join(repr(a) for a in self.atoms)


@dataclass(frozen=True)
class KnotDescriptor:
    """Cyclic word of arc atoms plus a record of how it was built."""

    cyclic: Tuple[Atom, ...]
    origin: Tuple[str, object]

    def __repr__(self):
        return "Knot(%s)[%s]" % (self.origin[0], ", ".join(repr(a) for a in self.cyclic))


@dataclass(frozen=True)
class ArcDecision:
    outcome: str
    rule: str
    evidence: Tuple[str, ...] = field(default_factory=tuple)


def _yes(rule: str, *ev: str) -> ArcDecision:
    return ArcDecision("yes", rule, tuple(ev))


def _no(rule: str, *ev: str) -> ArcDecision:
    return ArcDecision("no", rule, tuple(ev))


def _unknown(*ev: str) -> ArcDecision:
    return ArcDecision("unknown", "none", tuple(ev))


def arc(*atoms: Atom) -> ArcDescriptor:
    return ArcDescriptor(_normal_atoms(atoms))


def _normal_atoms(atoms: Sequence[Atom]) -> Tuple[Atom, ...]:
    # trivial segments are absorbed by any neighbour; a run of nothing
    # but trivial segments collapses to a single one
    rest = tuple(a for a in atoms if not isinstance(a, TrivialSeg))
    if rest:
        return rest
    return (TRIVIAL,)


def normalize_arc(a: ArcDescriptor) -> ArcDescriptor:
    return ArcDescriptor(_normal_atoms(a.atoms))


def arc_sum(parts, limit: str = "none") -> ArcDescriptor:
    """Concatenate descriptors, or form a one-point limit sum.

    ``limit="none"`` takes a nonempty list of descriptors and concatenates
    them.  ``limit="boundary"``/``"interior"`` take a SetDesc of prime
    indices and produce the corresponding single-atom sum.
    """
    if limit == "none":
        if not parts:
            raise ValueError("empty sum")
        atoms: List[Atom] = []
        for p in parts:
            if not isinstance(p, ArcDescriptor):
                raise TypeError("finite sums take arc descriptors")
            atoms.extend(p.atoms)
        return ArcDescriptor(_normal_atoms(atoms))
    if limit in ("boundary", "interior"):
        if isinstance(parts, SetDesc):
            s = parts
        else:
            raise TypeError("limit sums take a SetDesc of prime indices")
        if limit == "boundary":
            return ArcDescriptor((BSum(s),))
        return ArcDescriptor((ISum(s),))
    raise ValueError("limit must be none, interior, or boundary")


# ---------------------------------------------------------------------------
# small structural helpers


def _order_eq(a: Term, b: Term) -> bool:
    na, nb = terms.normalize(a), terms.normalize(b)
    if na == nb:
        return True
    try:
        wa, wb = embed.canon_word(na), embed.canon_word(nb)
    except Exception:
        return False
    if not (embed.word_supported(wa) and embed.word_supported(wb)):
        return False
    return wa == wb


def _atom_eq(x, y) -> bool:
    if type(x) is not type(y):
        return False
    if isinstance(x, (TrivialSeg,)):
        return True
    if isinstance(x, Prime):
        return x.index == y.index
    if isinstance(x, BSum):
        return x.repeated == y.repeated and x.indices.equals(y.indices)
    if isinstance(x, ISum):
        return x.indices.equals(y.indices)
    if isinstance(x, OrderSing):
        return x.indices.equals(y.indices) and _order_eq(x.order, y.order)
    if isinstance(x, CircSing):
        return _order_eq(x.circ.base, y.circ.base)
    return False


def _tame(atoms: Sequence[Atom]) -> bool:
    return not any(_is_wild(a) for a in atoms)


def _primes_of(atoms: Sequence[Atom]) -> Tuple[int, ...]:
    return tuple(a.index for a in atoms if isinstance(a, Prime))


def _subseq(small: Sequence[int], big: Sequence[int]) -> bool:
    it = iter(big)
    return all(any(x == y for y in it) for x in small)


def _ascending_runs(seq: Sequence[int]) -> int:
    """Least number of strictly increasing chunks covering the sequence."""
    if not seq:
        return 0
    runs = 1
    for prev, cur in zip(seq, seq[1:]):
        if cur <= prev:
            runs += 1
    return runs


def _support(atoms: Sequence[Atom]) -> SetDesc:
    """Every prime index that can occur anywhere inside the descriptor."""
    finite: List[int] = []
    acc: Optional[SetDesc] = None
    for a in atoms:
        if isinstance(a, Prime):
            finite.append(a.index)
        elif isinstance(a, (BSum, ISum)):
            acc = a.indices if acc is None else acc.union(a.indices)
        elif isinstance(a, OrderSing):
            acc = a.indices if acc is None else acc.union(a.indices)
        elif isinstance(a, CircSing):
            full = setdesc.naturals_from(0)
            acc = full if acc is None else acc.union(full)
    if finite:
        fs = setdesc.from_finite(finite)
        acc = fs if acc is None else acc.union(fs)
    return acc if acc is not None else setdesc.from_finite([])


def _missing_prime(src: SetDesc, tgt: SetDesc) -> Optional[int]:
    if src.subset(tgt):
        return None
    probe = src.difference(tgt)
    m = probe.min_element()
    return m


def _finite_order_size(t: Term) -> Optional[int]:
    return terms.size_if_finite(terms.normalize(t))


# ---------------------------------------------------------------------------
# single-atom hosting of a tame prime sequence


def _seq_into_atom(seq: Tuple[int, ...], atom) -> bool:
    """Can the prime word ``seq`` sit inside one copy of ``atom``?"""
    if not seq:
        return True
    if isinstance(atom, TrivialSeg):
        return False
    if isinstance(atom, Prime):
        return seq == (atom.index,)
    if isinstance(atom, BSum) or isinstance(atom, ISum):
        s = atom.indices
        if isinstance(atom, BSum) and atom.repeated:
            k = s.min_element()
            return all(p == k for p in seq)
        # the sum lists each prime once, in increasing index order
        if any(not s.member(p) for p in seq):
            return False
        return all(a < b for a, b in zip(seq, seq[1:]))
    if isinstance(atom, OrderSing):
        if any(not atom.indices.member(p) for p in seq):
            return False
        n = _finite_order_size(atom.order)
        if n is None:
            # infinitely many singular points give room for any finite
            # number of increasing chunks
            return True
        return _ascending_runs(seq) <= n
    return False


# ---------------------------------------------------------------------------
# single wild atom versus single wild atom


def _atom_subarc(x, y) -> ArcDecision:
    """Containment of one wild atom in another; total on sum atoms."""
    if isinstance(x, BSum) and isinstance(y, BSum):
        if x.repeated != y.repeated:
            return _no("repeated-prime-family", "one side repeats a single prime")
        if x.repeated:
            if x.indices.equals(y.indices):
                return _yes("repeated-prime-family", "same repeated prime")
            return _no("repeated-prime-family", "distinct repeated primes")
        if x.indices.subset(y.indices):
            return _yes("boundary-sum-subset", "index set contained in host")
        w = _missing_prime(x.indices, y.indices)
        return _no("boundary-sum-subset", "prime %d missing from host" % w)
    if isinstance(x, BSum) and isinstance(y, ISum):
        if x.repeated:
            return _no("repeated-prime-family",
                       "a repeated prime needs infinitely many equal summands")
        if x.indices.subset(y.indices):
            return _yes("sum-limit-side",
                        "endpoint limit precedes interior limit on a common index set")
        w = _missing_prime(x.indices, y.indices)
        return _no("prime-in-family", "prime %d missing from host" % w)
    if isinstance(x, ISum) and isinstance(y, BSum):
        return _no("sum-limit-side",
                   "an interior limit never fits where the segment stops")
    if isinstance(x, ISum) and isinstance(y, ISum):
        if x.indices.subset(y.indices):
            return _yes("interior-sum-subset", "index set contained in host")
        w = _missing_prime(x.indices, y.indices)
        return _no("interior-sum-subset", "prime %d missing from host" % w)
    if isinstance(x, (BSum, ISum)) and isinstance(y, OrderSing):
        if isinstance(x, BSum) and x.repeated:
            return _unknown("repeated prime against a singular family")
        if x.indices.subset(y.indices):
            return _yes("sum-into-singular-family",
                        "each singular point of the host carries the full family")
        w = _missing_prime(x.indices, y.indices)
        return _no("prime-in-family", "prime %d missing from host family" % w)
    if isinstance(x, OrderSing) and isinstance(y, (BSum, ISum)):
        if isinstance(y, BSum):
            return _no("one-sided-limit",
                       "singular-family arcs continue past every singular point")
        n = _finite_order_size(x.order)
        if n == 1:
            if x.indices.subset(y.indices):
                return _yes("sum-into-singular-family",
                            "a one-point family is an interior sum")
            w = _missing_prime(x.indices, y.indices)
            return _no("prime-in-family", "prime %d missing from host" % w)
        return _no("singularity-count", "more singular points than the host has")
    if isinstance(x, OrderSing) and isinstance(y, OrderSing):
        if not x.indices.subset(y.indices):
            w = _missing_prime(x.indices, y.indices)
            return _no("prime-in-family", "prime %d missing from host family" % w)
        if not x.indices.equals(y.indices):
            return _unknown("nested but distinct prime families")
        d = embed.decide("cvx", x.order, y.order)
        if d.outcome == "yes":
            return _yes("singular-family-lift",
                        "index order convex-embeds, lifted through the construction")
        if d.outcome == "no":
            dr = embed.decide("cvx", x.order, Rev(y.order))
            if dr.outcome == "no":
                return _no("extracted-order",
                           "index order fits neither orientation of the host order")
            return _unknown("only one orientation refuted")
        return _unknown("index order comparison undecided")
    return _unknown("no atom rule for %s into %s" % (type(x).__name__, type(y).__name__))


# ---------------------------------------------------------------------------
# germ bookkeeping for refutations


def _germ_compat_generous(x, y) -> bool:
    """Could the singular germ of x conceivably sit inside the germ of y?

    Used only to justify ``no`` answers, so errs on the side of True.
    """
    if isinstance(x, (BSum, ISum)):
        xr = isinstance(x, BSum) and x.repeated
        if isinstance(y, (BSum, ISum)):
            yr = isinstance(y, BSum) and y.repeated
            if xr != yr:
                return False
            if xr:
                return x.indices.equals(y.indices)
            return x.indices.subset_mod_finite(y.indices)
        if isinstance(y, (OrderSing, CircSing)):
            fam = y.indices if isinstance(y, OrderSing) else setdesc.naturals_from(0)
            if xr:
                return x.indices.subset(fam)
            return x.indices.subset_mod_finite(fam)
        return False
    # singular families against anything: assume possible
    return isinstance(y, (OrderSing, CircSing, BSum, ISum))


def _wild_injection(xs: Sequence[Atom], ys: Sequence[Atom]) -> bool:
    """Order-preserving injection with generous germ compatibility."""

    def go(i: int, j: int) -> bool:
        if i == len(xs):
            return True
        if len(xs) - i > len(ys) - j:
            return False
        if _germ_compat_generous(xs[i], ys[j]) and go(i + 1, j + 1):
            return True
        return go(i, j + 1)

    return go(0, 0)


def _wild_count(atoms: Sequence[Atom]) -> Tuple[int, bool]:
    """(number of singular points, any infinite contribution)."""
    total, inf = 0, False
    for a in atoms:
        if isinstance(a, (BSum, ISum)):
            total += 1
        elif isinstance(a, OrderSing):
            n = _finite_order_size(a.order)
            if n is None:
                inf = True
            else:
                total += n
        elif isinstance(a, CircSing):
            n = terms.size_if_finite(terms.normalize(a.circ.base))
            if n is None:
                inf = True
            else:
                total += n
    return total, inf


# ---------------------------------------------------------------------------
# the subarc decision


def decide_subarc(a: ArcDescriptor, b: ArcDescriptor) -> ArcDecision:
    """Sound containment test between arc descriptors.

    Yes and no answers always name the rule that produced them; unknown
    means no registered rule covers the pair.
    """
    na, nb = _normal_atoms(a.atoms), _normal_atoms(b.atoms)

    if len(na) == len(nb) and all(_atom_eq(x, y) for x, y in zip(na, nb)):
        return _yes("reflexivity", "identical descriptors")

    if na == (TRIVIAL,):
        return _yes("trivial-bottom",
                    "every descriptor arc contains an unknotted segment")
    if nb == (TRIVIAL,):
        return _no("tame-floor", "nothing nontrivial fits in an unknotted segment")

    a_tame, b_tame = _tame(na), _tame(nb)

    if a_tame and b_tame:
        pa, pb = _primes_of(na), _primes_of(nb)
        if _subseq(pa, pb):
            return _yes("prime-window",
                        "prime word is a subword of the host; skipped primes "
                        "are passed through on an unknotted channel")
        return _no("prime-window",
                   "prime decompositions are unique and the word does not fit")

    if not a_tame and b_tame:
        return _no("tame-floor", "tame arcs only contain tame arcs")

    # prime-support refutation works for every remaining shape
    supp_a, supp_b = _support(na), _support(nb)
    w = _missing_prime(supp_a, supp_b)
    if w is not None:
        return _no("prime-in-family",
                   "prime %d occurs on the left but nowhere in the host" % w)

    if a_tame:
        pa = _primes_of(na)
        for atom in nb:
            if _seq_into_atom(pa, atom):
                return _yes("tame-into-sum",
                            "prime word fits inside one summand of the host")
        # maximal runs of tame atoms in the host act as one window
        run: List[int] = []
        for atom in nb + (BSum(setdesc.naturals_from(0)),):
            if _is_wild(atom):
                if run and _subseq(pa, tuple(run)):
                    return _yes("prime-window", "prime word fits a tame stretch")
                run = []
            elif isinstance(atom, Prime):
                run.append(atom.index)
        return _unknown("tame word, no single window fits")

    # both sides wild from here on
    xs = [t for t in na if _is_wild(t)]
    ys = [t for t in nb if _is_wild(t)]

    cx, ix = _wild_count(na)
    cy, iy = _wild_count(nb)
    if not iy and (ix or cx > cy):
        return _no("singularity-count",
                   "left has more singular points than the host")

    if len(na) == 1 and len(nb) == 1:
        return _atom_subarc(na[0], nb[0])

    if len(na) == 1:
        for atom in nb:
            if _is_wild(atom):
                d = _atom_subarc(na[0], atom)
                if d.outcome == "yes":
                    return _yes("summand-restriction",
                                "fits one summand of the host via " + d.rule)
    else:
        d = _window_match(na, nb)
        if d is not None:
            return d

    if not _wild_injection(xs, ys) and not _wild_injection(xs, list(reversed(ys))):
        return _no("germ-arrangement",
                   "singular germs cannot be matched in either orientation")

    return _unknown("no rule fired")


def _pair_match(x, y, interior: bool) -> bool:
    """Match predicate for the piecewise window rule.

    Interior matches must traverse the host atom end to end, which rules
    out hosts with singular points on the exit side.
    """
    if _atom_eq(x, y):
        return True
    if isinstance(x, Prime):
        return _seq_into_atom((x.index,), y) and not (interior and _is_wild(y))
    if not (_is_wild(x) and _is_wild(y)):
        return False
    if interior and isinstance(y, OrderSing):
        return False
    if interior and isinstance(x, OrderSing):
        return False
    return _atom_subarc(x, y).outcome == "yes"


def _window_match(na: Tuple[Atom, ...], nb: Tuple[Atom, ...]) -> Optional[ArcDecision]:
    """Match the whole left word onto a subword of the host.

    Host atoms skipped strictly inside the matched span must be tame,
    because the connecting channel between consecutive images can only
    pass through unknotted or finitely knotted stretches.
    """
    n, m = len(na), len(nb)
    if n > m:
        return None

    def go(i: int, j: int, started: bool) -> bool:
        if i == n:
            return True
        if m - j < n - i:
            return False
        interior = started and i < n - 1
        if _pair_match(na[i], nb[j], interior) and go(i + 1, j + 1, True):
            return True
        if started and _is_wild(nb[j]):
            return False
        return go(i, j + 1, started)

    if go(0, 0, False):
        return _yes("piecewise-window",
                    "atoms match a subword of the host; skipped host atoms "
                    "inside the span are tame")
    return None


# ---------------------------------------------------------------------------
# isolated singular points as an order


def isolated_order(a: ArcDescriptor):
    """Order of the singular markers, left to right; None when tame."""
    parts: List[Term] = []
    for atom in _normal_atoms(a.atoms):
        if isinstance(atom, (BSum, ISum)):
            parts.append(terms.OMEGA)
        elif isinstance(atom, OrderSing):
            parts.append(atom.order)
        elif isinstance(atom, CircSing):
            raise TypeError("circular atoms have no linear marker order")
    if not parts:
        return None
    if len(parts) == 1:
        return terms.normalize(parts[0])
    return terms.normalize(terms.Sum(tuple(parts)))


# ---------------------------------------------------------------------------
# knots


def make_knot(mode: str, arg) -> KnotDescriptor:
    if mode == "circularize":
        if not isinstance(arg, ArcDescriptor):
            raise TypeError("circularize takes an arc descriptor")
        return KnotDescriptor(_normal_atoms(arg.atoms), ("circularize", arg))
    if mode == "knot_of_arc":
        if not isinstance(arg, ArcDescriptor):
            raise TypeError("knot_of_arc takes an arc descriptor")
        closed = arc_sum([arg, ArcDescriptor((TRIVIAL,))], "none")
        return KnotDescriptor(_normal_atoms(closed.atoms), ("knot_of_arc", arg))
    if mode == "f_knot":
        if not isinstance(arg, circular.CircTerm):
            raise TypeError("f_knot takes a circular term")
        if not embed.in_fragment("iso", arg.base, arg.base):
            raise ValueError("f_knot needs a circular term in the fragment")
        return KnotDescriptor((CircSing(arg),), ("f_knot", arg))
    raise ValueError("mode must be circularize, knot_of_arc, or f_knot")


TRIVIAL_KNOT = KnotDescriptor((TRIVIAL,), ("circularize", ArcDescriptor((TRIVIAL,))))


def _knot_normal(cyclic: Sequence[Atom]) -> Tuple[Atom, ...]:
    """Cyclic normal form modulo mutual piecewise containment.

    Tame atoms vanish next to a wild one, since a wild neighbour with a
    tame stretch absorbs them on the circle.  Interior sums lose their
    trailing trivial side when closed up, so they coincide with endpoint
    sums.  Singular families over a finite order split into that many
    one-point families.
    """
    out: List[Atom] = []
    for a in cyclic:
        if isinstance(a, ISum):
            out.append(BSum(a.indices))
        elif isinstance(a, OrderSing):
            n = _finite_order_size(a.order)
            if n is None:
                out.append(a)
            else:
                out.extend(BSum(a.indices) for _ in range(n))
        elif isinstance(a, CircSing):
            n = terms.size_if_finite(terms.normalize(a.circ.base))
            if n is None:
                out.append(a)
            else:
                out.extend(BSum(setdesc.naturals_from(0)) for _ in range(n))
        elif _is_wild(a):
            out.append(a)
    if not out:
        return (TRIVIAL,)
    return tuple(out)


def classify_knot(k: KnotDescriptor) -> str:
    return "tame" if _knot_normal(k.cyclic) == (TRIVIAL,) else "wild"


def _knot_atom_eq(x, y) -> bool:
    """Equality of wild atoms seen from inside a closed curve.

    Endpoint sums agree when their index sets agree up to finitely many
    primes: a finite fringe can always be cut off with the tame part.
    """
    if isinstance(x, BSum) and isinstance(y, BSum):
        if x.repeated != y.repeated:
            return False
        if x.repeated:
            return x.indices.equals(y.indices)
        return x.indices.equals_mod_finite(y.indices)
    return _atom_eq(x, y)


def _cyclic_select(small: Tuple[Atom, ...], big: Tuple[Atom, ...]) -> bool:
    """Does some rotation of ``big`` contain ``small`` as a matching subword?"""
    if len(small) > len(big):
        return False
    for r in range(len(big)):
        rot = big[r:] + big[:r]
        it = iter(rot)
        if all(any(_knot_atom_eq(x, y) for y in it) for x in small):
            return True
    return False


def decide_subknot(k: KnotDescriptor, kp: KnotDescriptor) -> ArcDecision:
    """Piecewise containment between knot descriptors.

    The host is cut into finitely many arcs and a cyclic subword is kept;
    the rules below answer when the kept blocks can be matched exactly.
    """
    if k.origin[0] == "f_knot" and kp.origin[0] == "f_knot":
        d = circular.decide_c("pcvx", k.origin[1], kp.origin[1])
        ev = ("delegated to the circular engine", "outcome " + d.outcome)
        if d.rule_trace:
            ev = ev + tuple(d.rule_trace[:2])
        return ArcDecision(d.outcome, "knot-circular-delegation", ev)

    wa, wb = _knot_normal(k.cyclic), _knot_normal(kp.cyclic)

    if wa == (TRIVIAL,):
        return _yes("knot-tame-bottom",
                    "tame knots sit below everything piecewise")
    if wb == (TRIVIAL,):
        return _no("knot-tame-bottom", "wild knots never fit inside a tame one")

    # closing the torus can add any finite tame content, so only an
    # infinite support difference refutes a knot containment
    supp_a, supp_b = _support(wa), _support(wb)
    if not supp_a.subset_mod_finite(supp_b):
        w = supp_a.difference(supp_b).min_element()
        return _no("prime-in-family",
                   "infinitely many primes (e.g. %d) missing from the host" % w)

    all_bsum = all(isinstance(x, BSum) for x in wa + wb)
    if all_bsum:
        if len(wa) == 1 and len(wb) == 1:
            if _knot_atom_eq(wa[0], wb[0]):
                return _yes("knot-star-family",
                            "index sets agree up to a finite fringe")
            return _no("knot-star-family",
                       "one singular germ each, and they disagree beyond "
                       "any finite fringe")
        if _cyclic_select(wa, wb):
            return _yes("knot-block-selection",
                        "singular germs match a cyclic subword of the host")
        return _no("knot-block-selection",
                   "no cyclic arrangement matches the singular germs")

    ca, ia = _wild_count(wa)
    cb, ib = _wild_count(wb)
    if not ib and (ia or ca > cb):
        return _no("knot-singularity-count",
                   "left has more singular points than the host")

    if _cyclic_select(wa, wb):
        return _yes("knot-block-selection",
                    "atoms match a cyclic subword of the host")

    return _unknown("no knot rule fired")
