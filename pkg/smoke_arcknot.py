"""Desk checks for the arc/knot calculus."""
import sys

sys.path.insert(0, "src")

from fractions import Fraction

from orderlab import arcknot as ak
from orderlab import circular, setdesc, terms
from orderlab.arcknot import (
    ArcDescriptor, BSum, ISum, OrderSing, Prime, TRIVIAL, TRIVIAL_KNOT,
    TrivialSeg, arc, arc_sum, classify_knot, decide_subarc, decide_subknot,
    isolated_order, make_knot,
)
from orderlab.setdesc import from_finite, from_residues, naturals_from
from orderlab.terms import ETA, OMEGA, Fin, Shuffle, fin

FAIL = 0


def check(name, got, want):
    global FAIL
    ok = got == want
    if not ok:
        FAIL += 1
    print("%-58s %s" % (name, "ok" if ok else "FAIL got=%r want=%r" % (got, want)))


NAT = naturals_from(0)
EVENS = from_residues([0], 2)
ODDS = from_residues([1], 2)
MULT3 = from_residues([0], 3)
S23 = from_finite([2, 3])

# --- construction and normalization ---------------------------------------
check("finite sum concatenates",
      arc_sum([arc(Prime(0)), arc(Prime(1))], "none").atoms,
      (Prime(0), Prime(1)))
check("boundary sum is one atom", arc_sum(NAT, "boundary").atoms, (BSum(NAT),))
check("interior sum is one atom", arc_sum(EVENS, "interior").atoms, (ISum(EVENS),))
check("trivial absorbed", arc(TrivialSeg(), Prime(3)).atoms, (Prime(3),))
check("all trivial collapses", arc(TrivialSeg(), TrivialSeg()).atoms, (TRIVIAL,))
try:
    arc_sum([], "none")
    check("empty sum rejected", "no error", "error")
except ValueError:
    check("empty sum rejected", "error", "error")
try:
    ArcDescriptor((BSum(S23),))
    check("finite BSum rejected", "no error", "error")
except ValueError:
    check("finite BSum rejected", "error", "error")
check("repeated BSum singleton ok",
      ArcDescriptor((BSum(from_finite([4]), repeated=True),)).atoms[0].repeated, True)

# --- prime against sums (membership rule) ----------------------------------
check("prime 2 in BSum(evens)",
      decide_subarc(arc(Prime(2)), arc(BSum(EVENS))).outcome, "yes")
check("prime 3 not in BSum(evens)",
      decide_subarc(arc(Prime(3)), arc(BSum(EVENS))).outcome, "no")
check("prime 2 in ISum(evens)",
      decide_subarc(arc(Prime(2)), arc(ISum(EVENS))).outcome, "yes")
check("prime in singular family",
      decide_subarc(arc(Prime(4)), arc(OrderSing(ETA, EVENS))).outcome, "yes")
check("prime outside singular family",
      decide_subarc(arc(Prime(5)), arc(OrderSing(ETA, EVENS))).outcome, "no")
check("prime k in repeated family",
      decide_subarc(arc(Prime(4)), arc(BSum(from_finite([4]), True))).outcome, "yes")
check("prime j not in repeated family",
      decide_subarc(arc(Prime(2)), arc(BSum(from_finite([4]), True))).outcome, "no")

# --- tame against tame ------------------------------------------------------
check("tame subword yes",
      decide_subarc(arc(Prime(0), Prime(2)), arc(Prime(0), Prime(1), Prime(2))).outcome,
      "yes")
check("tame word order matters",
      decide_subarc(arc(Prime(2), Prime(0)), arc(Prime(0), Prime(1), Prime(2))).outcome,
      "no")
check("trivial below prime", decide_subarc(arc(TRIVIAL), arc(Prime(7))).outcome, "yes")
check("prime not below trivial", decide_subarc(arc(Prime(7)), arc(TRIVIAL)).outcome, "no")
check("reflexivity on primes",
      decide_subarc(arc(Prime(1), Prime(1)), arc(Prime(1), Prime(1))).outcome, "yes")

# --- tame into wild ----------------------------------------------------------
check("increasing pair into BSum",
      decide_subarc(arc(Prime(0), Prime(2)), arc(BSum(EVENS))).outcome, "yes")
check("decreasing pair not into BSum",
      decide_subarc(arc(Prime(2), Prime(0)), arc(BSum(EVENS))).outcome, "unknown")
check("decreasing pair into dense singular family",
      decide_subarc(arc(Prime(2), Prime(0)), arc(OrderSing(ETA, EVENS))).outcome, "yes")
check("repeated primes into repeated family",
      decide_subarc(arc(Prime(4), Prime(4), Prime(4)),
                    arc(BSum(from_finite([4]), True))).outcome, "yes")
check("wild never below tame",
      decide_subarc(arc(BSum(NAT)), arc(Prime(0), Prime(1))).outcome, "no")

# --- wild sums ---------------------------------------------------------------
check("BSum subset yes", decide_subarc(arc(BSum(MULT3)), arc(BSum(NAT))).outcome, "yes")
check("BSum non-subset no", decide_subarc(arc(BSum(NAT)), arc(BSum(MULT3))).outcome, "no")
check("BSum evens vs odds no",
      decide_subarc(arc(BSum(EVENS)), arc(BSum(ODDS))).outcome, "no")
check("BSum below ISum same set",
      decide_subarc(arc(BSum(EVENS)), arc(ISum(EVENS))).outcome, "yes")
check("ISum never below BSum",
      decide_subarc(arc(ISum(EVENS)), arc(BSum(EVENS))).outcome, "no")
check("ISum subset yes", decide_subarc(arc(ISum(MULT3)), arc(ISum(NAT))).outcome, "yes")
check("BSum into singular family",
      decide_subarc(arc(BSum(EVENS)), arc(OrderSing(ETA, NAT))).outcome, "yes")
check("ISum into singular family needs subset",
      decide_subarc(arc(ISum(ODDS)), arc(OrderSing(ETA, EVENS))).outcome, "no")
check("singular family not below BSum",
      decide_subarc(arc(OrderSing(ETA, NAT)), arc(BSum(NAT))).outcome, "no")
check("one-point family is interior sum",
      decide_subarc(arc(OrderSing(fin(1), EVENS)), arc(ISum(NAT))).outcome, "yes")
check("two-point family not into one sum",
      decide_subarc(arc(OrderSing(fin(2), EVENS)), arc(ISum(NAT))).outcome, "no")

# --- repeated-prime family minimality ---------------------------------------
REP4 = arc(BSum(from_finite([4]), True))
REP6 = arc(BSum(from_finite([6]), True))
check("repeated family reflexive", decide_subarc(REP4, REP4).outcome, "yes")
check("distinct repeated families no", decide_subarc(REP4, REP6).outcome, "no")
check("plain sum not below repeated", decide_subarc(arc(BSum(EVENS)), REP4).outcome, "no")
check("repeated not below plain sum", decide_subarc(REP4, arc(BSum(EVENS))).outcome, "no")
check("repeated not below interior sum",
      decide_subarc(REP4, arc(ISum(EVENS))).outcome, "no")

# --- strictly decreasing chain ----------------------------------------------
gs = [arc(BSum(NAT.intersect(naturals_from(k)))) for k in range(5)]
chain_ok = True
for k in range(4):
    down = decide_subarc(gs[k + 1], gs[k]).outcome
    up = decide_subarc(gs[k], gs[k + 1]).outcome
    chain_ok = chain_ok and down == "yes" and up == "no"
check("tail sums strictly decreasing", chain_ok, True)

# --- almost disjoint family incomparable ------------------------------------
fam = [from_residues([r], 7) for r in range(7)]
anti = True
for i in range(7):
    for j in range(7):
        if i != j:
            anti = anti and decide_subarc(arc(BSum(fam[i])), arc(BSum(fam[j]))).outcome == "no"
check("residue sums pairwise incomparable", anti, True)

# --- singular families over orders -------------------------------------------
SH2 = Shuffle(setdesc.from_finite([2]))
SH23 = Shuffle(S23)
check("same-order families reflexive",
      decide_subarc(arc(OrderSing(SH2, NAT)), arc(OrderSing(SH2, NAT))).outcome, "yes")
check("shuffle mismatch refuted",
      decide_subarc(arc(OrderSing(SH2, NAT)), arc(OrderSing(SH23, NAT))).outcome, "no")
check("convex lift fires",
      decide_subarc(arc(OrderSing(ETA, NAT)),
                    arc(OrderSing(terms.Sum((fin(1), ETA)), NAT))).outcome, "yes")
check("convex refutation both orientations",
      decide_subarc(arc(OrderSing(OMEGA, NAT)), arc(OrderSing(ETA, NAT))).outcome, "no")
check("family not in host family",
      decide_subarc(arc(OrderSing(ETA, NAT)), arc(OrderSing(ETA, EVENS))).outcome, "no")
check("nested families stay unknown",
      decide_subarc(arc(OrderSing(ETA, EVENS)), arc(OrderSing(ETA, NAT))).outcome,
      "unknown")

# --- multi-atom windows -------------------------------------------------------
check("prefix wild pair",
      decide_subarc(arc(Prime(0), BSum(EVENS)),
                    arc(Prime(0), Prime(1), BSum(NAT))).outcome, "yes")
check("two germs into one host germ refuted",
      decide_subarc(arc(BSum(EVENS), BSum(ODDS)), arc(BSum(NAT))).outcome, "no")
check("window matches atom for atom",
      decide_subarc(arc(BSum(ODDS.difference(from_finite([1]))), BSum(EVENS)),
                    arc(BSum(ODDS), BSum(EVENS))).outcome, "yes")
check("crossed germ order refuted",
      decide_subarc(arc(BSum(EVENS), BSum(ODDS)),
                    arc(BSum(ODDS), BSum(EVENS))).outcome, "unknown")
check("summand restriction",
      decide_subarc(arc(BSum(EVENS)), arc(Prime(3), BSum(NAT), Prime(5))).outcome, "yes")
check("increasing pair rides the sum atom",
      decide_subarc(arc(Prime(1), Prime(3)),
                    arc(Prime(1), BSum(NAT), Prime(3))).outcome, "yes")
check("straddling window left unknown",
      decide_subarc(arc(Prime(3), Prime(1)),
                    arc(Prime(3), BSum(NAT), Prime(1))).outcome, "unknown")

# --- isolated marker order ----------------------------------------------------
check("sum markers are omega", isolated_order(arc(BSum(NAT))), OMEGA)
check("family markers keep the order",
      isolated_order(arc(OrderSing(ETA, NAT))), ETA)
check("tame has no markers", isolated_order(arc(Prime(0), Prime(1))), None)
check("markers concatenate",
      isolated_order(arc(BSum(NAT), OrderSing(ETA, NAT))),
      terms.normalize(terms.Sum((OMEGA, ETA))))

# --- knots --------------------------------------------------------------------
k_triv = make_knot("circularize", arc(TRIVIAL))
k_p0 = make_knot("circularize", arc(Prime(0)))
k_tame2 = make_knot("circularize", arc(Prime(0), Prime(5)))
check("knot of arc closes with trivial",
      make_knot("knot_of_arc", arc(Prime(0))).cyclic,
      make_knot("circularize", arc_sum([arc(Prime(0)), arc(TRIVIAL)], "none")).cyclic)
check("trivial circularization tame", classify_knot(k_triv), "tame")
check("finite prime sum tame", classify_knot(k_tame2), "tame")
check("interior sum knot wild",
      classify_knot(make_knot("circularize", arc(ISum(NAT)))), "wild")
check("trivial below prime knot", decide_subknot(k_triv, k_p0).outcome, "yes")
check("prime knot below trivial", decide_subknot(k_p0, k_triv).outcome, "yes")
check("wild knot not below tame",
      decide_subknot(make_knot("circularize", arc(BSum(NAT))), k_triv).outcome, "no")

K = lambda s, rep=False: make_knot("circularize", arc(BSum(s, rep)))
check("star family equal mod finite",
      decide_subknot(K(NAT), K(NAT.difference(from_finite([0, 3])))).outcome, "yes")
check("star family not equal mod finite",
      decide_subknot(K(EVENS), K(NAT)).outcome, "no")
check("star family reversal agrees",
      decide_subknot(K(NAT.difference(from_finite([5]))), K(NAT)).outcome, "yes")
check("interior closes like endpoint sum",
      decide_subknot(make_knot("circularize", arc(ISum(EVENS))), K(EVENS)).outcome, "yes")
check("tame fringe absorbed on the circle",
      decide_subknot(make_knot("circularize", arc(Prime(1), BSum(EVENS))),
                     K(EVENS)).outcome, "yes")
check("repeated star families differ",
      decide_subknot(K(from_finite([2]), True), K(from_finite([3]), True)).outcome, "no")

k_two = make_knot("circularize", arc(BSum(EVENS), BSum(ODDS)))
check("two germs below matching pair", decide_subknot(k_two, k_two).outcome, "yes")
check("block selection drops a germ",
      decide_subknot(K(EVENS), k_two).outcome, "yes")
check("pair never fits single germ", decide_subknot(k_two, K(EVENS)).outcome, "no")
k_two_r = make_knot("circularize", arc(BSum(ODDS), BSum(EVENS)))
check("rotation matches cyclically", decide_subknot(k_two, k_two_r).outcome, "yes")

# --- f_knot delegation ---------------------------------------------------------
CT = circular.CircTerm
fz = make_knot("f_knot", CT(terms.ZETA))
fz1 = make_knot("f_knot", CT(terms.Sum((terms.ZETA, fin(1)))))
fw = make_knot("f_knot", CT(OMEGA))
for (ka, ca), (kb, cb) in [((fz, CT(terms.ZETA)), (fz1, CT(terms.Sum((terms.ZETA, fin(1)))))),
                           ((fw, CT(OMEGA)), (fz, CT(terms.ZETA)))]:
    want = circular.decide_c("pcvx", ca, cb).outcome
    check("delegation matches circular engine (%s)" % want,
          decide_subknot(ka, kb).outcome, want)
check("f_knot classified wild", classify_knot(fz), "wild")
check("trivial below f_knot", decide_subknot(k_triv, fz).outcome, "yes")
check("f_knot not below tame", decide_subknot(fz, k_tame2).outcome, "no")

# --- transitivity of yes on a sample corpus ------------------------------------
corpus = [
    arc(TRIVIAL), arc(Prime(0)), arc(Prime(2)), arc(Prime(0), Prime(2)),
    arc(BSum(MULT3)), arc(BSum(EVENS)), arc(BSum(NAT)), arc(ISum(EVENS)),
    arc(ISum(NAT)), arc(OrderSing(OMEGA, NAT)), arc(OrderSing(ETA, NAT)),
    REP4,
]
tr_ok = True
for a in corpus:
    if decide_subarc(a, a).outcome != "yes":
        tr_ok = False
for a in corpus:
    for b in corpus:
        if decide_subarc(a, b).outcome != "yes":
            continue
        for c in corpus:
            if decide_subarc(b, c).outcome == "yes":
                if decide_subarc(a, c).outcome != "yes":
                    tr_ok = False
                    print("  transitivity gap:", a, b, c)
check("yes-answers transitive on corpus", tr_ok, True)

# classification coherence on knot corpus
kn_corpus = [k_triv, k_p0, k_tame2, K(NAT), K(EVENS), k_two, fz,
             make_knot("circularize", arc(ISum(NAT))),
             make_knot("knot_of_arc", arc(BSum(ODDS)))]
co_ok = all((classify_knot(k) == "tame") == (decide_subknot(k, k_triv).outcome == "yes")
            for k in kn_corpus)
check("tame iff below trivial knot", co_ok, True)

print("\nFAILURES:", FAIL)
sys.exit(1 if FAIL else 0)
