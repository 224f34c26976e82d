import time
from fractions import Fraction as F

from orderlab import ordinals
import orderlab.circular as C
import orderlab.embed as E
import orderlab.oracles as O
from orderlab.terms import (
    ETA, OMEGA, OMEGA_STAR, ZETA, Ord, Prod, Shuffle, Sum, fin, normalize,
)
from orderlab.setdesc import from_finite

t0 = time.time()
fails = []


def chk(name, got, want):
    ok = got == want
    if not ok:
        fails.append((name, got, want))
    print("%s %s%s" % ("PASS" if ok else "FAIL", name,
                       "" if ok else "  got=%r want=%r" % (got, want)))


def ct(t):
    return C.CircTerm(t)


W2 = ordinals.mul(ordinals.OMEGA, ordinals.OMEGA)
W3 = ordinals.mul(W2, ordinals.OMEGA)

# --- finite tables ---
c4s = C.FinCirc.from_arrangement([0, 2, 1, 3])
chk("validate scrambled 4", C.validate_circ(c4s).valid, True)
chk("validate bad table", C.validate_circ({(0, 1, 2)}, n=3).valid, False)
chk("arrangement recovery", C._fin_arrangement(c4s), (0, 2, 1, 3))
chk("linearize fin", C.linearize(C.FinCirc.from_linear(4), 2), (2, 3, 0, 1))
chk("decompose", C.decompose_intersection(C.FinCirc.from_linear(4), {0, 1, 2}, {2, 3, 0}),
    [frozenset({0}), frozenset({2})])

chk("fin iso scrambled", C.decide_c("iso_c", c4s, C.FinCirc.from_linear(4)).outcome, "yes")
chk("fin iso size", C.decide_c("iso_c", C.FinCirc.from_linear(2), C.FinCirc.from_linear(3)).outcome, "no")
chk("fin pcvx too big", C.decide_c("pcvx", C.FinCirc.from_linear(5), C.FinCirc.from_linear(4)).outcome, "no")
d = C.decide_c("pcvx", c4s, C.FinCirc.from_linear(6))
chk("fin pcvx 4in6", d.outcome, "yes")
chk("fin pcvx witness ok", C.check_witness(d.witness), (True, "ok"))
ora = O.oracle_pcvx(c4s, C.FinCirc.from_linear(6), 4)
chk("fin pcvx oracle agrees", ora[0], True)
chk("fin pcvx piece count matches oracle", len(d.witness.partition.pieces), len(ora[2]))
okc, msg = O.check_pcvx_witness(c4s, C.FinCirc.from_linear(6),
                                dict(d.witness.embedding), [list(p) for p in d.witness.partition.pieces])
chk("fin witness replays in oracle (%s)" % msg, okc, True)
chk("fin cvx_c", C.decide_c("cvx_c", C.FinCirc.from_linear(3), C.FinCirc.from_linear(5)).outcome,
    "yes" if O.oracle_cvx_c(C.FinCirc.from_linear(3), C.FinCirc.from_linear(5)) else "no")

# --- basic symbolic circles ---
TGT = Sum((OMEGA, fin(1), OMEGA_STAR, ETA))
chk("iso_c w+1 vs w", C.decide_c("iso_c", ct(Sum((OMEGA, fin(1)))), ct(OMEGA)).outcome, "yes")
chk("iso_c z vs w+w*", C.decide_c("iso_c", ct(ZETA), ct(Sum((OMEGA, OMEGA_STAR)))).outcome, "yes")
chk("iso_c w vs z", C.decide_c("iso_c", ct(OMEGA), ct(ZETA)).outcome, "no")
chk("cvx_c z in z+1", C.decide_c("cvx_c", ct(ZETA), ct(Sum((ZETA, fin(1))))).outcome, "yes")
chk("cvx_c z in tgt", C.decide_c("cvx_c", ct(ZETA), ct(TGT)).outcome, "no")
chk("cvx_c z+1 in tgt", C.decide_c("cvx_c", ct(Sum((ZETA, fin(1)))), ct(TGT)).outcome, "yes")

d = C.decide_c("pcvx", ct(ZETA), ct(TGT))
chk("pcvx z tgt", d.outcome, "yes")
chk("pcvx z tgt pieces", len(d.witness.partition.pieces), 2)
chk("pcvx z tgt witness ok", C.check_witness(d.witness), (True, "ok"))

# --- composition along the middle circle ---
w1 = C.decide_c("pcvx", ct(ZETA), ct(Sum((ZETA, fin(1))))).witness
w2 = C.decide_c("pcvx", ct(Sum((ZETA, fin(1)))), ct(TGT)).witness
chk("w1 ok", C.check_witness(w1), (True, "ok"))
chk("w2 ok", C.check_witness(w2), (True, "ok"))
cw = C.compose_pcvx(w1, w2)
chk("composed ok", C.check_witness(cw), (True, "ok"))
chk("composed pieces", len(cw.partition.pieces), 2)
chk("composed image order", [a.label for a in cw.embedding.target if a.label is not None], [0, 1])
chk("composed images",
    [E.canon_word(next(a.order for a in cw.embedding.target if a.label == i)) for i in (0, 1)],
    [E.canon_word(OMEGA), E.canon_word(OMEGA_STAR)])

# --- linearize / reductions / witness ordinals ---
chk("linearize term", C.linearize(ct(Sum((OMEGA, fin(1)))), 1), Sum((fin(1), OMEGA)))
chk("reduce circ_iso", C.reduce_co("circ_iso", OMEGA).base, Sum((fin(1), Prod(ZETA, OMEGA))))
chk("reduce circ_pcvx", C.reduce_co("circ_pcvx", ETA).base, Prod(Sum((fin(1), Prod(ZETA, ETA))), OMEGA))
chk("unbounded w", C.circ_unbounded_witness(ct(OMEGA)), W2)
chk("unbounded e", C.circ_unbounded_witness(ct(ETA)), ordinals.OMEGA)
chk("unbounded w2", C.circ_unbounded_witness(ct(Ord(W2))), W3)
chk("wo-bound refutes", C.decide_c("pcvx", ct(Ord(W2)), ct(OMEGA)).outcome, "no")

# --- finite source onto infinite circles ---
d = C.decide_c("pcvx", ct(fin(3)), ct(ZETA))
chk("3 points on z", d.outcome, "yes")
chk("3 points on z ok", C.check_witness(d.witness), (True, "ok"))
d = C.decide_c("pcvx", ct(fin(3)), ct(ETA))
chk("3 points on e", d.outcome, "yes")
chk("3 points on e ok", C.check_witness(d.witness), (True, "ok"))
sh23 = Shuffle(from_finite([2, 3]))
d = C.decide_c("pcvx", ct(fin(2)), ct(sh23))
chk("2 points on shuffle", d.outcome, "yes")
chk("2 points on shuffle ok", C.check_witness(d.witness), (True, "ok"))
chk("z into 5 points", C.decide_c("pcvx", ct(ZETA), ct(fin(5))).outcome, "no")
chk("fin into fin via terms", C.decide_c("pcvx", ct(fin(3)), ct(fin(5))).outcome, "yes")

# --- shuffle antichain ---
sh2 = Shuffle(from_finite([2]))
chk("shuffle antichain", C.decide_c("pcvx", ct(sh2), ct(sh23)).outcome, "no")
chk("shuffle antichain rev", C.decide_c("pcvx", ct(sh23), ct(sh2)).outcome, "no")
chk("dense into scattered", C.decide_c("pcvx", ct(ETA), ct(OMEGA)).outcome, "no")

# --- eventually periodic rational streams ---
x = ((), (F(0), F(1)))
y = ((F(7),), (F(1), F(0)))
zq = ((), (F(1, 2),))
tx, ty, tz = C.e1_term(*x), C.e1_term(*y), C.e1_term(*zq)
chk("e1 spec roundtrip", C._e1_spec(tx), x)
chk("e1 reduce", C.reduce_co("e1", x).base, tx)
d = C.decide_c("pcvx", ct(tx), ct(ty))
chk("e1 tails match", d.outcome, "yes")
chk("e1 witness ok", C.check_witness(d.witness), (True, "ok"))
d = C.decide_c("pcvx", ct(ty), ct(tx))
chk("e1 tails match rev", d.outcome, "yes")
chk("e1 witness rev ok", C.check_witness(d.witness), (True, "ok"))
chk("e1 distinct", C.decide_c("pcvx", ct(tx), ct(tz)).outcome, "no")
chk("e1 distinct rev", C.decide_c("pcvx", ct(tz), ct(tx)).outcome, "no")
chk("e1 period vs primitive", C.decide_c("pcvx", ct(C.e1_term((), (F(0), F(1), F(0), F(1)))), ct(tx)).outcome, "yes")

# --- fin table vs oracle sweep (tiny) ---
import itertools
agree = 0
for arr_c in [(0, 1, 2), (0, 2, 1)]:
    for arr_d in [(0, 1, 2, 3, 4), (0, 2, 4, 1, 3)]:
        cc = C.FinCirc.from_arrangement(arr_c)
        dd = C.FinCirc.from_arrangement(arr_d)
        mine = C.decide_c("pcvx", cc, dd)
        got = O.oracle_pcvx(cc, dd, cc.n)
        assert (mine.outcome == "yes") == got[0]
        if mine.outcome == "yes":
            assert len(mine.witness.partition.pieces) == len(got[2]), (arr_c, arr_d)
        agree += 1
chk("fin oracle sweep", agree, 4)

print("FAILURES: %d  (%.1fs)" % (len(fails), time.time() - t0))
for f in fails:
    print("  ", f)
