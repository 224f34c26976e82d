import sys

from orderlab.terms import (
    ETA, ZETA, OMEGA, OMEGA_STAR, Fin, Eta, Omega, OmegaStar, Ord, Prod, Rev,
    Shuffle, Sum, ZPow, ZPowOf, Zeta, total, normalize,
)
from orderlab import ordinals
from orderlab.ordinals import from_int, OMEGA as W, mul, add
from orderlab.setdesc import from_finite
from orderlab import embed as E

fails = []

def chk(name, got, want):
    ok = got == want
    print("%-52s %s  (got %r)" % (name, "ok" if ok else "FAIL want %r" % (want,), got))
    if not ok:
        fails.append(name)

zw = Prod(ZETA, OMEGA)          # z*w
w2 = Ord(mul(W, from_int(2)))   # ord(w.2)

# canonical words
chk("canon z == w*+w", E.canon_word(Sum((OMEGA_STAR, OMEGA))), (Zeta(),))
chk("canon w*+n == w*", E.canon_word(Sum((OMEGA_STAR, Fin(3)))), (Rev(Ord(W)),))
chk("canon n+w == w", E.canon_word(Sum((Fin(3), OMEGA))), (Ord(W),))
chk("canon e+1+e == e", E.canon_word(Sum((ETA, Fin(1), ETA))), (ETA,))
chk("canon 1+e has min", E.canon_word(Sum((Fin(1), ETA))), (Fin(1), ETA))
chk("run rule ze+z+ze == z(e+1+e)=ze",
    E.canon_word(Sum((Prod(ZETA, ETA), ZETA, Prod(ZETA, ETA)))),
    (Prod(Zeta(), ETA),))
chk("z*z == Z^2", E.canon_word(Prod(ZETA, ZETA)), (ZPow(from_int(2)),))
chk("zw + z == z(w+1)",
    E.canon_word(Sum((zw, ZETA))),
    (Prod(Zeta(), Ord(add(W, from_int(1)))),))
chk("w*+ord(w.2) == z+w", E.canon_word(Sum((OMEGA_STAR, w2))), (Zeta(), Ord(W)))
chk("2*e == shuffle{2}", E.canon_word(Prod(Fin(2), ETA)), (Shuffle(from_finite([2])),))
chk("zpowof(w) resolves", E.canon_word(ZPowOf(OMEGA)), (ZPow(W),))

# spec frozen decide examples
chk("cvx 2e vs 3e", E.decide("cvx", Prod(Fin(2), ETA), Prod(Fin(3), ETA)).outcome, "no")
chk("bicvx zw vs w+zw", E.decide("bicvx", zw, Sum((OMEGA, zw))).outcome, "yes")
chk("iso zw vs w+zw", E.decide("iso", zw, Sum((OMEGA, zw))).outcome, "no")
d = E.decide("cvx", Sum((Fin(1), ETA)), ETA)
chk("cvx 1+e vs e", d.outcome, "yes")
chk("  witness decomposed", d.witness.decomposed, True)
chk("  witness left", d.witness.left, ETA)
chk("  witness right", d.witness.right, None)

# harder stack cases
chk("cvx e vs ze", E.decide("cvx", ETA, Prod(ZETA, ETA)).outcome, "no")
chk("cvx Z^w*e vs Z^(w+1)*e",
    E.decide("cvx", Prod(ZPow(W), ETA), Prod(ZPow(add(W, from_int(1))), ETA)).outcome,
    "no")
chk("cvx w vs z", E.decide("cvx", OMEGA, ZETA).outcome, "yes")
chk("cvx z vs w", E.decide("cvx", ZETA, OMEGA).outcome, "no")
chk("cvx w* vs z", E.decide("cvx", OMEGA_STAR, ZETA).outcome, "yes")
chk("cvx zw vs Z^2", E.decide("cvx", zw, ZPow(from_int(2))).outcome, "yes")
chk("cvx Z^2 vs zw", E.decide("cvx", ZPow(from_int(2)), zw).outcome, "no")
chk("cvx w+w* vs z", E.decide("cvx", Sum((OMEGA, OMEGA_STAR)), ZETA).outcome, "no")
chk("cvx z vs Z^2", E.decide("cvx", ZETA, ZPow(from_int(2))).outcome, "yes")
chk("iso w+w* vs z", E.decide("iso", Sum((OMEGA, OMEGA_STAR)), ZETA).outcome, "no")
chk("embed w+w* vs z", E.decide("embed", Sum((OMEGA, OMEGA_STAR)), ZETA).outcome, "no")
chk("embed z vs w", E.decide("embed", ZETA, OMEGA).outcome, "no")
chk("embed w* vs z", E.decide("embed", OMEGA_STAR, ZETA).outcome, "yes")
chk("embed zw vs w*", E.decide("embed", Prod(ZETA, OMEGA), OMEGA_STAR).outcome, "no")
chk("embed e vs w", E.decide("embed", ETA, OMEGA).outcome, "no")
chk("embed ord(w.2) vs w", E.decide("embed", w2, OMEGA).outcome, "no")
chk("embed w vs ord(w.2)", E.decide("embed", OMEGA, w2).outcome, "yes")
chk("embed z vs e", E.decide("embed", ZETA, ETA).outcome, "yes")

# compressibility
chk("compress w", E.compressibility(OMEGA).value, "LeftOnly")
chk("compress w*", E.compressibility(OMEGA_STAR).value, "RightOnly")
chk("compress e", E.compressibility(ETA).value, "Bi")
chk("compress w+w*", E.compressibility(Sum((OMEGA, OMEGA_STAR))).value, "Bi")
chk("compress z", E.compressibility(ZETA).value, "Incompressible")
chk("compress Z^w", E.compressibility(ZPow(W)).value, "Incompressible")
chk("compress e+zw+1", E.compressibility(Sum((ETA, zw, Fin(1)))).value, "LeftOnly")
phi0 = E.reduce_lo("phi0", OMEGA)
chk("compress phi0(w)", E.compressibility(phi0).value, "Incompressible")
chk("compress ze", E.compressibility(Prod(ZETA, ETA)).value, "Bi")

# interval families
ii = E.infinite_intervals
chk("intervals w final", [E.format_term(x) for x in ii(OMEGA, "final")], ["w"])
chk("intervals w initial", ii(OMEGA, "initial"), [])
chk("intervals w+w* closed",
    [E.format_term(x) for x in ii(Sum((OMEGA, OMEGA_STAR)), "closed")],
    ["w + w*"])
chk("intervals z final", [E.format_term(x) for x in ii(ZETA, "final")], ["w"])
chk("intervals e final", [E.format_term(x) for x in ii(ETA, "final")], ["1 + e"])
try:
    ii(Prod(ZETA, OMEGA), "initial")
    chk("intervals zw initial raises", "no raise", "raise")
except E.NotFinitelyDescribable:
    chk("intervals zw initial raises", "raise", "raise")
chk("intervals zw final",
    [E.format_term(x) for x in ii(zw, "final")],
    ["w + z*w"])

# well ordered sup witnesses
chk("wo witness ord(w.2)", E.wo_unbounded_witness(w2), mul(W, from_int(2)))
chk("wo witness e", E.wo_unbounded_witness(ETA), W)
chk("wo witness zw", E.wo_unbounded_witness(zw), W)
chk("wo witness z+w", E.wo_unbounded_witness(Sum((ZETA, OMEGA))), mul(W, from_int(2)))

# reduction maps, literal shapes
chk("phi0 shape", E.reduce_lo("phi0", OMEGA),
    Sum((Fin(1), Prod(Zeta(), OMEGA), Fin(1))))
chk("phi1 shape", E.reduce_lo("phi1", OMEGA),
    Sum((ETA, Prod(Zeta(), OMEGA), Fin(1))))
chk("psi shape", E.reduce_lo("psi", (OMEGA, ZETA)),
    Sum((ZPowOf(Sum((Fin(1), ZETA))), ETA, ZPowOf(Sum((Fin(1), OMEGA))))))

# reduction soundness spot checks
for a, b, exp in [(OMEGA, OMEGA, "yes"), (OMEGA, ZETA, "no"), (ETA, ETA, "yes"),
                  (Fin(2), Fin(3), "no")]:
    got = E.decide("cvx", E.reduce_lo("phi0", a), E.reduce_lo("phi0", b)).outcome
    want = E.decide("iso", a, b).outcome
    chk("phi0 coherence %s/%s" % (E.format_term(a), E.format_term(b)), got, want)
    if want != exp:
        fails.append("iso expectation wrong")

# in_fragment
chk("in_fragment iso", E.in_fragment("iso", OMEGA, ETA), True)
chk("in_fragment cvx Z^w", E.in_fragment("cvx", ZPow(W), ZPow(W)), False)
chk("in_fragment cvx zw", E.in_fragment("cvx", zw, zw), True)
chk("in_fragment unsupported", E.in_fragment("iso", Prod(OMEGA_STAR, OMEGA), OMEGA), False)
chk("zpow of eta resolves", E.format_term(E.canon_term(ZPowOf(ETA))), "e")

print()
print("FAILURES: %d" % len(fails))
for f in fails:
    print("  -", f)
sys.exit(1 if fails else 0)
