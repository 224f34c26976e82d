"""Brute-force reference procedures.

Everything in this module recomputes answers from first principles so
that the rule engines elsewhere can be cross-checked against a second,
independent route.  The searches are exponential and intended for small
inputs only.

The linear-order oracle is a bounded back-and-forth game of a fixed
depth, played on interval decompositions: a move picks an element,
which splits an order L into A + 1 + B.  Two orders are depth-d
equivalent when every split of one can be answered by a split of the
other whose sides are depth-(d-1) equivalent.  Finite orders are
compared by the classical threshold rule: m and m' are depth-d
equivalent iff m = m' or both are >= 2^d - 1.

The convex oracle enumerates middle pieces M from pairs of cuts of the
target (cut = partition into a downward and an upward closed part) and
asks the back-and-forth game whether the source matches some M.

The circular oracles do exhaustive search over embeddings of finite
cyclic tables, with an independent transcription of the convexity
definition.
"""

import functools
import itertools
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from . import ordinals
from .ordinals import Ordinal
from .terms import (
    ETA,
    OMEGA,
    OMEGA_STAR,
    ZETA,
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
    size_if_finite,
)
from .present import index_of_rat, rat_of_index


class OracleUnsupported(Exception):
    """Raised when a term lies outside the oracle's search domain."""


# ---------------------------------------------------------------------------
# words


def word(t: Term) -> List[Term]:
    t = normalize(t)
    if isinstance(t, Sum):
        return list(t.parts)
    return [t]


def _mk(parts: List[Term]) -> Optional[Term]:
    parts = [p for p in parts if p is not None]
    if not parts:
        return None
    if len(parts) == 1:
        return normalize(parts[0])
    return normalize(Sum(tuple(parts)))


def _rev(t: Optional[Term]) -> Optional[Term]:
    if t is None:
        return None
    return normalize(Rev(t))


def _shuffle_sizes(desc, bound: int, cap: int = 8) -> List[int]:
    out = []
    for n in desc.members():
        out.append(n)
        if len(out) >= cap or n > bound + 2:
            break
    return out


def _interval_blocks(lo, hi, cap: int = 8) -> List[Tuple[Fraction, int]]:
    # block at the k-th enumerated rational has k+1 elements
    out = []
    for k in range(256):
        q = rat_of_index(k)
        if (lo is None or lo < q) and (hi is None or q < hi):
            out.append((q, k + 1))
            if len(out) >= cap:
                break
    return out


def _ord_cut_points(alpha: Ordinal, bound: int) -> List[Ordinal]:
    cands = set(itertools.islice(ordinals.enumerate_below(alpha), 8))
    # partial CNF sums with offsets up to the game threshold hit every
    # "joint" of alpha together with the finite runs after each joint
    prefix: List[Tuple[Ordinal, int]] = []
    for exp, coeff in alpha.terms:
        coeffs = (
            range(coeff + 1)
            if coeff <= 6
            else list(range(4)) + list(range(coeff - 2, coeff + 1))
        )
        for c in coeffs:
            base = Ordinal(tuple(prefix + ([(exp, c)] if c else [])))
            for off in range(bound + 1):
                cand = ordinals.add(base, ordinals.from_int(off))
                if ordinals.cmp(cand, alpha) < 0:
                    cands.add(cand)
                else:
                    break
        prefix.append((exp, coeff))
    return sorted(cands, key=functools.cmp_to_key(ordinals.cmp))


# ---------------------------------------------------------------------------
# splits: decompositions t = A + 1 + B, a move of the game


def _atom_splits(p: Term, bound: int) -> List[Tuple[Optional[Term], Optional[Term]]]:
    if isinstance(p, Fin):
        return [
            (Fin(j) if j else None, Fin(p.n - 1 - j) if p.n - 1 - j else None)
            for j in range(p.n)
        ]
    if isinstance(p, Omega):
        return [(Fin(j) if j else None, OMEGA) for j in range(bound + 1)]
    if isinstance(p, OmegaStar):
        return [(OMEGA_STAR, Fin(j) if j else None) for j in range(bound + 1)]
    if isinstance(p, Zeta):
        return [(OMEGA_STAR, OMEGA)]
    if isinstance(p, Eta):
        return [(ETA, ETA)]
    if isinstance(p, Shuffle):
        out = []
        for n in _shuffle_sizes(p.sizes, bound):
            js = (
                range(n)
                if n <= 2 * bound + 2
                else itertools.chain(range(bound + 1), range(n - 1 - bound, n))
            )
            for j in js:
                out.append(
                    (
                        _mk([p, Fin(j) if j else None]),
                        _mk([Fin(n - 1 - j) if n - 1 - j else None, p]),
                    )
                )
        return out
    if isinstance(p, IntervalShuffle):
        out = []
        for q, n in _interval_blocks(p.lo, p.hi):
            left_sh = IntervalShuffle(p.lo, q)
            right_sh = IntervalShuffle(q, p.hi)
            for j in range(n):
                out.append(
                    (
                        _mk([left_sh, Fin(j) if j else None]),
                        _mk([Fin(n - 1 - j) if n - 1 - j else None, right_sh]),
                    )
                )
        return out
    if isinstance(p, Ord):
        out = []
        for beta in _ord_cut_points(p.alpha, bound):
            gamma = ordinals.left_subtract(ordinals.add(beta, ordinals.ONE), p.alpha)
            left = None if beta == ordinals.ZERO else normalize(Ord(beta))
            right = None if gamma == ordinals.ZERO else normalize(Ord(gamma))
            out.append((left, right))
        return out
    if isinstance(p, Rev):
        return [( _rev(b), _rev(a)) for a, b in _atom_splits(p.arg, bound)]
    if isinstance(p, Prod):
        out = []
        lsplits = term_splits(p.left, bound)
        rsplits = term_splits(p.right, bound)
        for (ar, br), (al, bl) in itertools.islice(
            itertools.product(rsplits, lsplits), 150
        ):
            left = _mk([Prod(p.left, ar) if ar is not None else None, al])
            right = _mk([bl, Prod(p.left, br) if br is not None else None])
            out.append((left, right))
        return out
    raise OracleUnsupported(f"no split rule for {type(p).__name__}")


def term_splits(t: Term, bound: int) -> List[Tuple[Optional[Term], Optional[Term]]]:
    parts = word(t)
    seen = set()
    out = []
    for i, p in enumerate(parts):
        for a, b in _atom_splits(p, bound):
            left = _mk(parts[:i] + [a])
            right = _mk([b] + parts[i + 1 :])
            key = (left, right)
            if key not in seen:
                seen.add(key)
                out.append(key)
    return out


# ---------------------------------------------------------------------------
# the depth-bounded back-and-forth game


_EF_MEMO: Dict[Tuple[Optional[Term], Optional[Term], int], bool] = {}


def ef_equiv(t: Optional[Term], u: Optional[Term], depth: int = 6) -> bool:
    """Depth-bounded back-and-forth equivalence of two terms."""
    t = None if t is None else normalize(t)
    u = None if u is None else normalize(u)
    return _ef(t, u, depth)


def _ef(t: Optional[Term], u: Optional[Term], d: int) -> bool:
    if d <= 0:
        return True
    if (t is None) != (u is None):
        return False
    if t is None:
        return True
    nt, nu = size_if_finite(t), size_if_finite(u)
    if nt is not None and nu is not None:
        thresh = (1 << d) - 1
        return nt == nu or (nt >= thresh and nu >= thresh)
    key = (t, u, d)
    got = _EF_MEMO.get(key)
    if got is not None:
        return got
    # provisional True guards against infinite regress on equal keys
    _EF_MEMO[key] = True
    bound = (1 << (d - 1)) + 1
    ts = term_splits(t, bound)
    us = term_splits(u, bound)
    ok = all(
        any(_ef(a, c, d - 1) and _ef(b, e, d - 1) for c, e in us) for a, b in ts
    ) and all(
        any(_ef(a, c, d - 1) and _ef(b, e, d - 1) for a, b in ts) for c, e in us
    )
    _EF_MEMO[key] = ok
    return ok


# ---------------------------------------------------------------------------
# cuts: partitions t = L + R into a downward and an upward closed part


def _atom_cuts(p: Term, bound: int) -> List[Tuple[Term, Term]]:
    if isinstance(p, Fin):
        return [(Fin(j), Fin(p.n - j)) for j in range(1, p.n)]
    if isinstance(p, Omega):
        return [(Fin(j), OMEGA) for j in range(1, bound + 1)]
    if isinstance(p, OmegaStar):
        return [(OMEGA_STAR, Fin(j)) for j in range(1, bound + 1)]
    if isinstance(p, Zeta):
        return [(OMEGA_STAR, OMEGA)]
    if isinstance(p, Eta):
        return [
            (ETA, ETA),
            (_mk([ETA, Fin(1)]), ETA),
            (ETA, _mk([Fin(1), ETA])),
        ]
    if isinstance(p, Shuffle):
        out = [(p, p)]
        for n in _shuffle_sizes(p.sizes, bound):
            for j in range(n + 1):
                left = _mk([p, Fin(j) if j else None])
                right = _mk([Fin(n - j) if n - j else None, p])
                out.append((left, right))
        return out
    if isinstance(p, IntervalShuffle):
        out = []
        for q, n in _interval_blocks(p.lo, p.hi):
            left_sh = IntervalShuffle(p.lo, q)
            right_sh = IntervalShuffle(q, p.hi)
            for j in range(n + 1):
                out.append(
                    (
                        _mk([left_sh, Fin(j) if j else None]),
                        _mk([Fin(n - j) if n - j else None, right_sh]),
                    )
                )
        return out
    if isinstance(p, Ord):
        out = []
        for beta in _ord_cut_points(p.alpha, bound):
            if beta == ordinals.ZERO:
                continue
            gamma = ordinals.left_subtract(beta, p.alpha)
            if gamma == ordinals.ZERO:
                continue
            out.append((normalize(Ord(beta)), normalize(Ord(gamma))))
        return out
    if isinstance(p, Rev):
        return [(_rev(b), _rev(a)) for a, b in _atom_cuts(p.arg, bound)]
    if isinstance(p, Prod):
        out = []
        for a, b in term_cuts(p.right, bound, internal_only=True):
            out.append((Prod(p.left, a), Prod(p.left, b)))
        lcuts = [
            (c, dd)
            for c, dd in term_cuts(p.left, bound, internal_only=True)
        ]
        for (ar, br), (cl, dl) in itertools.islice(
            itertools.product(term_splits(p.right, bound), lcuts), 150
        ):
            left = _mk([Prod(p.left, ar) if ar is not None else None, cl])
            right = _mk([dl, Prod(p.left, br) if br is not None else None])
            out.append((left, right))
        return out
    raise OracleUnsupported(f"no cut rule for {type(p).__name__}")


def term_cuts(
    t: Term, bound: int, internal_only: bool = False
) -> List[Tuple[Optional[Term], Optional[Term]]]:
    parts = word(t)
    out: List[Tuple[Optional[Term], Optional[Term]]] = []
    if not internal_only:
        for i in range(len(parts) + 1):
            out.append((_mk(parts[:i]), _mk(parts[i:])))
    for i, p in enumerate(parts):
        for cl, cr in _atom_cuts(p, bound):
            out.append((_mk(parts[:i] + [cl]), _mk([cr] + parts[i + 1 :])))
    seen = set()
    dedup = []
    for pair in out:
        if pair not in seen:
            seen.add(pair)
            dedup.append(pair)
    return dedup


def convex_middles(u: Term, bound: int = 8) -> List[Term]:
    """All candidate interval types of u, up to the enumeration bounds."""
    mids = []
    seen = set()
    for _, rest in term_cuts(u, bound):
        if rest is None:
            continue
        for mid, _ in term_cuts(rest, bound):
            if mid is not None and mid not in seen:
                seen.add(mid)
                mids.append(mid)
    return mids


def oracle_cvx(
    t: Term, u: Term, depth: int = 6, bound: int = 8
) -> Tuple[bool, Optional[Term]]:
    """Search for an interval of u matching t under the depth game."""
    t = normalize(t)
    for mid in convex_middles(u, bound):
        if ef_equiv(t, mid, depth):
            return True, mid
    return False, None


# ---------------------------------------------------------------------------
# finite circular orders: exhaustive search


class RawCirc:
    """A finite circular order given by its cyclic arrangement.

    Element x sits at position arrangement.index(x); the ternary
    relation is the betweenness of the arrangement read cyclically.
    Degenerate triples are included, matching the axiom that ties
    antisymmetry to reflexivity.
    """

    def __init__(self, arrangement):
        self.seq = tuple(arrangement)
        self.n = len(self.seq)
        self._pos = {x: i for i, x in enumerate(self.seq)}
        if len(self._pos) != self.n:
            raise ValueError("arrangement has repeated elements")

    def elements(self):
        return list(self.seq)

    def triple(self, x, y, z) -> bool:
        if x == y or y == z or z == x:
            return True
        px, py, pz = self._pos[x], self._pos[y], self._pos[z]
        return (py - px) % self.n < (pz - px) % self.n

    def rotate_from(self, b):
        i = self._pos[b]
        return self.seq[i:] + self.seq[:i]


def oracle_is_convex(c, A) -> bool:
    """Transcription of the convex-subset definition for circular orders."""
    A = frozenset(A)
    elems = c.elements()
    if len(A) <= 1:
        return True
    for x in A:
        for y in A:
            if x == y:
                continue
            fwd = all(
                w in A
                for w in elems
                if w != x and w != y and c.triple(x, w, y)
            )
            bwd = all(
                w in A
                for w in elems
                if w != x and w != y and c.triple(y, w, x)
            )
            if not (fwd or bwd):
                return False
    return True


def _embeddings(c, d):
    """All injections from c to d preserving the ternary relation."""
    celems = c.elements()
    delems = d.elements()
    n = len(celems)
    out = []

    def extend(partial):
        k = len(partial)
        if k == n:
            out.append(dict(zip(celems, partial)))
            return
        used = set(partial)
        for cand in delems:
            if cand in used:
                continue
            ok = True
            for i in range(k):
                for j in range(k):
                    if i == j:
                        continue
                    if c.triple(celems[i], celems[j], celems[k]) != d.triple(
                        partial[i], partial[j], cand
                    ):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                extend(partial + [cand])

    extend([])
    return out


def _min_pieces(c, d, f):
    """Fewest arcs of c whose images under f are all convex in d."""
    seq = c.rotate_from(c.elements()[0])
    n = len(seq)
    best = None
    for start in range(n):
        rot = seq[start:] + seq[:start]
        pieces = []
        cur = [rot[0]]
        for x in rot[1:]:
            if oracle_is_convex(d, [f[y] for y in cur + [x]]):
                cur.append(x)
            else:
                pieces.append(cur)
                cur = [x]
        pieces.append(cur)
        # a wrap of the cyclic order must not merge the last piece into
        # the first: the cut at `start` already accounts for that
        if best is None or len(pieces) < len(best):
            best = pieces
        if len(best) == 1:
            break
    return best


def oracle_pcvx(c, d, max_pieces: Optional[int] = None):
    """Exhaustive piecewise-convex-embeddability for finite tables.

    Returns (found, mapping, pieces) with the fewest-piece witness.
    """
    if c.n == 0:
        return True, {}, []
    if c.n > d.n:
        return False, None, None
    best = None
    for f in _embeddings(c, d):
        pieces = _min_pieces(c, d, f)
        if pieces is not None:
            if max_pieces is not None and len(pieces) > max_pieces:
                continue
            if best is None or len(pieces) < len(best[1]):
                best = (f, pieces)
            if len(best[1]) == 1:
                break
    if best is None:
        return False, None, None
    return True, best[0], [frozenset(p) for p in best[1]]


def oracle_cvx_c(c, d):
    found, f, pieces = oracle_pcvx(c, d, max_pieces=1)
    if found and pieces is not None and len(pieces) <= 1:
        return True, f
    return False, None


def oracle_iso_c(c, d) -> bool:
    if c.n != d.n:
        return False
    found, f, pieces = oracle_pcvx(c, d)
    # a bijective embedding of circular orders is an isomorphism
    return found and f is not None and len(f) == d.n


def check_pcvx_witness(c, d, mapping, pieces) -> Tuple[bool, str]:
    """Independent validation of a finite piecewise witness."""
    elems = c.elements()
    if sorted(mapping.keys()) != sorted(elems):
        return False, "mapping domain is not the whole source"
    if len(set(mapping.values())) != len(mapping):
        return False, "mapping is not injective"
    for x in elems:
        for y in elems:
            for z in elems:
                if c.triple(x, y, z) and not d.triple(
                    mapping[x], mapping[y], mapping[z]
                ):
                    return False, f"triple {(x, y, z)} not preserved"
    cover = [x for p in pieces for x in p]
    if sorted(cover) != sorted(elems):
        return False, "pieces do not partition the source"
    for p in pieces:
        if not oracle_is_convex(c, p):
            return False, f"piece {sorted(p)} not convex in source"
        if not oracle_is_convex(d, [mapping[x] for x in p]):
            return False, f"image of piece {sorted(p)} not convex in target"
    # pieces must sit in the target's cyclic order the way the canonical
    # finite circular order arranges them
    k = len(pieces)
    if k >= 3:
        idx = {}
        for i, p in enumerate(pieces):
            for x in p:
                idx[x] = i
        ring = RawCirc(list(range(k)))
        for x in elems:
            for y in elems:
                for z in elems:
                    i, j, l = idx[x], idx[y], idx[z]
                    if c.triple(x, y, z) and not ring.triple(i, j, l):
                        return False, "pieces are not cyclically ordered"
    return True, "ok"
