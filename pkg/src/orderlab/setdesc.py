"""Eventually periodic subsets of the naturals.

A SetDesc spells a subset of {0, 1, 2, ...} as a finite preperiod bit list
followed by a repeating period.  Membership, boolean combinations, subset and
equality tests (exact and modulo finite sets) are all exact: two descriptions
agree beyond max(preperiods) on a window of lcm(periods) steps iff they agree
on the whole tail.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Tuple


@dataclass(frozen=True)
class SetDesc:
    pre: Tuple[int, ...]
    per: Tuple[int, ...]

    def __post_init__(self):
        if not self.per:
            raise ValueError("period must be nonempty")
        if any(b not in (0, 1) for b in self.pre + self.per):
            raise ValueError("bits must be 0 or 1")

    # -- membership ---------------------------------------------------------

    def member(self, n: int) -> bool:
        if n < 0:
            return False
        if n < len(self.pre):
            return bool(self.pre[n])
        return bool(self.per[(n - len(self.pre)) % len(self.per)])

    def members(self) -> Iterator[int]:
        for n in range(len(self.pre)):
            if self.pre[n]:
                yield n
        if not any(self.per):
            return
        for n in itertools.count(len(self.pre)):
            if self.member(n):
                yield n

    def first(self, k: int) -> Tuple[int, ...]:
        return tuple(itertools.islice(self.members(), k))

    def is_empty(self) -> bool:
        return not any(self.pre) and not any(self.per)

    def is_infinite(self) -> bool:
        return any(self.per)

    def is_finite_set(self) -> bool:
        return not any(self.per)

    def finite_members(self) -> Tuple[int, ...]:
        if not self.is_finite_set():
            raise ValueError("set is infinite")
        return tuple(n for n in range(len(self.pre)) if self.pre[n])

    def min_element(self):
        return next(self.members(), None)

    # -- canonical form -----------------------------------------------------

    def canonical(self) -> "SetDesc":
        pre, per = list(self.pre), list(self.per)
        # minimal period
        n = len(per)
        for d in range(1, n + 1):
            if n % d == 0 and per == per[:d] * (n // d):
                per = per[:d]
                break
        # fold the preperiod tail into the period when they already agree
        while pre and pre[-1] == per[-1]:
            pre.pop()
            per = [per[-1]] + per[:-1]
        return SetDesc(tuple(pre), tuple(per))

    # -- combinations -------------------------------------------------------

    def _aligned(self, other: "SetDesc"):
        n0 = max(len(self.pre), len(other.pre))
        step = math.lcm(len(self.per), len(other.per))
        return n0, step

    def combine(self, other: "SetDesc", op) -> "SetDesc":
        n0, step = self._aligned(other)
        pre = tuple(int(op(self.member(n), other.member(n))) for n in range(n0))
        per = tuple(int(op(self.member(n), other.member(n))) for n in range(n0, n0 + step))
        return SetDesc(pre, per).canonical()

    def union(self, other):
        return self.combine(other, lambda a, b: a or b)

    def intersect(self, other):
        return self.combine(other, lambda a, b: a and b)

    def difference(self, other):
        return self.combine(other, lambda a, b: a and not b)

    # -- comparisons --------------------------------------------------------

    def subset(self, other: "SetDesc") -> bool:
        n0, step = self._aligned(other)
        return all(other.member(n) for n in range(n0 + step) if self.member(n))

    def equals(self, other: "SetDesc") -> bool:
        return self.subset(other) and other.subset(self)

    def subset_mod_finite(self, other: "SetDesc") -> bool:
        n0, step = self._aligned(other)
        return all(other.member(n) for n in range(n0, n0 + step) if self.member(n))

    def equals_mod_finite(self, other: "SetDesc") -> bool:
        return self.subset_mod_finite(other) and other.subset_mod_finite(self)

    # -- transforms ---------------------------------------------------------

    def scale(self, k: int) -> "SetDesc":
        """The set {k*n : n in this set}."""
        if k < 1:
            raise ValueError("scale factor must be >= 1")
        pre = tuple(
            int(m % k == 0 and self.member(m // k)) for m in range(k * len(self.pre))
        )
        per = tuple(
            int(m % k == 0 and self.member(m // k))
            for m in range(k * len(self.pre), k * (len(self.pre) + len(self.per)))
        )
        return SetDesc(pre, per).canonical()

    def __repr__(self):
        return "SetDesc(%s)" % format_setdesc(self)


EMPTY = SetDesc((), (0,))
FULL = SetDesc((), (1,))


def from_finite(members: Iterable[int]) -> SetDesc:
    ms = sorted(set(members))
    if any(m < 0 for m in ms):
        raise ValueError("members must be nonnegative")
    size = (ms[-1] + 1) if ms else 0
    pre = tuple(int(n in set(ms)) for n in range(size))
    return SetDesc(pre, (0,)).canonical()


def from_residues(residues: Iterable[int], modulus: int, start: int = 0) -> SetDesc:
    """{n >= start : n mod modulus in residues}."""
    rs = {r % modulus for r in residues}
    pre = tuple(0 for _ in range(start))
    per = tuple(int(((start + i) % modulus) in rs) for i in range(modulus))
    return SetDesc(pre, per).canonical()


def naturals_from(k: int) -> SetDesc:
    return SetDesc(tuple(0 for _ in range(k)), (1,)).canonical()


def format_setdesc(s: SetDesc) -> str:
    s = s.canonical()
    if s.is_finite_set():
        return "{%s}" % ",".join(str(n) for n in s.finite_members())
    m = len(s.per)
    start = len(s.pre)
    if not any(s.pre):
        residues = sorted(((start + i) % m) for i in range(m) if s.per[i])
        body = ",".join(str(r) for r in residues)
        if start == 0:
            return "{%s mod %d}" % (body, m)
        return "{%s mod %d from %d}" % (body, m, start)
    pre = "".join(str(b) for b in s.pre)
    per = "".join(str(b) for b in s.per)
    return "{pre=%s;per=%s}" % (pre, per)


def parse_setdesc(text: str) -> SetDesc:
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1].strip()
    if body.startswith("pre="):
        prepart, perpart = body.split(";", 1)
        pre = tuple(int(c) for c in prepart[len("pre=") :])
        per = tuple(int(c) for c in perpart.strip()[len("per=") :])
        return SetDesc(pre, per).canonical()
    start = 0
    if " from " in body:
        body, n = body.rsplit(" from ", 1)
        start = int(n)
    if " mod " in body:
        nums, m = body.rsplit(" mod ", 1)
        residues = [int(x) for x in nums.split(",") if x.strip()]
        return from_residues(residues, int(m), start)
    if not body:
        return EMPTY
    return from_finite(int(x) for x in body.split(","))
