"""Exact arithmetic in the cyclotomic field Q(w), w a primitive cube root of
unity, and the order-12 symmetry group (coordinate permutations of {x,y,z}
times an inversion involution) used throughout the package.

All values are immutable and exact: rationals are `fractions.Fraction`,
never floats.  The only roots of unity representable are the sixth roots;
anything else raises NonRepresentableError or is reported as unresolved by
the callers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt


class NonRepresentableError(ValueError):
    """A requested value does not lie in Q(w), e.g. a root of unity of order
    not dividing 6 or a missing square root."""


class InvalidOrderError(ValueError):
    """Requested subgroup order does not divide 12."""


def _rat(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"expected int or Fraction, got {type(v).__name__}")


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact nonnegative square root of a rational, or None if none exists."""
    if q < 0:
        return None
    if q == 0:
        return Fraction(0)
    rn, rd = isqrt(q.numerator), isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def rational_cbrt(q: Fraction) -> Fraction | None:
    """Exact rational cube root, or None."""
    if q == 0:
        return Fraction(0)
    sign = 1 if q > 0 else -1
    qa = abs(q)

    def icbrt(n: int) -> int | None:
        c = round(n ** (1 / 3))
        for cand in (c - 1, c, c + 1):
            if cand >= 0 and cand ** 3 == n:
                return cand
        return None

    cn, cd = icbrt(qa.numerator), icbrt(qa.denominator)
    if cn is None or cd is None:
        return None
    return sign * Fraction(cn, cd)


@dataclass(frozen=True)
class CycNum:
    """Element re + wc*w of Q(w), reduced via w^2 = -1 - w.

    The representation (re, wc) is unique, so equality and hashing are
    coordinate-wise.
    """

    re: Fraction = Fraction(0)
    wc: Fraction = Fraction(0)

    # -- construction -----------------------------------------------------
    @staticmethod
    def of(v) -> "CycNum":
        if isinstance(v, CycNum):
            return v
        return CycNum(_rat(v), Fraction(0))

    # -- basic predicates --------------------------------------------------
    def is_zero(self) -> bool:
        return self.re == 0 and self.wc == 0

    def is_rational(self) -> bool:
        return self.wc == 0

    # -- ring structure ----------------------------------------------------
    def __add__(self, other) -> "CycNum":
        o = CycNum.of(other)
        return CycNum(self.re + o.re, self.wc + o.wc)

    __radd__ = __add__

    def __neg__(self) -> "CycNum":
        return CycNum(-self.re, -self.wc)

    def __sub__(self, other) -> "CycNum":
        return self + (-CycNum.of(other))

    def __rsub__(self, other) -> "CycNum":
        return CycNum.of(other) + (-self)

    def __mul__(self, other) -> "CycNum":
        o = CycNum.of(other)
        # (a+bw)(c+dw) = ac + (ad+bc)w + bd w^2,  w^2 = -1-w
        a, b, c, d = self.re, self.wc, o.re, o.wc
        return CycNum(a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def conj(self) -> "CycNum":
        """The nontrivial field automorphism w -> w^2 = -1-w."""
        return CycNum(self.re - self.wc, -self.wc)

    def norm(self) -> Fraction:
        """Field norm N(a+bw) = a^2 - ab + b^2 (always >= 0)."""
        a, b = self.re, self.wc
        return a * a - a * b + b * b

    def inverse(self) -> "CycNum":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of 0 in Q(w)")
        c = self.conj()
        return CycNum(c.re / n, c.wc / n)

    def __truediv__(self, other) -> "CycNum":
        return self * CycNum.of(other).inverse()

    def __rtruediv__(self, other) -> "CycNum":
        return CycNum.of(other) * self.inverse()

    def __pow__(self, n: int) -> "CycNum":
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- square roots inside Q(w) -------------------------------------------
    def sqrt(self) -> "CycNum | None":
        """A square root in Q(w) if one exists, else None (never approximates).

        Solving (p+qw)^2 = d0 + d1*w componentwise gives, for q != 0, the
        biquadratic 3q^4 + (4d0-2d1)q^2 - d1^2 = 0.
        """
        d0, d1 = self.re, self.wc
        if self.is_zero():
            return ZERO
        if d1 == 0:
            p = rational_sqrt(d0)
            if p is not None:
                return CycNum(p, Fraction(0))
        # q != 0 branch
        b = 4 * d0 - 2 * d1
        disc = b * b + 12 * d1 * d1
        rd = rational_sqrt(disc)
        if rd is None:
            return None
        for sign in (1, -1):
            qq = (-b + sign * rd) / 6
            if qq <= 0:
                continue
            q = rational_sqrt(qq)
            if q is None:
                continue
            p = (d1 + qq) / (2 * q)
            cand = CycNum(p, q)
            if cand * cand == self:
                return cand
        return None

    # -- misc ----------------------------------------------------------------
    def to_pair(self) -> list[list[int]]:
        """JSON form: [[num,den] of re, [num,den] of wc]."""
        return [[self.re.numerator, self.re.denominator],
                [self.wc.numerator, self.wc.denominator]]

    def __str__(self) -> str:
        if self.wc == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.wc}w" if self.wc != 1 else "w"
        sign = "+" if self.wc > 0 else "-"
        wmag = abs(self.wc)
        wpart = "w" if wmag == 1 else f"{wmag}w"
        return f"{self.re}{sign}{wpart}"

    __repr__ = __str__


ZERO = CycNum()
ONE = CycNum(Fraction(1))
OMEGA = CycNum(Fraction(0), Fraction(1))
OMEGA2 = OMEGA * OMEGA  # = -1 - w

#: the six sixth roots of unity, in exponent order zeta6^0 .. zeta6^5,
#: where zeta6 = -w^2 = 1 + w is a primitive sixth root.
ZETA6 = CycNum(Fraction(1), Fraction(1))
SIXTH_ROOTS = tuple(ZETA6 ** k for k in range(6))


def root_of_unity(order: int, k: int = 1) -> CycNum:
    """zeta_order^k for order dividing 6; NonRepresentableError otherwise."""
    if order <= 0 or 6 % order != 0:
        raise NonRepresentableError(f"roots of unity of order {order} are not in Q(w)")
    return ZETA6 ** ((6 // order) * (k % order))


def unit_order(u: CycNum) -> int | None:
    """Multiplicative order of u if it is a sixth root of unity, else None."""
    for k in range(6):
        if SIXTH_ROOTS[k] == u:
            return 1 if k == 0 else 6 // gcd(6, k)
    return None


def cyc_mul(a: CycNum, b: CycNum) -> CycNum:
    return a * b


def cyc_inv(a: CycNum) -> CycNum:
    return a.inverse()


# ---------------------------------------------------------------------------
# The group: coordinate permutations of {x,y,z} times the inversion involution
# ---------------------------------------------------------------------------

_PERM_NAMES = {
    (0, 1, 2): "e",
    (1, 0, 2): "(xy)",
    (0, 2, 1): "(yz)",
    (2, 1, 0): "(xz)",
    (1, 2, 0): "(xyz)",
    (2, 0, 1): "(xzy)",
}


@dataclass(frozen=True)
class GroupElem:
    """Pair (perm, inv).  Acting on a coordinate triple v, the permutation part
    gives (g.v)[i] = v[perm[i]], and the inv flag composes with the model's
    involution realization (inversion on the torus, a linear involution on the
    projective models).  Composition g*h acts as "h first, then g".
    """

    perm: tuple[int, int, int]
    inv: bool

    def __mul__(self, other: "GroupElem") -> "GroupElem":
        p = tuple(other.perm[self.perm[i]] for i in range(3))
        return GroupElem(p, self.inv ^ other.inv)

    def inverse(self) -> "GroupElem":
        ip = [0, 0, 0]
        for i in range(3):
            ip[self.perm[i]] = i
        return GroupElem(tuple(ip), self.inv)

    def apply_index(self, i: int) -> int:
        return self.perm[i]

    @property
    def name(self) -> str:
        base = _PERM_NAMES[self.perm]
        if not self.inv:
            return base
        return "t" if base == "e" else base + "t"

    def __repr__(self) -> str:
        return self.name


IDENTITY = GroupElem((0, 1, 2), False)
S_XY = GroupElem((1, 0, 2), False)
S_YZ = GroupElem((0, 2, 1), False)
S_XZ = GroupElem((2, 1, 0), False)
S_XYZ = GroupElem((1, 2, 0), False)   # point map (a,b,c) -> (b,c,a)
TAU = GroupElem((0, 1, 2), True)

GENERATORS = (S_XY, S_XYZ, TAU)


@lru_cache(maxsize=None)
def group_all() -> tuple[GroupElem, ...]:
    """All 12 elements, deterministic order (identity first)."""
    els = [GroupElem(p, inv)
           for inv in (False, True)
           for p in _PERM_NAMES]
    return tuple(sorted(els, key=lambda g: (g.inv, g.perm)))


def element_order(g: GroupElem) -> int:
    n, h = 1, g
    while h != IDENTITY:
        h = h * g
        n += 1
        if n > 12:
            raise AssertionError("element order exceeds group order")
    return n


@dataclass(frozen=True)
class Subgroup:
    elements: frozenset[GroupElem]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: GroupElem) -> bool:
        return g in self.elements

    def __iter__(self):
        return iter(sorted(self.elements, key=lambda g: (g.inv, g.perm)))

    @property
    def label(self) -> str:
        return "{" + ",".join(g.name for g in self) + "}"

    def is_closed(self) -> bool:
        els = self.elements
        if IDENTITY not in els:
            return False
        return all(a * b in els for a in els for b in els)

    @staticmethod
    def generated(gens) -> "Subgroup":
        els = {IDENTITY, *gens}
        frontier = list(els)
        while frontier:
            nxt = []
            for a in list(els):
                for b in frontier:
                    c = a * b
                    if c not in els:
                        els.add(c)
                        nxt.append(c)
            frontier = nxt
        return Subgroup(frozenset(els))


FULL_GROUP = Subgroup(frozenset(group_all()))


@lru_cache(maxsize=None)
def all_subgroups() -> tuple[Subgroup, ...]:
    """Every subgroup, by brute force over the subset lattice (|G| = 12)."""
    els = group_all()
    non_id = [g for g in els if g != IDENTITY]
    found = []
    for mask in range(1 << len(non_id)):
        subset = frozenset([IDENTITY] + [non_id[i] for i in range(len(non_id))
                                         if mask >> i & 1])
        if 12 % len(subset) != 0:
            continue
        sg = Subgroup(subset)
        if sg.is_closed():
            found.append(sg)
    found.sort(key=lambda s: (s.order, sorted((g.inv, g.perm) for g in s.elements)))
    return tuple(found)


def subgroups_of_order(n: int) -> tuple[Subgroup, ...]:
    """All subgroups of order n (not just up to conjugacy), deterministic order."""
    if n <= 0 or 12 % n != 0:
        raise InvalidOrderError(f"{n} does not divide 12")
    return tuple(s for s in all_subgroups() if s.order == n)
