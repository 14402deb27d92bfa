"""Shared exact machinery: linear algebra over Q(w), integer Smith normal
form, sparse multivariate polynomials over Q(w), and root finding for binary
forms of degree <= 3.

Root finding is complete in degrees 1 and 2 (discriminant plus explicit
square-root search inside Q(w)); in degree 3 it finds every root that is a
rational multiple of a sixth root of unity and deflates, certifying
completeness only when the residual degree drops to <= 2.  A residual cubic
is reported as unresolved, never approximated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .algebra import CycNum, OMEGA, OMEGA2, ONE, ZERO

Vec = tuple[CycNum, ...]
Mat = tuple[Vec, ...]


# ---------------------------------------------------------------------------
# linear algebra over Q(w)
# ---------------------------------------------------------------------------

def cvec(vals) -> Vec:
    return tuple(CycNum.of(v) for v in vals)


def cmat(rows) -> Mat:
    return tuple(cvec(r) for r in rows)


def mat_identity(n: int) -> Mat:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def mat_mul(a: Mat, b: Mat) -> Mat:
    n, k, m = len(a), len(b), len(b[0])
    assert len(a[0]) == k
    return tuple(
        tuple(sum((a[i][t] * b[t][j] for t in range(k)), ZERO) for j in range(m))
        for i in range(n)
    )


def mat_vec(a: Mat, v: Vec) -> Vec:
    return tuple(sum((a[i][j] * v[j] for j in range(len(v))), ZERO) for i in range(len(a)))


def mat_scale(a: Mat, c) -> Mat:
    c = CycNum.of(c)
    return tuple(tuple(x * c for x in row) for row in a)


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_pow(a: Mat, n: int) -> Mat:
    out = mat_identity(len(a))
    base = a
    while n:
        if n & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        n >>= 1
    return out


def rref(rows: list[list[CycNum]]) -> tuple[list[list[CycNum]], list[int]]:
    """Reduced row echelon form (in place on a copy); returns (rref, pivot cols)."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if not m[i][c].is_zero()), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m[:r], pivots


def kernel(mat: Mat) -> list[Vec]:
    """Basis of {v : mat . v = 0} (column-vector kernel)."""
    if not mat:
        return []
    red, pivots = rref([list(r) for r in mat])
    n = len(mat[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [ZERO] * n
        v[fc] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][fc]
        basis.append(tuple(v))
    return basis


def mat_inverse(a: Mat) -> Mat:
    n = len(a)
    aug = [list(a[i]) + [ONE if j == i else ZERO for j in range(n)] for i in range(n)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(red[i][n:]) for i in range(n))


def row_space_basis(vecs: list[Vec]) -> list[Vec]:
    if not vecs:
        return []
    red, _ = rref([list(v) for v in vecs])
    return [tuple(r) for r in red]


def subspace_intersection(b1: list[Vec], b2: list[Vec]) -> list[Vec]:
    """Basis of rowspace(b1) intersect rowspace(b2)."""
    if not b1 or not b2:
        return []
    n = len(b1[0])
    # x in both spans: x = sum a_i b1_i = sum c_j b2_j; solve [b1^T | -b2^T] = 0
    rows = []
    for coord in range(n):
        rows.append(tuple(list(v[coord] for v in b1) + [-v[coord] for v in b2]))
    sol = kernel(tuple(rows))
    out = []
    for s in sol:
        x = tuple(sum((s[i] * b1[i][coord] for i in range(len(b1))), ZERO)
                  for coord in range(n))
        if any(not c.is_zero() for c in x):
            out.append(x)
    return row_space_basis(out)


def eigenspaces_sixth_roots(m: Mat) -> dict[CycNum, list[Vec]]:
    """Eigenspaces for eigenvalues among the sixth roots of unity.

    Complete for matrices of finite order dividing 6 (minimal polynomial then
    splits into distinct linear factors over Q(w)); asserted on entry.
    """
    n = len(m)
    order = None
    p = mat_identity(n)
    for k in range(1, 7):
        p = mat_mul(p, m)
        if p == mat_identity(n):
            order = k
            break
    assert order is not None and 6 % order == 0, "matrix order must divide 6"
    from .algebra import SIXTH_ROOTS
    out = {}
    for mu in SIXTH_ROOTS:
        ker = kernel(mat_sub(m, mat_scale(mat_identity(n), mu)))
        if ker:
            out[mu] = ker
    return out


# ---------------------------------------------------------------------------
# integer linear algebra
# ---------------------------------------------------------------------------

def smith_normal_form(mat: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (U, D, V) with U @ mat @ V = D diagonal, U and V unimodular."""
    a = [row[:] for row in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, f):
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, f):
        for r in a:
            r[dst] += f * r[src]
        for r in v:
            r[dst] += f * r[src]

    t = 0
    while t < min(rows, cols):
        # find a nonzero pivot
        piv = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] != 0:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    add_row(t, i, -q)
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    add_col(t, j, -q)
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
            if not dirty:
                break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    # enforce divisibility d1 | d2 | ...
    for i in range(t - 1):
        for j in range(i + 1, t):
            if a[j][j] % a[i][i] != 0:
                add_col(j, i, 1)
                # re-run the reduction from position i
                return _snf_fixup(a, u, v, mat)
    d = [[a[i][j] if i == j else 0 for j in range(cols)] for i in range(rows)]
    return u, d, v


def _snf_fixup(a, u, v, orig):
    # Rare path: restart on the transformed matrix and compose the transforms.
    u2, d, v2 = smith_normal_form(a)
    uu = [[sum(u2[i][k] * u[k][j] for k in range(len(u))) for j in range(len(u[0]))]
          for i in range(len(u2))]
    vv = [[sum(v[i][k] * v2[k][j] for k in range(len(v2))) for j in range(len(v2[0]))]
          for i in range(len(v))]
    return uu, d, vv


def integer_kernel_saturated(mat: list[list[int]]) -> list[list[int]]:
    """Saturated basis of {v in Z^n : mat . v = 0}."""
    rows = len(mat)
    if rows == 0:
        return []
    u, d, v = smith_normal_form(mat)
    cols = len(mat[0])
    rank = sum(1 for i in range(min(rows, cols)) if d[i][i] != 0)
    # kernel is spanned by the last cols-rank columns of V
    out = []
    for j in range(rank, cols):
        out.append([v[i][j] for i in range(cols)])
    return out


# ---------------------------------------------------------------------------
# polynomials over Q(w)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Poly:
    """Sparse multivariate polynomial over Q(w); exponent tuples -> CycNum."""

    nvars: int
    terms: tuple[tuple[tuple[int, ...], CycNum], ...]

    @staticmethod
    def make(nvars: int, termmap: dict) -> "Poly":
        clean = {}
        for e, c in termmap.items():
            c = CycNum.of(c)
            if not c.is_zero():
                clean[tuple(e)] = clean.get(tuple(e), ZERO) + c
        items = tuple(sorted((e, c) for e, c in clean.items() if not c.is_zero()))
        return Poly(nvars, items)

    @staticmethod
    def variable(nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return Poly.make(nvars, {tuple(e): ONE})

    @staticmethod
    def constant(nvars: int, c) -> "Poly":
        return Poly.make(nvars, {(0,) * nvars: CycNum.of(c)})

    def termdict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Poly") -> "Poly":
        d = self.termdict()
        for e, c in other.terms:
            d[e] = d.get(e, ZERO) + c
        return Poly.make(self.nvars, d)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        d = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                d[e] = d.get(e, ZERO) + c1 * c2
        return Poly.make(self.nvars, d)

    def scale(self, c) -> "Poly":
        c = CycNum.of(c)
        return Poly.make(self.nvars, {e: cc * c for e, cc in self.terms})

    def eval(self, point) -> CycNum:
        vals = [CycNum.of(v) for v in point]
        total = ZERO
        for e, c in self.terms:
            t = c
            for i, k in enumerate(e):
                for _ in range(k):
                    t = t * vals[i]
            total = total + t
        return total

    def derivative(self, i: int) -> "Poly":
        d = {}
        for e, c in self.terms:
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            d2 = tuple(ne)
            d[d2] = d.get(d2, ZERO) + c * e[i]
        return Poly.make(self.nvars, d)

    def compose_linear(self, m: Mat) -> "Poly":
        """f(M v): substitute variable i by the i-th coordinate of M.v."""
        n = self.nvars
        lin = [Poly.make(n, {tuple(int(j == k) for k in range(n)): m[i][j]
                             for j in range(n)}) for i in range(n)]
        out = Poly.make(n, {})
        for e, c in self.terms:
            t = Poly.constant(n, c)
            for i, k in enumerate(e):
                for _ in range(k):
                    t = t * lin[i]
            out = out + t
        return out

    def restrict_line(self, p: Vec, q: Vec) -> "BinForm":
        """Substitute v = s*p + t*q; returns the binary form in (s, t)."""
        deg = max((sum(e) for e, _ in self.terms), default=0)
        coeffs = [ZERO] * (deg + 1)
        for e, c in self.terms:
            # expand prod_i (s p_i + t q_i)^{e_i} as a list over t-degree
            acc = [ONE]
            for i, k in enumerate(e):
                for _ in range(k):
                    nxt = [ZERO] * (len(acc) + 1)
                    for d, a in enumerate(acc):
                        nxt[d] = nxt[d] + a * p[i]
                        nxt[d + 1] = nxt[d + 1] + a * q[i]
                    acc = nxt
            # pad to full degree in (s,t): multiply by s^(deg - sum e) implicitly
            for d, a in enumerate(acc):
                coeffs[d] = coeffs[d] + a * c
        return BinForm(tuple(coeffs))

    def to_json(self):
        return [[list(e), c.to_pair()] for e, c in self.terms]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            mono = "*".join(f"v{i}^{k}" if k > 1 else f"v{i}"
                            for i, k in enumerate(e) if k)
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# rational univariate helpers (for the degree-3 solver)
# ---------------------------------------------------------------------------

def _poly_trim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = a[:]
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        f = a[-1] / lb
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] -= f * bc
        _poly_trim(a)
        if not a:
            break
    return a


def rational_poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _poly_trim(a[:]), _poly_trim(b[:])
    while b:
        a, b = b, _poly_mod(a, b)
    if a:
        lead = a[-1]
        a = [x / lead for x in a]
    return a


def _int_divisors(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        return []
    out = set()
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            out.add(d)
            out.add(n // d)
    return sorted(out)


def rational_roots(coeffs: list[Fraction]) -> list[Fraction]:
    """All rational roots of a rational polynomial (exact, rational root theorem)."""
    c = _poly_trim([Fraction(x) for x in coeffs])
    if not c:
        return []  # zero polynomial: roots are everything; callers guard this
    roots = []
    # factor out s^k
    k = 0
    while c[k] == 0:
        k += 1
    if k:
        roots.append(Fraction(0))
        c = c[k:]
    if len(c) == 1:
        return roots
    from math import lcm
    mult = lcm(*[x.denominator for x in c])
    ic = [int(x * mult) for x in c]
    for p in _int_divisors(ic[0]):
        for q in _int_divisors(ic[-1]):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand in roots:
                    continue
                val = Fraction(0)
                for cc in reversed(c):
                    val = val * cand + cc
                if val == 0:
                    roots.append(cand)
    return roots


# ---------------------------------------------------------------------------
# binary forms and exact root finding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootResult:
    roots: tuple[tuple[CycNum, CycNum], ...]
    complete: bool
    note: str = ""


def _normalize_pair(s: CycNum, t: CycNum) -> tuple[CycNum, CycNum]:
    if not s.is_zero():
        return (ONE, t / s)
    return (ZERO, ONE)


def _cyc_univ_divide(c: list[CycNum], root: CycNum) -> list[CycNum]:
    """Synthetic division of sum c[i] s^i by (s - root); remainder must vanish."""
    n = len(c) - 1
    out = [ZERO] * n
    carry = c[n]
    for i in range(n - 1, -1, -1):
        out[i] = carry
        carry = c[i] + carry * root
    assert carry.is_zero(), "not a root"
    return out


def _components(c: list[CycNum]) -> tuple[list[Fraction], list[Fraction]]:
    return [x.re for x in c], [x.wc for x in c]


def cyc_univariate_roots(coeffs: list[CycNum]) -> RootResult:
    """Roots in Q(w) of sum coeffs[i] * s^i.

    Complete through degree 2.  Degree 3: finds all roots of the form
    r * zeta with r rational and zeta a sixth root of unity, deflates, and
    certifies completeness only if the residual degree is <= 2.
    """
    c = [CycNum.of(x) for x in coeffs]
    while c and c[-1].is_zero():
        c.pop()
    if not c:
        raise ValueError("zero polynomial has every point as a root")
    deg = len(c) - 1
    if deg == 0:
        return RootResult((), True)
    if deg == 1:
        return RootResult(((-(c[0] / c[1]), ONE),), True)
    if deg == 2:
        a2, a1, a0 = c[2], c[1], c[0]
        disc = a1 * a1 - CycNum.of(4) * a2 * a0
        sq = disc.sqrt()
        if sq is None:
            return RootResult((), True, "quadratic discriminant has no square root in Q(w)")
        half = (CycNum.of(2) * a2).inverse()
        r1 = (-a1 + sq) * half
        r2 = (-a1 - sq) * half
        roots = {(r1, ONE), (r2, ONE)}
        return RootResult(tuple(sorted(roots, key=_root_sort_key)), True)
    if deg == 3:
        found: list[CycNum] = []
        for unit in (ONE, OMEGA, OMEGA2):
            # roots of the form unit * r with r rational: p(unit*s) has
            # component polynomials whose common rational roots give r
            rot = [c[i] * unit ** i for i in range(4)]
            re, im = _components(rot)
            g = rational_poly_gcd(re, im) if any(im) else _poly_trim(re[:])
            if not g:   # p(unit*s) identically rational-multiple: use re alone
                g = _poly_trim(re[:]) or _poly_trim(im[:])
            for r in rational_roots(g):
                cand = unit * CycNum.of(r)
                val = ZERO
                for cc in reversed(c):
                    val = val * cand + cc
                if val.is_zero() and all(cand != f for f in found):
                    found.append(cand)
        work = c[:]
        for r in found:
            if len(work) - 1 < 1:
                break
            try:
                work = _cyc_univ_divide(work, r)
            except AssertionError:
                continue
        roots = {(r, ONE) for r in found}
        if len(work) - 1 <= 2 and len(work) - 1 >= 1:
            sub = cyc_univariate_roots(work)
            roots.update(sub.roots)
            return RootResult(tuple(sorted(roots, key=_root_sort_key)), sub.complete)
        if len(work) - 1 < 1:
            return RootResult(tuple(sorted(roots, key=_root_sort_key)), True)
        return RootResult(tuple(sorted(roots, key=_root_sort_key)), False,
                          "residual cubic without detected Q(w) roots")
    raise NotImplementedError(f"degree {deg} root finding not supported")


def _root_sort_key(root):
    s, t = root
    return (s.re, s.wc, t.re, t.wc)


@dataclass(frozen=True)
class BinForm:
    """Binary form sum_k coeffs[k] * s^(d-k) t^k ... stored low-t-degree first:
    coeffs[k] is the coefficient of s^(deg-k) * t^k."""

    coeffs: tuple[CycNum, ...]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def eval(self, s, t) -> CycNum:
        s, t = CycNum.of(s), CycNum.of(t)
        d = self.degree()
        total = ZERO
        for k, c in enumerate(self.coeffs):
            total = total + c * s ** (d - k) * t ** k
        return total

    def roots(self) -> RootResult:
        """Projective roots (s : t), normalized; complete flag as in the solver."""
        if self.is_zero():
            raise ValueError("zero form: the whole line vanishes")
        c = list(self.coeffs)
        roots = set()
        # root (1, 0) iff leading s-coefficient vanishes
        lead_zero = c[0].is_zero()
        if lead_zero:
            roots.add((ONE, ZERO))
        # dehomogenize: t = 1, polynomial in s with coeffs reversed order
        univ = list(reversed(c))   # univ[i] = coeff of s^i
        while univ and univ[-1].is_zero():
            univ.pop()
        if len(univ) <= 1:
            return RootResult(tuple(sorted(roots, key=_root_sort_key)), True)
        res = cyc_univariate_roots(univ)
        for (s, t) in res.roots:
            roots.add(_normalize_pair(s, t))
        return RootResult(tuple(sorted(roots, key=_root_sort_key)), res.complete, res.note)
