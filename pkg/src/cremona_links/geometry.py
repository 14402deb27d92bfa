"""Surface models carrying the group action, exact point/orbit machinery,
fixed loci, small-orbit enumeration with completeness certificates, curve and
pencil catalogs, and the explicit birational maps (degree-6 surface to the
quadric, stereographic projection) used by the contrast check.

Models:
  Y_P2       the plane with the linear action,
  X_torus    the (P1)^3 compactification x1*y1*z1 = x0*y0*z0 of xyz = 1,
  X0_cubic   xyz = w^3 (inversion acts birationally; catalog only),
  X1_cubic   xyz = w^2(x+y+z)/3 (linear action, three nodes),
  X2_quadric xy+yz+zx = 3w^2 (linear action, smooth).

Points are stored in multi-projective coordinates normalized so the first
nonzero coordinate of every factor equals 1, which makes orbit deduplication
plain tuple equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .algebra import (CycNum, GroupElem, IDENTITY, OMEGA, ONE, S_XY, S_XYZ,
                      Subgroup, TAU, ZERO, group_all, subgroups_of_order)
from .exact import (BinForm, Mat, Poly, Vec, cmat, cvec, eigenspaces_sixth_roots,
                    mat_identity, mat_inverse, mat_mul, mat_vec, rref,
                    row_space_basis, smith_normal_form, subspace_intersection)
from .lattice import DivClass

F = Fraction


class ArityError(ValueError):
    pass


class UndefinedImageError(ValueError):
    """A birational realization is evaluated at an indeterminacy point."""


# ---------------------------------------------------------------------------
# models
# ---------------------------------------------------------------------------

def _perm_matrix4(perm) -> Mat:
    rows = []
    for i in range(3):
        rows.append([1 if j == perm[i] else 0 for j in range(3)] + [0])
    rows.append([0, 0, 0, 1])
    return cmat(rows)


def _close_matrices(gens: dict[GroupElem, Mat]) -> dict[GroupElem, Mat]:
    n = len(next(iter(gens.values())))
    images = {IDENTITY: mat_identity(n)}
    images.update(gens)
    changed = True
    while changed:
        changed = False
        for g, mg in list(images.items()):
            for h, mh in list(images.items()):
                gh = g * h
                prod = mat_mul(mg, mh)
                if gh in images:
                    assert images[gh] == prod, "matrix realization is not a homomorphism"
                else:
                    images[gh] = prod
                    changed = True
    assert len(images) == 12
    return images


@dataclass
class SurfaceModel:
    id: str
    factors: tuple[int, ...]            # coordinates per projective factor
    varnames: tuple[str, ...]
    defining: tuple[Poly, ...]
    kind: str                           # "linear" | "torus" | "birational_z2"
    matrices: dict[GroupElem, Mat] | None = field(default=None, repr=False)
    s3_matrices: dict[GroupElem, Mat] | None = field(default=None, repr=False)

    @property
    def nvars(self) -> int:
        return sum(self.factors)

    def to_json(self):
        return {
            "id": self.id,
            "factors": list(self.factors),
            "variables": list(self.varnames),
            "defining": [p.to_json() for p in self.defining],
            "action": self.kind,
        }


def _p3_poly(termmap) -> Poly:
    return Poly.make(4, termmap)


@lru_cache(maxsize=None)
def models() -> dict[str, SurfaceModel]:
    out = {}

    # Y = P2 with the matrix action (fixed point (1,0,0), invariant line u0=0)
    sxy = cmat([[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    sxyz = cmat([[1, 0, 0], [0, 0, 1], [0, -1, -1]])
    tau = cmat([[1, 0, 0], [0, -1, 0], [0, 0, -1]])
    out["Y_P2"] = SurfaceModel(
        "Y_P2", (3,), ("u0", "u1", "u2"), (), "linear",
        _close_matrices({S_XY: sxy, S_XYZ: sxyz, TAU: tau}))

    # X = {x1 y1 z1 = x0 y0 z0} in (P1)^3; vars (x1,x0,y1,y0,z1,z0)
    f = Poly.make(6, {(1, 0, 1, 0, 1, 0): 1, (0, 1, 0, 1, 0, 1): -1})
    out["X_torus"] = SurfaceModel(
        "X_torus", (2, 2, 2), ("x1", "x0", "y1", "y0", "z1", "z0"), (f,), "torus")

    # X0: xyz = w^3
    f0 = _p3_poly({(1, 1, 1, 0): 1, (0, 0, 0, 3): -1})
    s3m = {g: _perm_matrix4(g.perm) for g in group_all() if not g.inv}
    out["X0_cubic"] = SurfaceModel(
        "X0_cubic", (4,), ("x", "y", "z", "w"), (f0,), "birational_z2",
        None, s3m)

    # X1: xyz - (1/3) w^2 (x+y+z) = 0, inversion acts by (x,y,z,w)->(-x,-y,-z,w)
    third = F(1, 3)
    f1 = _p3_poly({(1, 1, 1, 0): 1,
                   (1, 0, 0, 2): -third, (0, 1, 0, 2): -third, (0, 0, 1, 2): -third})
    tau1 = cmat([[-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]])
    gens1 = {S_XY: _perm_matrix4(S_XY.perm), S_XYZ: _perm_matrix4(S_XYZ.perm), TAU: tau1}
    out["X1_cubic"] = SurfaceModel(
        "X1_cubic", (4,), ("x", "y", "z", "w"), (f1,), "linear", _close_matrices(gens1))

    # X2: xy + yz + zx = 3 w^2, inversion acts by w -> -w
    f2 = _p3_poly({(1, 1, 0, 0): 1, (0, 1, 1, 0): 1, (1, 0, 1, 0): 1, (0, 0, 0, 2): -3})
    tau2 = cmat([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]])
    gens2 = {S_XY: _perm_matrix4(S_XY.perm), S_XYZ: _perm_matrix4(S_XYZ.perm), TAU: tau2}
    out["X2_quadric"] = SurfaceModel(
        "X2_quadric", (4,), ("x", "y", "z", "w"), (f2,), "linear", _close_matrices(gens2))

    return out


#: anticanonical self-intersection of each model
MODEL_K2 = {"Y_P2": 9, "X_torus": 6, "X0_cubic": 6, "X1_cubic": 6, "X2_quadric": 8}


# ---------------------------------------------------------------------------
# points
# ---------------------------------------------------------------------------

def _normalize_factor(vals: tuple[CycNum, ...]) -> tuple[CycNum, ...]:
    pivot = next((v for v in vals if not v.is_zero()), None)
    if pivot is None:
        raise ArityError("projective factor is identically zero")
    inv = pivot.inverse()
    return tuple(v * inv for v in vals)


@dataclass(frozen=True)
class SurfacePoint:
    model: str
    coords: tuple[tuple[CycNum, ...], ...]

    @staticmethod
    def make(model_id: str, raw, check: bool = True) -> "SurfacePoint":
        m = models()[model_id]
        factors = _split_factors(m, raw)
        norm = tuple(_normalize_factor(f) for f in factors)
        p = SurfacePoint(model_id, norm)
        if check and not contains(model_id, raw):
            raise ValueError(f"point {p} is not on {model_id}")
        return p

    def flat(self) -> tuple[CycNum, ...]:
        return tuple(c for f in self.coords for c in f)

    def sort_key(self):
        return tuple((c.re, c.wc) for c in self.flat())

    def to_json(self):
        return [[c.to_pair() for c in f] for f in self.coords]

    def __str__(self) -> str:
        return ";".join("(" + ",".join(str(c) for c in f) + ")" for f in self.coords)


def _split_factors(m: SurfaceModel, raw):
    flat: list[CycNum]
    if raw and isinstance(raw[0], (tuple, list)):
        flat = [CycNum.of(c) for f in raw for c in f]
    else:
        flat = [CycNum.of(c) for c in raw]
    if len(flat) != m.nvars:
        raise ArityError(f"{m.id} needs {m.nvars} coordinates, got {len(flat)}")
    out = []
    i = 0
    for n in m.factors:
        out.append(tuple(flat[i:i + n]))
        i += n
    return tuple(out)


def contains(model_id: str, raw) -> bool:
    m = models()[model_id]
    factors = _split_factors(m, raw)
    for f in factors:
        if all(c.is_zero() for c in f):
            raise ArityError("projective factor is identically zero")
    flat = [c for f in factors for c in f]
    return all(p.eval(flat).is_zero() for p in m.defining)


def affine_torus_point(x, y, z) -> SurfacePoint:
    return SurfacePoint.make(
        "X_torus", ((CycNum.of(x), ONE), (CycNum.of(y), ONE), (CycNum.of(z), ONE)))


# ---------------------------------------------------------------------------
# the action
# ---------------------------------------------------------------------------

def act(model_id: str, g: GroupElem, p: SurfacePoint) -> SurfacePoint:
    m = models()[model_id]
    assert p.model == model_id
    if m.kind == "torus":
        pairs = [tuple(reversed(f)) if g.inv else f for f in p.coords]
        newpairs = tuple(pairs[g.perm[i]] for i in range(3))
        return SurfacePoint.make(model_id, newpairs, check=False)
    if m.kind == "linear":
        v = mat_vec(m.matrices[g], p.flat())
        return SurfacePoint.make(model_id, v, check=False)
    if m.kind == "birational_z2":
        v = p.flat()
        if g.inv:
            x, y, z, w = v
            v = (y * z * w, x * z * w, x * y * w, x * y * z)
            if all(c.is_zero() for c in v):
                raise UndefinedImageError(
                    f"inversion on {model_id} is undefined at {p}")
        perm_only = GroupElem(g.perm, False)
        v = mat_vec(m.s3_matrices[perm_only], v)
        return SurfacePoint.make(model_id, v, check=False)
    raise AssertionError(m.kind)


def stabilizer_of(model_id: str, p: SurfacePoint) -> Subgroup:
    return Subgroup(frozenset(g for g in group_all() if act(model_id, g, p) == p))


@dataclass(frozen=True)
class Orbit:
    model: str
    points: tuple[SurfacePoint, ...]
    stabilizer: Subgroup

    @property
    def length(self) -> int:
        return len(self.points)

    @property
    def point_labels(self) -> tuple[str, ...]:
        return tuple(point_name(p) or f"pt{i}:{p}" for i, p in enumerate(self.points))

    @property
    def point_permutations(self) -> dict[GroupElem, tuple[int, ...]]:
        index = {p: i for i, p in enumerate(self.points)}
        out = {}
        for g in group_all():
            out[g] = tuple(index[act(self.model, g, p)] for p in self.points)
        return out

    @property
    def label(self) -> str:
        return orbit_label(self)

    def to_json(self):
        return {"label": self.label, "length": self.length,
                "points": {lab: p.to_json()
                           for lab, p in zip(self.point_labels, self.points)},
                "stabilizer_order": self.stabilizer.order}


def orbit_of(model_id: str, p: SurfacePoint) -> Orbit:
    seen = {}
    for g in group_all():
        q = act(model_id, g, p)
        seen[q] = True
    pts = tuple(sorted(seen, key=lambda q: q.sort_key()))
    stab = stabilizer_of(model_id, p)
    assert len(pts) * stab.order == 12
    return Orbit(model_id, pts, stab)


# ---------------------------------------------------------------------------
# named points and orbit labels
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def named_points(model_id: str) -> dict[str, SurfacePoint]:
    w = OMEGA
    if model_id == "X_torus":
        return {
            "P": affine_torus_point(1, 1, 1),
            "P1": affine_torus_point(w, w, w),
            "P-1": affine_torus_point(w * w, w * w, w * w),
            "Q1": affine_torus_point(1, -1, -1),
            "Q2": affine_torus_point(-1, 1, -1),
            "Q3": affine_torus_point(-1, -1, 1),
        }
    if model_id == "X2_quadric":
        mk = lambda *c: SurfacePoint.make("X2_quadric", cvec(c))
        return {
            "P1": mk(1, 1, 1, 1),
            "P-1": mk(1, 1, 1, -1),
            "R1": mk(1, w, w * w, 0),
            "R2": mk(1, w * w, w, 0),
            "A1": mk(1, 0, 0, 0),
            "A2": mk(0, 1, 0, 0),
            "A3": mk(0, 0, 1, 0),
            "B1": mk(-1, 2, 2, 0),
            "B2": mk(2, -1, 2, 0),
            "B3": mk(2, 2, -1, 0),
        }
    if model_id == "Y_P2":
        mk = lambda *c: SurfacePoint.make("Y_P2", cvec(c))
        return {"F": mk(1, 0, 0), "L1": mk(0, 1, w), "L2": mk(0, 1, w * w)}
    if model_id == "X1_cubic":
        mk = lambda *c: SurfacePoint.make("X1_cubic", cvec(c))
        return {"P0": mk(0, 0, 0, 1), "P1": mk(1, 1, 1, 1), "P-1": mk(-1, -1, -1, 1),
                "N1": mk(1, 0, 0, 0), "N2": mk(0, 1, 0, 0), "N3": mk(0, 0, 1, 0)}
    return {}


def point_name(p: SurfacePoint) -> str | None:
    for name, q in named_points(p.model).items():
        if p == q:
            return name
    return None


_ORBIT_LABELS = [
    (frozenset({"P"}), "P"),
    (frozenset({"P1", "P-1"}), "P1,P-1"),
    (frozenset({"Q1", "Q2", "Q3"}), "Q1,Q2,Q3"),
    (frozenset({"R1", "R2"}), "R1,R2"),
    (frozenset({"A1", "A2", "A3"}), "A"),
    (frozenset({"B1", "B2", "B3"}), "B"),
]


def orbit_label(orbit: Orbit) -> str:
    names = set()
    for p in orbit.points:
        n = point_name(p)
        if n is None:
            names = None
            break
        names.add(n)
    if names is not None:
        for key, lab in _ORBIT_LABELS:
            if names == key:
                return lab
        return ",".join(sorted(names))
    return "{" + ",".join(str(p) for p in orbit.points) + "}"


def orbit_by_label(model_id: str, label: str) -> Orbit:
    table = named_points(model_id)
    first = {"P": "P", "P1,P-1": "P1", "Q1,Q2,Q3": "Q1", "R1,R2": "R1",
             "A": "A1", "B": "B1"}
    return orbit_of(model_id, table[first[label]])


# ---------------------------------------------------------------------------
# fixed loci
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FixedComponent:
    model: str
    kind: str               # "projective_subspace" | "plane_section" | "subtorus" | "infinity_line"
    description: str

    def to_json(self):
        return {"kind": self.kind, "description": self.description}


@dataclass(frozen=True)
class FixedLocus:
    points: tuple[SurfacePoint, ...]
    components: tuple[FixedComponent, ...]
    unresolved: tuple[str, ...]

    @property
    def fully_resolved(self) -> bool:
        return not self.unresolved


def _generating_set(sub: Subgroup) -> list[GroupElem]:
    gens: list[GroupElem] = []
    have = Subgroup.generated(gens)
    for g in sub:
        if g == IDENTITY:
            continue
        if g not in have.elements:
            gens.append(g)
            have = Subgroup.generated(gens)
            if have.order == sub.order:
                break
    return gens


def fixed_locus(model_id: str, sub: Subgroup) -> FixedLocus:
    m = models()[model_id]
    if m.kind == "linear":
        return _fixed_locus_linear(m, sub)
    if m.kind == "torus":
        return _fixed_locus_torus(sub)
    raise ValueError(f"{model_id} has no regular action realization")


def _fixed_locus_linear(m: SurfaceModel, sub: Subgroup) -> FixedLocus:
    n = m.nvars
    gens = _generating_set(sub) or [IDENTITY]
    full = [tuple(ONE if j == i else ZERO for j in range(n)) for i in range(n)]
    spaces = [tuple(full)]
    for g in gens:
        eig = eigenspaces_sixth_roots(m.matrices[g])
        nxt = []
        for s in spaces:
            for basis in eig.values():
                inter = subspace_intersection(list(s), basis)
                if inter:
                    nxt.append(tuple(inter))
        spaces = _dedupe_spaces(nxt)
    points: set[SurfacePoint] = set()
    comps: list[FixedComponent] = []
    unresolved: list[str] = []
    for s in spaces:
        dim = len(s)
        if dim == 1:
            v = s[0]
            if all(p.eval(v).is_zero() for p in m.defining):
                points.add(SurfacePoint.make(m.id, v, check=False))
        elif not m.defining:
            comps.append(FixedComponent(
                m.id, "projective_subspace",
                f"pointwise fixed P^{dim - 1}: span {_basis_str(s)}"))
        elif dim == 2:
            forms = [f.restrict_line(s[0], s[1]) for f in m.defining]
            if all(bf.is_zero() for bf in forms):
                comps.append(FixedComponent(
                    m.id, "projective_subspace",
                    f"pointwise fixed line on the surface: span {_basis_str(s)}"))
                continue
            bf = next(b for b in forms if not b.is_zero())
            res = bf.roots()
            if not res.complete:
                unresolved.append(
                    f"line {_basis_str(s)}: {res.note}")
            for (a, b) in res.roots:
                v = tuple(a * s[0][i] + b * s[1][i] for i in range(n))
                if all(p.eval(v).is_zero() for p in m.defining):
                    points.add(SurfacePoint.make(m.id, v, check=False))
        else:
            comps.append(FixedComponent(
                m.id, "plane_section",
                f"surface section of the pointwise fixed P^{dim - 1}: span {_basis_str(s)}"))
    pts = tuple(sorted(points, key=lambda p: p.sort_key()))
    return FixedLocus(pts, tuple(comps), tuple(unresolved))


def _dedupe_spaces(spaces):
    seen = []
    for s in spaces:
        b = tuple(tuple(x for x in row) for row in row_space_basis(list(s)))
        if b and b not in seen:
            seen.append(b)
    return seen


def _basis_str(s) -> str:
    return " , ".join("(" + ",".join(str(c) for c in v) + ")" for v in s)


# -- torus chart --------------------------------------------------------------

def _monomial_rows(sub: Subgroup) -> list[list[int]]:
    rows = [[1, 1, 1]]  # xyz = 1
    for g in _generating_set(sub):
        s = -1 if g.inv else 1
        for i in range(3):
            row = [0, 0, 0]
            row[g.perm[i]] += s
            row[i] -= 1
            if any(row):
                rows.append(row)
    return rows


def _fixed_locus_torus(sub: Subgroup) -> FixedLocus:
    points: set[SurfacePoint] = set()
    comps: list[FixedComponent] = []
    unresolved: list[str] = []

    # affine chart: monomial equations solved through Smith normal form
    rows = _monomial_rows(sub)
    u, d, v = smith_normal_form(rows)
    ncols = 3
    divisors = []
    for i in range(min(len(rows), ncols)):
        if d[i][i] != 0:
            divisors.append(abs(d[i][i]))
    rank = len(divisors)
    if rank < ncols:
        free_basis = [[v[j][i] for j in range(ncols)] for i in range(rank, ncols)]
        comps.append(FixedComponent(
            "X_torus", "subtorus",
            f"fixed subtorus of dimension {ncols - rank}, exponents {free_basis}"))
    from .algebra import root_of_unity
    choices = []
    for dd in divisors:
        if 6 % dd == 0:
            choices.append(list(range(dd)))
        else:
            reps = [k for k in range(dd) if 6 % (dd // gcd(dd, k)) == 0]
            unresolved.append(
                f"torsion of order {dd} exceeds the representable roots of unity")
            choices.append(reps)
    def _unit_power(order: int, e: int) -> CycNum | None:
        e %= order
        red = order // gcd(order, e) if e else 1
        if 6 % red != 0:
            return None
        return root_of_unity(order, e) if 6 % order == 0 else \
            root_of_unity(red, (e // (order // red)) % red)

    for combo in itertools.product(*choices) if divisors else [()]:
        vals = []
        for j in range(ncols):
            t = ONE
            for i, k in enumerate(combo):
                u = _unit_power(divisors[i], k * v[j][i])
                if u is None:
                    t = None
                    break
                t = t * u
            if t is None:
                break
            vals.append(t)
        if len(vals) == 3:
            x, y, z = vals
            assert x * y * z == ONE
            p = affine_torus_point(x, y, z)
            assert all(act("X_torus", g, p) == p for g in sub), \
                "monomial solver produced a non-fixed point"
            points.add(p)

    # infinity locus: six lines, handled exactly
    for vtx in hexagon_vertices():
        if all(act("X_torus", g, vtx) == vtx for g in sub):
            points.add(vtx)
    for line in hexagon_lines():
        if any(_line_image(g, line) != line.label for g in sub):
            continue
        swaps = [g for g in sub if _line_free_swap(g, line)]
        if not swaps:
            comps.append(FixedComponent(
                "X_torus", "infinity_line",
                f"pointwise fixed infinity line {line.label}"))
            continue
        for c in ((ONE, ONE), (ONE, -ONE)):
            p = line.point(c)
            if all(act("X_torus", g, p) == p for g in sub):
                points.add(p)

    pts = tuple(sorted(points, key=lambda p: p.sort_key()))
    return FixedLocus(pts, tuple(comps), tuple(unresolved))


# -- the hexagon at infinity ---------------------------------------------------

_INF = (ONE, ZERO)   # coordinate value "infinity": x0 = 0
_ZEROV = (ZERO, ONE)  # coordinate value "zero": x1 = 0


@dataclass(frozen=True)
class HexLine:
    label: str
    fixed: tuple[tuple[int, tuple[CycNum, CycNum]], ...]  # (factor, value)
    free: int
    lattice_label: str     # basis expression in the rank-4 lattice

    def point(self, c: tuple[CycNum, CycNum]) -> SurfacePoint:
        vals = [None, None, None]
        for fac, val in self.fixed:
            vals[fac] = val
        vals[self.free] = c
        return SurfacePoint.make("X_torus", tuple(vals), check=False)


@lru_cache(maxsize=None)
def hexagon_lines() -> tuple[HexLine, ...]:
    """The six (-1)-lines x0*y0*z0 = 0, in hexagon cyclic order.

    pos1..pos6 carry the lattice classes e1, h-e1-e2, e2, h-e2-e3, e3,
    h-e3-e1; this labeling is the identification recorded in the reports.
    """
    return (
        HexLine("pos1", ((0, _INF), (1, _ZEROV)), 2, "e1"),
        HexLine("pos2", ((1, _ZEROV), (2, _INF)), 0, "h-e1-e2"),
        HexLine("pos3", ((2, _INF), (0, _ZEROV)), 1, "e2"),
        HexLine("pos4", ((0, _ZEROV), (1, _INF)), 2, "h-e2-e3"),
        HexLine("pos5", ((1, _INF), (2, _ZEROV)), 0, "e3"),
        HexLine("pos6", ((2, _ZEROV), (0, _INF)), 1, "h-e3-e1"),
    )


@lru_cache(maxsize=None)
def hexagon_vertices() -> tuple[SurfacePoint, ...]:
    out = []
    for pattern in itertools.product((_INF, _ZEROV), repeat=3):
        if len(set(pattern)) == 1:
            continue  # not on the surface
        out.append(SurfacePoint.make("X_torus", pattern, check=False))
    return tuple(sorted(out, key=lambda p: p.sort_key()))


def _line_image(g: GroupElem, line: HexLine) -> str:
    """Label of the image line (pure bookkeeping on the fixed slots)."""
    inv_perm = g.inverse().perm
    newfixed = {}
    for fac, val in line.fixed:
        j = inv_perm[fac]
        if g.inv:
            val = (val[1], val[0])
        newfixed[j] = val
    for cand in hexagon_lines():
        if dict(cand.fixed) == newfixed:
            return cand.label
    raise AssertionError("line image is not a line")


def _line_free_swap(g: GroupElem, line: HexLine) -> bool:
    """Whether g (stabilizing the line) swaps the free factor's coordinates."""
    return g.inv


def hexagon_line_permutation(g: GroupElem) -> dict[str, str]:
    return {ln.label: _line_image(g, ln) for ln in hexagon_lines()}


def hexagon_transitivity_certificate() -> dict:
    """Machine facts: the six infinity lines form one orbit; the six vertices
    form one length-6 orbit; distinct lines meet in at most one point.  Any
    infinity orbit therefore has length >= 6."""
    lines = hexagon_lines()
    orbit = {lines[0].label}
    frontier = [lines[0].label]
    by_label = {ln.label: ln for ln in lines}
    while frontier:
        nxt = []
        for lab in frontier:
            for g in group_all():
                img = _line_image(g, by_label[lab])
                if img not in orbit:
                    orbit.add(img)
                    nxt.append(img)
        frontier = nxt
    vtx_orbit = orbit_of("X_torus", hexagon_vertices()[0])
    return {
        "line_orbit_size": len(orbit),
        "vertex_orbit_length": vtx_orbit.length,
        "vertices_total": len(hexagon_vertices()),
        "all_lines_reached": len(orbit) == 6,
    }


# ---------------------------------------------------------------------------
# orbit enumeration
# ---------------------------------------------------------------------------

@dataclass
class OrbitEnumeration:
    model: str
    max_length: int
    orbits: tuple[Orbit, ...]
    complete: bool
    certificates: dict

    def by_length(self, d: int) -> list[Orbit]:
        return [o for o in self.orbits if o.length == d]

    def to_json(self):
        return {"model": self.model, "max_length": self.max_length,
                "complete": self.complete,
                "orbits": [o.to_json() for o in self.orbits],
                "certificates": self.certificates}


def enumerate_orbits(model_id: str, max_length: int) -> OrbitEnumeration:
    """Complete list of orbits of length <= max_length via stabilizer fixed
    loci: a length-d orbit needs a point whose stabilizer has order 12/d, and
    every such point lies in the fixed locus of that stabilizer."""
    assert max_length <= 12
    orbits: list[Orbit] = []
    certs: dict = {"per_length": {}}
    complete = True
    for d in range(1, max_length + 1):
        entry: dict = {}
        if 12 % d != 0:
            entry["excluded"] = "length does not divide the group order 12"
            certs["per_length"][d] = entry
            continue
        h_order = 12 // d
        subs = subgroups_of_order(h_order)
        entry["stabilizer_order"] = h_order
        entry["subgroups_checked"] = len(subs)
        flags = []
        for sub in subs:
            loc = fixed_locus(model_id, sub)
            if loc.unresolved:
                flags.extend(loc.unresolved)
            for comp in loc.components:
                flags.append(f"positive-dimensional fixed locus for {sub.label}: "
                             f"{comp.description}")
            for p in loc.points:
                if stabilizer_of(model_id, p).order == h_order:
                    orb = orbit_of(model_id, p)
                    assert orb.length == d
                    if all(set(orb.points) != set(o.points) for o in orbits):
                        orbits.append(orb)
        if flags:
            complete = False
            entry["incomplete"] = flags
        entry["orbits_found"] = sum(1 for o in orbits if o.length == d)
        certs["per_length"][d] = entry
    if model_id == "X_torus":
        certs["infinity_locus"] = hexagon_transitivity_certificate()
    orbits.sort(key=lambda o: (o.length, o.points[0].sort_key()))
    return OrbitEnumeration(model_id, max_length, tuple(orbits), complete, certs)


# ---------------------------------------------------------------------------
# curves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonomialParam:
    """Affine torus curve t -> (c0 t^e0, c1 t^e1, c2 t^e2)."""
    coeff: tuple[CycNum, CycNum, CycNum]
    expo: tuple[int, int, int]

    def point(self, t: CycNum) -> SurfacePoint:
        vals = [self.coeff[i] * t ** self.expo[i] for i in range(3)]
        return affine_torus_point(*vals)

    def factor_polys(self) -> list[tuple[Poly, Poly]]:
        """Each factor as a pair of univariate polynomials in t (cleared of
        negative exponents): (c * t^(e+m), t^m)."""
        out = []
        for c, e in zip(self.coeff, self.expo):
            m = max(0, -e)
            num = Poly.make(1, {(e + m,): c})
            den = Poly.make(1, {(m,): 1})
            out.append((num, den))
        return out


@dataclass(frozen=True)
class CurveSpec:
    label: str
    model: str
    defining: tuple[Poly, ...]
    lattice_class: DivClass | None = None
    param: MonomialParam | None = None
    conic_param: tuple[Poly, Poly, Poly, Poly] | None = None   # in 2 vars (s,t)

    def to_json(self):
        return {"label": self.label, "model": self.model,
                "defining": [p.to_json() for p in self.defining],
                "lattice_class": self.lattice_class.to_json() if self.lattice_class else None}


def curve_contains(curve: CurveSpec, p: SurfacePoint) -> bool:
    if curve.model != p.model:
        raise ArityError("curve and point live on different models")
    flat = p.flat()
    return all(f.eval(flat).is_zero() for f in curve.defining)


def _tor(termmap) -> Poly:
    return Poly.make(6, termmap)


@lru_cache(maxsize=None)
def torus_curves() -> dict[str, CurveSpec]:
    """The three fiber triples on the degree-6 surface.

    The x = 1 family, the y = z family and the x = -1 family (and their
    coordinate rotations); lattice classes use the fiber identification
    f_x = h-e3, f_y = h-e2, f_z = h-e1 recorded with the hexagon.
    """
    f_x = DivClass.of([1, 0, 0, -1])
    f_y = DivClass.of([1, 0, -1, 0])
    f_z = DivClass.of([1, -1, 0, 0])
    mk = CurveSpec
    g = {
        # x = 1, y = 1, z = 1 (each contains the fixed point)
        "G_x": mk("G_x", "X_torus", (_tor({(1, 0, 0, 0, 0, 0): 1, (0, 1, 0, 0, 0, 0): -1}),),
                  f_x, MonomialParam((ONE, ONE, ONE), (0, 1, -1))),
        "G_y": mk("G_y", "X_torus", (_tor({(0, 0, 1, 0, 0, 0): 1, (0, 0, 0, 1, 0, 0): -1}),),
                  f_y, MonomialParam((ONE, ONE, ONE), (1, 0, -1))),
        "G_z": mk("G_z", "X_torus", (_tor({(0, 0, 0, 0, 1, 0): 1, (0, 0, 0, 0, 0, 1): -1}),),
                  f_z, MonomialParam((ONE, ONE, ONE), (1, -1, 0))),
        # y = z, z = x, x = y
        "D_x": mk("D_x", "X_torus", (_tor({(0, 0, 1, 0, 0, 1): 1, (0, 0, 0, 1, 1, 0): -1}),),
                  DivClass.of([2, -1, -1, 0]), MonomialParam((ONE, ONE, ONE), (-2, 1, 1))),
        "D_y": mk("D_y", "X_torus", (_tor({(0, 1, 0, 0, 1, 0): 1, (1, 0, 0, 0, 0, 1): -1}),),
                  DivClass.of([2, -1, 0, -1]), MonomialParam((ONE, ONE, ONE), (1, -2, 1))),
        "D_z": mk("D_z", "X_torus", (_tor({(1, 0, 0, 1, 0, 0): 1, (0, 1, 1, 0, 0, 0): -1}),),
                  DivClass.of([2, 0, -1, -1]), MonomialParam((ONE, ONE, ONE), (1, 1, -2))),
        # x = -1, y = -1, z = -1
        "E_x": mk("E_x", "X_torus", (_tor({(1, 0, 0, 0, 0, 0): 1, (0, 1, 0, 0, 0, 0): 1}),),
                  f_x, MonomialParam((-ONE, ONE, -ONE), (0, 1, -1))),
        "E_y": mk("E_y", "X_torus", (_tor({(0, 0, 1, 0, 0, 0): 1, (0, 0, 0, 1, 0, 0): 1}),),
                  f_y, MonomialParam((ONE, -ONE, -ONE), (1, 0, -1))),
        "E_z": mk("E_z", "X_torus", (_tor({(0, 0, 0, 0, 1, 0): 1, (0, 0, 0, 0, 0, 1): 1}),),
                  f_z, MonomialParam((-ONE, ONE, -ONE), (1, -1, 0))),
    }
    return g


def curve_intersection_torus(c1: CurveSpec, c2: CurveSpec) -> list[SurfacePoint]:
    """Exact intersection of two catalog curves on the torus chart, via the
    parametrization of c1 substituted into the equations of c2."""
    assert c1.param is not None
    fac = c1.param.factor_polys()
    pts: set[SurfacePoint] = set()
    for f in c2.defining:
        # evaluate the 6-variable form with polynomial coordinates
        poly = _eval_poly_with_poly_coords(f, fac)
        if poly.is_zero():
            continue  # c1 lies inside this hypersurface: no new constraint
        from .exact import cyc_univariate_roots
        res = cyc_univariate_roots(_poly1_coeffs(poly))
        assert res.complete, "torus curve intersection must resolve exactly"
        for (s, t) in res.roots:
            if t.is_zero() or s.is_zero():
                continue  # parameter 0 or infinity is off the torus chart
            pts.add(c1.param.point(s / t))
    # intersect: points must lie on both curves
    return sorted((p for p in pts if curve_contains(c2, p) and curve_contains(c1, p)),
                  key=lambda p: p.sort_key())


def _eval_poly_with_poly_coords(f: Poly, fac: list[tuple[Poly, Poly]]) -> Poly:
    # coordinates: x1 = num0, x0 = den0, y1 = num1, y0 = den1, ...
    coords = []
    for num, den in fac:
        coords.extend([num, den])
    out = Poly.make(1, {})
    for e, c in f.terms:
        t = Poly.make(1, {(0,): c})
        for i, k in enumerate(e):
            for _ in range(k):
                t = t * coords[i]
        out = out + t
    return out


def _poly1_coeffs(p: Poly) -> list[CycNum]:
    deg = max((e[0] for e, _ in p.terms), default=0)
    out = [ZERO] * (deg + 1)
    for e, c in p.terms:
        out[e[0]] = c
    return out


# -- curves on the quadric ----------------------------------------------------

def _q4(termmap) -> Poly:
    return Poly.make(4, termmap)


def conic_intersection(c1: CurveSpec, c2: CurveSpec) -> list[SurfacePoint]:
    """Exact intersection of two conics on the quadric via the rational
    parametrization of the first; complete (binary forms of degree <= 2
    always resolve)."""
    assert c1.conic_param is not None and c1.model == c2.model
    par = c1.conic_param
    pts: set[SurfacePoint] = set()
    for f in c2.defining:
        comp = Poly.make(2, {})
        for e, c in f.terms:
            t = Poly.make(2, {(0, 0): c})
            for i, k in enumerate(e):
                for _ in range(k):
                    t = t * par[i]
            comp = comp + t
        if comp.is_zero():
            continue
        deg = max(sum(e) for e, _ in comp.terms)
        coeffs = [ZERO] * (deg + 1)
        for e, c in comp.terms:
            coeffs[e[1]] = coeffs[e[1]] + c
        res = BinForm(tuple(coeffs)).roots()
        assert res.complete
        for s, t in res.roots:
            pts.add(SurfacePoint.make(c1.model,
                                      tuple(p.eval([s, t]) for p in par)))
    return sorted((p for p in pts if curve_contains(c2, p)),
                  key=lambda p: p.sort_key())


@lru_cache(maxsize=None)
def x2_curves() -> dict[str, CurveSpec]:
    s, t = Poly.variable(2, 0), Poly.variable(2, 1)
    zero2 = Poly.make(2, {})
    c0_param = (s * t, -(s * s) - s * t, -(s * t) - t * t, zero2)
    return {
        "C0": CurveSpec("C0", "X2_quadric", (_q4({(0, 0, 0, 1): 1}),),
                        DivClass.of([1, 1]), None, c0_param),
        "C1": CurveSpec("C1", "X2_quadric",
                        (_q4({(1, 0, 0, 0): 1, (0, 1, 0, 0): 1, (0, 0, 1, 0): 1}),),
                        DivClass.of([1, 1])),
    }


@dataclass(frozen=True)
class QuadricLine:
    """A line on the quadric, stored by a spanning pair of points."""
    label: str
    span: tuple[SurfacePoint, SurfacePoint]
    ruling: str            # "l1" or "l2"

    def contains(self, p: SurfacePoint) -> bool:
        rows = [list(self.span[0].flat()), list(self.span[1].flat()), list(p.flat())]
        red, _ = rref(rows)
        return len(red) <= 2


@lru_cache(maxsize=None)
def x2_lines() -> tuple[QuadricLine, ...]:
    """The four lines through the named points: each reducible fiber of the
    two conic pencils is a pair of them.  Ruling classes are assigned so that
    lines in one ruling are disjoint and lines in opposite rulings meet."""
    npts = named_points("X2_quadric")
    mk = QuadricLine
    return (
        mk("L(P1,R1)", (npts["P1"], npts["R1"]), "l1"),
        mk("L(P1,R2)", (npts["P1"], npts["R2"]), "l2"),
        mk("L(P-1,R1)", (npts["P-1"], npts["R1"]), "l2"),
        mk("L(P-1,R2)", (npts["P-1"], npts["R2"]), "l1"),
    )


def line_on_quadric(line: QuadricLine) -> bool:
    """Whether the whole spanned line lies on the quadric."""
    m = models()["X2_quadric"]
    bf = m.defining[0].restrict_line(line.span[0].flat(), line.span[1].flat())
    return bf.is_zero()


def span_on_quadric(p: SurfacePoint, q: SurfacePoint) -> bool:
    m = models()["X2_quadric"]
    return m.defining[0].restrict_line(p.flat(), q.flat()).is_zero()


def quadric_line_image(g: GroupElem, line: QuadricLine) -> QuadricLine:
    a = act("X2_quadric", g, line.span[0])
    b = act("X2_quadric", g, line.span[1])
    for cand in x2_lines():
        if cand.contains(a) and cand.contains(b):
            return cand
    raise AssertionError("line image left the catalog")


def ruling_swap_character() -> dict[GroupElem, bool]:
    """Whether each element swaps the two rulings, decided geometrically:
    the image of a catalog line lands in the catalog, and the ruling classes
    were assigned by the meet/disjoint pattern (verified in tests)."""
    base = x2_lines()[0]
    out = {}
    for g in group_all():
        out[g] = quadric_line_image(g, base).ruling != base.ruling
    return out


# ---------------------------------------------------------------------------
# pencils of conics on the quadric
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PencilSpec:
    """Pencil of plane sections t0*A + t1*B of the quadric (A, B covectors)."""
    label: str
    model: str
    form_a: tuple[Fraction, Fraction, Fraction, Fraction]
    form_b: tuple[Fraction, Fraction, Fraction, Fraction]
    base_point_labels: tuple[str, ...]

    def member_form(self, t0: Fraction, t1: Fraction):
        return tuple(t0 * a + t1 * b for a, b in zip(self.form_a, self.form_b))

    def validate(self) -> None:
        rows = [list(self.form_a), list(self.form_b)]
        red, _ = rref([[CycNum.of(x) for x in r] for r in rows])
        if len(red) < 2:
            raise ValueError(f"{self.label}: members do not span a pencil")

    def base_embed(self, t0: CycNum, t1: CycNum) -> tuple[CycNum, ...]:
        """Present base coordinates in the catalog's display convention."""
        if self.label == "Pi1":
            # (s0, s1) -> u = s0*(1,-1,0) + s1*(0,1,-1), sum(u) = 0
            u = (t0, t1 - t0, -t1)
            return _normalize_factor(u)
        return _normalize_factor((t0, t1))

    def to_json(self):
        return {
            "label": self.label, "model": self.model,
            "member_plane_forms": {
                "A": [[F(x).numerator, F(x).denominator] for x in self.form_a],
                "B": [[F(x).numerator, F(x).denominator] for x in self.form_b]},
            "base_points": list(self.base_point_labels),
            "reducible_fibers": [
                {"base": [c.to_pair() for c in base],
                 "singular_point": point_name(sing)}
                for base, sing in pencil_reducible_fibers(self)],
        }


@lru_cache(maxsize=None)
def pencils() -> dict[str, PencilSpec]:
    return {
        # plane pencil through the two base points at infinity
        "Pi0": PencilSpec("Pi0", "X2_quadric",
                          (F(1), F(1), F(1), F(0)), (F(0), F(0), F(0), F(1)),
                          ("R1", "R2")),
        # planes through the line x = y = z: u0(x-y) + u1(y-z) + u2(z-x)
        # with basis s0 -> (x - 2y + z), s1 -> (x + y - 2z)
        "Pi1": PencilSpec("Pi1", "X2_quadric",
                          (F(1), F(-2), F(1), F(0)), (F(1), F(1), F(-2), F(0)),
                          ("P1", "P-1")),
    }


def _quadric_sym_matrix() -> Mat:
    h = F(1, 2)
    return cmat([[0, h, h, 0], [h, 0, h, 0], [h, h, 0, 0], [0, 0, 0, -3]])


def pencil_reducible_fibers(pencil: PencilSpec) -> list[tuple[tuple[CycNum, ...], SurfacePoint]]:
    """Reducible members of a conic pencil on the quadric: parameters where
    the cutting plane is tangent (dual-quadric vanishing), with the tangency
    point (the singular point of the fiber)."""
    if pencil.model != "X2_quadric":
        raise ValueError("reducible-fiber search requires a conic pencil on the quadric")
    pencil.validate()
    minv = mat_inverse(_quadric_sym_matrix())
    a = cvec(pencil.form_a)
    b = cvec(pencil.form_b)

    def dual(u: Vec, v: Vec) -> CycNum:
        return sum((u[i] * minv[i][j] * v[j] for i in range(4) for j in range(4)), ZERO)

    # quadratic form in (t0, t1): dual(A,A) t0^2 + 2 dual(A,B) t0 t1 + dual(B,B) t1^2
    bf = BinForm((dual(a, a), CycNum.of(2) * dual(a, b), dual(b, b)))
    if bf.is_zero():
        raise ValueError("pencil is everywhere tangent: not a conic pencil")
    res = bf.roots()
    assert res.complete, "tangency parameters must resolve exactly"
    out = []
    for (t0, t1) in res.roots:
        phi = tuple(t0 * av + t1 * bv for av, bv in zip(a, b))
        pole = mat_vec(minv, phi)
        sing = SurfacePoint.make("X2_quadric", pole)
        out.append((pencil.base_embed(t0, t1), sing))
    out.sort(key=lambda pair: tuple((c.re, c.wc) for c in pair[0]))
    return out


def pencil_fiber_base(pencil: PencilSpec, p: SurfacePoint) -> tuple[CycNum, ...] | None:
    """Base parameter of the member through p (None at the base points)."""
    flat = p.flat()
    av = sum((CycNum.of(a) * c for a, c in zip(pencil.form_a, flat)), ZERO)
    bv = sum((CycNum.of(b) * c for b, c in zip(pencil.form_b, flat)), ZERO)
    if av.is_zero() and bv.is_zero():
        return None
    return pencil.base_embed(bv, -av)


def pencil_base_action(pencil: PencilSpec, g: GroupElem) -> Mat:
    """Induced 2x2 action on the pencil parameters (exact).

    The member with parameter (t0,t1) maps to the member whose plane form is
    (t0*A + t1*B) composed with the inverse matrix."""
    m = models()["X2_quadric"].matrices[g.inverse()]
    a = cvec(pencil.form_a)
    b = cvec(pencil.form_b)
    ia = tuple(sum((a[i] * m[i][j] for i in range(4)), ZERO) for j in range(4))
    ib = tuple(sum((b[i] * m[i][j] for i in range(4)), ZERO) for j in range(4))
    # express the images in the basis (a, b); columns are the basis images
    sol_a = _lin_solve_cyc([a, b], ia)
    sol_b = _lin_solve_cyc([a, b], ib)
    return ((sol_a[0], sol_b[0]), (sol_a[1], sol_b[1]))


def _lin_solve_cyc(basis: list[Vec], target: Vec) -> tuple[CycNum, CycNum]:
    rows = []
    n = len(target)
    for i in range(n):
        rows.append([basis[0][i], basis[1][i], target[i]])
    red, piv = rref(rows)
    sol = [ZERO, ZERO]
    for r, c in zip(red, piv):
        if c < 2:
            sol[c] = r[2]
    # verify
    for i in range(n):
        assert (basis[0][i] * sol[0] + basis[1][i] * sol[1] - target[i]).is_zero()
    return tuple(sol)


# ---------------------------------------------------------------------------
# the anticanonical pencil on the torus model
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def torus_pencil_members() -> tuple[Poly, Poly, Poly]:
    """The three reducible members (x=1 family + y=z family, and rotations) of
    the pencil of anticanonical curves through the two special points and the
    fixed point doubled.  Their sum is identically zero, which exhibits the
    three as members of one pencil."""
    c = torus_curves()
    f1 = c["G_x"].defining[0] * c["D_x"].defining[0]
    f2 = c["G_y"].defining[0] * c["D_y"].defining[0]
    f3 = c["G_z"].defining[0] * c["D_z"].defining[0]
    return (f1, f2, f3)


# ---------------------------------------------------------------------------
# explicit maps: degree-6 surface -> quadric, and the stereographic projection
# ---------------------------------------------------------------------------

SQRT_MINUS_THIRD = CycNum(F(1, 3), F(2, 3))   # (1+2w)/3, squares to -1/3


def torus_to_quadric(p: SurfacePoint) -> SurfacePoint:
    """The projection realizing the degree-6 surface as the quadric: blows up
    the fixed point, contracts the x=1, y=1, z=1 conics onto the length-3
    orbit A on the w=0 conic.  Undefined exactly at the fixed point."""
    assert p.model == "X_torus"
    for (c1, c0) in p.coords:
        if c0.is_zero() or c1.is_zero():
            raise UndefinedImageError("projection is evaluated on the affine chart only")
    x, y, z = (f[0] / f[1] for f in p.coords)
    ax = x + y * z - CycNum.of(2)
    ay = y + z * x - CycNum.of(2)
    az = z + x * y - CycNum.of(2)
    s = ax + ay + az
    b = (x - ONE) * (y - ONE) * (z - ONE)
    coords = (s - CycNum.of(2) * ax, s - CycNum.of(2) * ay, s - CycNum.of(2) * az,
              SQRT_MINUS_THIRD * b)
    if all(c.is_zero() for c in coords):
        raise UndefinedImageError("projection is undefined at the fixed point")
    return SurfacePoint.make("X2_quadric", coords)


def stereographic(p: SurfacePoint) -> tuple[CycNum, CycNum, CycNum]:
    """Projection of the quadric from (1,1,1,1) to the plane w = 0; undefined
    at the center."""
    assert p.model == "X2_quadric"
    x, y, z, w = p.flat()
    q = (x - w, y - w, z - w)
    if all(c.is_zero() for c in q):
        raise UndefinedImageError("stereographic projection undefined at its center")
    return _normalize_factor(q)


def stereographic_inverse(q) -> SurfacePoint:
    """Inverse of the stereographic projection; undefined on the line
    q0+q1+q2 = 0 (the tangent-plane trace)."""
    q0, q1, q2 = (CycNum.of(c) for c in q)
    e1 = q0 + q1 + q2
    if e1.is_zero():
        raise UndefinedImageError("inverse undefined on the tangent-plane trace")
    e2 = q0 * q1 + q1 * q2 + q2 * q0
    two_e1 = CycNum.of(2) * e1
    coords = (two_e1 * q0 - e2, two_e1 * q1 - e2, two_e1 * q2 - e2, -e2)
    return SurfacePoint.make("X2_quadric", coords)


# ---------------------------------------------------------------------------
# singular locus of the nodal cubic model
# ---------------------------------------------------------------------------

def x1_singular_locus() -> list[SurfacePoint]:
    """Common zeros of the four partial derivatives of the cubic model,
    solved exactly chart by chart (w = 0, then w = 1)."""
    m = models()["X1_cubic"]
    fpolys = [m.defining[0].derivative(i) for i in range(4)]
    pts: set[SurfacePoint] = set()
    # chart w = 0: partials reduce to yz = xz = xy = 0, x+y+z arbitrary via fw
    for axes in itertools.permutations(range(3)):
        v = [ZERO, ZERO, ZERO, ZERO]
        v[axes[0]] = ONE
        if all(fp.eval(v).is_zero() for fp in fpolys):
            pts.add(SurfacePoint.make("X1_cubic", tuple(v), check=False))
    # chart w = 1: yz = xz = xy = 1/3 and x + y + z = 0 force x = y = z = 0,
    # a contradiction; verified by exact elimination (xy = yz gives y(x - z) = 0
    # etc.), so no solutions.  We still sweep the symmetric candidates exactly.
    from .exact import cyc_univariate_roots
    # x = z and y = x from the pairwise differences; then 3x = 0 and x^2 = 1/3.
    third = CycNum.of(F(1, 3))
    res = cyc_univariate_roots([-third, ZERO, ONE])  # t^2 = 1/3
    for (s, t) in res.roots:
        x = s / t
        v = (x, x, x, ONE)
        if all(fp.eval(v).is_zero() for fp in fpolys):
            pts.add(SurfacePoint.make("X1_cubic", v, check=False))
    return sorted(pts, key=lambda p: p.sort_key())


# ---------------------------------------------------------------------------
# ideal invariance checks
# ---------------------------------------------------------------------------

def defining_ideal_invariant(model_id: str, g: GroupElem) -> bool:
    """Whether the defining polynomial maps to a scalar multiple of itself
    under the linear realization of g (exact polynomial identity)."""
    m = models()[model_id]
    if m.kind == "torus":
        # composition with the factor permutation / coordinate swap
        f = m.defining[0]
        perm_map = [None] * 6
        for i in range(3):
            src = 2 * g.perm[i], 2 * g.perm[i] + 1
            if g.inv:
                src = src[1], src[0]
            perm_map[2 * i], perm_map[2 * i + 1] = src
        newterms = {}
        for e, c in f.terms:
            ne = [0] * 6
            for dst in range(6):
                ne[perm_map[dst]] += e[dst]
            newterms[tuple(ne)] = c
        g_f = Poly.make(6, newterms)
        return _is_scalar_multiple(g_f, f)
    if m.kind == "linear":
        if not m.defining:
            return True
        comp = m.defining[0].compose_linear(m.matrices[g])
        return _is_scalar_multiple(comp, m.defining[0])
    raise ValueError(f"no regular realization for {model_id}")


def _is_scalar_multiple(f: Poly, g: Poly) -> bool:
    if f.is_zero() or g.is_zero():
        return f.is_zero() and g.is_zero()
    ft, gt = dict(f.terms), dict(g.terms)
    if set(ft) != set(gt):
        return False
    e0 = next(iter(ft))
    ratio = ft[e0] / gt[e0]
    return all(ft[e] == gt[e] * ratio for e in ft)
