"""G-equivariant Picard lattices: integer intersection forms with canonical
class and group action, blow-ups at orbits, exhaustive (-1)/(-2)-class
searches, invariant sublattices, and the pushforward computation that serves
as the independent oracle for every link coefficient formula.

All arithmetic is exact (ints and Fractions).  Class searches use per
coordinate bounds derived from the Hodge index theorem, so completeness is
provable; the search is re-run on a widened box as a belt-and-suspenders
boundary check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .algebra import GroupElem, IDENTITY, GENERATORS, S_XY, S_XYZ, TAU, group_all

IntMat = tuple[tuple[int, ...], ...]
FracMat = tuple[tuple[Fraction, ...], ...]


class InconsistentContractionError(ValueError):
    """Contraction data does not describe a G-stable set of disjoint
    (-1)-classes, or the pushforward does not land in the target basis."""


@dataclass(frozen=True)
class DivClass:
    """Divisor class: coefficient vector in a lattice basis (exact rationals;
    integral in every basis used here except where an invariant generator is
    half of -K)."""

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def of(vals) -> "DivClass":
        return DivClass(tuple(Fraction(v) for v in vals))

    def __add__(self, other: "DivClass") -> "DivClass":
        return DivClass(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "DivClass") -> "DivClass":
        return DivClass(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "DivClass":
        return DivClass(tuple(-a for a in self.coeffs))

    def scale(self, c) -> "DivClass":
        c = Fraction(c)
        return DivClass(tuple(a * c for a in self.coeffs))

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.coeffs)

    def to_json(self):
        return [[c.numerator, c.denominator] for c in self.coeffs]

    def __repr__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coeffs) + ")"


def _frac_mat_vec(m, v: DivClass) -> DivClass:
    return DivClass(tuple(sum(Fraction(m[i][j]) * v.coeffs[j]
                              for j in range(len(v.coeffs)))
                          for i in range(len(m))))


@dataclass
class GPicardLattice:
    """Integer intersection lattice with canonical class and G-action.

    gaction[g] is the matrix of the induced action on classes, satisfying
    M^T gram M = gram and M K = K; built from generator images and closed
    under composition (which checks the homomorphism property).
    """

    labels: tuple[str, ...]
    gram: IntMat
    K: DivClass
    gaction: dict[GroupElem, IntMat] = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.labels)

    def pair(self, a: DivClass, b: DivClass) -> Fraction:
        total = Fraction(0)
        for i, ai in enumerate(a.coeffs):
            if ai == 0:
                continue
            for j, bj in enumerate(b.coeffs):
                if bj == 0:
                    continue
                total += ai * bj * self.gram[i][j]
        return total

    def k2(self) -> Fraction:
        return self.pair(self.K, self.K)

    def kdeg(self, d: DivClass) -> Fraction:
        """-K . d, the anticanonical degree."""
        return -self.pair(self.K, d)

    def act(self, g: GroupElem, d: DivClass) -> DivClass:
        return _frac_mat_vec(self.gaction[g], d)

    def basis_class(self, label: str) -> DivClass:
        i = self.labels.index(label)
        return DivClass.of([1 if j == i else 0 for j in range(self.rank)])

    def combo(self, **coeffs) -> DivClass:
        v = [Fraction(0)] * self.rank
        for lab, c in coeffs.items():
            v[self.labels.index(lab)] += Fraction(c)
        return DivClass(tuple(v))

    def validate(self) -> None:
        n = self.rank
        for i in range(n):
            for j in range(n):
                assert self.gram[i][j] == self.gram[j][i]
        for g, m in self.gaction.items():
            # isometry: M^T gram M == gram
            for i in range(n):
                for j in range(n):
                    lhs = sum(m[a][i] * self.gram[a][b] * m[b][j]
                              for a in range(n) for b in range(n))
                    assert lhs == self.gram[i][j], f"{g} is not an isometry"
            assert self.act(g, self.K) == self.K, f"{g} moves K"
        for a in self.gaction:
            for b in self.gaction:
                ab = a * b
                prod = _mat_mul_int(self.gaction[a], self.gaction[b])
                assert prod == self.gaction[ab], "action is not a homomorphism"

    def to_json(self):
        return {
            "basis": list(self.labels),
            "gram": [list(r) for r in self.gram],
            "K": self.K.to_json(),
            "action": {g.name: [list(r) for r in m]
                       for g, m in sorted(self.gaction.items(),
                                          key=lambda kv: kv[0].name)},
        }


def _mat_mul_int(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return tuple(tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m))
                 for i in range(n))


def _identity_int(n) -> IntMat:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _close_action(gen_images: dict[GroupElem, IntMat], rank: int) -> dict[GroupElem, IntMat]:
    """Extend generator images to all 12 elements; consistency-checked."""
    images = {IDENTITY: _identity_int(rank)}
    images.update(gen_images)
    changed = True
    while changed:
        changed = False
        for g, mg in list(images.items()):
            for h, mh in list(images.items()):
                gh = g * h
                prod = _mat_mul_int(mg, mh)
                if gh in images:
                    assert images[gh] == prod, "inconsistent generator images"
                else:
                    images[gh] = prod
                    changed = True
    assert len(images) == 12
    return images


def _cols_to_matrix(cols: list[list[int]]) -> IntMat:
    n = len(cols[0])
    return tuple(tuple(cols[j][i] for j in range(len(cols))) for i in range(n))


# ---------------------------------------------------------------------------
# concrete lattices
# ---------------------------------------------------------------------------

def dp6_lattice() -> GPicardLattice:
    """Rank-4 lattice of the degree-6 surface, basis (h, e1, e2, e3).

    The hexagon of (-1)-classes is e1, h-e1-e2, e2, h-e2-e3, e3, h-e3-e1 in
    cyclic order; the three coordinate projections have fiber classes
    f_x = h-e3, f_y = h-e2, f_z = h-e1 (fixed by matching the permutation of
    the six infinity lines computed in the geometry module).  (xy) and the
    inversion act through the degree-2 Cremona-type isometry h -> 2h-e1-e2-e3.
    """
    gram = ((1, 0, 0, 0), (0, -1, 0, 0), (0, 0, -1, 0), (0, 0, 0, -1))
    K = DivClass.of([-3, 1, 1, 1])
    # columns: images of h, e1, e2, e3
    sxy = _cols_to_matrix([[2, -1, -1, -1], [1, 0, -1, -1], [1, -1, -1, 0], [1, -1, 0, -1]])
    sxyz = _cols_to_matrix([[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 1, 0, 0]])
    tau = _cols_to_matrix([[2, -1, -1, -1], [1, 0, -1, -1], [1, -1, 0, -1], [1, -1, -1, 0]])
    action = _close_action({S_XY: sxy, S_XYZ: sxyz, TAU: tau}, 4)
    lat = GPicardLattice(("h", "e1", "e2", "e3"), gram, K, action)
    lat.validate()
    return lat


def quadric_lattice() -> GPicardLattice:
    """Rank-2 lattice of the quadric, basis the two rulings (l1, l2).

    An automorphism swaps the rulings iff its matrix on the ambient space has
    determinant -1; here (xy) and the inversion swap, the 3-cycle does not.
    The geometry test suite verifies this against concrete line images.
    """
    gram = ((0, 1), (1, 0))
    K = DivClass.of([-2, -2])
    swap = ((0, 1), (1, 0))
    iden = _identity_int(2)
    action = _close_action({S_XY: swap, S_XYZ: iden, TAU: swap}, 2)
    lat = GPicardLattice(("l1", "l2"), gram, K, action)
    lat.validate()
    return lat


def p2_lattice() -> GPicardLattice:
    gram = ((1,),)
    K = DivClass.of([-3])
    action = {g: ((1,),) for g in group_all()}
    return GPicardLattice(("h",), gram, K, action)


# ---------------------------------------------------------------------------
# blow-ups
# ---------------------------------------------------------------------------

@dataclass
class BlowupResult:
    lattice: GPicardLattice
    base: GPicardLattice
    exceptional_labels: tuple[str, ...]

    @property
    def exceptionals(self) -> list[DivClass]:
        return [self.lattice.basis_class(lab) for lab in self.exceptional_labels]

    def pullback(self, d: DivClass) -> DivClass:
        return DivClass(d.coeffs + (Fraction(0),) * len(self.exceptional_labels))

    def pushforward(self, d: DivClass) -> DivClass:
        return DivClass(d.coeffs[: self.base.rank])


def blow_up_orbit(lat: GPicardLattice, orbit) -> BlowupResult:
    """Blow up a G-orbit of pairwise distinct points.

    `orbit` must provide `point_labels` (distinct names) and
    `point_permutations`, a dict mapping each group element to the index
    permutation it induces on the points (image of point i is point perm[i]).
    """
    labels = tuple(orbit.point_labels)
    perms = orbit.point_permutations
    d = len(labels)
    assert len(set(labels)) == d, "orbit points must be pairwise distinct"
    n = lat.rank
    gram = tuple(
        tuple((lat.gram[i][j] if i < n and j < n else (-1 if i == j else 0))
              for j in range(n + d))
        for i in range(n + d)
    )
    K = DivClass(lat.K.coeffs + (Fraction(1),) * d)
    action = {}
    for g in group_all():
        perm = perms[g]
        m = [[0] * (n + d) for _ in range(n + d)]
        old = lat.gaction[g]
        for i in range(n):
            for j in range(n):
                m[i][j] = old[i][j]
        for j in range(d):
            m[n + perm[j]][n + j] = 1
        action[g] = tuple(tuple(r) for r in m)
    new_labels = lat.labels + tuple(f"E({lab})" for lab in labels)
    new = GPicardLattice(new_labels, gram, K, action)
    new.validate()
    return BlowupResult(new, lat, tuple(f"E({lab})" for lab in labels))


# ---------------------------------------------------------------------------
# exhaustive class searches (Hodge-index coordinate bounds)
# ---------------------------------------------------------------------------

def _gram_inverse(lat: GPicardLattice) -> FracMat:
    n = lat.rank
    aug = [[Fraction(lat.gram[i][j]) for j in range(n)]
           + [Fraction(1 if j == i else 0) for j in range(n)] for i in range(n)]
    # rational Gauss-Jordan
    r = 0
    for c in range(n):
        pr = next(i for i in range(r, n) if aug[i][c] != 0)
        aug[r], aug[pr] = aug[pr], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        r += 1
    return tuple(tuple(aug[i][n:]) for i in range(n))


def _sqrt_upper(x: Fraction) -> Fraction:
    """A tight rational upper bound for sqrt(x), x >= 0."""
    if x <= 0:
        return Fraction(0)
    scale = 64
    return Fraction(isqrt(int(x * scale * scale)) + 1, scale)


def _coordinate_bounds(lat: GPicardLattice, square: int, kdeg: int) -> list[int]:
    """Per-coordinate bounds for integral D with D^2 = square, -K.D = kdeg.

    Writing D = (kdeg/K^2)(-K) + D_perp, Hodge index gives D_perp^2 =
    square - kdeg^2/K^2 <= 0, and |D.w| <= |proj terms| + sqrt(|D_perp^2|
    * |w_perp^2|) for any w; we take w ranging over the dual basis.
    """
    k2 = lat.k2()
    assert k2 > 0
    ginv = _gram_inverse(lat)
    dperp2 = Fraction(kdeg) ** 2 / k2 - square  # = -(D_perp^2) >= 0
    assert dperp2 >= 0, "no classes: Hodge index violated"
    bounds = []
    for i in range(lat.rank):
        w = DivClass(tuple(ginv[j][i] for j in range(lat.rank)))
        kw = lat.kdeg(w)
        w2 = lat.pair(w, w)
        wperp2 = kw * kw / k2 - w2  # = -(w_perp^2) >= 0
        b = abs(kw) * Fraction(kdeg) / k2 + _sqrt_upper(dperp2 * wperp2)
        bounds.append(int(b))  # coefficients are integers, so floor suffices
    return bounds


def _bounded_class_search(lat: GPicardLattice, square: int, kdeg: int,
                          widen: int = 0) -> list[DivClass]:
    bounds = [b + widen for b in _coordinate_bounds(lat, square, kdeg)]
    size = 1
    for b in bounds:
        size *= 2 * b + 1
    if size > 20_000_000:
        raise NotImplementedError(
            f"class search space too large (rank {lat.rank}); out of scope")
    n = lat.rank
    gram = lat.gram
    kvec = [sum(gram[i][j] * int(lat.K.coeffs[j]) for j in range(n)) for i in range(n)]
    out = []
    for coeffs in itertools.product(*[range(-b, b + 1) for b in bounds]):
        if sum(kvec[i] * coeffs[i] for i in range(n)) != -kdeg:
            continue
        sq = 0
        for i in range(n):
            ci = coeffs[i]
            if ci:
                row = gram[i]
                sq += ci * sum(row[j] * coeffs[j] for j in range(n))
        if sq == square:
            out.append(DivClass.of(coeffs))
    out.sort(key=lambda d: d.coeffs)
    return out


def minus_one_classes(lat: GPicardLattice) -> list[DivClass]:
    """All D with D.D = -1 and K.D = -1, by provably complete bounded search.

    The widened re-run certifies that no class sits outside the claimed box.
    """
    if lat.k2() < 1:
        raise ValueError("needs a del Pezzo type lattice (K^2 >= 1)")
    found = _bounded_class_search(lat, -1, 1)
    check = _bounded_class_search(lat, -1, 1, widen=1)
    assert found == check, "search box boundary violated"
    return found


def root_classes(lat: GPicardLattice) -> list[DivClass]:
    """All D with D.D = -2 and K.D = 0 (the candidate (-2)-classes)."""
    if lat.k2() < 1:
        raise ValueError("needs a del Pezzo type lattice (K^2 >= 1)")
    found = _bounded_class_search(lat, -2, 0)
    check = _bounded_class_search(lat, -2, 0, widen=1)
    assert found == check, "search box boundary violated"
    return found


def minus_two_effective_candidates(blowup: BlowupResult, catalog) -> list[tuple[str, DivClass]]:
    """Strict-transform classes of catalog curves that witness general
    position failure: catalog class minus the exceptionals over contained
    points, kept when the result has square -2 and K-degree 0.

    `catalog` is an iterable of (label, DivClass in the base lattice,
    contained point indices).
    """
    lat = blowup.lattice
    out = []
    for label, cls, contained in catalog:
        d = blowup.pullback(cls)
        for i in contained:
            d = d - lat.basis_class(blowup.exceptional_labels[i])
        if lat.pair(d, d) == -2 and lat.pair(lat.K, d) == 0:
            out.append((f"{label}'", d))
    out.sort(key=lambda t: t[0])
    return out


def invariant_sublattice(lat: GPicardLattice) -> list[DivClass]:
    """Saturated integral basis of the subspace fixed by every gaction matrix."""
    from .exact import integer_kernel_saturated
    rows = []
    n = lat.rank
    for g in GENERATORS:
        m = lat.gaction[g]
        for i in range(n):
            rows.append([m[i][j] - (1 if i == j else 0) for j in range(n)])
    basis = integer_kernel_saturated(rows)
    out = [DivClass.of(v) for v in basis]
    out.sort(key=lambda d: d.coeffs)
    return out


def anti_k_reflection(lat: GPicardLattice) -> FracMat:
    """The isometry D -> -D + (2 D.K / K^2) K (identity on K, -1 on K-perp).

    For K^2 = 2 this is the lattice action of the classical degree-2
    involution used by the length-6 link.
    """
    n = lat.rank
    k2 = lat.k2()
    cols = []
    for j in range(n):
        e = DivClass.of([1 if i == j else 0 for i in range(n)])
        img = (-e) + lat.K.scale(Fraction(2) * lat.pair(e, lat.K) / k2)
        cols.append(list(img.coeffs))
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


# ---------------------------------------------------------------------------
# pushforward oracle
# ---------------------------------------------------------------------------

@dataclass
class ContractionData:
    """One link, lattice-side: blow up the center orbit on the source, apply
    an optional isometry, contract a G-stable set of disjoint (-1)-classes,
    and read coefficients off in the target's invariant basis (given here by
    its pullback to the intermediate lattice)."""

    blowup: BlowupResult
    contracted: tuple[DivClass, ...]
    target_basis: tuple[tuple[str, DivClass], ...]
    pre_isometry: FracMat | None = None

    def validate(self) -> None:
        lat = self.blowup.lattice
        for c in self.contracted:
            if lat.pair(c, c) != -1 or lat.pair(lat.K, c) != -1:
                raise InconsistentContractionError(f"{c} is not a (-1)-class")
        for i, c in enumerate(self.contracted):
            for c2 in self.contracted[i + 1:]:
                if lat.pair(c, c2) != 0:
                    raise InconsistentContractionError("contracted classes meet")
        cset = set(self.contracted)
        for g in group_all():
            for c in self.contracted:
                if lat.act(g, c) not in cset:
                    raise InconsistentContractionError("contracted set not G-stable")


@dataclass
class PushforwardResult:
    coeffs: dict[str, Fraction]
    multiplicity: Fraction | None


def pushforward_system(data: ContractionData, a, mult=0, b=0,
                       fiber: DivClass | None = None) -> PushforwardResult:
    """Transform the system a*(-K_source) + b*fiber - mult*(center orbit)
    through the link described by `data`; exact, no formula table involved.

    Returns the coefficients in the target invariant basis together with the
    multiplicity of the transformed system at the new center (the common
    value of H . C over the contracted classes C), or None if nothing is
    contracted.
    """
    data.validate()
    bl = data.blowup
    lat = bl.lattice
    a, mult, b = Fraction(a), Fraction(mult), Fraction(b)
    h = bl.pullback(-bl.base.K).scale(a)
    if b != 0:
        assert fiber is not None, "nonzero fiber coefficient without a fiber class"
        h = h + bl.pullback(fiber).scale(b)
    for lab in bl.exceptional_labels:
        h = h - lat.basis_class(lab).scale(mult)
    if data.pre_isometry is not None:
        h = _frac_mat_vec(data.pre_isometry, h)
    new_mult = None
    if data.contracted:
        vals = {lat.pair(h, c) for c in data.contracted}
        if len(vals) != 1:
            raise InconsistentContractionError(
                "system multiplicity differs across the contracted orbit")
        new_mult = vals.pop()
        for c in data.contracted:
            h = h + c.scale(new_mult)
    # solve h = sum coeff_t * basis_t exactly
    names = [t[0] for t in data.target_basis]
    vecs = [t[1] for t in data.target_basis]
    n = lat.rank
    aug = [[vecs[j].coeffs[i] for j in range(len(vecs))] + [h.coeffs[i]]
           for i in range(n)]
    sol = _solve_exact(aug, len(vecs))
    if sol is None:
        raise InconsistentContractionError("pushforward leaves the target basis")
    return PushforwardResult(dict(zip(names, sol)), new_mult)


def _solve_exact(aug: list[list[Fraction]], nvars: int) -> list[Fraction] | None:
    rows = [r[:] for r in aug]
    piv = []
    r = 0
    for c in range(nvars):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    # consistency: no 0 = nonzero rows
    for i in range(r, len(rows)):
        if all(x == 0 for x in rows[i][:nvars]) and rows[i][nvars] != 0:
            return None
    sol = [Fraction(0)] * nvars
    for i, c in enumerate(piv):
        sol[c] = rows[i][nvars]
    # verify (also catches underdetermined-but-consistent cases)
    for row in aug:
        if sum(row[j] * sol[j] for j in range(nvars)) != row[nvars]:
            return None
    return sol
