"""The link catalog: admission gates (multiplicity, orbit-length divisibility,
general position), exact coefficient dynamics for every link in play, the
symbolic inequality certificates behind the descent argument, and the
cross-check of every published formula against the lattice pushforward
oracle.

Two published formulas disagree with the oracle and are reported, never
silently corrected:
  * the conic-bundle exit coefficient (published a1 + (2/3) b1, oracle
    a1 + (1/2) b1; only the oracle value makes the round trip through the
    bundle exact), and
  * the elementary-transform multiplicity (published 2(r1-a1), oracle
    2*a1 - r1; only the oracle value is involutive).
Descent only ever uses quantities on which both sides agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import GroupElem, Subgroup, TAU, group_all
from . import geometry
from .lattice import (BlowupResult, ContractionData, DivClass, GPicardLattice,
                      anti_k_reflection, blow_up_orbit, dp6_lattice,
                      minus_two_effective_candidates, pushforward_system,
                      quadric_lattice, root_classes)

F = Fraction

#: model ids of the link state machine
MODELS_SHORT = ("X", "X2", "CB0", "CB1", "P2")
GEOM_OF = {"X": "X_torus", "X2": "X2_quadric"}
K2_OF = {short: geometry.MODEL_K2[geom] for short, geom in GEOM_OF.items()}
K2_OF["P2"] = geometry.MODEL_K2["Y_P2"]


class GateViolationError(ValueError):
    pass


class NonProgressError(ValueError):
    pass


@dataclass(frozen=True)
class LinkState:
    """Mobile system data: model, coefficient of -K (exact rational), fiber
    coefficient on the conic-bundle models, and center multiplicities."""

    model: str
    a: Fraction
    b: Fraction | None = None
    mults: tuple[tuple[str, Fraction], ...] = ()

    @staticmethod
    def make(model: str, a, b=None, mults=None) -> "LinkState":
        ms = tuple(sorted((lab, F(m)) for lab, m in (mults or {}).items()))
        return LinkState(model, F(a), None if b is None else F(b), ms)

    def mult(self, label: str) -> Fraction | None:
        for lab, m in self.mults:
            if lab == label:
                return m
        return None

    def to_json(self):
        out = {"model": self.model, "a": [self.a.numerator, self.a.denominator]}
        if self.b is not None:
            out["b"] = [self.b.numerator, self.b.denominator]
        if self.mults:
            out["mults"] = {lab: [m.numerator, m.denominator] for lab, m in self.mults}
        return out


@dataclass(frozen=True)
class GateVerdict:
    admissible: bool
    reason: str                      # ok | noether_fail | length_fail | position_fail
    witnesses: tuple[str, ...] = ()

    def to_json(self):
        out = {"admissible": self.admissible, "reason": self.reason}
        if self.witnesses:
            out["witnesses"] = list(self.witnesses)
        return out


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

PHI_6_1 = "PHI_6_1"
PHI_6_2 = "PHI_6_2"
PHI_6_3 = "PHI_6_3"
PHI_8_2_PI0 = "PHI_8_2_PI0"
PHI_8_2_PI1 = "PHI_8_2_PI1"
ELEM = "ELEM"
PHI_8_2_INV = "PHI_8_2_INV"
PHI_8_3_A = "PHI_8_3_A"
PHI_8_3_B = "PHI_8_3_B"
PHI_8_6 = "PHI_8_6"


@dataclass(frozen=True)
class LinkDescriptor:
    kind: str
    source: str
    target: str
    center_length: int
    center_label: str | None
    published: tuple[tuple[str, str], ...]
    notes: str = ""

    def to_json(self):
        return {"kind": self.kind, "source": self.source, "target": self.target,
                "center_length": self.center_length, "center": self.center_label,
                "published_formulas": dict(self.published),
                "notes": self.notes}


def catalog() -> dict[str, LinkDescriptor]:
    mk = LinkDescriptor
    return {
        PHI_6_1: mk(PHI_6_1, "X", "X2", 1, "P",
                    (("a", "(3a - r)/2"), ("r", "2a - r at A"))),
        PHI_6_2: mk(PHI_6_2, "X", "X", 2, "P1,P-1",
                    (("a", "2a - r"), ("r", "3a - 2r")),
                    "birational involution fixing the anticanonical pencil"),
        PHI_6_3: mk(PHI_6_3, "X", "X", 3, "Q1,Q2,Q3",
                    (),
                    "REFUTED: the center fails general position; the three "
                    "strict transforms of the x=-1 family are (-2)-classes "
                    "and pair to 2a-2r < 0 with the system"),
        PHI_8_2_PI0: mk(PHI_8_2_PI0, "X2", "CB0", 2, "R1,R2",
                        (("a", "2a - r"), ("b", "2(r - a)"))),
        PHI_8_2_PI1: mk(PHI_8_2_PI1, "X2", "CB1", 2, "P1,P-1",
                        (("a", "2a - r"), ("b", "2(r - a)"))),
        ELEM: mk(ELEM, "CB1", "CB1", 0, None,
                 (("a", "a"), ("b", "b + d1(a - r1)"), ("r", "2(r1 - a1)")),
                 "elementary transform at a length d1 in {3,6} orbit on the "
                 "fixed-curve section; the published multiplicity formula is "
                 "not involutive, see the oracle audit"),
        PHI_8_2_INV: mk(PHI_8_2_INV, "CB1", "X2", 2, "P1,P-1",
                        (("a", "a1 + (2/3) b1"), ("r", "a1 + b1")),
                        "published exit coefficient disagrees with the "
                        "pushforward oracle, see the audit"),
        PHI_8_3_A: mk(PHI_8_3_A, "X2", "X", 3, "A",
                      (("a", "2a - r"), ("r", "4a - 3r at P")),
                      "inverse of PHI_6_1; classical tables label it as the "
                      "inverse of the refuted length-3 link on X"),
        PHI_8_3_B: mk(PHI_8_3_B, "X2", "X", 3, "B",
                      (("a", "2a - r"), ("r", "4a - 3r at P")),
                      "target is isomorphic to X: the degree-6 involution "
                      "swaps the two curve triples and hence the orbits A and B"),
        PHI_8_6: mk(PHI_8_6, "X2", "X2", 6, None,
                    (("a", "7a - 6r"), ("r", "8a - 7r")),
                    "degree-2 involution link; the center is a symbolic "
                    "length-6 orbit in general position"),
    }


# (a, r) -> (a', r') matrices for the two-variable links
LINK_MATRICES = {
    PHI_6_2: ((F(2), F(-1)), (F(3), F(-2))),
    PHI_6_1: ((F(3, 2), F(-1, 2)), (F(2), F(-1))),
    PHI_8_6: ((F(7), F(-6)), (F(8), F(-7))),
    PHI_8_3_A: ((F(2), F(-1)), (F(4), F(-3))),
    PHI_8_3_B: ((F(2), F(-1)), (F(4), F(-3))),
}


def _apply_matrix(m, a: Fraction, r: Fraction) -> tuple[Fraction, Fraction]:
    return (m[0][0] * a + m[0][1] * r, m[1][0] * a + m[1][1] * r)


def apply_link(kind: str, state: LinkState, r=None, d1=None,
               check: bool = True) -> LinkState:
    """Transform a LinkState by the named link's exact coefficient formulas.

    `r` is the center multiplicity (defaults to the state's recorded
    multiplicity at the catalog center).  The multiplicity gate r > a (or
    b < 0 for the bundle exit) is enforced unless check=False, the
    oracle-validation mode.
    """
    desc = catalog()[kind]
    if kind == PHI_6_3:
        raise GateViolationError("the length-3 link on X is refuted: its center "
                                 "is not in general position")
    if kind == ELEM:
        assert d1 in (3, 6) and r is not None
        r = F(r)
        if check and r <= state.a:
            raise NonProgressError("elementary transform requires r1 > a1")
        b = state.b + d1 * (state.a - r)
        rprime = 2 * (r - state.a)       # published value; see the oracle audit
        return LinkState.make(state.model, state.a, b, {"x1'": rprime})
    if kind == PHI_8_2_INV:
        assert state.model == "CB1" and state.b is not None
        if check and state.b >= 0:
            raise GateViolationError("the bundle exit applies after untwisting, "
                                     "i.e. with fiber coefficient below zero")
        a = state.a + state.b / 2        # oracle value; published is a + 2b/3
        rout = state.a + state.b
        return LinkState.make("X2", a, None, {"P1,P-1": rout})
    if r is None:
        r = state.mult(desc.center_label)
        assert r is not None, f"state carries no multiplicity at {desc.center_label}"
    r = F(r)
    if check and r <= state.a:
        raise GateViolationError(f"{kind}: multiplicity gate needs r > a")
    if kind in (PHI_8_2_PI0, PHI_8_2_PI1):
        return LinkState.make(desc.target, 2 * state.a - r, 2 * (r - state.a))
    a2, r2 = _apply_matrix(LINK_MATRICES[kind], state.a, r)
    new_center = {PHI_6_1: "A", PHI_6_2: "P1,P-1",
                  PHI_8_6: "x1'", PHI_8_3_A: "P", PHI_8_3_B: "P"}[kind]
    return LinkState.make(desc.target, a2, None, {new_center: r2})


# ---------------------------------------------------------------------------
# gates
# ---------------------------------------------------------------------------

def noether_gate(state: LinkState, center) -> GateVerdict:
    """Multiplicity/length admission on a del Pezzo model: r > a, the orbit
    length divides 12 and is smaller than K^2."""
    d = center.length
    if 12 % d != 0:
        return GateVerdict(False, "length_fail",
                           (f"orbit length {d} does not divide 12",))
    k2 = K2_OF[state.model]
    if d >= k2:
        return GateVerdict(False, "length_fail",
                           (f"orbit length {d} is not below K^2 = {k2}",))
    r = state.mult(center.label)
    if r is None or r <= state.a:
        return GateVerdict(False, "noether_fail",
                           (f"multiplicity {r} does not exceed a = {state.a}",))
    return GateVerdict(True, "ok")


class _FakeLength:
    def __init__(self, d):
        self.length = d
        self.label = f"len{d}"


def length_gate(model: str, d: int) -> GateVerdict:
    """Pure length admissibility (divisibility and the K^2 bound)."""
    probe = LinkState.make(model, 1, mults={f"len{d}": 2})
    return noether_gate(probe, _FakeLength(d))


def _dp_position_catalog(model: str, orbit) -> list[tuple[str, DivClass, tuple[int, ...]]]:
    entries = []
    if model == "X":
        lat = dp6_lattice()
        for c in geometry.torus_curves().values():
            contained = tuple(i for i, p in enumerate(orbit.points)
                              if geometry.curve_contains(c, p))
            entries.append((c.label, c.lattice_class, contained))
        hexclass = {"pos1": lat.combo(e1=1), "pos2": lat.combo(h=1, e1=-1, e2=-1),
                    "pos3": lat.combo(e2=1), "pos4": lat.combo(h=1, e2=-1, e3=-1),
                    "pos5": lat.combo(e3=1), "pos6": lat.combo(h=1, e3=-1, e1=-1)}
        for ln in geometry.hexagon_lines():
            contained = tuple(i for i, p in enumerate(orbit.points)
                              if _on_hexline(ln, p))
            entries.append((ln.label, hexclass[ln.label], contained))
    elif model == "X2":
        for c in geometry.x2_curves().values():
            contained = tuple(i for i, p in enumerate(orbit.points)
                              if geometry.curve_contains(c, p))
            entries.append((c.label, c.lattice_class, contained))
        lat = quadric_lattice()
        cls = {"l1": lat.combo(l1=1), "l2": lat.combo(l2=1)}
        for ln in geometry.x2_lines():
            contained = tuple(i for i, p in enumerate(orbit.points)
                              if ln.contains(p))
            entries.append((ln.label, cls[ln.ruling], contained))
    else:
        raise ValueError(model)
    return entries


def _on_hexline(ln, p) -> bool:
    for fac, val in ln.fixed:
        if p.coords[fac] != val:
            return False
    return True


def position_gate(center, model: str, bundle: str | None = None) -> GateVerdict:
    """General-position admission.

    Del Pezzo models: blowing up the center must create no effective
    (-2)-class.  Effectiveness is certified two ways: through the explicit
    curve catalog (strict transforms of the fiber triples, conics and lines),
    and by the complete root search on the blown-up lattice with an
    incidence refutation for every root; a root the audit cannot refute
    also fails the gate.  Conic bundles: no center point on a reducible
    fiber, at most one center point per fiber.
    """
    if bundle is not None:
        pencil = geometry.pencils()[bundle]
        red = pencil_reducible_bases(bundle)
        bases = []
        for p in center.points:
            base = geometry.pencil_fiber_base(pencil, p)
            if base is None:
                return GateVerdict(False, "position_fail",
                                   (f"{geometry.point_name(p)} is a base point of {bundle}",))
            if base in red:
                return GateVerdict(False, "position_fail",
                                   (f"{geometry.point_name(p)} lies on the reducible "
                                    f"fiber of {bundle} at {_fmt_base(base)}",))
            bases.append(base)
        if len(set(bases)) != len(bases):
            return GateVerdict(False, "position_fail",
                               ("two center points lie on one fiber",))
        return GateVerdict(True, "ok")
    lat = dp6_lattice() if model == "X" else quadric_lattice()
    bl = blow_up_orbit(lat, center)
    witnesses = minus_two_effective_candidates(bl, _dp_position_catalog(model, center))
    if witnesses:
        return GateVerdict(False, "position_fail",
                           tuple(f"{lab} = {cls}" for lab, cls in witnesses))
    audit = position_root_audit(center, model, bl)
    if audit["unrefuted"]:
        return GateVerdict(False, "position_fail",
                           tuple(f"root not refuted: {d}" for d in audit["unrefuted"]))
    return GateVerdict(True, "ok")


#: nef classes used by the root audit: basepoint-free fiber/ruling pencils
_NEF_OF_MODEL = {
    "X": (DivClass.of([1, -1, 0, 0]), DivClass.of([1, 0, -1, 0]),
          DivClass.of([1, 0, 0, -1])),
    "X2": (DivClass.of([1, 0]), DivClass.of([0, 1])),
}

#: fiber classes and the coordinate factor their members cut out
_FIBER_AXIS = {
    "X": {(1, 0, 0, -1): 0, (1, 0, -1, 0): 1, (1, -1, 0, 0): 2},
}


def position_root_audit(center, model: str, bl: BlowupResult | None = None) -> dict:
    """Complete (-2)-class analysis for a center on a del Pezzo model: every
    root of the blown-up lattice is refuted by one of

      * minimal-model premise: the root has no exceptional part, so it lives
        on the minimal surface, which carries no (-2)-curves;
      * distinct points: a difference of exceptional classes over honestly
        distinct points is never effective;
      * nef pairing: the root pairs negatively with a pulled-back fiber or
        ruling class;
      * line incidence: the root's curve part is a single-member line class
        whose member misses the required points;
      * fiber incidence: the curve part is a fiber/ruling class and no
        member passes through the required points together.

    Anything left over is reported as unrefuted (and fails the gate)."""
    lat = dp6_lattice() if model == "X" else quadric_lattice()
    if bl is None:
        bl = blow_up_orbit(lat, center)
    base_rank = lat.rank
    roots = root_classes(bl.lattice)
    nef = [bl.pullback(d) for d in _NEF_OF_MODEL[model]]
    refuted = []
    unrefuted = []
    for d in roots:
        base = DivClass(d.coeffs[:base_rank])
        mults = tuple(-c for c in d.coeffs[base_rank:])
        reason = _refute_root(model, center, bl, d, base, mults, nef)
        (refuted if reason else unrefuted).append((str(d), reason))
    return {
        "model": model,
        "center": center.label,
        "roots": len(roots),
        "refuted": [{"root": r, "by": why} for r, why in refuted],
        "unrefuted": [r for r, _ in unrefuted],
        "premises": [
            "the minimal model carries no (-2)-curves",
            "the declared fiber/ruling classes are nef and stay nef after "
            "pullback",
        ],
    }


def _refute_root(model, center, bl, d, base, mults, nef) -> str | None:
    lat = bl.base
    if all(m == 0 for m in mults):
        return "no exceptional part: lives on the minimal model"
    if all(c == 0 for c in base.coeffs):
        return "difference of exceptional classes over distinct points"
    if any(m < 0 for m in mults):
        for nf in nef:
            if bl.lattice.pair(d, nf) < 0:
                return "pairs negatively with a nef class"
        return None
    if any(m not in (0, 1) for m in mults):
        return None
    pts = [p for p, m in zip(center.points, mults) if m == 1]
    key = tuple(int(c) for c in base.coeffs)
    if model == "X":
        line = _hexline_of_class(key)
        if line is not None:
            if not any(_on_hexline(line, p) for p in pts):
                return f"single line {line.label} misses the center points"
            return None
        axis = _FIBER_AXIS["X"].get(key)
        if axis is not None and len(pts) == 2:
            if pts[0].coords[axis] != pts[1].coords[axis]:
                return "no fiber through both points (coordinates differ)"
            return None
    if model == "X2" and key in ((1, 0), (0, 1)) and len(pts) == 2:
        if not geometry.span_on_quadric(pts[0], pts[1]):
            return "the line spanned by the two points is not on the quadric"
        return None
    return None


def _hexline_of_class(key: tuple[int, ...]):
    table = {
        (0, 1, 0, 0): "pos1", (1, -1, -1, 0): "pos2", (0, 0, 1, 0): "pos3",
        (1, 0, -1, -1): "pos4", (0, 0, 0, 1): "pos5", (1, -1, 0, -1): "pos6",
    }
    label = table.get(key)
    if label is None:
        return None
    return next(ln for ln in geometry.hexagon_lines() if ln.label == label)


def pencil_reducible_bases(bundle: str) -> set:
    pencil = geometry.pencils()[bundle]
    return {base for base, _ in geometry.pencil_reducible_fibers(pencil)}


def _fmt_base(base) -> str:
    return "(" + ",".join(str(c) for c in base) + ")"


# ---------------------------------------------------------------------------
# conic-bundle untwisting
# ---------------------------------------------------------------------------

@dataclass
class UntwistResult:
    final: LinkState
    trace: list[dict]
    terminated: bool          # reached b < 0

    def to_json(self):
        return {"terminated": self.terminated, "steps": self.trace,
                "final": self.final.to_json()}


def untwist_conic_bundle(state: LinkState, centers) -> UntwistResult:
    """Iterate elementary transforms along the given (d1, r1) sequence until
    the fiber coefficient drops below zero.  Each step must make progress
    (r1 > a); the fiber coefficient decreases by d1*(r1 - a) > 0 per step.
    """
    assert state.b is not None, "untwisting needs a conic-bundle state"
    trace = []
    cur = state
    for d1, r1 in centers:
        if cur.b < 0:
            break
        r1 = F(r1)
        if r1 <= cur.a:
            raise NonProgressError(
                f"center multiplicity {r1} does not exceed a = {cur.a}")
        nxt = apply_link(ELEM, cur, r=r1, d1=d1)
        trace.append({"kind": ELEM, "center": f"len{d1} on the fixed-curve section",
                      "d1": d1, "r1": [r1.numerator, r1.denominator],
                      "gates": {"multiplicity": "ok (r1 > a)"},
                      "before": cur.to_json(), "after": nxt.to_json()})
        cur = nxt
    return UntwistResult(cur, trace, cur.b < 0)


def untwist_step_bound(b: Fraction, d1: int, r1: Fraction, a: Fraction) -> int:
    """Exact number of repeats of one (d1, r1) center needed to reach b < 0."""
    drop = d1 * (r1 - a)
    assert drop > 0
    n = 0
    while b - n * drop >= 0:
        n += 1
    return n


# ---------------------------------------------------------------------------
# symbolic inequality certificates (linear forms in (a, r))
# ---------------------------------------------------------------------------

def strictly_negative_for_r_gt_a(c_a: Fraction, c_r: Fraction, c_1: Fraction = F(0)) -> bool:
    """Whether c_a*a + c_r*r + c_1 < 0 for all rationals r > a > 0.

    Substituting r = a + e (a, e > 0) the form becomes (c_a+c_r) a + c_r e
    + c_1; nonpositive coefficients with at least one negative suffice."""
    A, B, C = c_a + c_r, c_r, c_1
    return A <= 0 and B <= 0 and C <= 0 and (A < 0 or B < 0 or C < 0)


def strictly_negative_for_b_lt_0(c_a: Fraction, c_b: Fraction) -> bool:
    """Whether c_a*a + c_b*b < 0 for all rationals a > 0 > b."""
    return c_a <= 0 and c_b >= 0 and (c_a < 0 or c_b > 0)


def positive_under_noether(c_a: Fraction, c_r: Fraction, k2: int, d: int) -> bool:
    """Whether c_a*a + c_r*r > 0 whenever 0 < a < r and d*r^2 < K^2*a^2.

    The quadratic bound caps r below a*sqrt(K^2/d), so for c_r < 0 it is
    enough that c_a > 0 and c_a^2 * d >= c_r^2 * K^2."""
    if c_r >= 0:
        return c_a + c_r > 0
    return c_a > 0 and c_a * c_a * d >= c_r * c_r * k2


def descent_certificate(kind: str) -> dict:
    """Symbolic facts for one link: the coefficient strictly decreases, stays
    positive under the Noether bound, and the new center is not maximal."""
    d = catalog()[kind]
    m = LINK_MATRICES.get(kind)
    out = {"kind": kind}
    if kind in (PHI_8_2_PI0, PHI_8_2_PI1):
        out["a_decreases"] = strictly_negative_for_r_gt_a(F(2) - 1, F(-1))
        out["a_positive"] = positive_under_noether(F(2), F(-1), K2_OF[d.source], 2)
        # b = 2(r - a) > 0 for r > a, i.e. -b = 2a - 2r is strictly negative
        out["b_positive"] = strictly_negative_for_r_gt_a(F(2), F(-2))
        return out
    assert m is not None
    ca, cr = m[0]
    out["a_decreases"] = strictly_negative_for_r_gt_a(ca - 1, cr)
    out["a_positive"] = positive_under_noether(ca, cr, K2_OF[d.source], d.center_length)
    ra, rr = m[1]
    # new multiplicity below new coefficient: (ra-ca) a + (rr-cr) r < 0
    out["post_not_maximal"] = strictly_negative_for_r_gt_a(ra - ca, rr - cr)
    return out


def involution_identities() -> dict:
    """Symbolic verification of the involution identities and the inverse
    relations among the catalog links."""
    def matmul(x, y):
        return ((x[0][0] * y[0][0] + x[0][1] * y[1][0],
                 x[0][0] * y[0][1] + x[0][1] * y[1][1]),
                (x[1][0] * y[0][0] + x[1][1] * y[1][0],
                 x[1][0] * y[0][1] + x[1][1] * y[1][1]))
    ident = ((F(1), F(0)), (F(0), F(1)))
    m62 = LINK_MATRICES[PHI_6_2]
    m86 = LINK_MATRICES[PHI_8_6]
    m61 = LINK_MATRICES[PHI_6_1]
    m83 = LINK_MATRICES[PHI_8_3_A]
    out = {
        "PHI_6_2 squared is the identity": matmul(m62, m62) == ident,
        "PHI_8_6 squared is the identity": matmul(m86, m86) == ident,
        "PHI_8_3_A inverts PHI_6_1": matmul(m83, m61) == ident,
        "identity link is the identity": matmul(ident, ident) == ident,
    }
    # the elementary transform returns b after two steps only with the
    # involutive multiplicity 2a - r (not the published 2(r - a))
    a, r = F(3), F(5)
    r_inv = 2 * a - r
    out["ELEM twice returns b with the oracle multiplicity"] = \
        (a - r) + (a - r_inv) == 0
    return out


# ---------------------------------------------------------------------------
# oracle cross-checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeOrbit:
    """Orbit stand-in for lattice blow-ups when the center is symbolic."""
    point_labels: tuple[str, ...]
    point_permutations: dict[GroupElem, tuple[int, ...]]


def _coset_orbit(stab_gens) -> LatticeOrbit:
    """The G-set of left cosets of the subgroup generated by stab_gens."""
    sub = Subgroup.generated(stab_gens)
    cosets = []
    seen = set()
    for g in group_all():
        cs = frozenset(g * h for h in sub.elements)
        if cs not in seen:
            seen.add(cs)
            cosets.append(cs)
    labels = tuple(f"c{i}" for i in range(len(cosets)))
    perms = {}
    for g in group_all():
        perm = []
        for cs in cosets:
            img = frozenset(g * x for x in cs)
            perm.append(cosets.index(img))
        perms[g] = tuple(perm)
    return LatticeOrbit(labels, perms)


def _empty_blowup(lat: GPicardLattice) -> BlowupResult:
    return BlowupResult(lat, lat, ())


def _cb1_lattice() -> BlowupResult:
    orb = geometry.orbit_by_label("X2_quadric", "P1,P-1")
    return blow_up_orbit(quadric_lattice(), orb)


def oracle_records(a=F(7), r=F(9), b=F(4)) -> list[dict]:
    """Compare every published coefficient formula against the pushforward
    oracle at one generic exact input (the audits in the tests sweep many).

    Returns one record per compared quantity; records carry both values and
    whether they agree."""
    records = []

    def rec(link, quantity, published, oracle):
        records.append({
            "link": link, "quantity": quantity,
            "published": _fr(published), "oracle": _fr(oracle),
            "agree": published == oracle,
        })

    # degree-6 involution
    lat6 = dp6_lattice()
    orbp = geometry.orbit_by_label("X_torus", "P1,P-1")
    bl = blow_up_orbit(lat6, orbp)
    r1c = DivClass.of([1, 0, 0, 0, -1, -1])
    r2c = DivClass.of([2, -1, -1, -1, -1, -1])
    data = ContractionData(bl, (r1c, r2c), (("-K", (-bl.lattice.K) + r1c + r2c),))
    res = pushforward_system(data, a, r)
    rec(PHI_6_2, "a", 2 * a - r, res.coeffs["-K"])
    rec(PHI_6_2, "r", 3 * a - 2 * r, res.multiplicity)

    # degree-6 to quadric
    orbP = geometry.orbit_by_label("X_torus", "P")
    blP = blow_up_orbit(lat6, orbP)
    gammas = tuple(DivClass.of(v) for v in
                   ([1, 0, 0, -1, -1], [1, 0, -1, 0, -1], [1, -1, 0, 0, -1]))
    dataP = ContractionData(blP, gammas,
                            (("-K", (-blP.lattice.K) + gammas[0] + gammas[1] + gammas[2]),))
    resP = pushforward_system(dataP, a, r)
    rec(PHI_6_1, "a", (3 * a - r) / 2, resP.coeffs["-K"])
    rec(PHI_6_1, "r", 2 * a - r, resP.multiplicity)

    # quadric to conic bundle (both centers give the same lattice computation)
    latq = quadric_lattice()
    for kind, label in ((PHI_8_2_PI0, "R1,R2"), (PHI_8_2_PI1, "P1,P-1")):
        orb = geometry.orbit_by_label("X2_quadric", label)
        blq = blow_up_orbit(latq, orb)
        l1 = blq.pullback(latq.combo(l1=1))
        l2 = blq.pullback(latq.combo(l2=1))
        e1 = blq.lattice.basis_class(blq.exceptional_labels[0])
        e2 = blq.lattice.basis_class(blq.exceptional_labels[1])
        fiber = l1 + l2 - e1 - e2
        dataq = ContractionData(blq, (), (("-K", -blq.lattice.K), ("f", fiber)))
        resq = pushforward_system(dataq, a, r)
        rec(kind, "a", 2 * a - r, resq.coeffs["-K"])
        rec(kind, "b", 2 * (r - a), resq.coeffs["f"])

    # elementary transform on the conic bundle (d1 = 3 and 6)
    cb = _cb1_lattice()
    fiber_cb = cb.pullback(latq.combo(l1=1, l2=1)) - \
        cb.lattice.basis_class("E(P1)") - cb.lattice.basis_class("E(P-1)")
    for d1, stab in ((3, (TAU, _some_transposition())), (6, (TAU,))):
        orb = _coset_orbit(stab)
        assert len(orb.point_labels) == d1
        ble = blow_up_orbit(cb.lattice, orb)
        fibs = tuple(ble.pullback(fiber_cb) - ble.lattice.basis_class(lab)
                     for lab in ble.exceptional_labels)
        datae = ContractionData(
            ble, fibs,
            (("-K", (-ble.lattice.K) + sum(fibs[1:], fibs[0])),
             ("f", ble.pullback(fiber_cb))))
        rese = pushforward_system(datae, a, r, b=b, fiber=fiber_cb)
        rec(f"{ELEM}(d1={d1})", "a", a, rese.coeffs["-K"])
        rec(f"{ELEM}(d1={d1})", "b", b + d1 * (a - r), rese.coeffs["f"])
        rec(f"{ELEM}(d1={d1})", "r", 2 * (r - a), rese.multiplicity)

    # conic-bundle exit back to the quadric
    bneg = -abs(b)
    datax = ContractionData(
        _empty_blowup(cb.lattice),
        (cb.lattice.basis_class("E(P1)"), cb.lattice.basis_class("E(P-1)")),
        (("-K", cb.pullback(-latq.K)),))
    resx = pushforward_system(datax, a, 0, b=bneg, fiber=fiber_cb)
    rec(PHI_8_2_INV, "a", a + F(2, 3) * bneg, resx.coeffs["-K"])
    rec(PHI_8_2_INV, "r", a + bneg, resx.multiplicity)

    # degree-2 involution link (symbolic length-6 center)
    orb6 = _coset_orbit((TAU,))
    bl6 = blow_up_orbit(latq, orb6)
    geiser = anti_k_reflection(bl6.lattice)
    exc = [bl6.lattice.basis_class(lab) for lab in bl6.exceptional_labels]
    data6 = ContractionData(bl6, tuple(exc),
                            (("-K", (-bl6.lattice.K) + sum(exc[1:], exc[0])),),
                            pre_isometry=geiser)
    res6 = pushforward_system(data6, a, r)
    rec(PHI_8_6, "a", 7 * a - 6 * r, res6.coeffs["-K"])
    rec(PHI_8_6, "r", 8 * a - 7 * r, res6.multiplicity)

    # quadric back to the degree-6 surface through the length-3 orbit A
    orbA = geometry.orbit_by_label("X2_quadric", "A")
    blA = blow_up_orbit(latq, orbA)
    c0p = blA.pullback(latq.combo(l1=1, l2=1))
    for lab in blA.exceptional_labels:
        c0p = c0p - blA.lattice.basis_class(lab)
    dataA = ContractionData(blA, (c0p,), (("-K", (-blA.lattice.K) + c0p),))
    resA = pushforward_system(dataA, a, r)
    rec(PHI_8_3_A, "a", 2 * a - r, resA.coeffs["-K"])
    rec(PHI_8_3_A, "r", 4 * a - 3 * r, resA.multiplicity)

    return records


def _some_transposition():
    from .algebra import S_YZ
    return S_YZ


def _fr(x) -> list[int]:
    x = F(x)
    return [x.numerator, x.denominator]


MANDATORY_AGREEMENTS = {
    (PHI_6_2, "a"), (PHI_6_2, "r"),
    (PHI_6_1, "a"), (PHI_6_1, "r"),
    (PHI_8_2_PI0, "a"), (PHI_8_2_PI0, "b"),
    (PHI_8_2_PI1, "a"), (PHI_8_2_PI1, "b"),
    (PHI_8_3_A, "a"), (PHI_8_3_A, "r"),
    (PHI_8_6, "a"), (PHI_8_6, "r"),
    ("ELEM(d1=3)", "a"), ("ELEM(d1=3)", "b"),
    ("ELEM(d1=6)", "a"), ("ELEM(d1=6)", "b"),
}

EXPECTED_DISCREPANCIES = {
    (PHI_8_2_INV, "a"),
    ("ELEM(d1=3)", "r"), ("ELEM(d1=6)", "r"),
}


def formula_audit(records=None) -> dict:
    """The mandatory audit: every published formula versus the oracle, with
    the exit-coefficient cross-check line always present."""
    records = records if records is not None else oracle_records()
    failures = []
    for rec in records:
        key = (rec["link"], rec["quantity"])
        if key in MANDATORY_AGREEMENTS and not rec["agree"]:
            failures.append(rec)
        if key in EXPECTED_DISCREPANCIES and rec["agree"]:
            failures.append(rec)
    inv_rec = next(r for r in records if r["link"] == PHI_8_2_INV and r["quantity"] == "a")
    exit_line = ("conic-bundle exit coefficient: published a1 + (2/3) b1 = "
                 f"{inv_rec['published']}, oracle a1 + (1/2) b1 = {inv_rec['oracle']}; "
                 "DISCREPANCY, proceeding with the oracle value for descent "
                 "(only the oracle value restores the original system through "
                 "the bundle round trip)")
    elem_rec = next(r for r in records if r["link"] == "ELEM(d1=3)" and r["quantity"] == "r")
    elem_line = ("elementary-transform multiplicity: published 2(r1 - a1) = "
                 f"{elem_rec['published']}, oracle 2 a1 - r1 = {elem_rec['oracle']}; "
                 "DISCREPANCY, recorded (the published value is not involutive); "
                 "descent uses the fiber coefficient, on which both agree")
    return {
        "records": records,
        "ok": not failures,
        "failures": failures,
        "exit_coefficient_line": exit_line,
        "elementary_multiplicity_line": elem_line,
    }
