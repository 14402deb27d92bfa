"""Cross-validation of the fixed-locus and enumeration machinery against
independent brute-force oracles: the torsion points of the torus are where
every small orbit lives, so enumerating them directly and comparing is a
genuine second route to the same classification."""

import itertools
from fractions import Fraction as F

from cremona_links.algebra import (SIXTH_ROOTS, Subgroup, all_subgroups,
                                   group_all)
from cremona_links.geometry import (SurfacePoint, act, affine_torus_point,
                                    contains, enumerate_orbits, fixed_locus,
                                    models, named_points, orbit_of,
                                    stabilizer_of, torus_to_quadric)
from cremona_links.prover import golden_comparison, build_nodes, load_golden_tree


def torsion_torus_points():
    """All points of the torus with sixth-root-of-unity coordinates."""
    pts = []
    for a, b in itertools.product(SIXTH_ROOTS, SIXTH_ROOTS):
        c = (a * b).inverse()
        pts.append(affine_torus_point(a, b, c))
    return pts


class TestFixedLocusOracle:
    def test_torus_fixed_points_against_brute_force(self):
        # every torsion point fixed by H must appear in fixed_locus(H);
        # every listed point must be H-fixed
        pts = torsion_torus_points()
        for sub in all_subgroups():
            loc = fixed_locus("X_torus", sub)
            assert loc.fully_resolved
            listed = set(loc.points)
            for p in pts:
                fixed = all(act("X_torus", g, p) == p for g in sub)
                if fixed and not loc.components:
                    assert p in listed, (sub.label, str(p))
                if p in listed:
                    assert fixed
            for q in loc.points:
                assert all(act("X_torus", g, q) == q for g in sub)

    def test_quadric_fixed_points_against_samples(self):
        # the named points and torsion images provide the probe set
        probes = list(named_points("X2_quadric").values())
        probes += [torus_to_quadric(p) for p in torsion_torus_points()
                   if p != affine_torus_point(1, 1, 1)]
        for sub in all_subgroups():
            loc = fixed_locus("X2_quadric", sub)
            listed = set(loc.points)
            for q in loc.points:
                assert all(act("X2_quadric", g, q) == q for g in sub)
            if loc.components or not loc.fully_resolved:
                continue
            for p in probes:
                if all(act("X2_quadric", g, p) == p for g in sub):
                    assert p in listed, (sub.label, str(p))


class TestEnumerationOracle:
    def test_torus_small_orbits_by_brute_force(self):
        # direct orbit computation over the torsion points must reproduce
        # the certified enumeration (small orbits have finite-order points)
        enum = enumerate_orbits("X_torus", 5)
        found = []
        for p in torsion_torus_points():
            orb = orbit_of("X_torus", p)
            if orb.length <= 5 and all(set(orb.points) != set(o.points)
                                       for o in found):
                found.append(orb)
        assert {frozenset(o.points) for o in found} == \
            {frozenset(o.points) for o in enum.orbits}

    def test_quadric_small_orbits_by_brute_force(self):
        enum = enumerate_orbits("X2_quadric", 5)
        probes = list(named_points("X2_quadric").values())
        probes += [torus_to_quadric(p) for p in torsion_torus_points()
                   if p != affine_torus_point(1, 1, 1)]
        found = []
        for p in probes:
            orb = orbit_of("X2_quadric", p)
            if orb.length <= 5 and all(set(orb.points) != set(o.points)
                                       for o in found):
                found.append(orb)
        assert {frozenset(o.points) for o in found} == \
            {frozenset(o.points) for o in enum.orbits}

    def test_orbit_stabilizer_consistency_everywhere(self):
        for p in torsion_torus_points():
            orb = orbit_of("X_torus", p)
            assert orb.length * stabilizer_of("X_torus", p).order == 12


class TestComponentMembership:
    def test_subtorus_component_points_are_fixed(self):
        # the inversion composed with a transposition fixes the curve
        # (x, 1/x, 1); sample points on it must be fixed and the component
        # must be reported
        from cremona_links.algebra import S_XY, TAU
        sub = Subgroup.generated([S_XY * TAU])
        loc = fixed_locus("X_torus", sub)
        assert any(c.kind == "subtorus" for c in loc.components)
        for x in (F(2), F(-3), F(5, 7)):
            p = affine_torus_point(x, 1 / x, 1)
            assert all(act("X_torus", g, p) == p for g in sub)

    def test_plane_section_component_points_are_fixed(self):
        # the inversion fixes the w = 0 conic of the quadric pointwise
        from cremona_links.algebra import TAU
        sub = Subgroup.generated([TAU])
        loc = fixed_locus("X2_quadric", sub)
        assert len(loc.components) == 1
        for lab in ("R1", "R2", "A1", "B1"):
            p = named_points("X2_quadric")[lab]
            assert act("X2_quadric", TAU, p) == p


class TestActionStaysOnModel:
    def test_images_satisfy_defining_equations(self):
        pts = torsion_torus_points()[:12]
        for p in pts:
            for g in group_all():
                q = act("X_torus", g, p)
                assert contains("X_torus", q.coords)
        m = models()["X2_quadric"]
        for p in (torus_to_quadric(t) for t in pts
                  if t != affine_torus_point(1, 1, 1)):
            for g in group_all():
                q = act("X2_quadric", g, p)
                assert m.defining[0].eval(q.flat()).is_zero()


class TestGoldenSensitivity:
    def test_missing_branch_breaks_comparison(self):
        nodes = build_nodes()
        pruned = dict(nodes)

        class Cut:
            def __init__(self, inner):
                self._inner = inner

            def skeleton(self):
                sk = self._inner.skeleton()
                return {"branches": sk["branches"][:-1], "exit": sk["exit"]}

        pruned["X"] = Cut(nodes["X"])
        assert not golden_comparison(pruned)["match"]

    def test_wrong_link_breaks_comparison(self):
        nodes = build_nodes()

        class Tamper:
            def __init__(self, inner):
                self._inner = inner

            def skeleton(self):
                sk = self._inner.skeleton()
                branches = [list(b) for b in sk["branches"]]
                branches[0] = [branches[0][0], branches[0][1],
                               [["P", "PHI_8_6", "X2"]]]
                return {"branches": branches, "exit": sk["exit"]}

        tampered = dict(nodes)
        tampered["X"] = Tamper(nodes["X"])
        assert not golden_comparison(tampered)["match"]

    def test_golden_models_match_reachable_set(self):
        golden = load_golden_tree()
        assert set(golden["nodes"]) == {"X", "X2", "CB0", "CB1"}
