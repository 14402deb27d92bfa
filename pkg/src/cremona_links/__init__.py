"""Exact verifier for the non-conjugacy of the linear and torus embeddings of
S3 x Z2 into the plane Cremona group."""

from .algebra import CycNum, GroupElem, OMEGA, Subgroup, group_all
from .geometry import (SurfacePoint, act, enumerate_orbits, fixed_locus,
                       orbit_of)
from .lattice import DivClass, GPicardLattice, blow_up_orbit, dp6_lattice
from .links import LinkState, apply_link, formula_audit, untwist_conic_bundle
from .prover import model_graph, prove_unreachable, s3_contrast

__version__ = "0.1.0"

__all__ = [
    "CycNum", "GroupElem", "OMEGA", "Subgroup", "group_all",
    "SurfacePoint", "act", "enumerate_orbits", "fixed_locus", "orbit_of",
    "DivClass", "GPicardLattice", "blow_up_orbit", "dp6_lattice",
    "LinkState", "apply_link", "formula_audit", "untwist_conic_bundle",
    "model_graph", "prove_unreachable", "s3_contrast",
]
