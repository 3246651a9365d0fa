"""Hypercube unfoldings, polycube surface unfoldings and their tilings.

Modules
-------
lattice     cells, symmetry groups, canonical forms, integer lattices
unfold      facet unfoldings of the d-cube
surface     polycube surface dual graphs and edge-unfoldings
plane       plane tiling certificates (BN, Conway, torus)
space       periodic tilings of 3-space
workbench   DDT chains, seeded searches, scans
"""

from .lattice import canonical_form, congruent, proper_rotations
from .unfold import dali_cross, enumerate_unfoldings, find_L_candidates

__all__ = [
    "canonical_form",
    "congruent",
    "dali_cross",
    "enumerate_unfoldings",
    "find_L_candidates",
    "proper_rotations",
]
__version__ = "0.1.0"
