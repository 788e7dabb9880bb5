"""Exact window combinatorics for rank-two GIT quotients.

The package computes barrel-window exceptional collections for linear
actions of a two-dimensional torus or of GL2, verifies strong
exceptionality through a local-cohomology vanishing inequality, and
certifies fullness by replaying the weight-reduction procedures that
generate every equivariant line bundle from window members.
"""

from barrelwin.lattice import Vec2, vec, pair, weyl_reflect, proportional
from barrelwin.group import GroupSpec, RepSpec, TORUS2, GL2

__all__ = [
    "Vec2",
    "vec",
    "pair",
    "weyl_reflect",
    "proportional",
    "GroupSpec",
    "RepSpec",
    "TORUS2",
    "GL2",
]

__version__ = "0.1.0"
