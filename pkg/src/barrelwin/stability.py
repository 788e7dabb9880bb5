"""Hilbert-Mumford analysis for rank-two linear actions.

The unstable locus of a linear action is the union of the attracting
subspaces X^{lam >= 0} over cocharacters lam pairing negatively with the
polarization.  In rank two those subspaces are read off from the chamber
structure of the line arrangement {beta^perp} in N_Q, which is what
:func:`destabilizing_cone_reps` computes.

Polarizations of the form omega* + eps*ell with 0 < eps << 1 are handled
symbolically through :class:`PerturbedPolarization`: a cocharacter pairs
with it to a lexicographically ordered pair, so no numerical eps is ever
chosen.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from barrelwin.errors import HypothesisError
from barrelwin.group import RepSpec, check_main_setup
from barrelwin.lattice import Vec2, as_vec, det2, pair, perp, primitive, sign


@dataclass(frozen=True)
class PerturbedPolarization:
    """The polarization base + eps * direction for all sufficiently small eps > 0."""

    base: Vec2
    direction: Vec2

    def __post_init__(self):
        object.__setattr__(self, "base", as_vec(self.base))
        object.__setattr__(self, "direction", as_vec(self.direction))

    def pairing(self, lam: Vec2) -> tuple[Fraction, Fraction]:
        return (pair(lam, self.base), pair(lam, self.direction))

    def __repr__(self) -> str:
        return f"{self.base}+eps{self.direction}"


Polarization = Union[Vec2, PerturbedPolarization]


def lex_sign(values) -> int:
    """Sign of the first nonzero entry (0 if all entries vanish)."""
    for v in values:
        s = sign(v)
        if s:
            return s
    return 0


def polarization_sign(lam: Vec2, ell: Polarization) -> int:
    """Sign of <lam, ell>, lexicographic for a perturbed polarization."""
    if isinstance(ell, PerturbedPolarization):
        return lex_sign(ell.pairing(lam))
    return sign(pair(lam, ell))


def polarization_base(ell: Polarization) -> Vec2:
    return ell.base if isinstance(ell, PerturbedPolarization) else ell


def is_proportional_to(beta: Vec2, ell: Polarization) -> bool:
    """Whether beta is proportional to ell (for every small eps if perturbed)."""
    if isinstance(ell, PerturbedPolarization):
        return det2(beta, ell.base) == 0 and det2(beta, ell.direction) == 0
    return det2(beta, ell) == 0


def weights_span(rep: RepSpec) -> bool:
    """Rank of the weight matrix is two."""
    ws = rep.weights
    return any(det2(u, v) != 0 for i, u in enumerate(ws) for v in ws[i + 1:])


@dataclass(frozen=True)
class StabilityVerdict:
    finite_stabilizers: bool
    offending_weight: Vec2 | None = None
    reason: str = ""


def _require_polarization(rep: RepSpec, ell: Polarization, lambda0: Vec2 | None) -> Vec2:
    lam0 = lambda0 if lambda0 is not None else check_main_setup(rep)
    if lam0 is None:
        raise HypothesisError("main-setup", "no central cocharacter pairs negatively with every weight")
    if polarization_sign(lam0, ell) >= 0:
        raise HypothesisError("polarization", f"<lambda0, ell> must be negative for ell = {ell}")
    return lam0


def finite_stabilizer_test(rep: RepSpec, ell: Polarization, lambda0: Vec2 | None = None) -> StabilityVerdict:
    """Do the ell-semistable points have finite stabilizers?

    In rank two this holds iff the weights span M_R and no weight is
    proportional to ell.
    """
    _require_polarization(rep, ell, lambda0)
    if not weights_span(rep):
        witness = rep.weights[0] if rep.weights else None
        return StabilityVerdict(False, witness, "weights-span")
    for beta in rep.weights:
        if is_proportional_to(beta, ell):
            return StabilityVerdict(False, beta, "proportional-weight")
    return StabilityVerdict(True)


@dataclass(frozen=True)
class SummandVerdict:
    n: int
    m: int
    negative_against_lambda0: bool
    odd: bool


def gl2_fano_criterion(rep: RepSpec) -> tuple[bool, list[SummandVerdict]]:
    """For X = sum Sym^{n_i} x det^{m_i}: m_i + n_i/2 > 0 and n_i odd for all i."""
    if rep.gl2_summands is None:
        raise ValueError("the criterion needs the summand decomposition")
    report = [
        SummandVerdict(n, m, Fraction(2 * m + n, 2) > 0, n % 2 == 1)
        for n, m in rep.gl2_summands
    ]
    return all(s.negative_against_lambda0 and s.odd for s in report), report


def attracting_subset(rep: RepSpec, lam: Vec2) -> tuple[int, ...]:
    """Indices of weights spanning X^{lam >= 0}."""
    return tuple(i for i, beta in enumerate(rep.weights) if pair(lam, beta) >= 0)


def destabilizing_cone_reps(rep: RepSpec, ell: Polarization) -> list[tuple[Vec2, tuple[int, ...]]]:
    """Representatives of the distinct attracting subspaces that destabilize.

    Returns pairs (lam, indices) where lam is primitive with <lam, ell> < 0
    and ``indices`` lists the weights spanning X^{lam >= 0}.  Every
    attracting subspace X^{mu >= 0} with <mu, ell> < 0 appears exactly once.
    """
    lines = [b for b in rep.weights if not b.is_zero]
    lines.append(polarization_base(ell))
    if isinstance(ell, PerturbedPolarization) and not ell.direction.is_zero:
        lines.append(ell.direction)
    rays = set()
    for b in lines:
        if b.is_zero:
            continue
        r = primitive(perp(b))
        rays.add(r)
        rays.add(-r)
    ordered = sorted(rays, key=_angle_key)
    candidates = list(ordered)
    for i, r in enumerate(ordered):
        nxt = ordered[(i + 1) % len(ordered)]
        s = r + nxt
        candidates.append(primitive(s) if not s.is_zero else primitive(perp(r)))
    if not ordered:
        candidates = [_fallback(rep)]
    found: dict[tuple[int, ...], Vec2] = {}
    for lam in sorted(set(candidates)):
        if polarization_sign(lam, ell) >= 0:
            continue
        subset = attracting_subset(rep, lam)
        if subset not in found:
            found[subset] = lam
    return sorted(((lam, subset) for subset, lam in found.items()), key=lambda t: (len(t[1]), t[0]))


def _fallback(rep: RepSpec) -> Vec2:
    lam = check_main_setup(rep)
    return lam if lam is not None else Vec2(-1, -1)


def _angle_key(v: Vec2):
    """Exact key ordering nonzero vectors by their angle in [0, 2 pi)."""
    half = 0 if (v.b > 0 or (v.b == 0 and v.a > 0)) else 1
    if v.b == 0:
        return (half, 0, Fraction(0))
    # Within an open half plane the angle grows as the cotangent a/b falls.
    return (half, 1, -v.a / v.b)
