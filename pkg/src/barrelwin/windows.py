"""Strips, cylinder and barrel windows in the weight plane.

For a cocharacter lam the destabilizing weight is

    zeta_lam = -det(X^{lam <= 0}) + det(g^{lam < 0}),   eta_lam = <lam, zeta_lam>.

A window is cut out by the strip |<lambda0, x>| <= eta_0/2 together with
conditions on the two primitive generators of ell^perp, where x = chi - theta.
The cylinder is the closed parallelogram; the barrel keeps a boundary point
of a side only when it lies on the correct half of that side, deciding each
tie by the sign of <lambda0, x> against <lambda0, zeta>/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from math import ceil, floor
from typing import Callable, Iterator

from barrelwin.errors import HypothesisError, SearchExhaustedError, UnboundedWindowError
from barrelwin.group import RepSpec, anticanonical, check_main_setup
from barrelwin.lattice import ZERO, Vec2, as_vec, pair, perp, primitive, solve2, solve_pairing
from barrelwin.stability import (
    PerturbedPolarization,
    Polarization,
    polarization_base,
    polarization_sign,
)

STRIP = "Strip"
CYLINDER = "Cylinder"
BARREL = "Barrel"
ENLARGED = "EnlargedCylinder"
PERTURBED = "PerturbedCylinder"
KINDS = (STRIP, CYLINDER, BARREL, ENLARGED, PERTURBED)


@dataclass(frozen=True)
class DestabData:
    lam: Vec2
    zeta: Vec2
    eta: Fraction


def det_where(rep: RepSpec, lam: Vec2, test: Callable[[Fraction], bool]) -> Vec2:
    """Sum of the weights beta of X with test(<lam, beta>) true."""
    total = ZERO
    for beta in rep.weights:
        if test(pair(lam, beta)):
            total = total + beta
    return total


def destab_data(rep: RepSpec, lam: Vec2) -> DestabData:
    lam = as_vec(lam)
    zeta = -det_where(rep, lam, lambda p: p <= 0)
    for alpha in rep.group.roots:
        if pair(lam, alpha) < 0:
            zeta = zeta + alpha
    return DestabData(lam, zeta, pair(lam, zeta))


def default_lambda_prime(rep: RepSpec, ell: Polarization) -> Vec2:
    """Primitive generator of ell^perp with the orientation used throughout.

    It is (-ell_b, ell_a) made primitive, flipped to be anti-dominant for
    GL2, or flipped to pair negatively with the perturbation direction when
    the polarization is perturbed.
    """
    base = polarization_base(ell)
    if base.is_zero:
        raise HypothesisError("polarization", "the polarization must be nonzero")
    lp = primitive(perp(base))
    if isinstance(ell, PerturbedPolarization):
        s = pair(lp, ell.direction)
        if s == 0:
            raise HypothesisError(
                "perturbation-direction", "the perturbation direction is proportional to the base"
            )
        if s > 0:
            lp = -lp
    elif not rep.group.is_torus and pair(lp, rep.group.positive_roots[0]) > 0:
        lp = -lp
    return lp


@dataclass(frozen=True)
class WindowRegion:
    """A shifted window theta + (region) with exact membership tests.

    ``param`` is the width multiplier R for an enlarged cylinder and the
    deformation parameter t for a perturbed cylinder; it is ignored for the
    other kinds.  All predicates accept any rational point.
    """

    rep: RepSpec
    ell: Polarization
    lambda0: Vec2
    lambda_prime: Vec2
    theta: Vec2 = ZERO
    kind: str = BARREL
    param: Fraction = Fraction(1)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown window kind {self.kind!r}")
        if self.lambda_prime.is_zero or pair(self.lambda_prime, polarization_base(self.ell)) != 0:
            raise ValueError("lambda_prime must be a nonzero vector of ell^perp")
        if polarization_sign(self.lambda0, self.ell) >= 0:
            raise HypothesisError("polarization", "<lambda0, ell> must be negative")

    # cached destabilizing data for lambda0 and the two generators of ell^perp
    @cached_property
    def d0(self) -> DestabData:
        return destab_data(self.rep, self.lambda0)

    @cached_property
    def dplus(self) -> DestabData:
        return destab_data(self.rep, self.lambda_prime)

    @cached_property
    def dminus(self) -> DestabData:
        return destab_data(self.rep, -self.lambda_prime)

    @cached_property
    def dzero(self) -> DestabData:
        return destab_data(self.rep, ZERO)

    @property
    def eta0(self) -> Fraction:
        return self.d0.eta

    def with_kind(self, kind: str, param=1) -> "WindowRegion":
        new = replace(self, kind=kind, param=Fraction(param))
        return new

    def with_theta(self, theta: Vec2) -> "WindowRegion":
        return replace(self, theta=as_vec(theta))

    def shift(self, chi: Vec2) -> Vec2:
        return as_vec(chi) - self.theta

    # ---------------------------------------------------------------- tests
    def in_strip(self, chi: Vec2) -> bool:
        return abs(pair(self.lambda0, self.shift(chi))) <= self.eta0 / 2

    def in_enlarged(self, chi: Vec2, R) -> bool:
        x = self.shift(chi)
        if abs(pair(self.lambda0, x)) > self.eta0 / 2:
            return False
        R = Fraction(R)
        return all(abs(pair(d.lam, x)) <= R * d.eta / 2 for d in (self.dplus, self.dminus))

    def in_cylinder(self, chi: Vec2) -> bool:
        return self.in_enlarged(chi, 1)

    def in_barrel(self, chi: Vec2) -> bool:
        x = self.shift(chi)
        p0 = pair(self.lambda0, x)
        if abs(p0) > self.eta0 / 2:
            return False
        for d in (self.dplus, self.dminus):
            p = pair(d.lam, x)
            half = d.eta / 2
            tie = pair(self.lambda0, d.zeta) / 2
            if abs(p) < half:
                continue
            if p == half and p0 <= tie:
                continue
            if p == -half and p0 >= -tie:
                continue
            return False
        return True

    def in_perturbed(self, chi: Vec2, t) -> bool:
        """The t-narrowed cylinder, with primitive generators in place of unit ones."""
        t = Fraction(t)
        if t < 0:
            raise ValueError("t must be nonnegative")
        if not self.in_cylinder(chi):
            return False
        x = self.shift(chi)
        for d in (self.dplus, self.dminus):
            lam_t = d.lam + t * self.lambda0
            if abs(pair(lam_t, x)) > pair(lam_t, d.zeta) / 2:
                return False
        return True

    def contains(self, chi: Vec2) -> bool:
        if self.kind == STRIP:
            return self.in_strip(chi)
        if self.kind == CYLINDER:
            return self.in_cylinder(chi)
        if self.kind == BARREL:
            return self.in_barrel(chi)
        if self.kind == ENLARGED:
            return self.in_enlarged(chi, self.param)
        return self.in_perturbed(chi, self.param)

    # ------------------------------------------------------------ geometry
    def bounding_box(self, R=1) -> tuple[int, int, int, int]:
        """Integer box containing theta + (enlarged cylinder of width R, R >= 1)."""
        R = max(Fraction(R), Fraction(1))
        lp = self.lambda_prime
        if pair(self.lambda0, perp(lp)) == 0:
            raise UnboundedWindowError("lambda0 and lambda_prime are dependent")
        w0 = self.eta0 / 2
        w1 = R * max(self.dplus.eta, self.dminus.eta) / 2
        c0 = pair(self.lambda0, self.theta)
        c1 = pair(lp, self.theta)
        corners = [
            solve2(self.lambda0, c0 + s0 * w0, lp, c1 + s1 * w1)
            for s0 in (-1, 1)
            for s1 in (-1, 1)
        ]
        return (
            floor(min(c.a for c in corners)),
            ceil(max(c.a for c in corners)),
            floor(min(c.b for c in corners)),
            ceil(max(c.b for c in corners)),
        )

    def box_points(self, R=1) -> Iterator[Vec2]:
        amin, amax, bmin, bmax = self.bounding_box(R)
        for a in range(amin, amax + 1):
            for b in range(bmin, bmax + 1):
                yield Vec2(a, b)

    def lattice_points(self, predicate: Callable[[Vec2], bool] | None = None, R=1) -> list[Vec2]:
        pred = predicate if predicate is not None else self.contains
        return [chi for chi in self.box_points(R) if pred(chi)]

    def boundary_lattice_points(self) -> list[Vec2]:
        """Lattice points on the boundary of theta + (closed cylinder)."""
        out = []
        for chi in self.lattice_points(self.in_cylinder):
            x = self.shift(chi)
            on_strip = abs(pair(self.lambda0, x)) == self.eta0 / 2
            on_side = any(abs(pair(d.lam, x)) == d.eta / 2 for d in (self.dplus, self.dminus))
            if on_strip or on_side:
                out.append(chi)
        return out


def make_window(
    rep: RepSpec,
    ell: Polarization | None = None,
    lambda0: Vec2 | None = None,
    theta: Vec2 | None = None,
    kind: str = BARREL,
    param=1,
    lambda_prime: Vec2 | None = None,
) -> WindowRegion:
    """Build a window, filling in omega*, the canonical lambda0 and lambda_prime."""
    if ell is None:
        ell = anticanonical(rep)
    elif not isinstance(ell, PerturbedPolarization):
        ell = as_vec(ell)
    if lambda0 is None:
        lambda0 = check_main_setup(rep)
        if lambda0 is None:
            raise HypothesisError("main-setup", "no central cocharacter pairs negatively with every weight")
    lambda0 = as_vec(lambda0)
    if not rep.group.is_central(lambda0):
        raise HypothesisError("main-setup", f"lambda0 = {lambda0} is not central")
    if any(pair(lambda0, b) >= 0 for b in rep.weights):
        raise HypothesisError("main-setup", f"lambda0 = {lambda0} does not pair negatively with every weight")
    if not rep.group.is_weyl_invariant(polarization_base(ell)):
        raise HypothesisError("polarization", "the polarization must be Weyl invariant")
    lp = as_vec(lambda_prime) if lambda_prime is not None else default_lambda_prime(rep, ell)
    return WindowRegion(rep, ell, lambda0, lp, as_vec(theta) if theta is not None else ZERO, kind, Fraction(param))


# --------------------------------------------------------------- genericity
@dataclass(frozen=True)
class GenericityReport:
    is_generic: bool
    witness: Vec2 | None = None
    hyperplane: str | None = None
    zeta: Vec2 | None = None


def check_generic(region: WindowRegion) -> GenericityReport:
    """Is theta lambda0-generic?  The test is exact rather than a finite scan.

    The hyperplanes are {chi : <lambda0, chi - theta - zeta/2> = 0} for zeta
    in {zeta_{+lambda'}, zeta_{-lambda'}, zeta_0}.  Such a line meets M iff
    <lambda0, theta + zeta/2> lies in the cyclic group <lambda0, M>; a
    witness is produced by the extended Euclidean algorithm and moved along
    the line to the lattice point closest to the window centre.
    """
    lam0 = region.lambda0
    families = (
        ("zeta(+lambda')", region.dplus.zeta),
        ("zeta(-lambda')", region.dminus.zeta),
        ("zeta(0)", region.dzero.zeta),
    )
    for name, zeta in families:
        target = region.theta + zeta * Fraction(1, 2)
        chi0 = solve_pairing(lam0, pair(lam0, target))
        if chi0 is None:
            continue
        step = primitive(perp(lam0))
        lp = region.lambda_prime
        k = floor(-pair(lp, chi0 - region.theta) / pair(lp, step) + Fraction(1, 2))
        witness = chi0 + k * step
        return GenericityReport(False, witness, name, zeta)
    return GenericityReport(True)


def theta_candidates(k_max: int = 64) -> Iterator[Fraction]:
    for k in range(2, k_max + 1):
        yield Fraction(-1, 2 * k)


def find_generic_theta(rep: RepSpec, ell: Polarization | None = None, lambda0: Vec2 | None = None) -> Vec2:
    """The first theta = s*omega*, s = -1/(2k), k = 2..64, that is lambda0-generic."""
    region = make_window(rep, ell, lambda0)
    omega = anticanonical(rep)
    obstructions = []
    for s in theta_candidates():
        theta = s * omega
        rep_ = check_generic(region.with_theta(theta))
        if rep_.is_generic:
            return theta
        obstructions.append((s, rep_.hyperplane))
    raise SearchExhaustedError(f"no lambda0-generic theta = s*omega* found; obstructions {obstructions[:4]}")


def find_boundary_generic_theta(
    rep: RepSpec, ell: Polarization | None = None, lambda0: Vec2 | None = None
) -> Vec2:
    """First theta = s*(omega* + d), s = -1/(2k), with no lattice point on the cylinder boundary.

    ``d`` is the perturbation direction of a perturbed polarization (zero
    otherwise).  Such a theta is what the nef-Fano reduction needs.
    """
    region = make_window(rep, ell, lambda0, kind=CYLINDER)
    direction = ell.direction if isinstance(ell, PerturbedPolarization) else ZERO
    omega = anticanonical(rep)
    for s in theta_candidates():
        theta = s * (omega + direction)
        if not region.with_theta(theta).boundary_lattice_points():
            return theta
    raise SearchExhaustedError("no theta avoiding boundary lattice points was found")


# -------------------------------------------------------------- enumeration
def window_sort_key(lambda0: Vec2):
    return lambda chi: (-pair(lambda0, chi), chi.a, chi.b)


def enumerate_window_irreps(region: WindowRegion, require_generic: bool = True) -> list[Vec2]:
    """Highest weights of the irreducibles whose weights lie in the barrel.

    For GL2 the barrel is convex and Weyl invariant when theta is, so the
    membership of V(chi) reduces to that of chi.  The labels are sorted by
    decreasing <lambda0, chi>, ties broken by coordinates.
    """
    from barrelwin.stability import weights_span

    if region.kind != BARREL:
        raise ValueError("irreducible labels are enumerated from a barrel window")
    if not weights_span(region.rep):
        raise UnboundedWindowError("the weights of X do not span M_R")
    if require_generic:
        report = check_generic(region)
        if not report.is_generic:
            raise HypothesisError(
                "lambda0-generic", f"theta = {region.theta} meets a hyperplane at {report.witness}"
            )
    group = region.rep.group
    if not group.is_weyl_invariant(region.theta):
        raise HypothesisError("weyl-invariant-theta", "theta must be Weyl invariant for GL2")
    labels = [chi for chi in region.lattice_points(region.in_barrel) if group.is_dominant(chi)]
    return sorted(labels, key=window_sort_key(region.lambda0))


def classify_points(region: WindowRegion, R=1) -> list[dict]:
    """Rows (a, b, in_strip, in_cylinder, in_barrel, dominant) over the scan box."""
    rows = []
    group = region.rep.group
    for chi in region.box_points(R):
        rows.append(
            {
                "a": int(chi.a),
                "b": int(chi.b),
                "in_strip": region.in_strip(chi),
                "in_cylinder": region.in_cylinder(chi),
                "in_barrel": region.in_barrel(chi),
                "dominant": group.is_dominant(chi),
            }
        )
    return rows
