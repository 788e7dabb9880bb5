"""Weight-level replay of the fullness arguments.

Every dominant weight chi outside the window is resolved by an unstably
supported Koszul-type complex whose other graded pieces are O_X x V(mu+)
for weights mu+ that are strictly closer to the window.  Iterating this on
all weights of a strip produces a certificate: a directed graph from seeds
to window members whose every edge is tagged with the complex used and the
decreasing measure.

Two complexes are used.  For a cocharacter lam and weight chi,

* ``C`` has pieces mu = chi - (sum of a nonempty subset of the weights with
  <lam, beta> < 0);
* ``Dvee`` has pieces mu = chi + (sum of a nonempty subset of the weights
  with <lam, beta> > 0).

In the nef-Fano engine the eligible sets are taken for the cocharacter
lam'_eps spanning (omega* + eps*ell)^perp; its signs are computed
lexicographically and agree with the closed sets {<lam', beta> >= 0}.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import prod

from barrelwin.errors import BudgetError, HypothesisError, ProofMismatchError
from barrelwin.group import GroupSpec, RepSpec, anticanonical
from barrelwin.lattice import ZERO, Vec2, as_vec, fmt_rational, pair, sign, vsum
from barrelwin.stability import (
    PerturbedPolarization,
    finite_stabilizer_test,
    lex_sign,
    polarization_base,
)
from barrelwin.windows import WindowRegion, check_generic, det_where, window_sort_key

C = "C"
DVEE = "Dvee"
STRICT = "strict"
CLOSED = "closed"

SUBSET_BUDGET = 20

STEP1_PLUS = "Step1Plus"
STEP1_MINUS = "Step1Minus"
STEP2A = "Step2a"
STEP2B = "Step2b"
STEP3A = "Step3a"
STEP3B = "Step3b"
NEF_CASE1 = "NefCase1"
NEF_CASE2 = "NefCase2"
NEF_INTERIOR1 = "NefInterior1"
NEF_INTERIOR2 = "NefInterior2"
RULES = (
    STEP1_PLUS, STEP1_MINUS, STEP2A, STEP2B, STEP3A, STEP3B,
    NEF_CASE1, NEF_CASE2, NEF_INTERIOR1, NEF_INTERIOR2,
)


def mu_plus(group: GroupSpec, mu: Vec2) -> Vec2 | None:
    """The dominant representative w*(mu) = w(mu + rho) - rho, if mu + rho is regular."""
    mu = as_vec(mu)
    if group.is_torus:
        return mu
    if mu.b == mu.a + 1:
        return None
    if mu.a >= mu.b:
        return mu
    return Vec2(mu.b - 1, mu.a + 1)


@dataclass(frozen=True)
class Piece:
    mu: Vec2
    mu_plus: Vec2 | None
    subset: tuple[tuple[Vec2, int], ...]


@dataclass(frozen=True)
class ComplexPieces:
    kind: str
    lam: Vec2
    chi: Vec2
    pieces: tuple[Piece, ...]

    def children(self) -> list[Vec2]:
        return sorted({p.mu_plus for p in self.pieces if p.mu_plus is not None})


def eligible_weights(rep: RepSpec, kind: str, lam: Vec2, sign_mode: str = STRICT) -> list[Vec2]:
    if sign_mode not in (STRICT, CLOSED):
        raise ValueError(f"unknown sign mode {sign_mode!r}")
    out = []
    for beta in rep.weights:
        p = pair(lam, beta)
        if kind == C:
            ok = p < 0 if sign_mode == STRICT else p <= 0
        elif kind == DVEE:
            ok = p > 0 if sign_mode == STRICT else p >= 0
        else:
            raise ValueError(f"unknown complex kind {kind!r}")
        if ok:
            out.append(beta)
    return out


def complex_pieces(
    rep: RepSpec,
    kind: str,
    lam: Vec2,
    chi: Vec2,
    sign_mode: str = STRICT,
    eligible: list[Vec2] | None = None,
) -> ComplexPieces:
    """Graded pieces of C_{lam,chi} (kind ``C``) or its dual-type partner (``Dvee``).

    Only subset sums matter, so the eligible multiset is grouped by value and
    each piece records how many copies of each distinct weight it uses.
    """
    lam, chi = as_vec(lam), as_vec(chi)
    if eligible is None:
        eligible = eligible_weights(rep, kind, lam, sign_mode)
    counts = sorted(Counter(eligible).items())
    n_subsets = prod(c + 1 for _, c in counts)
    if n_subsets - 1 > 2 ** SUBSET_BUDGET:
        raise BudgetError(f"subset enumeration of {len(eligible)} weights exceeds the budget")
    sgn = -1 if kind == C else 1
    found: dict[Vec2, tuple[tuple[Vec2, int], ...]] = {}
    for combo in product(*(range(c + 1) for _, c in counts)):
        if not any(combo):
            continue
        total = vsum(k * w for (w, _), k in zip(counts, combo))
        mu = chi + sgn * total
        if mu not in found:
            found[mu] = tuple((w, k) for (w, _), k in zip(counts, combo) if k)
    pieces = tuple(
        Piece(mu, mu_plus(rep.group, mu), found[mu]) for mu in sorted(found)
    )
    return ComplexPieces(kind, lam, chi, pieces)


# ---------------------------------------------------------------- certificate
@dataclass
class Node:
    chi: Vec2
    in_window: bool
    rule: str | None = None
    measure: tuple = ()
    children: list[Vec2] = field(default_factory=list)
    child_measures: list[tuple] = field(default_factory=list)


@dataclass
class ReductionCertificate:
    engine: str
    theta: Vec2
    seeds: list[Vec2]
    nodes: dict[Vec2, Node] = field(default_factory=dict)
    mismatches: list[str] = field(default_factory=list)
    parameters: dict[str, str] = field(default_factory=dict)

    @property
    def leaves(self) -> list[Vec2]:
        return [c for c, n in self.nodes.items() if n.rule is None]

    @property
    def edges(self) -> int:
        return sum(len(n.children) for n in self.nodes.values())

    @property
    def ok(self) -> bool:
        return not self.mismatches and all(n.in_window for n in self.nodes.values() if n.rule is None)

    def rule_counts(self) -> dict[str, int]:
        counts = Counter(n.rule for n in self.nodes.values() if n.rule is not None)
        return {r: counts[r] for r in RULES if counts[r]}

    def to_dict(self) -> dict:
        return {
            "engine": self.engine,
            "theta": self.theta.to_str(),
            "parameters": dict(self.parameters),
            "seeds": [s.to_str() for s in self.seeds],
            "nodes": [
                {
                    "chi": n.chi.to_str(),
                    "in_window": n.in_window,
                    "rule": n.rule,
                    "measure": [fmt_rational(m) for m in n.measure],
                    "children": [c.to_str() for c in n.children],
                    "child_measures": [[fmt_rational(m) for m in cm] for cm in n.child_measures],
                }
                for n in self.nodes.values()
            ],
            "mismatches": list(self.mismatches),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ReductionCertificate":
        from barrelwin.config import parse_vec

        cert = cls(
            data["engine"],
            parse_vec(data["theta"]),
            [parse_vec(s) for s in data["seeds"]],
            parameters=dict(data.get("parameters", {})),
            mismatches=list(data.get("mismatches", [])),
        )
        for item in data["nodes"]:
            chi = parse_vec(item["chi"])
            cert.nodes[chi] = Node(
                chi,
                item["in_window"],
                item["rule"],
                tuple(Fraction(m) for m in item["measure"]),
                [parse_vec(c) for c in item["children"]],
                [tuple(Fraction(m) for m in cm) for cm in item["child_measures"]],
            )
        return cert


# --------------------------------------------------------------------- engines
class _Engine:
    name = "base"

    def __init__(self, region: WindowRegion, strict: bool = True):
        self.region = region
        self.rep = region.rep
        self.group = region.rep.group
        self.theta = region.theta
        self.lambda0 = region.lambda0
        self.eta0 = region.eta0
        self.det_x = vsum(self.rep.weights)
        self.strict = strict
        self._mismatches: list[str] = []

    # shared measures
    def p0(self, chi: Vec2) -> Fraction:
        return pair(self.lambda0, chi - self.theta)

    def alpha(self, chi: Vec2) -> Fraction:
        return 2 * abs(self.p0(chi)) / self.eta0

    def in_strip(self, chi: Vec2) -> bool:
        return abs(self.p0(chi)) <= self.eta0 / 2

    def mismatch(self, message: str):
        if self.strict:
            raise ProofMismatchError(message)
        self._mismatches.append(message)

    def step1(self, chi: Vec2):
        """Move a weight outside the strip into a strictly narrower strip."""
        p = self.p0(chi)
        if p < 0:
            pieces = complex_pieces(self.rep, C, self.lambda0, chi)
            children = pieces.children()
            rule = STEP1_PLUS
        else:
            head = chi + self.det_x
            pieces = complex_pieces(self.rep, C, self.lambda0, head)
            children = sorted(set(pieces.children()) - {chi} | {head})
            rule = STEP1_MINUS
        a = self.alpha(chi)
        measures = [(self.alpha(m),) for m in children]
        for m, (am,) in zip(children, measures):
            if not am < a:
                self.mismatch(f"{rule} at {chi}: child {m} has alpha {am} >= {a}")
        return rule, (a,), children, measures

    def expand(self, chi: Vec2):
        raise NotImplementedError

    def run(self, seeds) -> ReductionCertificate:
        seeds = sorted({as_vec(s) for s in seeds}, key=window_sort_key(self.lambda0))
        for s in seeds:
            if not self.group.is_dominant(s):
                raise HypothesisError("dominant-seed", f"seed {s} is not dominant")
        cert = ReductionCertificate(self.name, self.theta, seeds, parameters=self.parameters())
        queue = deque(seeds)
        while queue:
            chi = queue.popleft()
            if chi in cert.nodes:
                continue
            outcome = self.expand(chi)
            if outcome is None:
                cert.nodes[chi] = Node(chi, True)
                continue
            if outcome[0] is None:
                cert.nodes[chi] = Node(chi, False)
                continue
            rule, measure, children, child_measures = outcome
            cert.nodes[chi] = Node(chi, False, rule, measure, list(children), list(child_measures))
            for c in children:
                if c not in cert.nodes:
                    queue.append(c)
        cert.mismatches = list(self._mismatches)
        return cert

    def parameters(self) -> dict[str, str]:
        return {"eta0": fmt_rational(self.eta0), "lambda0": self.lambda0.to_str()}


class FanoReducer(_Engine):
    """Three-step reduction into the barrel, for finite stabilizers at omega*.

    ``check_theta`` may be switched off to replay single steps at a
    non-generic shift such as theta = 0.
    """

    name = "fano"

    def __init__(self, region: WindowRegion, strict: bool = True, check_theta: bool = True):
        super().__init__(region, strict)
        if check_theta:
            report = check_generic(region)
            if not report.is_generic:
                raise HypothesisError(
                    "lambda0-generic", f"theta = {region.theta} meets a hyperplane at {report.witness}"
                )
        omega = anticanonical(self.rep)
        if polarization_base(region.ell) != omega or isinstance(region.ell, PerturbedPolarization):
            raise HypothesisError("anticanonical-polarization", "the Fano reduction uses ell = omega*")
        verdict = finite_stabilizer_test(self.rep, omega, self.lambda0)
        if not verdict.finite_stabilizers:
            raise HypothesisError(
                verdict.reason, f"omega*-semistable points have infinite stabilizers (weight {verdict.offending_weight})"
            )
        if not self.group.is_torus:
            lp = region.lambda_prime
            if pair(lp, self.group.positive_roots[0]) > 0:
                raise HypothesisError("anti-dominant", "lambda' must be anti-dominant")

    def orient(self, chi: Vec2) -> Vec2:
        lp = self.region.lambda_prime
        if self.group.is_torus and pair(lp, chi - self.theta) > 0:
            return -lp
        return lp

    def r_value(self, chi: Vec2, lp: Vec2 | None = None) -> Fraction:
        lp = lp if lp is not None else self.orient(chi)
        denom = pair(lp, -det_where(self.rep, lp, lambda p: p <= 0))
        return (abs(pair(lp, chi - self.theta)) - pair(lp, self.group.rho)) / denom

    def q_value(self, lp: Vec2) -> Fraction:
        return self.eta0 / 2 + pair(self.lambda0, det_where(self.rep, lp, lambda p: p < 0))

    def expand(self, chi: Vec2):
        if not self.in_strip(chi):
            return self.step1(chi)
        if self.region.in_barrel(chi):
            return None
        lp = self.orient(chi)
        r = self.r_value(chi, lp)
        p = self.p0(chi)
        half = Fraction(1, 2)
        if r > half:
            if p <= self.q_value(lp):
                rule, kind = STEP2A, C
            else:
                rule, kind = STEP2B, DVEE
            children = complex_pieces(self.rep, kind, lp, chi).children()
            measures = [(self.r_value(m), self.alpha(m)) for m in children]
            for m, (rm, _) in zip(children, measures):
                if not self.in_strip(m):
                    self.mismatch(f"{rule} at {chi}: child {m} leaves the strip")
                if not rm < r:
                    self.mismatch(f"{rule} at {chi}: child {m} has r {rm} >= {r}")
            return rule, (r, self.alpha(chi)), children, measures
        if r == half:
            lower = pair(self.lambda0, det_where(self.rep, lp, lambda q: q <= 0)) / 2
            upper = pair(self.lambda0, -det_where(self.rep, lp, lambda q: q >= 0)) / 2
            if -self.eta0 / 2 <= p < lower:
                rule, kind = STEP3A, C
            elif upper < p <= self.eta0 / 2:
                rule, kind = STEP3B, DVEE
            else:
                self.mismatch(f"no Step 3 case applies to {chi} (p0 = {p})")
                return (None,)
            children = complex_pieces(self.rep, kind, lp, chi).children()
            a = self.alpha(chi)
            measures = [(self.r_value(m), self.alpha(m)) for m in children]
            for m, (rm, am) in zip(children, measures):
                if not self.in_strip(m):
                    self.mismatch(f"{rule} at {chi}: child {m} leaves the strip")
                if not am < a:
                    self.mismatch(f"{rule} at {chi}: child {m} has alpha {am} >= {a}")
                if rm > half:
                    self.mismatch(f"{rule} at {chi}: child {m} has r {rm} > 1/2")
            return rule, (r, a), children, measures
        self.mismatch(f"{chi} is in the strip with r < 1/2 but outside the barrel")
        return (None,)


class LexCocharacter:
    """The cocharacter spanning (omega* + eps*ell)^perp, to first order in eps.

    With lam' spanning (omega*)^perp, lam'_eps = lam' - eps*c*lambda0 where
    c = <lam', ell>/<lambda0, omega*>.  Pairings are lexicographic pairs.
    """

    def __init__(self, lambda_prime: Vec2, lambda0: Vec2, ell: PerturbedPolarization):
        self.base = lambda_prime
        c = pair(lambda_prime, ell.direction) / pair(lambda0, ell.base)
        self.first_order = -c * lambda0

    def sign(self, beta: Vec2) -> int:
        return lex_sign((pair(self.base, beta), pair(self.first_order, beta)))


class NefFanoReducer(_Engine):
    """Reduction into the cylinder when some weight is proportional to omega*."""

    name = "nef-fano"

    def __init__(self, region: WindowRegion, strict: bool = True, check_theta: bool = True):
        super().__init__(region, strict)
        ell = region.ell
        if not isinstance(ell, PerturbedPolarization):
            raise HypothesisError("perturbed-polarization", "the nef-Fano reduction needs ell = omega* + eps*d")
        if not self.group.is_torus:
            raise HypothesisError("torus", "the nef-Fano reduction is implemented for tori")
        if ell.base != anticanonical(self.rep):
            raise HypothesisError("anticanonical-polarization", "the perturbation must be based at omega*")
        verdict = finite_stabilizer_test(self.rep, ell, self.lambda0)
        if not verdict.finite_stabilizers:
            raise HypothesisError(verdict.reason, "perturbed polarization has infinite stabilizers")
        boundary = region.boundary_lattice_points() if check_theta else []
        if boundary:
            raise HypothesisError(
                "boundary-generic-theta", f"theta + cylinder has lattice points on its boundary, e.g. {boundary[0]}"
            )
        self.lp = region.lambda_prime
        if pair(self.lp, ell.direction) >= 0:
            raise HypothesisError("perturbation-direction", "lambda' must pair negatively with the direction")
        self.eta_p = region.dplus.eta
        if region.dminus.eta != self.eta_p:
            self.mismatch("eta of the two generators of the perpendicular line differ")
        self.Q = self.eta0 / 2 + pair(self.lambda0, det_where(self.rep, self.lp, lambda p: p < 0))
        self.lp_eps = LexCocharacter(self.lp, self.lambda0, ell)
        self.omega_region = WindowRegion(
            region.rep, ell.base, region.lambda0, region.lambda_prime, region.theta
        )

    def parameters(self) -> dict[str, str]:
        out = super().parameters()
        out.update(
            {
                "eta_lambda_prime": fmt_rational(self.eta_p),
                "lambda_prime": self.lp.to_str(),
                "Q": fmt_rational(self.Q),
            }
        )
        return out

    def R_value(self, chi: Vec2) -> Fraction:
        return 2 * abs(pair(self.lp, chi - self.theta)) / self.eta_p

    def _eps_eligible(self, closed_test) -> list[Vec2]:
        lex = [b for b in self.rep.weights if self.lp_eps.sign(b) > 0]
        closed = [b for b in self.rep.weights if closed_test(pair(self.lp, b))]
        if Counter(lex) != Counter(closed):
            self.mismatch("perturbed eligible set differs from its closed limit")
        return lex

    def expand(self, chi: Vec2):
        if not self.in_strip(chi):
            return self.step1(chi)
        R = self.R_value(chi)
        x = chi - self.theta
        if R <= 1:
            if not self.omega_region.in_barrel(chi):
                self.mismatch(f"{chi} lies in the cylinder but not in the barrel")
            return None
        s = sign(pair(self.lp, x))
        p = self.p0(chi)
        half0 = self.eta0 / 2
        if s < 0 and self.Q < p <= half0:
            rule = NEF_CASE1
            pieces = complex_pieces(self.rep, DVEE, self.lp, chi, CLOSED, self._eps_eligible(lambda q: q >= 0))
        elif s > 0 and -half0 <= p < -self.Q:
            rule = NEF_CASE2
            pieces = complex_pieces(self.rep, C, -self.lp, chi, CLOSED, self._eps_eligible(lambda q: q >= 0))
        elif s < 0:
            rule = NEF_INTERIOR1
            pieces = complex_pieces(self.rep, C, self.lp, chi)
        else:
            rule = NEF_INTERIOR2
            pieces = complex_pieces(self.rep, DVEE, -self.lp, chi)
        children = pieces.children()
        measures = [(self.R_value(m), self.p0(m)) for m in children]
        for m, (Rm, pm) in zip(children, measures):
            if not self.in_strip(m):
                self.mismatch(f"{rule} at {chi}: child {m} leaves the strip")
            if Rm < R:
                continue
            same_face = pair(self.lp, m - self.theta) == pair(self.lp, x)
            if rule == NEF_CASE1 and Rm == R and same_face and pm < p:
                continue
            if rule == NEF_CASE2 and Rm == R and same_face and pm > p:
                continue
            self.mismatch(f"{rule} at {chi}: child {m} does not decrease (R {Rm} vs {R})")
        return rule, (R, p), children, measures


def default_seeds(region: WindowRegion, seed_box=3) -> list[Vec2]:
    """Dominant lattice points of theta + strip with |<lambda', x>| <= K*eta'/2."""
    group = region.rep.group
    pts = region.lattice_points(lambda chi: region.in_enlarged(chi, seed_box), R=seed_box)
    return [c for c in pts if group.is_dominant(c)]


def reduce_fano(
    region: WindowRegion, seeds=None, seed_box=3, strict: bool = True, check_theta: bool = True
) -> ReductionCertificate:
    engine = FanoReducer(region, strict, check_theta)
    if seeds is None:
        seeds = default_seeds(region, seed_box)
    return engine.run(seeds)


def reduce_nef_fano(
    region: WindowRegion, seeds=None, seed_box=3, strict: bool = True, check_theta: bool = True
) -> ReductionCertificate:
    engine = NefFanoReducer(region, strict, check_theta)
    if seeds is None:
        seeds = default_seeds(region, seed_box)
    return engine.run(seeds)


def check_lattice_equality(region: WindowRegion) -> bool:
    """(theta + cylinder) and (theta + barrel) have the same lattice points."""
    base = WindowRegion(
        region.rep, polarization_base(region.ell), region.lambda0, region.lambda_prime, region.theta
    )
    cyl = set(base.lattice_points(base.in_cylinder))
    bar = set(base.lattice_points(base.in_barrel))
    return cyl == bar
