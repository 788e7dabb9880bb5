"""Gale duality and the Borisov-Hua window for torus actions.

For weights beta_1..beta_n spanning M = Z^2 the sequence

    0 -> N --phi*--> Z^n --rho*--> A -> 0

(phi* sends a cocharacter to its pairings with the weights) defines the
Picard-type group A and the ray generators v_i = rho*(e_i).  A is computed
from a Smith normal form of phi* with deterministic pivoting.

The Borisov-Hua window in the space of lifts y in Q^n is cut out by
|sum r_i y_i| <= 1/2 and |sum a_i y_i| <= (1/2) sum_{a_i > 0} a_i with
a_i = -<lambda', beta_i> and r_i = -<lambda0, beta_i>/eta_0.  Both linear
forms vanish on the kernel of phi, so they descend to M_Q; the resulting
region is the cylinder window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd

from barrelwin.errors import HypothesisError
from barrelwin.group import RepSpec
from barrelwin.lattice import Vec2, as_vec, det2, pair, solve2
from barrelwin.stability import weights_span
from barrelwin.windows import WindowRegion, destab_data

Matrix = list[list[int]]


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return (D, U, V) with U*A*V = D diagonal, U and V unimodular.

    The pivot at each stage is the nonzero entry of least absolute value in
    the remaining block, the first in row-major order among ties, so the
    transforms are reproducible.  Diagonal entries are nonnegative and each
    divides the next.
    """
    m = len(A)
    k = len(A[0]) if m else 0
    D = [list(map(int, row)) for row in A]
    U = _identity(m)
    V = _identity(k)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M_ in (D, V):
            for row in M_:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        for M_ in (D, U):
            M_[dst] = [x + q * y for x, y in zip(M_[dst], M_[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for M_ in (D, V):
            for row in M_:
                row[dst] += q * row[src]

    for t in range(min(m, k)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, k):
                    if D[i][j] and (pivot is None or abs(D[i][j]) < abs(D[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                return D, U, V
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
            for j in range(t + 1, k):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
            if any(D[i][t] for i in range(t + 1, m)) or any(D[t][j] for j in range(t + 1, k)):
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, k) if D[i][j] % p),
                None,
            )
            if bad is not None:
                add_row(t, bad, 1)
                continue
            break
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return D, U, V


def matmul(A: Matrix, B: Matrix) -> Matrix:
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


@dataclass(frozen=True)
class AElement:
    """An element of A = Z^free x prod Z/d_i, stored with reduced torsion part."""

    free: tuple
    torsion: tuple

    def to_str(self) -> str:
        f = ",".join(str(x) for x in self.free)
        t = ",".join(str(x) for x in self.torsion)
        return f"[{f}]" + (f"+tors[{t}]" if self.torsion else "")


@dataclass
class GaleDual:
    phi: Matrix
    A_free_rank: int
    torsion: list[int]
    ray_generators: list[AElement]
    left_transform: Matrix = field(repr=False)
    smith_diagonal: list[int] = field(repr=False, default_factory=list)

    @property
    def rho(self) -> Matrix:
        """The map A^* -> Z^n as an n x (n-2) matrix (free rows of the transform, transposed)."""
        rows = self.left_transform[2:]
        return [list(col) for col in zip(*rows)] if rows else [[] for _ in self.phi[0]]

    def combination(self, coeffs) -> tuple[tuple, tuple]:
        """sum c_i v_i: exact free part, and torsion part (only for integer coefficients)."""
        free = tuple(
            sum(Fraction(c) * v.free[k] for c, v in zip(coeffs, self.ray_generators))
            for k in range(self.A_free_rank)
        )
        if all(Fraction(c).denominator == 1 for c in coeffs):
            tors = tuple(
                int(sum(int(c) * v.torsion[k] for c, v in zip(coeffs, self.ray_generators))) % d
                for k, d in enumerate(self.torsion)
            )
        else:
            tors = None
        return free, tors

    def is_zero_combination(self, coeffs) -> bool:
        free, tors = self.combination(coeffs)
        if any(x != 0 for x in free):
            return False
        if tors is None:
            # Clear denominators and test the torsion part of the integer multiple.
            den = 1
            for c in coeffs:
                den = den * Fraction(c).denominator // gcd(den, Fraction(c).denominator)
            scaled = [int(Fraction(c) * den) for c in coeffs]
            _, tors = self.combination(scaled)
        return all(x == 0 for x in tors)

    def exactness_holds(self) -> bool:
        n = len(self.phi[0])
        phi_star = [[self.phi[0][i], self.phi[1][i]] for i in range(n)]
        if self.A_free_rank:
            if any(x for row in matmul(self.phi, self.rho) for x in row):
                return False
            if any(x for row in matmul(self.left_transform[2:], phi_star) for x in row):
                return False
        # The torsion rows kill the image of phi* modulo their invariant factors.
        tors_rows = [t for t, d in enumerate(self.smith_diagonal) if d > 1]
        for t in tors_rows:
            d = self.smith_diagonal[t]
            row = matmul([self.left_transform[t]], phi_star)[0]
            if any(x % d for x in row):
                return False
        return True


def gale_dual(rep: RepSpec) -> GaleDual:
    if not rep.group.is_torus:
        raise HypothesisError("torus", "Gale duality is computed for torus representations")
    if not weights_span(rep):
        raise HypothesisError("weights-span", "the weights must span M_R")
    ws = rep.weights
    n = len(ws)
    phi = [[int(w.a) for w in ws], [int(w.b) for w in ws]]
    phi_star = [[int(w.a), int(w.b)] for w in ws]
    D, U, _ = smith_normal_form(phi_star)
    diag = [D[t][t] for t in range(2)]
    torsion_idx = [t for t in range(2) if diag[t] > 1]
    torsion = [diag[t] for t in torsion_idx]
    gens = []
    for i in range(n):
        free = tuple(U[r][i] for r in range(2, n))
        tors = tuple(U[t][i] % diag[t] for t in torsion_idx)
        gens.append(AElement(free, tors))
    return GaleDual(phi, n - 2, torsion, gens, U, diag)


@dataclass
class BorisovHuaData:
    a: list[Fraction]
    r: list[Fraction]
    I_plus: list[int]
    eta0: Fraction
    eta_lambda_prime: Fraction
    gale: GaleDual
    theta: Vec2
    weights: tuple[Vec2, ...]

    def invariants(self) -> dict[str, bool]:
        return {
            "sum_a_zero": sum(self.a) == 0,
            "sum_r_one": sum(self.r) == 1,
            "sum_a_plus_eta": sum(self.a[i] for i in self.I_plus) == self.eta_lambda_prime,
            "sum_a_v_zero": self.gale.is_zero_combination(self.a),
            "sum_r_v_zero": self.gale.is_zero_combination(self.r),
        }

    def lift(self, chi: Vec2) -> list[Fraction]:
        """A rational y with sum y_i beta_i = chi, supported on the first independent pair."""
        chi = as_vec(chi)
        for i, j in combinations(range(len(self.weights)), 2):
            bi, bj = self.weights[i], self.weights[j]
            if det2(bi, bj) != 0:
                # Solve y_i * bi + y_j * bj = chi coordinatewise.
                sol = solve2(Vec2(bi.a, bj.a), chi.a, Vec2(bi.b, bj.b), chi.b)
                y = [Fraction(0)] * len(self.weights)
                y[i], y[j] = sol.a, sol.b
                return y
        raise HypothesisError("weights-span", "no independent pair of weights")

    def f(self, y) -> Fraction:
        return sum(ri * yi for ri, yi in zip(self.r, y))

    def psi(self, y) -> Fraction:
        return sum(ai * yi for ai, yi in zip(self.a, y))

    def contains_lift(self, y) -> bool:
        bound = sum(self.a[i] for i in self.I_plus) / 2
        return abs(self.f(y)) <= Fraction(1, 2) and abs(self.psi(y)) <= bound

    def contains(self, chi: Vec2) -> bool:
        """Membership of chi in theta + P, evaluated on a lift of chi - theta."""
        return self.contains_lift(self.lift(as_vec(chi) - self.theta))


def borisov_hua_window(region: WindowRegion) -> BorisovHuaData:
    rep = region.rep
    if not rep.group.is_torus:
        raise HypothesisError("torus", "the Borisov-Hua window is defined for torus actions")
    lp, lam0 = region.lambda_prime, region.lambda0
    a = [-pair(lp, b) for b in rep.weights]
    zero = [rep.weights[i] for i, ai in enumerate(a) if ai == 0]
    if zero:
        raise HypothesisError(
            "proportional-weight", f"weight {zero[0]} pairs to zero with lambda', so some a_i vanish"
        )
    eta0 = destab_data(rep, lam0).eta
    r = [-pair(lam0, b) / eta0 for b in rep.weights]
    I_plus = [i for i, ai in enumerate(a) if ai > 0]
    return BorisovHuaData(
        a, r, I_plus, eta0, destab_data(rep, lp).eta, gale_dual(rep), region.theta, rep.weights
    )
