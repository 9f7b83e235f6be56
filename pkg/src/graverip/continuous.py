"""Exact rational linear programming and the approximate continuous oracle.

The LP solver is a bounded-variable primal simplex over Fractions with
Bland's anti-cycling rule: phase I minimizes artificial variables that
patch up the equality residuals, phase II continues from the same
tableau with the real cost row.  Every returned point satisfies the
constraints exactly.

The continuous oracle for a four-block instance linearizes each
coordinate function on a uniform grid and minimizes the resulting
epigraph LP in incremental (delta) form; since the grid slopes are
nondecreasing, the LP fills cells in order and its optimum equals the
surrogate optimum at the recovered point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .objective import SeparableObjective, piecewise_linearize

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def _frac_vec(v) -> tuple[Fraction, ...]:
    out = []
    for x in v:
        if isinstance(x, float):
            raise TypeError("floats are not allowed in exact LP data")
        out.append(Fraction(x))
    return tuple(out)


@dataclass(frozen=True)
class RationalLP:
    """min objective . x  s.t.  matrix x = rhs,  lower <= x <= upper (all exact)."""

    matrix: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]
    lower: tuple[Fraction, ...]
    upper: tuple[Fraction, ...]
    objective: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(_frac_vec(r) for r in self.matrix))
        object.__setattr__(self, "rhs", _frac_vec(self.rhs))
        object.__setattr__(self, "lower", _frac_vec(self.lower))
        object.__setattr__(self, "upper", _frac_vec(self.upper))
        object.__setattr__(self, "objective", _frac_vec(self.objective))
        n = len(self.objective)
        if len(self.lower) != n or len(self.upper) != n:
            raise ValueError("bounds dimension disagrees with objective")
        if any(len(r) != n for r in self.matrix):
            raise ValueError("matrix width disagrees with objective")
        if len(self.rhs) != len(self.matrix):
            raise ValueError("rhs length disagrees with row count")
        if any(l > u for l, u in zip(self.lower, self.upper)):
            raise ValueError("lower bound exceeds upper bound")


@dataclass(frozen=True)
class ContinuousOutcome:
    status: str
    point: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    surrogate_value: Fraction | None = None


class _Simplex:
    """Bounded-variable tableau simplex on exact rationals."""

    def __init__(self, a_rows, lower, upper, basis, at_upper):
        self.a = [list(r) for r in a_rows]  # current tableau B^-1 A
        self.lower = list(lower)
        self.upper = list(upper)
        self.basis = list(basis)            # column index of each basic variable
        self.at_upper = set(at_upper)       # nonbasic variables sitting at upper bound
        self.m = len(self.a)
        self.n = len(lower)

    def nonbasic_value(self, j):
        return self.upper[j] if j in self.at_upper else self.lower[j]

    def basic_values(self, beta):
        vals = list(beta)
        in_basis = set(self.basis)
        for j in range(self.n):
            if j in in_basis:
                continue
            xj = self.nonbasic_value(j)
            if xj:
                for i in range(self.m):
                    if self.a[i][j]:
                        vals[i] -= self.a[i][j] * xj
        return vals

    def solution(self, beta):
        x = [self.nonbasic_value(j) for j in range(self.n)]
        for i, bv in enumerate(self.basic_values(beta)):
            x[self.basis[i]] = bv
        return x

    def minimize(self, cost, beta):
        """Run Bland-rule pivots until optimal; mutates the tableau and beta."""
        while True:
            bvals = self.basic_values(beta)
            # reduced costs d_j = c_j - c_B . T_j
            cb = [cost[j] for j in self.basis]
            entering = -1
            direction = 0
            for j in range(self.n):
                if j in self.basis or self.lower[j] == self.upper[j]:
                    continue
                dj = cost[j]
                for i in range(self.m):
                    if self.a[i][j]:
                        dj -= cb[i] * self.a[i][j]
                if j not in self.at_upper and dj < 0:
                    entering, direction = j, 1
                    break
                if j in self.at_upper and dj > 0:
                    entering, direction = j, -1
                    break
            if entering < 0:
                return beta
            j = entering
            # ratio test: entering moves by t*direction from its bound
            t_best = self.upper[j] - self.lower[j]
            leave = j  # bound flip by default
            leave_to_upper = direction > 0
            for i in range(self.m):
                w = -direction * self.a[i][j]
                if w > 0:
                    t = (self.upper[self.basis[i]] - bvals[i]) / w
                    hits_upper = True
                elif w < 0:
                    t = (bvals[i] - self.lower[self.basis[i]]) / (-w)
                    hits_upper = False
                else:
                    continue
                if t < t_best or (t == t_best and self.basis[i] < leave):
                    t_best, leave, leave_to_upper = t, self.basis[i], hits_upper
            assert t_best >= 0
            if leave == j:
                # bound flip, basis unchanged
                if j in self.at_upper:
                    self.at_upper.discard(j)
                else:
                    self.at_upper.add(j)
                continue
            row = self.basis.index(leave)
            self._pivot(row, j, beta)
            if leave_to_upper:
                self.at_upper.add(leave)
            else:
                self.at_upper.discard(leave)
            if j in self.at_upper:
                self.at_upper.discard(j)

    def _pivot(self, row, col, beta):
        piv = self.a[row][col]
        assert piv != 0
        inv = Fraction(1) / piv
        self.a[row] = [x * inv for x in self.a[row]]
        beta[row] *= inv
        for i in range(self.m):
            if i == row:
                continue
            factor = self.a[i][col]
            if factor:
                arow = self.a[row]
                self.a[i] = [x - factor * y for x, y in zip(self.a[i], arow)]
                beta[i] -= factor * beta[row]
        self.basis[row] = col


def lp_solve(lp: RationalLP) -> ContinuousOutcome:
    """Exact optimum of a bounded-variable LP, or Infeasible.

    Finite bounds rule out unboundedness; the unbounded branch exists
    only for the outcome type's sake and is never produced here.
    """
    m = len(lp.matrix)
    n = len(lp.objective)
    # start structurals at their lower bounds, patch residuals with artificials
    resid = [lp.rhs[i] - sum(lp.matrix[i][j] * lp.lower[j] for j in range(n)) for i in range(m)]
    total = n + m
    lower = list(lp.lower) + [Fraction(0)] * m
    upper = list(lp.upper) + [abs(r) for r in resid]
    a_rows = []
    for i in range(m):
        row = list(lp.matrix[i]) + [Fraction(0)] * m
        row[n + i] = Fraction(1) if resid[i] >= 0 else Fraction(-1)
        a_rows.append(row)
    basis = [n + i for i in range(m)]
    sim = _Simplex(a_rows, lower, upper, basis, at_upper=set())
    # initial tableau must be B^-1 A with B the artificial columns
    beta = []
    for i in range(m):
        sign = Fraction(1) if resid[i] >= 0 else Fraction(-1)
        sim.a[i] = [x * sign for x in sim.a[i]]
        beta.append(lp.rhs[i] * sign)

    phase1_cost = [Fraction(0)] * n + [Fraction(1)] * m
    beta = sim.minimize(phase1_cost, beta)
    x = sim.solution(beta)
    if sum(x[n:], Fraction(0)) > 0:
        return ContinuousOutcome(INFEASIBLE)
    # pin artificials at zero and optimize the real cost
    for k in range(n, total):
        sim.lower[k] = sim.upper[k] = Fraction(0)
        sim.at_upper.discard(k)
    phase2_cost = list(lp.objective) + [Fraction(0)] * m
    beta = sim.minimize(phase2_cost, beta)
    x = sim.solution(beta)[:n]
    value = sum(c * v for c, v in zip(lp.objective, x))
    return ContinuousOutcome(FEASIBLE, point=tuple(x), value=value)


def approx_continuous_oracle(instance, epsilon) -> ContinuousOutcome:
    """Approximate minimizer of the continuous relaxation of an instance.

    Linearizes the objective on a uniform grid of step min(epsilon, 1/2)
    per coordinate and solves the epigraph LP exactly.  The returned
    point exactly minimizes the grid surrogate; the solver covers the
    surrogate-versus-true gap by enlarging its proximity box by
    epsilon.  Infeasible is reported exactly when the equality-plus-box
    system has no real solution.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    f: SeparableObjective = instance.objective
    e = instance.matrix
    lower, upper = instance.lower, instance.upper
    step = min(epsilon, Fraction(1, 2))
    pls = piecewise_linearize(f, lower, upper, step)

    # delta form: x_i = l_i + sum_k delta_ik, delta_ik in [0, cell width]
    var_coord: list[int] = []
    var_bounds: list[Fraction] = []
    var_cost: list[Fraction] = []
    for i, pl in enumerate(pls):
        for k, slope in enumerate(pl.slopes):
            var_coord.append(i)
            var_bounds.append(pl.breakpoints[k + 1] - pl.breakpoints[k])
            var_cost.append(slope)
    nvars = len(var_coord)
    rows = []
    rhs = []
    for r in range(e.rows):
        coeff_row = e.row(r)
        rows.append([Fraction(coeff_row[var_coord[j]]) for j in range(nvars)])
        rhs.append(Fraction(instance.rhs[r]) - sum(coeff_row[i] * Fraction(lower[i]) for i in range(e.cols)))
    lp = RationalLP(
        matrix=tuple(tuple(r) for r in rows),
        rhs=tuple(rhs),
        lower=tuple(Fraction(0) for _ in range(nvars)),
        upper=tuple(var_bounds),
        objective=tuple(var_cost),
    )
    res = lp_solve(lp)
    if res.status != FEASIBLE:
        return ContinuousOutcome(res.status)
    point = [Fraction(lower[i]) for i in range(f.dimension)]
    for j, delta in enumerate(res.point):
        point[var_coord[j]] += delta
    surrogate = res.value + sum(
        (f.coordinate_value(i, lower[i]) for i in range(f.dimension)), Fraction(0)
    )
    point = tuple(point)
    return ContinuousOutcome(
        FEASIBLE, point=point, value=f.value(point), surrogate_value=surrogate
    )
