"""The full solve pipeline for N-fold 4-block separable convex IPs.

Pipeline: solve the continuous relaxation approximately, restrict the
box to a proximity window around that point (radius n * sup-norm bound
on the Graver basis, plus the oracle tolerance), construct a feasible
point in the window, then run Graver-best augmentation to optimality.

Augmentation steps come from the block structure: candidate first-block
moves are enumerated up to the 1-norm bound and the remaining copy
variables are optimized by a small N-fold sub-solve, so the step taken
is always at least as good as the best step gamma * g over the Graver
basis of the assembled matrix.  A plain full-matrix Graver-best step is
available as a cross-checking path.

An exhaustive enumeration solver doubles as the acceptance oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .bounds import (
    fourblock_bound_alternative,
    fourblock_bound_primary,
    measure_stochastic_constants,
)
from .continuous import approx_continuous_oracle
from .errors import SizeGuardExceeded
from .fourblock import FourBlockInstance, nfold_part, stochastic_part
from .graver import GraverBasis, _l1, graver_completion
from .intlinalg import IntMatrix, IntVector, solve_integer
from .objective import DirectedObjective, PiecewiseLinearTerm, SeparableObjective

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

BRUTE_FORCE_POINT_GUARD = 10**7

Box = tuple[IntVector, IntVector]
TrailStep = tuple[IntVector, Fraction, Fraction]


@dataclass(frozen=True)
class SolveOutcome:
    """Result of a solve: status, optimum (if any), and the augmentation trail."""

    status: str
    z: IntVector | None = None
    value: Fraction | None = None
    trail: tuple[TrailStep, ...] = ()
    restricted_box: Box | None = None


def _value_fn(f):
    return f.value if hasattr(f, "value") else f


def _in_box(z, lower, upper) -> bool:
    return all(l <= x <= u for x, l, u in zip(z, lower, upper))


def _gamma_max(z, g, lower, upper) -> int:
    """Largest gamma >= 0 with z + gamma*g inside the box."""
    gm = None
    for zi, gi, li, ui in zip(z, g, lower, upper):
        if gi > 0:
            cap = (ui - zi) // gi
        elif gi < 0:
            cap = (zi - li) // (-gi)
        else:
            continue
        if gm is None or cap < gm:
            gm = cap
            if gm <= 0:
                return 0
    return gm or 0


def _add_scaled(z, g, gamma):
    return tuple(a + gamma * b for a, b in zip(z, g))


def graver_best_step(
    e: IntMatrix, basis: GraverBasis, z, f, box: Box
) -> tuple[IntVector, Fraction] | None:
    """Best feasible augmentation gamma*g over the basis, or None at an optimum.

    Scans every basis element with every feasible step length and keeps
    the exact best improvement; ties break toward the smallest gamma and
    then the lexicographically smallest element.  A None return is an
    optimality certificate for separable convex objectives.
    """
    lower, upper = box
    if not _in_box(z, lower, upper):
        raise ValueError("current point violates the box")
    if basis.matrix != e:
        raise ValueError("basis does not certify this matrix")
    fval = _value_fn(f)
    fz = fval(z)
    best = None
    best_key = None
    for g in basis.elements:
        gm = _gamma_max(z, g, lower, upper)
        prev = None
        for gamma in range(1, gm + 1):
            cand = _add_scaled(z, g, gamma)
            val = fval(cand)
            if prev is not None and val >= prev:
                break  # convex along the ray: no further improvement
            prev = val
            if val < fz:
                key = (val, gamma, g)
                if best_key is None or key < best_key:
                    best_key = key
                    best = (cand, val)
    if best is None:
        return None
    vec = tuple(a - b for a, b in zip(best[0], z))
    return vec, best[1]


def directed_step(
    e: IntMatrix, basis: GraverBasis, z, h: DirectedObjective, box: Box
) -> IntVector | None:
    """A feasible basis element v with h(v) < 0, or None when no direction improves h.

    Deterministic choice: the most negative h value, ties broken by the
    lexicographically smallest element.  Callers extend the direction to
    longer multiples themselves.
    """
    lower, upper = box
    if not _in_box(z, lower, upper):
        raise ValueError("current point violates the box")
    if basis.matrix != e:
        raise ValueError("basis does not certify this matrix")
    best = None
    best_key = None
    for g in basis.elements:
        if _gamma_max(z, g, lower, upper) < 1:
            continue
        hv = h.value(g)
        if hv < 0:
            key = (hv, g)
            if best_key is None or key < best_key:
                best_key = key
                best = g
    return best


def _box_distance_objective(lower, upper) -> SeparableObjective:
    """Separable convex distance to the box: sum_i max(l_i - z_i, 0) + max(z_i - u_i, 0)."""
    per_coord = []
    for l, u in zip(lower, upper):
        if l == u:
            per_coord.append([PiecewiseLinearTerm((Fraction(l),), (Fraction(-1), Fraction(1)))])
        else:
            per_coord.append(
                [
                    PiecewiseLinearTerm(
                        (Fraction(l), Fraction(u)),
                        (Fraction(-1), Fraction(0), Fraction(1)),
                    )
                ]
            )
    return SeparableObjective(per_coord)


def _drive_into_box(z, lower, upper, step_finder):
    """Shrink box violations to zero by augmentation over widened working bounds.

    ``step_finder(z, lt, ut, aux)`` must return a strictly
    aux-improving feasible step vector or None; None certifies that the
    box distance is already minimal, i.e. the true box is unreachable.
    Components already in range have their working bounds tightened to
    the true bounds so they never escape again.
    """
    aux = _box_distance_objective(lower, upper)
    lt = [min(l, x) for l, x in zip(lower, z)]
    ut = [max(u, x) for u, x in zip(upper, z)]
    z = tuple(z)
    while True:
        for i, x in enumerate(z):
            if lower[i] <= x <= upper[i]:
                lt[i] = lower[i]
                ut[i] = upper[i]
        if aux.value(z) == 0:
            return z
        v = step_finder(z, tuple(lt), tuple(ut), aux)
        if v is None:
            return None
        z = tuple(a + b for a, b in zip(z, v))


def _basis_step_finder(e, basis):
    """Phase step over a full Graver basis: directed first, exact best as fallback.

    The unit-slope directed objective underestimates multi-unit moves
    that cross box breakpoints, so a directed candidate is verified
    against the exact distance and the Graver-best scan covers the
    rest.  Absence of a directed candidate is already a certificate:
    any exactly improving element has negative h.
    """

    def find(z, lt, ut, aux):
        a0 = aux.value(z)
        c = tuple(aux.coordinate_value(i, z[i] + 1) - aux.coordinate_value(i, z[i]) for i in range(len(z)))
        d = tuple(aux.coordinate_value(i, z[i] - 1) - aux.coordinate_value(i, z[i]) for i in range(len(z)))
        g = directed_step(e, basis, z, DirectedObjective(c, d), (lt, ut))
        if g is not None:
            gm = _gamma_max(z, g, lt, ut)
            best_gamma, best_val, prev = None, None, None
            for gamma in range(1, gm + 1):
                val = aux.value(_add_scaled(z, g, gamma))
                if prev is not None and val >= prev:
                    break
                prev = val
                if val < a0 and (best_val is None or val < best_val):
                    best_gamma, best_val = gamma, val
            if best_gamma is not None:
                return tuple(best_gamma * x for x in g)
        step = graver_best_step(e, basis, z, aux, (lt, ut))
        return None if step is None else step[0]

    return find


def phase_one(
    instance: FourBlockInstance, *, box: Box | None = None, basis: GraverBasis | None = None
) -> IntVector | None:
    """A feasible point of the instance (within ``box``), or None when none exists.

    First solves the equality system over the integers alone; failure
    there is already an infeasibility certificate.  The solution is
    then driven into the box by augmentation against the box-distance
    objective over temporarily widened bounds.  A positive distance at
    an augmentation optimum certifies infeasibility.
    """
    lower, upper = box if box is not None else instance.box
    e = instance.matrix
    z = solve_integer(e, instance.rhs)
    if z is None:
        return None
    if basis is None:
        basis = graver_completion(e)
    return _drive_into_box(z, lower, upper, _basis_step_finder(e, basis))


# --- structured steps --------------------------------------------------------


def _copy_residual(instance: FourBlockInstance, x_new) -> IntVector:
    """Right-hand side for the copy variables once the first block is fixed."""
    d_c, d_a = instance.d_c, instance.d_a
    res = list(instance.rhs[:d_c])
    cx = instance.c.mul_vec(x_new)
    for i in range(d_c):
        res[i] -= cx[i]
    bx = instance.b.mul_vec(x_new)
    for k in range(instance.n):
        base = d_c + k * d_a
        for i in range(d_a):
            res.append(instance.rhs[base + i] - bx[i])
    return tuple(res)


def _solve_fixed_first_block(
    instance: FourBlockInstance,
    x_new: IntVector,
    box: Box,
    nfold_matrix: IntMatrix,
    nfold_basis: GraverBasis,
    f,
) -> tuple[IntVector, Fraction] | None:
    """Optimal copy variables for a fixed first block, or None if that fiber is empty.

    This is the N-fold sub-solve: integer point, drive into the box,
    then Graver-best augmentation over the copy columns.  The result
    depends only on ``x_new``, so callers may memoize it.
    """
    n_b = instance.n_b
    lower, upper = box
    ly, uy = lower[n_b:], upper[n_b:]
    y = solve_integer(nfold_matrix, _copy_residual(instance, x_new))
    if y is None:
        return None
    y = _drive_into_box(y, ly, uy, _basis_step_finder(nfold_matrix, nfold_basis))
    if y is None:
        return None
    fval = _value_fn(f)

    def fy(yvec):
        return fval(x_new + yvec)

    while True:
        step = graver_best_step(nfold_matrix, nfold_basis, y, fy, (ly, uy))
        if step is None:
            break
        y = tuple(a + b for a, b in zip(y, step[0]))
    return y, fy(y)


def structured_block_step(
    instance: FourBlockInstance,
    z,
    f,
    box: Box,
    first_block_l1_bound: int,
    *,
    nfold_basis: GraverBasis | None = None,
    _memo: dict | None = None,
) -> tuple[IntVector, Fraction] | None:
    """One augmentation step exploiting the block structure, or None at an optimum.

    Every first-block move with 1-norm at most the supplied bound is a
    candidate; for the zero move the copy variables take a Graver-best
    step over the N-fold part, otherwise each step length is tried and
    the copy variables are re-optimized by the N-fold sub-solve.  The
    winner is at least as good as the best Graver step of the full
    matrix, so a None return certifies optimality.
    """
    lower, upper = box
    if not _in_box(z, lower, upper):
        raise ValueError("current point violates the box")
    if any(a != b for a, b in zip(instance.matrix.mul_vec(z), instance.rhs)):
        raise ValueError("current point violates the equality system")
    nfold_matrix = nfold_part(instance)
    if nfold_basis is None:
        nfold_basis = graver_completion(nfold_matrix)
    if nfold_basis.matrix != nfold_matrix:
        raise ValueError("copy basis does not certify the N-fold part")

    n_b = instance.n_b
    fval = _value_fn(f)
    fz = fval(z)
    best = None
    best_key = None

    def consider(vec, val, gamma):
        nonlocal best, best_key
        key = (val, gamma, vec)
        if best_key is None or key < best_key:
            best_key = key
            best = (vec, val)

    # zero first-block move: single Graver-best step over the copy columns
    zeros = (0,) * n_b
    for g in nfold_basis.elements:
        emb = zeros + g
        gm = _gamma_max(z, emb, lower, upper)
        prev = None
        for gamma in range(1, gm + 1):
            cand = _add_scaled(z, emb, gamma)
            val = fval(cand)
            if prev is not None and val >= prev:
                break
            prev = val
            if val < fz:
                consider(tuple(gamma * x for x in emb), val, gamma)

    if n_b:
        x0 = z[:n_b]
        y0 = z[n_b:]
        lx, ux = lower[:n_b], upper[:n_b]
        memo = _memo if _memo is not None else {}
        ranges = [range(lx[i] - x0[i], ux[i] - x0[i] + 1) for i in range(n_b)]

        def rec(i, partial, l1):
            if i == n_b:
                if any(partial):
                    yield tuple(partial)
                return
            for step in ranges[i]:
                if l1 + abs(step) > first_block_l1_bound:
                    continue
                partial.append(step)
                yield from rec(i + 1, partial, l1 + abs(step))
                partial.pop()

        for xbar in rec(0, [], 0):
            assert _l1(xbar) <= first_block_l1_bound
            ghat = _gamma_max(x0, xbar, lx, ux)
            for gamma in range(1, ghat + 1):
                x_new = _add_scaled(x0, xbar, gamma)
                if x_new not in memo:
                    memo[x_new] = _solve_fixed_first_block(
                        instance, x_new, box, nfold_matrix, nfold_basis, f
                    )
                sol = memo[x_new]
                if sol is None:
                    continue
                y_star, val = sol
                if val < fz:
                    vec = tuple(a - b for a, b in zip(x_new + y_star, z))
                    consider(vec, val, gamma)

    return best


def optimize_restricted(
    instance: FourBlockInstance,
    box: Box,
    z0,
    *,
    use_full_matrix_steps: bool = False,
    nfold_basis: GraverBasis | None = None,
    full_basis: GraverBasis | None = None,
    first_block_l1_bound: int | None = None,
) -> SolveOutcome:
    """Augment a feasible point to optimality within the box.

    The default path iterates structured block steps; the full-matrix
    Graver-best path is selectable for cross-checking.  The trail
    records every applied step with the objective before and after;
    values decrease strictly.
    """
    lower, upper = box
    z = tuple(int(x) for x in z0)
    if not _in_box(z, lower, upper):
        raise ValueError("starting point violates the box")
    if any(a != b for a, b in zip(instance.matrix.mul_vec(z), instance.rhs)):
        raise ValueError("starting point violates the equality system")
    f = instance.objective
    if use_full_matrix_steps:
        if full_basis is None:
            full_basis = graver_completion(instance.matrix)
    else:
        if nfold_basis is None:
            nfold_basis = graver_completion(nfold_part(instance))
        if first_block_l1_bound is None:
            first_block_l1_bound = _default_first_block_bound(instance)
    memo: dict = {}
    trail: list[TrailStep] = []
    fz = f.value(z)
    while True:
        if use_full_matrix_steps:
            step = graver_best_step(instance.matrix, full_basis, z, f, box)
        else:
            step = structured_block_step(
                instance, z, f, box, first_block_l1_bound,
                nfold_basis=nfold_basis, _memo=memo,
            )
        if step is None:
            break
        vec, val = step
        assert val < fz
        trail.append((vec, fz, val))
        z = tuple(a + b for a, b in zip(z, vec))
        fz = val
    return SolveOutcome(OPTIMAL, z=z, value=fz, trail=tuple(trail), restricted_box=box)


def _formula_norm_bound(instance: FourBlockInstance) -> int:
    """1-norm bound on the full Graver basis from the block-structure formulas.

    Constants are measured from the stochastic part's Graver basis at
    this very N; the primary bound alone applies when there are no
    coupling rows (the alternative formula vanishes there).
    """
    stoch = graver_completion(stochastic_part(instance))
    g, xi, eta = measure_stochastic_constants(stoch, instance.n_b, instance.n_a, instance.n)
    big_m = max(1, instance.c.max_abs_entry(), instance.d.max_abs_entry())
    primary = fourblock_bound_primary(
        instance.n_a, instance.n_b, instance.d_c, big_m, g, instance.n
    )
    if instance.d_c == 0:
        return primary
    alt = fourblock_bound_alternative(
        instance.n_a, instance.n_b, instance.d_c, big_m, g, xi, eta, instance.n
    )
    return min(primary, alt)


def _default_first_block_bound(instance: FourBlockInstance) -> int:
    try:
        basis = graver_completion(instance.matrix)
    except SizeGuardExceeded:
        return _formula_norm_bound(instance)
    n_b = instance.n_b
    return max((_l1(v[:n_b]) for v in basis.elements), default=0)


def solve(
    instance: FourBlockInstance,
    epsilon=Fraction(1, 2),
    *,
    use_exact_graver: bool = True,
) -> SolveOutcome:
    """Full pipeline: continuous point, proximity box, feasibility, augmentation.

    The box radius uses the exact Graver sup-norm maximum whenever the
    basis of the assembled matrix is computable within guards and
    ``use_exact_graver`` is set; otherwise the structural norm bounds
    with constants measured at this N.  Unbounded cannot occur under
    finite boxes; the branch mirrors the outcome type of the
    continuous oracle.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    cont = approx_continuous_oracle(instance, epsilon)
    if cont.status != "feasible":
        return SolveOutcome(INFEASIBLE if cont.status == "infeasible" else UNBOUNDED)

    e = instance.matrix
    full_basis = None
    try:
        full_basis = graver_completion(e)
    except SizeGuardExceeded:
        pass
    nfold_basis = graver_completion(nfold_part(instance))

    if full_basis is not None and use_exact_graver:
        linf_bound = full_basis.max_linf
        xbar_bound = max((_l1(v[: instance.n_b]) for v in full_basis.elements), default=0)
    else:
        ell = _formula_norm_bound(instance)
        linf_bound = ell
        xbar_bound = ell

    n = instance.dimension
    radius = n * linf_bound + epsilon
    lower = tuple(
        max(l, math.floor(r - radius)) for l, r in zip(instance.lower, cont.point)
    )
    upper = tuple(
        min(u, math.ceil(r + radius)) for u, r in zip(instance.upper, cont.point)
    )
    box = (lower, upper)

    z0 = solve_integer(e, instance.rhs)
    if z0 is None:
        return SolveOutcome(INFEASIBLE, restricted_box=box)
    if full_basis is not None:
        z0 = _drive_into_box(z0, lower, upper, _basis_step_finder(e, full_basis))
    else:
        z0 = _drive_into_box(
            z0, lower, upper, _structured_step_finder(instance, nfold_basis, xbar_bound)
        )
    if z0 is None:
        return SolveOutcome(INFEASIBLE, restricted_box=box)

    return optimize_restricted(
        instance,
        box,
        z0,
        nfold_basis=nfold_basis,
        first_block_l1_bound=xbar_bound,
        full_basis=full_basis,
    )


def _structured_step_finder(instance, nfold_basis, first_block_bound):
    """Phase step via structured block steps when the full basis is unavailable."""

    def find(z, lt, ut, aux):
        working = FourBlockInstance(
            a=instance.a, b=instance.b, c=instance.c, d=instance.d, n=instance.n,
            lower=lt, upper=ut, rhs=instance.rhs, objective=instance.objective,
        )
        step = structured_block_step(
            working, z, aux, (lt, ut), first_block_bound, nfold_basis=nfold_basis
        )
        return None if step is None else step[0]

    return find


def brute_force_solve(instance: FourBlockInstance) -> SolveOutcome:
    """Exhaustive enumeration over the box lattice; the acceptance oracle.

    Walks coordinates depth-first and checks each equality row as soon
    as all its columns are assigned.  Guarded by the nominal lattice
    size.  Among ties the lexicographically smallest optimum is kept.
    """
    lower, upper = instance.lower, instance.upper
    size = 1
    for l, u in zip(lower, upper):
        size *= u - l + 1
        if size > BRUTE_FORCE_POINT_GUARD:
            raise SizeGuardExceeded(
                f"box lattice exceeds {BRUTE_FORCE_POINT_GUARD} points"
            )
    e = instance.matrix
    rhs = instance.rhs
    f = instance.objective
    n = e.cols
    rows = e.entries
    checks_at: list[list[int]] = [[] for _ in range(n + 1)]
    for ridx, row in enumerate(rows):
        nz = [j for j, x in enumerate(row) if x]
        checks_at[(nz[-1] + 1) if nz else 0].append(ridx)
    tables = [
        [f.coordinate_value(i, v) for v in range(lower[i], upper[i] + 1)]
        for i in range(n)
    ]

    best_val: Fraction | None = None
    best_z: tuple | None = None
    z = [0] * n
    sums = [0] * e.rows

    def rec(j, acc):
        nonlocal best_val, best_z
        for ridx in checks_at[j]:
            if sums[ridx] != rhs[ridx]:
                return
        if j == n:
            if best_val is None or acc < best_val:
                best_val = acc
                best_z = tuple(z)
            return
        col = [rows[i][j] for i in range(e.rows)]
        nz_rows = [i for i in range(e.rows) if col[i]]
        for v in range(lower[j], upper[j] + 1):
            z[j] = v
            for i in nz_rows:
                sums[i] += col[i] * v
            rec(j + 1, acc + tables[j][v - lower[j]])
            for i in nz_rows:
                sums[i] -= col[i] * v

    rec(0, Fraction(0))
    if best_z is None:
        return SolveOutcome(INFEASIBLE)
    return SolveOutcome(OPTIMAL, z=best_z, value=best_val)
