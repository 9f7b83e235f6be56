"""Shared test utilities: independent oracles and random generators.

The oracles here deliberately use the dumbest possible method (full box
scans, cofactor determinants, greedy arguments) so library results are
checked against code that shares nothing with the implementation paths.
"""

import itertools
import random
from fractions import Fraction

from graverip.fourblock import FourBlockInstance
from graverip.intlinalg import IntMatrix
from graverip.objective import AbsDevTerm, LinearTerm, QuadraticTerm, SeparableObjective


def cofactor_det(rows):
    """Recursive cofactor determinant; independent of the library's Bareiss code."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [[row[k] for k in range(n) if k != j] for row in rows[1:]]
        total += (-1) ** j * rows[0][j] * cofactor_det(minor)
    return total


def conformal_leq(g, v):
    """g lies in v's orthant with |g_i| <= |v_i| everywhere (test-local copy)."""
    return all((a == 0) or (a * b > 0 and abs(a) <= abs(b)) for a, b in zip(g, v))


def naive_graver(e, radius):
    """Plain box-scan Graver oracle: enumerate kernel points, drop splittable ones."""
    points = [
        v
        for v in itertools.product(range(-radius, radius + 1), repeat=e.cols)
        if any(v) and not any(e.mul_vec(v))
    ]
    out = []
    for v in points:
        if not any(w != v and conformal_leq(w, v) for w in points):
            out.append(v)
    return tuple(sorted(out))


def naive_kernel_points(e, radius):
    return [
        v
        for v in itertools.product(range(-radius, radius + 1), repeat=e.cols)
        if any(v) and not any(e.mul_vec(v))
    ]


def random_nonzero_matrix(rng, rows, cols, lo=-3, hi=3):
    while True:
        m = IntMatrix([[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)])
        if m.max_abs_entry() > 0:
            return m


def random_objective(rng, dim, kinds=("quadratic", "absdev")):
    per_coord = []
    for _ in range(dim):
        kind = rng.choice(kinds)
        if kind == "quadratic":
            per_coord.append(
                [QuadraticTerm(Fraction(rng.randint(1, 3), rng.choice((1, 2))),
                               Fraction(rng.randint(-2, 2), rng.choice((1, 2))))]
            )
        elif kind == "absdev":
            per_coord.append(
                [AbsDevTerm(Fraction(rng.randint(1, 3)), rng.randint(-2, 2))]
            )
        else:
            per_coord.append([LinearTerm(Fraction(rng.randint(-2, 2)))])
    return SeparableObjective(per_coord)


# (N, n_a, n_b) combos keeping the dimension at most 7
_SHAPES = [
    (1, 1, 1), (1, 1, 2), (1, 2, 1), (1, 2, 2),
    (2, 1, 1), (2, 1, 2), (2, 2, 1), (2, 2, 2),
    (3, 1, 1), (3, 1, 2), (3, 2, 0), (3, 2, 1),
]


def random_instance(rng, *, kinds=("quadratic", "absdev")):
    """Random feasible instance within the acceptance guards.

    Blocks have entries in [-2, 2] with d_A, d_C <= 1, the box sits
    inside [-4, 4] with widths 2..4, and the right-hand side comes from
    a random point of the box so the instance is feasible by
    construction.
    """
    n, n_a, n_b = rng.choice(_SHAPES)
    d_a = rng.randint(0, 1)
    d_c = rng.randint(0 if d_a else 1, 1)

    def block(r, c):
        return IntMatrix([[rng.randint(-2, 2) for _ in range(c)] for _ in range(r)], cols=c)

    a = block(d_a, n_a)
    b = block(d_a, n_b)
    c = block(d_c, n_b)
    d = block(d_c, n_a)
    dim = n_b + n * n_a
    lower = []
    upper = []
    for _ in range(dim):
        lo = rng.randint(-4, 0)
        width = rng.randint(2, 4)
        lower.append(lo)
        upper.append(min(4, lo + width))
    seed_point = tuple(rng.randint(l, u) for l, u in zip(lower, upper))
    from graverip.fourblock import assemble_fourblock

    e = assemble_fourblock(a, b, c, d, n)
    rhs = e.mul_vec(seed_point)
    return FourBlockInstance(
        a=a, b=b, c=c, d=d, n=n,
        lower=tuple(lower), upper=tuple(upper), rhs=rhs,
        objective=random_objective(rng, dim, kinds),
    )


def infeasible_instances():
    """Hand-built infeasible instances: lattice obstructions and box obstructions."""
    from graverip.fourblock import assemble_fourblock  # noqa: F401

    empty_c0 = IntMatrix([], cols=0)

    out = []
    # gcd obstruction: 2 z = 1
    out.append(
        FourBlockInstance(
            a=IntMatrix([[2]]), b=IntMatrix([[]], cols=0), c=empty_c0,
            d=IntMatrix([], cols=1), n=1, lower=(-3,), upper=(3,), rhs=(1,),
            objective=SeparableObjective.zeros(1),
        )
    )
    # box obstruction: z1 + z2 = 10 over [0, 3]^2
    out.append(
        FourBlockInstance(
            a=IntMatrix([[1, 1]]), b=IntMatrix([[]], cols=0), c=empty_c0,
            d=IntMatrix([], cols=2), n=1, lower=(0, 0), upper=(3, 3), rhs=(10,),
            objective=SeparableObjective.zeros(2),
        )
    )
    # contradictory rows: z = 0 and z = 1
    out.append(
        FourBlockInstance(
            a=IntMatrix([[1], [1]]), b=IntMatrix([[], []], cols=0), c=empty_c0,
            d=IntMatrix([], cols=1), n=1, lower=(-3,), upper=(3,), rhs=(0, 1),
            objective=SeparableObjective.zeros(1),
        )
    )
    # parity obstruction inside a full 4-block: all blocks even, odd rhs
    out.append(
        FourBlockInstance(
            a=IntMatrix([[2]]), b=IntMatrix([[2]]), c=IntMatrix([[2]]), d=IntMatrix([[2]]),
            n=2, lower=(-2, -2, -2), upper=(2, 2, 2), rhs=(1, 0, 0),
            objective=SeparableObjective.zeros(3),
        )
    )
    # per-copy sums out of reach: y-block sums of 9 over [0, 2] boxes
    out.append(
        FourBlockInstance(
            a=IntMatrix([[1, 1]]), b=IntMatrix([[1]]), c=IntMatrix([], cols=1),
            d=IntMatrix([], cols=2), n=2, lower=(0,) * 5, upper=(2,) * 5, rhs=(9, 9),
            objective=SeparableObjective.zeros(5),
        )
    )
    return out


def naive_optimum(instance):
    """Plain product-scan optimum (value, point) or None; no pruning at all."""
    e = instance.matrix
    best = None
    for z in itertools.product(
        *(range(l, u + 1) for l, u in zip(instance.lower, instance.upper))
    ):
        if e.mul_vec(z) != instance.rhs:
            continue
        val = instance.objective.value(z)
        if best is None or val < best[0]:
            best = (val, z)
    return best


def feasible_points(instance, limit=None):
    out = []
    e = instance.matrix
    for z in itertools.product(
        *(range(l, u + 1) for l, u in zip(instance.lower, instance.upper))
    ):
        if e.mul_vec(z) == instance.rhs:
            out.append(z)
            if limit is not None and len(out) >= limit:
                break
    return out
