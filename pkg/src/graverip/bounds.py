"""Norm bounds for Graver bases.

Every bound here is an upper bound on the maximum 1-norm over the
Graver basis of the matrix in question: the one-row (primitive
partition identity) bound, the subdeterminant bounds, the recursive
bound for stacking extra rows on a matrix, and the two bounds for
N-fold 4-block matrices.  All formulas are evaluated in exact integer
arithmetic; square roots are rounded up so a bound can never
undershoot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graver import GraverBasis
from .intlinalg import IntMatrix, matrix_rank, max_abs_subdeterminant


@dataclass(frozen=True, eq=True)
class BoundReport:
    """A named bound value together with the exact inputs that produced it."""

    bound_name: str
    value: int
    inputs: dict

    def to_json_obj(self) -> dict:
        return {"name": self.bound_name, "value": self.value, "inputs": dict(self.inputs)}


def _ceil_sqrt_times(k: int, m: int) -> int:
    """ceil(k * sqrt(m)) for nonnegative integers, computed exactly."""
    if k == 0 or m == 0:
        return 0
    s = math.isqrt(k * k * m)
    return s if s * s == k * k * m else s + 1


def _hadamard_power(m: int, big_m: int) -> int:
    """ceil((sqrt(m) * M)^m) via integer square roots."""
    if m == 0:
        return 1
    base = big_m**m * m ** (m // 2)
    if m % 2 == 0:
        return base
    return _ceil_sqrt_times(base, m)


def ppi_bound(big_m: int) -> int:
    """1-norm bound 2M - 1 for Graver elements of a one-row matrix.

    M is an upper bound on the absolute values of the entries.  Note
    that for M == 1 a repeated column already yields the element
    (1, -1) of 1-norm 2, so callers wanting a bound that also covers
    that case should use max(2, ppi_bound(M)).
    """
    if big_m < 1:
        raise ValueError("entry bound must be >= 1")
    return 2 * big_m - 1


def determinant_bounds(e: IntMatrix, exact: bool = True) -> list[BoundReport]:
    """Subdeterminant-based 1-norm bounds (n-r)(r+1)*Delta for G(E).

    Returns up to three reports: the exact-Delta variant (when
    ``exact`` and the matrix is small enough for minor enumeration),
    the Hadamard variant with Delta replaced by ceil((sqrt(m)M)^m),
    and the aggregated variant that counts only distinct columns.
    """
    m, n = e.rows, e.cols
    r = matrix_rank(e)
    big_m = e.max_abs_entry()
    d = len({e.col(j) for j in range(n)})
    reports = []
    if exact:
        delta, rank2 = max_abs_subdeterminant(e)
        assert rank2 == r
        reports.append(
            BoundReport(
                "determinant_exact",
                (n - r) * (r + 1) * delta,
                {"n": n, "m": m, "r": r, "delta": delta},
            )
        )
    had = _hadamard_power(m, big_m)
    reports.append(
        BoundReport(
            "determinant_hadamard",
            (n - r) * (r + 1) * had,
            {"n": n, "m": m, "r": r, "M": big_m, "hadamard": had},
        )
    )
    reports.append(
        BoundReport(
            "determinant_aggregated",
            (d - r) * (r + 1) * had,
            {"n": n, "m": m, "r": r, "M": big_m, "d": d, "hadamard": had},
        )
    )
    return reports


def stacked_bound(l_max_l1: int, n: int, big_m: int, m: int) -> int:
    """1-norm bound for G(E) when E stacks m extra bounded rows on top of L.

    With F the m x n block of entries bounded by M in absolute value
    and E = (F over L), the bound is
    (2nM)^(2^m - 1) * (max 1-norm of G(L))^(2^m).
    """
    if m < 0:
        raise ValueError("row count must be >= 0")
    if m == 0:
        return l_max_l1
    if l_max_l1 < 1 or n < 1 or big_m < 1:
        raise ValueError("L bound, column count, and entry bound must be >= 1")
    return (2 * n * big_m) ** (2**m - 1) * l_max_l1 ** (2**m)


def _validate_fourblock_inputs(n_a, n_b, d_c, big_m, g, n_copies):
    if n_a < 1 or big_m < 1 or n_copies < 1:
        raise ValueError("n_a, M, and N must be >= 1")
    if n_b < 0 or d_c < 0 or g < 0:
        raise ValueError("n_b, d_c, and g must be >= 0")


def fourblock_bound_primary(
    n_a: int, n_b: int, d_c: int, big_m: int, g: int, n_copies: int
) -> int:
    """Stacked-recursion 1-norm bound for the Graver basis of an N-fold 4-block matrix.

    Inputs: block column counts n_a and n_b, the row count d_c of the
    coupling blocks, a bound M on their entries, the measured sup-norm
    constant g of the stochastic part, and the copy count N.  For
    d_c == 0 this collapses to the stochastic bound (n_b + N*n_a) * g.
    """
    _validate_fourblock_inputs(n_a, n_b, d_c, big_m, g, n_copies)
    t = n_b + n_copies * n_a
    return (2 * t * big_m) ** (2**d_c - 1) * (t * g) ** (2**d_c)


def fourblock_bound_alternative(
    n_a: int,
    n_b: int,
    d_c: int,
    big_m: int,
    g: int,
    xi: int,
    eta: int,
    n_copies: int,
) -> int:
    """Column-counting 1-norm bound for the Graver basis of an N-fold 4-block matrix.

    xi bounds the number of distinct first-block parts and eta the
    number of distinct per-copy parts appearing in the stochastic
    Graver basis.  The d_c factor makes the formula vanish for
    d_c == 0; callers must use the stochastic bound in that case.
    """
    _validate_fourblock_inputs(n_a, n_b, d_c, big_m, g, n_copies)
    if xi < 0 or eta < 0:
        raise ValueError("xi and eta must be >= 0")
    t = n_b + n_copies * n_a
    return (
        xi
        * (n_copies + eta) ** eta
        * d_c
        * _hadamard_power(d_c, t * big_m)
        * t
        * g
    )


def measure_stochastic_constants(
    basis: GraverBasis, n_b: int, n_a: int, n_copies: int
) -> tuple[int, int, int]:
    """Measure (g, xi, eta) from a computed stochastic-part Graver basis.

    g is the maximum sup-norm, xi the number of distinct first-block
    parts, and eta the largest number of distinct per-copy blocks seen
    for a single first-block part.  The values certify only the N at
    which the basis was computed.
    """
    if n_b + n_copies * n_a != basis.matrix.cols:
        raise ValueError("basis width disagrees with n_b + N*n_a")
    per_x: dict[tuple, set] = {}
    for v in basis.elements:
        x = v[:n_b]
        blocks = per_x.setdefault(x, set())
        for i in range(n_copies):
            blocks.add(v[n_b + i * n_a : n_b + (i + 1) * n_a])
    xi = len(per_x)
    eta = max((len(s) for s in per_x.values()), default=0)
    return basis.max_linf, xi, eta
