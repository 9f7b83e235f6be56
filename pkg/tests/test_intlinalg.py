import random

import pytest

from graverip.errors import SizeGuardExceeded
from graverip.intlinalg import (
    IntMatrix,
    hermite_normal_form,
    kernel_lattice_basis,
    matrix_rank,
    max_abs_subdeterminant,
    solve_integer,
)

from helpers import cofactor_det, naive_kernel_points, random_nonzero_matrix


def staircase_checks(m, h):
    """Structural HNF checks: pivot staircase, positive pivots, reduced row entries."""
    pivot_rows = []
    ncols = h.cols
    zero_seen = False
    for j in range(ncols):
        col = h.col(j)
        nz = [i for i, x in enumerate(col) if x]
        if not nz:
            zero_seen = True
            continue
        assert not zero_seen, "nonzero column after a zero column"
        piv_row = nz[0]
        piv = col[piv_row]
        assert piv > 0
        if pivot_rows:
            assert piv_row > pivot_rows[-1]
        pivot_rows.append(piv_row)
        for k in range(j):
            assert 0 <= h[piv_row, k] < piv


class TestHermiteNormalForm:
    def test_single_row_gcd(self):
        m = IntMatrix([[2, 3]])
        h, u = hermite_normal_form(m)
        assert h.entries == ((1, 0),)
        assert 2 * u[0, 0] + 3 * u[1, 0] == 1
        assert m.mul_mat(u) == h

    def test_identity(self):
        m = IntMatrix.identity(2)
        h, u = hermite_normal_form(m)
        assert h == IntMatrix.identity(2)
        assert u == IntMatrix.identity(2)

    def test_upper_triangular_example(self):
        m = IntMatrix([[1, 1], [0, 2]])
        h, u = hermite_normal_form(m)
        assert h.entries == ((1, 0), (0, 2))
        assert m.mul_mat(u) == h
        assert abs(cofactor_det([list(r) for r in u.entries])) == 1

    @pytest.mark.parametrize("seed", range(40))
    def test_random_properties(self, seed):
        rng = random.Random(1000 + seed)
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        m = IntMatrix([[rng.randint(-5, 5) for _ in range(cols)] for _ in range(rows)])
        h, u = hermite_normal_form(m)
        assert m.mul_mat(u) == h
        assert abs(cofactor_det([list(r) for r in u.entries])) == 1
        staircase_checks(m, h)

    def test_zero_row_matrix(self):
        m = IntMatrix([], cols=3)
        h, u = hermite_normal_form(m)
        assert h.rows == 0 and h.cols == 3
        assert u == IntMatrix.identity(3)


def lattices_equal(e, e_augmented):
    """Column lattices agree iff the nonzero HNF staircases agree."""
    h1, _ = hermite_normal_form(e)
    h2, _ = hermite_normal_form(e_augmented)

    def staircase(h):
        cols = [h.col(j) for j in range(h.cols)]
        return tuple(c for c in cols if any(c))

    return staircase(h1) == staircase(h2)


class TestSolveInteger:
    def test_gcd_combination(self):
        z = solve_integer(IntMatrix([[2, 3]]), (1,))
        assert z is not None
        assert 2 * z[0] + 3 * z[1] == 1

    def test_divisibility_failure(self):
        assert solve_integer(IntMatrix([[2]]), (1,)) is None

    def test_identity(self):
        assert solve_integer(IntMatrix.identity(3), (4, 5, 6)) == (4, 5, 6)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            solve_integer(IntMatrix([[1, 2]]), (1, 2))

    @pytest.mark.parametrize("seed", range(40))
    def test_random_solvable_and_certified_absent(self, seed):
        rng = random.Random(2000 + seed)
        m = random_nonzero_matrix(rng, rng.randint(1, 3), rng.randint(1, 4), -4, 4)
        z_seed = tuple(rng.randint(-3, 3) for _ in range(m.cols))
        b = m.mul_vec(z_seed)
        z = solve_integer(m, b)
        assert z is not None
        assert m.mul_vec(z) == b
        # random rhs: when no solution is returned, the augmented lattice must differ
        b2 = tuple(rng.randint(-6, 6) for _ in range(m.rows))
        z2 = solve_integer(m, b2)
        augmented = IntMatrix(
            [list(row) + [b2[i]] for i, row in enumerate(m.entries)], cols=m.cols + 1
        )
        if z2 is None:
            assert not lattices_equal(m, augmented)
        else:
            assert m.mul_vec(z2) == b2
            assert lattices_equal(m, augmented)


class TestKernelLatticeBasis:
    def test_examples(self):
        assert kernel_lattice_basis(IntMatrix([[1, 1]])) == [(1, -1)]
        assert kernel_lattice_basis(IntMatrix([[1, 2]])) == [(2, -1)]
        assert kernel_lattice_basis(IntMatrix.identity(2)) == []

    def test_sign_convention(self):
        for vecs in (
            kernel_lattice_basis(IntMatrix([[1, 1, 1]])),
            kernel_lattice_basis(IntMatrix([[0, 3, -2]])),
        ):
            for v in vecs:
                first = next(x for x in v if x)
                assert first > 0

    @pytest.mark.parametrize("seed", range(30))
    def test_membership_and_saturation(self, seed):
        rng = random.Random(3000 + seed)
        m = random_nonzero_matrix(rng, rng.randint(1, 2), rng.randint(2, 4), -3, 3)
        basis = kernel_lattice_basis(m)
        for v in basis:
            assert not any(m.mul_vec(v))
        if not basis:
            assert matrix_rank(m) == m.cols
            return
        # every small brute-force kernel vector is an integer combination
        k_mat = IntMatrix([[vec[i] for vec in basis] for i in range(m.cols)], cols=len(basis))
        for v in naive_kernel_points(m, 2):
            coeffs = solve_integer(k_mat, v)
            assert coeffs is not None, (m.entries, v)


class TestMaxAbsSubdeterminant:
    def test_examples(self):
        assert max_abs_subdeterminant(IntMatrix.identity(2)) == (1, 2)
        assert max_abs_subdeterminant(IntMatrix([[1, 2]])) == (2, 1)
        assert max_abs_subdeterminant(IntMatrix([[1, 1], [0, 2]])) == (2, 2)

    def test_guard(self):
        with pytest.raises(SizeGuardExceeded):
            max_abs_subdeterminant(IntMatrix([[1] * 7 for _ in range(6)]))

    @pytest.mark.parametrize("seed", range(30))
    def test_hadamard_and_rank(self, seed):
        rng = random.Random(4000 + seed)
        rows, cols = rng.randint(1, 3), rng.randint(1, 4)
        m = random_nonzero_matrix(rng, rows, cols, -4, 4)
        delta, rank = max_abs_subdeterminant(m)
        assert rank == matrix_rank(m)
        big_m = m.max_abs_entry()
        # delta <= (sqrt(m) M)^m, squared to stay in integers
        assert delta**2 <= rows**rows * big_m ** (2 * rows)
        # spot-check one explicit minor against the cofactor oracle
        k = rank
        if k:
            sub = [list(r[:k]) for r in m.entries[:k]]
            assert abs(cofactor_det(sub)) <= delta
