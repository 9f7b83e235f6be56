import itertools
import random

import pytest

from graverip.errors import DecompositionFailed, NotInKernel, SizeGuardExceeded
from graverip.graver import (
    GraverBasis,
    conformal_decompose,
    expand_repeated_columns,
    graver_brute_force,
    graver_completion,
)
from graverip.intlinalg import IntMatrix

from helpers import conformal_leq, naive_graver, random_nonzero_matrix


class TestCompletion:
    def test_one_row_examples(self):
        assert graver_completion(IntMatrix([[1, 2]])).elements == ((-2, 1), (2, -1))
        g = graver_completion(IntMatrix([[1, 1, 1]]))
        assert g.elements == tuple(
            sorted(
                [(1, -1, 0), (-1, 1, 0), (1, 0, -1), (-1, 0, 1), (0, 1, -1), (0, -1, 1)]
            )
        )
        assert (g.max_l1, g.max_linf) == (2, 1)

    def test_trivial_kernel(self):
        assert graver_completion(IntMatrix.identity(2)).elements == ()

    def test_guard(self):
        with pytest.raises(SizeGuardExceeded):
            graver_completion(IntMatrix([[1] * 13]))

    @pytest.mark.parametrize("seed", range(25))
    def test_matches_naive_oracle(self, seed):
        rng = random.Random(5000 + seed)
        m = random_nonzero_matrix(rng, rng.randint(1, 2), rng.randint(2, 4), -3, 3)
        got = graver_completion(m)
        # radius covering the computed basis certifies it against the plain scan
        radius = max(1, got.max_linf)
        assert got.elements == naive_graver(m, radius)

    def test_symmetry_and_order(self):
        g = graver_completion(IntMatrix([[2, -3, 1]]))
        elems = set(g.elements)
        assert all(tuple(-x for x in v) in elems for v in elems)
        assert list(g.elements) == sorted(g.elements)

    def test_zero_row_matrix_units(self):
        g = graver_completion(IntMatrix([], cols=3))
        assert g.elements == tuple(
            sorted(
                [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
            )
        )


class TestBruteForce:
    def test_examples(self):
        assert graver_brute_force(IntMatrix([[1, 1]]), 3).elements == ((-1, 1), (1, -1))
        g = graver_brute_force(IntMatrix([[1, 2, 1]]), 4)
        expected = set()
        for v in [(1, 0, -1), (0, 1, -2), (2, -1, 0), (1, -1, 1)]:
            expected.add(v)
            expected.add(tuple(-x for x in v))
        assert set(g.elements) == expected
        assert graver_brute_force(IntMatrix.identity(3), 2).elements == ()

    def test_radius_validation(self):
        with pytest.raises(ValueError):
            graver_brute_force(IntMatrix([[1, 1]]), 0)

    def test_guards(self):
        with pytest.raises(SizeGuardExceeded):
            graver_brute_force(IntMatrix([[1] * 7]), 2)
        with pytest.raises(SizeGuardExceeded):
            graver_brute_force(IntMatrix([], cols=6), 1000)

    @pytest.mark.parametrize("seed", range(15))
    def test_agrees_with_completion(self, seed):
        rng = random.Random(6000 + seed)
        m = random_nonzero_matrix(rng, rng.randint(1, 2), rng.randint(2, 4), -3, 3)
        comp = graver_completion(m)
        bf = graver_brute_force(m, max(1, comp.max_linf))
        assert comp.elements == bf.elements

    def test_partial_radius_is_truncation(self):
        m = IntMatrix([[1, 2, 1]])
        full = graver_completion(m)
        small = graver_brute_force(m, 1)
        assert set(small.elements) == {v for v in full.elements if max(map(abs, v)) <= 1}


class TestExpandRepeatedColumns:
    def test_from_trivial(self):
        base = graver_completion(IntMatrix([[1]]))
        assert base.elements == ()
        exp = expand_repeated_columns(base, 0)
        assert exp.matrix.entries == ((1, 1),)
        assert exp.elements == ((-1, 1), (1, -1))

    def test_chain_to_three_ones(self):
        step1 = expand_repeated_columns(graver_completion(IntMatrix([[1]])), 0)
        step2 = expand_repeated_columns(step1, 0)
        direct = graver_completion(IntMatrix([[1, 1, 1]]))
        assert step2.matrix == direct.matrix
        assert step2.elements == direct.elements

    def test_bad_index(self):
        with pytest.raises(ValueError):
            expand_repeated_columns(graver_completion(IntMatrix([[1, 2]])), 2)

    @pytest.mark.parametrize("seed", range(12))
    def test_matches_direct_completion(self, seed):
        rng = random.Random(7000 + seed)
        m = random_nonzero_matrix(rng, rng.randint(1, 2), rng.randint(2, 3), -3, 3)
        idx = rng.randrange(m.cols)
        expanded = expand_repeated_columns(graver_completion(m), idx)
        direct = graver_completion(expanded.matrix)
        assert expanded.elements == direct.elements
        if any(m.col(idx)):
            # aggregation leaves the max 1-norm at max(2, previous)
            prev = graver_completion(m).max_l1
            assert expanded.max_l1 == max(2, prev)

    def test_zero_column_expansion(self):
        # the unit pair on the copies is splittable when the column is zero
        m = IntMatrix([[1, 0]])
        expanded = expand_repeated_columns(graver_completion(m), 1)
        direct = graver_completion(expanded.matrix)
        assert expanded.elements == direct.elements
        assert (0, 1, -1) not in expanded.elements


class TestOptimalityCertificate:
    @pytest.mark.parametrize("seed", range(10))
    def test_certificate_on_small_ips(self, seed):
        """A feasible point is optimal iff no feasible gamma*g improves it."""
        rng = random.Random(8000 + seed)
        m = random_nonzero_matrix(rng, 1, 3, -2, 2)
        basis = graver_completion(m)
        lower = tuple(rng.randint(-3, 0) for _ in range(3))
        upper = tuple(l + rng.randint(2, 4) for l in lower)
        points = [
            z
            for z in itertools.product(*(range(l, u + 1) for l, u in zip(lower, upper)))
            if not any(m.mul_vec(z))
        ]
        if not points:
            return

        def value(z):
            return sum((x - 1) ** 2 for x in z)

        best = min(value(z) for z in points)
        for z in points:
            has_improving = False
            for g in basis.elements:
                gamma = 1
                while True:
                    cand = tuple(a + gamma * b for a, b in zip(z, g))
                    if not all(l <= x <= u for x, l, u in zip(cand, lower, upper)):
                        break
                    if value(cand) < value(z):
                        has_improving = True
                        break
                    gamma += 1
                if has_improving:
                    break
            assert has_improving == (value(z) > best), (m.entries, z)


class TestConformalDecompose:
    def test_examples(self):
        basis = graver_completion(IntMatrix([[1, 1]]))
        dec = conformal_decompose((2, -2), basis)
        assert dec.terms == ((2, (1, -1)),)

        basis3 = graver_completion(IntMatrix([[1, 1, 1]]))
        for g in basis3.elements:
            assert conformal_decompose(g, basis3).terms == ((1, g),)

        dec3 = conformal_decompose((1, 1, -2), basis3)
        total = [0, 0, 0]
        for lam, g in dec3.terms:
            assert lam > 0
            for i, x in enumerate(g):
                total[i] += lam * x
        assert tuple(total) == (1, 1, -2)

    def test_not_in_kernel(self):
        basis = graver_completion(IntMatrix([[1, 1]]))
        with pytest.raises(NotInKernel):
            conformal_decompose((1, 1), basis)

    def test_corrupted_basis_fails(self):
        full = graver_completion(IntMatrix([[1, 1, 1]]))
        crippled = GraverBasis.from_elements(
            full.matrix,
            [v for v in full.elements if abs(v[0]) + abs(v[1]) != 2 or v[2] != 0],
        )
        with pytest.raises(DecompositionFailed):
            conformal_decompose((1, -1, 0), crippled)

    @pytest.mark.parametrize("seed", range(15))
    def test_reassembly_and_sign_compatibility(self, seed):
        rng = random.Random(9000 + seed)
        m = random_nonzero_matrix(rng, 1, rng.randint(2, 4), -3, 3)
        basis = graver_completion(m)
        if not basis.elements:
            return
        # random kernel vector: small integer combination of basis elements
        v = [0] * m.cols
        for g in rng.sample(basis.elements, min(2, len(basis.elements))):
            c = rng.randint(1, 3)
            v = [a + c * b for a, b in zip(v, g)]
        v = tuple(v)
        if not any(v):
            return
        dec = conformal_decompose(v, basis)
        total = [0] * m.cols
        for lam, g in dec.terms:
            assert conformal_leq(g, v)
            for i, x in enumerate(g):
                total[i] += lam * x
        assert tuple(total) == v
        assert len(dec.terms) <= sum(abs(x) for x in v)
