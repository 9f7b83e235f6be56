"""Graver bases of integer matrices.

The Graver basis of E is the set of nonzero integer kernel vectors
that cannot be written as a sum of two nonzero kernel vectors lying in
the same orthant.  This module computes it two independent ways (a
completion algorithm and a brute-force lattice enumeration), expands a
basis when a column of the matrix is repeated, and conformally
decomposes kernel vectors over a basis.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .errors import DecompositionFailed, NotInKernel, SizeGuardExceeded
from .intlinalg import IntMatrix, IntVector, kernel_lattice_basis

COMPLETION_GUARD = 12          # max columns for graver_completion
BRUTE_FORCE_COLS_GUARD = 6     # max columns for graver_brute_force
BRUTE_FORCE_WORK_GUARD = 10**7  # cap on enumerated lattice points


def _l1(v) -> int:
    return sum(abs(x) for x in v)


def _linf(v) -> int:
    return max((abs(x) for x in v), default=0)


def _masks(v) -> tuple[int, int]:
    """Bitmasks of the positive and negative supports of v."""
    pos = neg = 0
    for i, x in enumerate(v):
        if x > 0:
            pos |= 1 << i
        elif x < 0:
            neg |= 1 << i
    return pos, neg


def _negate(v: IntVector) -> IntVector:
    return tuple(-x for x in v)


def _canonical_sign(v: IntVector) -> IntVector:
    """The representative of {v, -v} whose first nonzero entry is positive."""
    for x in v:
        if x > 0:
            return v
        if x < 0:
            return _negate(v)
    return v


def dominates(g, v) -> bool:
    """True when g lies in the same orthant as v with |g_i| <= |v_i| everywhere."""
    for a, b in zip(g, v):
        if a > 0:
            if b < a:
                return False
        elif a < 0:
            if b > a:
                return False
    return True


def _minimal_elements(vectors) -> list[IntVector]:
    """Keep the conformally minimal vectors of a sign-symmetric set.

    Processing in increasing 1-norm order is enough: any proper
    conformal predecessor has strictly smaller 1-norm, and every
    reducible vector is dominated by some minimal one.
    """
    kept: list[tuple[IntVector, int, int]] = []
    out = []
    for v in sorted(set(vectors), key=lambda w: (_l1(w), w)):
        vp, vn = _masks(v)
        reducible = False
        for g, gp, gn in kept:
            if (gp & ~vp) or (gn & ~vn):
                continue
            if dominates(g, v):
                reducible = True
                break
        if not reducible:
            kept.append((v, vp, vn))
            out.append(v)
    return out


@dataclass(frozen=True)
class GraverBasis:
    """Canonical Graver basis: lexicographically sorted, sign-symmetric."""

    matrix: IntMatrix
    elements: tuple[IntVector, ...]
    max_l1: int
    max_linf: int

    @classmethod
    def from_elements(cls, matrix: IntMatrix, vectors) -> "GraverBasis":
        elems = tuple(sorted(set(vectors)))
        zero = (0,) * matrix.cols
        for v in elems:
            if len(v) != matrix.cols:
                raise ValueError("element dimension disagrees with matrix")
            if v == zero:
                raise ValueError("zero vector in basis")
            if any(matrix.mul_vec(v)):
                raise NotInKernel(f"{v} is not in ker(matrix)")
        as_set = set(elems)
        if any(_negate(v) not in as_set for v in elems):
            raise ValueError("basis is not sign-symmetric")
        return cls(
            matrix=matrix,
            elements=elems,
            max_l1=max((_l1(v) for v in elems), default=0),
            max_linf=max((_linf(v) for v in elems), default=0),
        )

    def __len__(self):
        return len(self.elements)


def _normal_form(s, pool, pool_info):
    """Reduce s by conformal subtraction against the pool; None if it hits 0."""
    s = list(s)
    sl1 = _l1(s)
    sp, sn = _masks(s)
    changed = True
    while changed:
        changed = False
        for g, (gp, gn, gl1) in zip(pool, pool_info):
            if gl1 > sl1:
                continue
            if (gp & ~sp) or (gn & ~sn):
                continue
            lam = None
            for i in range(len(s)):
                gi = g[i]
                if gi:
                    q = s[i] // gi
                    if q == 0:
                        lam = 0
                        break
                    lam = q if lam is None else min(lam, q)
            if not lam:
                continue
            for i in range(len(s)):
                s[i] -= lam * g[i]
            sl1 = _l1(s)
            if sl1 == 0:
                return None
            sp, sn = _masks(s)
            changed = True
    return tuple(s)


def graver_completion(e: IntMatrix) -> GraverBasis:
    """Graver basis by a Pottier-style completion.

    Seeds with the signed kernel lattice basis, closes the set under
    normal forms of sums of sign-incompatible pairs, and finally keeps
    the conformally minimal elements.  Sums of sign-compatible pairs
    reduce to zero trivially and are skipped.
    """
    if e.cols > COMPLETION_GUARD:
        raise SizeGuardExceeded(
            f"completion needs cols <= {COMPLETION_GUARD}, got {e.cols}"
        )
    seeds = kernel_lattice_basis(e)
    if not seeds:
        return GraverBasis.from_elements(e, [])

    pool: list[IntVector] = []
    pool_info: list[tuple[int, int, int]] = []
    pool_set: set[IntVector] = set()

    def add(v: IntVector):
        for w in (v, _negate(v)):
            if w not in pool_set:
                pool_set.add(w)
                pool.append(w)
                wp, wn = _masks(w)
                pool_info.append((wp, wn, _l1(w)))

    heap: list[tuple[int, int, IntVector]] = []
    seen_sums: set[IntVector] = set()
    counter = 0

    def enqueue_pairs(v: IntVector):
        nonlocal counter
        vp, vn = _masks(v)
        neg_v = _negate(v)
        for w, (wp, wn, _) in zip(list(pool), list(pool_info)):
            if w == v or w == neg_v:
                continue
            if not ((vp & wn) | (vn & wp)):
                continue  # sign-compatible pair reduces to zero
            s = _canonical_sign(tuple(a + b for a, b in zip(v, w)))
            if not any(s) or s in seen_sums:
                continue
            seen_sums.add(s)
            counter += 1
            heapq.heappush(heap, (_l1(s), counter, s))

    for b in seeds:
        add(_canonical_sign(b))
    for v in [w for w in pool]:
        enqueue_pairs(v)

    while heap:
        _, _, s = heapq.heappop(heap)
        nf = _normal_form(s, pool, pool_info)
        if nf is None:
            continue
        c = _canonical_sign(nf)
        if c in pool_set:
            continue
        add(c)
        enqueue_pairs(c)

    return GraverBasis.from_elements(e, _minimal_elements(pool))


def graver_brute_force(e: IntMatrix, radius: int) -> GraverBasis:
    """Independent Graver oracle: enumerate then discard splittable vectors.

    Enumerates every nonzero integer kernel vector with sup-norm at
    most ``radius`` by walking the kernel lattice in staircase order,
    then drops each vector that is a sign-compatible sum of two
    enumerated ones.  The result equals the true Graver basis whenever
    ``radius`` is at least its maximum sup-norm.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    if e.cols > BRUTE_FORCE_COLS_GUARD:
        raise SizeGuardExceeded(
            f"brute force needs cols <= {BRUTE_FORCE_COLS_GUARD}, got {e.cols}"
        )
    basis = kernel_lattice_basis(e)
    if not basis:
        return GraverBasis.from_elements(e, [])

    pivots = []
    for vec in basis:
        prow = next(i for i, x in enumerate(vec) if x)
        pivots.append((prow, vec[prow]))
    work = 1
    for _, pval in pivots:
        work *= 2 * radius // pval + 1
        if work > BRUTE_FORCE_WORK_GUARD:
            raise SizeGuardExceeded(
                f"enumeration would visit more than {BRUTE_FORCE_WORK_GUARD} points"
            )

    n = e.cols
    points: list[IntVector] = []

    def rec(level: int, acc: list[int]):
        if level == len(basis):
            if any(acc) and all(abs(x) <= radius for x in acc):
                points.append(tuple(acc))
            return
        prow, pval = pivots[level]
        vec = basis[level]
        # after this level, coordinate prow never changes again
        lo = -((radius + acc[prow]) // pval)
        hi = (radius - acc[prow]) // pval
        for c in range(lo, hi + 1):
            rec(level + 1, [a + c * x for a, x in zip(acc, vec)] if c else list(acc))

    rec(0, [0] * n)
    return GraverBasis.from_elements(e, _minimal_elements(points))


def expand_repeated_columns(basis: GraverBasis, repeat_index: int) -> GraverBasis:
    """Graver basis of the matrix with column ``repeat_index`` duplicated.

    Each element (u, s) with s in the repeated slot fans out into all
    same-sign splittings (u, v, w) with v + w = s, plus the unit pair
    supported on the two copies of the column.  When the repeated
    column is zero the unit pair is omitted: the single unit vectors
    are kernel vectors themselves, so (1, -1) on the two copies is
    sign-decomposable and not primitive.
    """
    m = basis.matrix
    if not 0 <= repeat_index < m.cols:
        raise ValueError(f"column index {repeat_index} out of range for {m.cols} cols")
    expanded = IntMatrix(
        [
            row[: repeat_index + 1] + (row[repeat_index],) + row[repeat_index + 1 :]
            for row in m.entries
        ],
        cols=m.cols + 1,
    )
    out = []
    ri = repeat_index
    for g in basis.elements:
        s = g[ri]
        lo, hi = (0, s) if s >= 0 else (s, 0)
        for v in range(lo, hi + 1):
            out.append(g[:ri] + (v, s - v) + g[ri + 1 :])
    if any(m.col(ri)):
        unit = (0,) * ri + (1, -1) + (0,) * (m.cols - ri - 1)
        out.append(unit)
        out.append(_negate(unit))
    return GraverBasis.from_elements(expanded, out)


@dataclass(frozen=True)
class ConformalDecomposition:
    """target == sum(multiplier * element), every element conformal to target."""

    target: IntVector
    terms: tuple[tuple[int, IntVector], ...]


def conformal_decompose(v, basis: GraverBasis) -> ConformalDecomposition:
    """Greedy conformal decomposition of a kernel vector over a Graver basis.

    Repeatedly subtracts the lexicographically smallest basis element
    dominated by the remainder, with the largest multiplier that keeps
    the remainder in the same orthant.  The 1-norm drops every round,
    so there are at most ||v||_1 terms.
    """
    v = tuple(int(x) for x in v)
    if any(basis.matrix.mul_vec(v)):
        raise NotInKernel(f"{v} is not in the kernel of the basis matrix")
    terms = []
    rem = v
    while any(rem):
        g = next((g for g in basis.elements if dominates(g, rem)), None)
        if g is None:
            raise DecompositionFailed(
                f"no basis element conformal to remainder {rem}; basis is not Graver"
            )
        lam = min(rem[i] // g[i] for i in range(len(g)) if g[i])
        terms.append((lam, g))
        rem = tuple(r - lam * x for r, x in zip(rem, g))
    return ConformalDecomposition(target=v, terms=tuple(terms))
