"""Separable convex objectives with exact rational evaluation.

An objective is a list of per-coordinate term lists.  Four convex term
kinds are supported: linear, weighted absolute deviation, weighted
squared deviation, and convex piecewise-linear.  Evaluation at any
rational point is an exact Fraction, so comparisons are exact
three-way decisions.  The module also provides the directed objective
c^T v+ + d^T v- used during feasibility augmentation, a box bound on
|f|, and the uniform-grid piecewise linearization consumed by the
continuous relaxation solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def _frac(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floats are not allowed; pass int, Fraction, or 'p/q' string")
    return Fraction(x)


@dataclass(frozen=True)
class LinearTerm:
    slope: Fraction

    def __post_init__(self):
        object.__setattr__(self, "slope", _frac(self.slope))

    def value(self, x: Fraction) -> Fraction:
        return self.slope * x


@dataclass(frozen=True)
class AbsDevTerm:
    weight: Fraction
    center: int

    def __post_init__(self):
        object.__setattr__(self, "weight", _frac(self.weight))
        object.__setattr__(self, "center", int(self.center))
        if self.weight < 0:
            raise ValueError("absolute-deviation weight must be nonnegative")

    def value(self, x: Fraction) -> Fraction:
        return self.weight * abs(x - self.center)


@dataclass(frozen=True)
class QuadraticTerm:
    coeff: Fraction
    center: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coeff", _frac(self.coeff))
        object.__setattr__(self, "center", _frac(self.center))
        if self.coeff < 0:
            raise ValueError("quadratic coefficient must be nonnegative")

    def value(self, x: Fraction) -> Fraction:
        return self.coeff * (x - self.center) ** 2


@dataclass(frozen=True)
class PiecewiseLinearTerm:
    """Convex piecewise-linear term anchored at its leftmost breakpoint.

    ``slopes`` has one more entry than ``breakpoints``; slope k applies
    between breakpoints k-1 and k (the first and last pieces extend to
    infinity).  Strictly increasing slopes make the term convex.  The
    value at the first breakpoint is ``anchor``; only differences of
    objective values matter to the optimizer, so the anchor simply
    makes evaluation total.
    """

    breakpoints: tuple[Fraction, ...]
    slopes: tuple[Fraction, ...]
    anchor: Fraction = Fraction(0)

    def __post_init__(self):
        bps = tuple(_frac(b) for b in self.breakpoints)
        sls = tuple(_frac(s) for s in self.slopes)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "slopes", sls)
        object.__setattr__(self, "anchor", _frac(self.anchor))
        if not bps:
            raise ValueError("need at least one breakpoint")
        if len(sls) != len(bps) + 1:
            raise ValueError("need exactly one more slope than breakpoints")
        if any(b >= c for b, c in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(s >= t for s, t in zip(sls, sls[1:])):
            raise ValueError("slopes must be strictly increasing")

    def value(self, x: Fraction) -> Fraction:
        bps, sls = self.breakpoints, self.slopes
        if x <= bps[0]:
            return self.anchor + sls[0] * (x - bps[0])
        acc = self.anchor
        prev = bps[0]
        for k in range(1, len(bps)):
            if x <= bps[k]:
                return acc + sls[k] * (x - prev)
            acc += sls[k] * (bps[k] - prev)
            prev = bps[k]
        return acc + sls[-1] * (x - prev)


Term = LinearTerm | AbsDevTerm | QuadraticTerm | PiecewiseLinearTerm


class SeparableObjective:
    """Sum over coordinates of single-variable convex functions."""

    __slots__ = ("terms",)

    def __init__(self, per_coordinate: Iterable[Iterable[Term]]):
        self.terms: tuple[tuple[Term, ...], ...] = tuple(
            tuple(ts) for ts in per_coordinate
        )

    @property
    def dimension(self) -> int:
        return len(self.terms)

    @classmethod
    def zeros(cls, n: int) -> "SeparableObjective":
        return cls([[] for _ in range(n)])

    def coordinate_value(self, i: int, x) -> Fraction:
        x = _frac(x)
        return sum((t.value(x) for t in self.terms[i]), Fraction(0))

    def value(self, z: Sequence) -> Fraction:
        if len(z) != self.dimension:
            raise ValueError(f"point has {len(z)} coordinates, objective {self.dimension}")
        total = Fraction(0)
        for i, x in enumerate(z):
            x = _frac(x)
            for t in self.terms[i]:
                total += t.value(x)
        return total

    def compare(self, z: Sequence, z2: Sequence) -> int:
        """Exact three-way comparison: -1 if f(z) < f(z2), 0 if equal, 1 if greater."""
        a, b = self.value(z), self.value(z2)
        return (a > b) - (a < b)

    def __eq__(self, other):
        return isinstance(other, SeparableObjective) and self.terms == other.terms

    def __repr__(self):
        return f"SeparableObjective({len(self.terms)} coordinates)"


def evaluate(f: SeparableObjective, z: Sequence) -> Fraction:
    return f.value(z)


def compare(f: SeparableObjective, z: Sequence, z2: Sequence) -> int:
    return f.compare(z, z2)


@dataclass(frozen=True)
class DirectedObjective:
    """h(v) = c^T v+ + d^T v- with v+ = max(v, 0) and v- = max(-v, 0)."""

    c: tuple[Fraction, ...]
    d: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(_frac(x) for x in self.c))
        object.__setattr__(self, "d", tuple(_frac(x) for x in self.d))
        if len(self.c) != len(self.d):
            raise ValueError("c and d must have the same dimension")

    def value(self, v: Sequence) -> Fraction:
        if len(v) != len(self.c):
            raise ValueError("dimension mismatch")
        total = Fraction(0)
        for ci, di, vi in zip(self.c, self.d, v):
            if vi > 0:
                total += ci * vi
            elif vi < 0:
                total -= di * vi
        return total


def directed_value(h: DirectedObjective, v: Sequence) -> Fraction:
    return h.value(v)


def _coordinate_min_point(terms: tuple[Term, ...], lo: Fraction, hi: Fraction) -> Fraction:
    """Exact minimizer of a single-coordinate convex term sum over [lo, hi].

    Walks the kink grid (absolute-deviation centers and piecewise
    breakpoints); on each open segment the derivative is affine, so an
    interior stationary point is a rational root.
    """
    if lo == hi:
        return lo
    q_total = Fraction(0)
    kinks = {lo, hi}
    for t in terms:
        if isinstance(t, QuadraticTerm):
            q_total += t.coeff
        elif isinstance(t, AbsDevTerm):
            if lo < t.center < hi:
                kinks.add(Fraction(t.center))
        elif isinstance(t, PiecewiseLinearTerm):
            kinks.update(b for b in t.breakpoints if lo < b < hi)
    grid = sorted(kinks)

    def derivative_at(x: Fraction) -> Fraction:
        # valid only away from kinks
        d = Fraction(0)
        for t in terms:
            if isinstance(t, LinearTerm):
                d += t.slope
            elif isinstance(t, QuadraticTerm):
                d += 2 * t.coeff * (x - t.center)
            elif isinstance(t, AbsDevTerm):
                d += t.weight if x > t.center else -t.weight
            else:
                bps, sls = t.breakpoints, t.slopes
                k = 0
                while k < len(bps) and x > bps[k]:
                    k += 1
                d += sls[k]
        return d

    candidates = list(grid)
    for a, b in zip(grid, grid[1:]):
        mid = (a + b) / 2
        dm = derivative_at(mid)
        if q_total > 0:
            root = mid - dm / (2 * q_total)
            if a < root < b:
                candidates.append(root)

    def phi(x):
        return sum((t.value(x) for t in terms), Fraction(0))

    return min(candidates, key=lambda x: (phi(x), x))


def max_abs_bound(f: SeparableObjective, lower: Sequence, upper: Sequence) -> Fraction:
    """Upper bound on max |f| over the box [lower, upper].

    Per coordinate the convex maximum sits at an endpoint and the
    minimum at the clamped stationary point, so the coordinate bound is
    max(|f_i(l_i)|, |f_i(u_i)|, |f_i(x*_i)|); the total is their sum.
    """
    if not (len(lower) == len(upper) == f.dimension):
        raise ValueError("box dimension disagrees with objective")
    total = Fraction(0)
    for i in range(f.dimension):
        lo, hi = _frac(lower[i]), _frac(upper[i])
        if lo > hi:
            raise ValueError("lower bound exceeds upper bound")
        vals = [abs(f.coordinate_value(i, lo)), abs(f.coordinate_value(i, hi))]
        xmin = _coordinate_min_point(f.terms[i], lo, hi)
        vals.append(abs(f.coordinate_value(i, xmin)))
        total += max(vals)
    return total


@dataclass(frozen=True)
class CoordinatePL:
    """Uniform-grid linearization of one coordinate function.

    ``slopes`` are the difference quotients between consecutive
    breakpoints; convexity of the source function makes them
    nondecreasing.  The interpolant matches the function at every
    breakpoint and never undershoots it in between.
    """

    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]
    slopes: tuple[Fraction, ...]


def piecewise_linearize(
    f: SeparableObjective, lower: Sequence, upper: Sequence, step
) -> list[CoordinatePL]:
    """Per-coordinate grid linearization with the given positive step.

    Breakpoints run from the lower bound in increments of ``step``;
    the final breakpoint is clamped to the upper bound, so the last
    cell may be shorter.
    """
    step = _frac(step)
    if step <= 0:
        raise ValueError("step must be positive")
    if not (len(lower) == len(upper) == f.dimension):
        raise ValueError("box dimension disagrees with objective")
    out = []
    for i in range(f.dimension):
        lo, hi = _frac(lower[i]), _frac(upper[i])
        if lo > hi:
            raise ValueError("lower bound exceeds upper bound")
        bps = [lo]
        while bps[-1] < hi:
            bps.append(min(bps[-1] + step, hi))
        vals = tuple(f.coordinate_value(i, b) for b in bps)
        slopes = tuple(
            (v2 - v1) / (b2 - b1)
            for (b1, v1), (b2, v2) in zip(zip(bps, vals), zip(bps[1:], vals[1:]))
        )
        assert all(s1 <= s2 for s1, s2 in zip(slopes, slopes[1:])), "convexity violated"
        out.append(CoordinatePL(tuple(bps), vals, slopes))
    return out


# --- JSON wire format -------------------------------------------------------
#
# Rationals travel as canonical "p/q" strings (or bare integer strings);
# absolute-deviation centers are JSON integers.


def _frac_to_json(x: Fraction) -> str:
    return str(Fraction(x))


def _frac_from_json(obj) -> Fraction:
    if isinstance(obj, bool) or isinstance(obj, float):
        raise ValueError(f"expected exact rational, got {obj!r}")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        return Fraction(obj)
    raise ValueError(f"cannot parse rational from {obj!r}")


def term_to_json_obj(term: Term) -> dict:
    if isinstance(term, LinearTerm):
        return {"kind": "linear", "slope": _frac_to_json(term.slope)}
    if isinstance(term, AbsDevTerm):
        return {"kind": "absdev", "weight": _frac_to_json(term.weight), "center": term.center}
    if isinstance(term, QuadraticTerm):
        return {
            "kind": "quadratic",
            "coeff": _frac_to_json(term.coeff),
            "center": _frac_to_json(term.center),
        }
    if isinstance(term, PiecewiseLinearTerm):
        return {
            "kind": "pl",
            "breakpoints": [_frac_to_json(b) for b in term.breakpoints],
            "slopes": [_frac_to_json(s) for s in term.slopes],
            "anchor": _frac_to_json(term.anchor),
        }
    raise TypeError(f"unknown term {term!r}")


def term_from_json_obj(obj: dict) -> Term:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError(f"objective term must be an object with a 'kind': {obj!r}")
    kind = obj["kind"]
    if kind == "linear":
        return LinearTerm(_frac_from_json(obj["slope"]))
    if kind == "absdev":
        center = obj["center"]
        if not isinstance(center, int) or isinstance(center, bool):
            raise ValueError("absdev center must be an integer")
        return AbsDevTerm(_frac_from_json(obj["weight"]), center)
    if kind == "quadratic":
        return QuadraticTerm(_frac_from_json(obj["coeff"]), _frac_from_json(obj["center"]))
    if kind == "pl":
        return PiecewiseLinearTerm(
            tuple(_frac_from_json(b) for b in obj["breakpoints"]),
            tuple(_frac_from_json(s) for s in obj["slopes"]),
            _frac_from_json(obj.get("anchor", 0)),
        )
    raise ValueError(f"unknown term kind {kind!r}")


def objective_to_json_obj(f: SeparableObjective) -> list:
    return [[term_to_json_obj(t) for t in ts] for ts in f.terms]


def objective_from_json_obj(obj) -> SeparableObjective:
    if not isinstance(obj, list):
        raise ValueError("objective must be an array of per-coordinate term arrays")
    per_coord = []
    for entry in obj:
        if isinstance(entry, dict):
            entry = [entry]  # lenient: a bare object means a single term
        per_coord.append([term_from_json_obj(t) for t in entry])
    return SeparableObjective(per_coord)
