"""N-fold 4-block instances and the stochastic multi-commodity flow generator.

An instance couples four blocks A, B, C, D into the constraint matrix

    ( C  D  D ... D )
    ( B  A          )
    ( B     A       )
    ( ...        A  )

with N copies of A, B, D, a finite box, a right-hand side, and a
separable convex objective.  C and D may have zero rows; B and C may
have zero columns, which recovers the two-stage stochastic and N-fold
special shapes with the same assembly code.

The module also models two-stage stochastic integer multi-commodity
flow problems (aggregate first-stage flows, per-scenario commodity
flows with slack and excess columns) and compiles them to instances.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .intlinalg import IntMatrix, IntVector
from .objective import (
    LinearTerm,
    SeparableObjective,
    objective_from_json_obj,
    objective_to_json_obj,
)


def assemble_fourblock(
    a: IntMatrix, b: IntMatrix, c: IntMatrix, d: IntMatrix, n_copies: int
) -> IntMatrix:
    """Assemble the (d_C + N*d_A) x (n_B + N*n_A) constraint matrix."""
    if n_copies < 1:
        raise ValueError("need at least one copy")
    if a.rows != b.rows:
        raise ValueError("A and B must have the same row count")
    if c.rows != d.rows:
        raise ValueError("C and D must have the same row count")
    if b.cols != c.cols:
        raise ValueError("B and C must have the same column count")
    if a.cols != d.cols:
        raise ValueError("A and D must have the same column count")
    n_b, n_a, d_a = b.cols, a.cols, a.rows
    width = n_b + n_copies * n_a
    rows = []
    for i in range(c.rows):
        rows.append(list(c.row(i)) + list(d.row(i)) * n_copies)
    for k in range(n_copies):
        for i in range(d_a):
            row = [0] * width
            row[:n_b] = b.row(i)
            off = n_b + k * n_a
            row[off : off + n_a] = a.row(i)
            rows.append(row)
    return IntMatrix(rows, cols=width)


@dataclass(frozen=True)
class FourBlockInstance:
    """Problem datum: blocks, copy count, finite box, right-hand side, objective."""

    a: IntMatrix
    b: IntMatrix
    c: IntMatrix
    d: IntMatrix
    n: int
    lower: IntVector
    upper: IntVector
    rhs: IntVector
    objective: SeparableObjective

    def __post_init__(self):
        object.__setattr__(self, "lower", tuple(int(x) for x in self.lower))
        object.__setattr__(self, "upper", tuple(int(x) for x in self.upper))
        object.__setattr__(self, "rhs", tuple(int(x) for x in self.rhs))
        assemble_fourblock(self.a, self.b, self.c, self.d, self.n)  # dim checks
        dim = self.dimension
        if len(self.lower) != dim or len(self.upper) != dim:
            raise ValueError(f"bounds must have dimension {dim}")
        if any(l > u for l, u in zip(self.lower, self.upper)):
            raise ValueError("lower bound exceeds upper bound")
        if len(self.rhs) != self.c.rows + self.n * self.a.rows:
            raise ValueError("rhs dimension disagrees with the block rows")
        if self.objective.dimension != dim:
            raise ValueError(f"objective must have dimension {dim}")

    @property
    def n_a(self) -> int:
        return self.a.cols

    @property
    def n_b(self) -> int:
        return self.b.cols

    @property
    def d_a(self) -> int:
        return self.a.rows

    @property
    def d_c(self) -> int:
        return self.c.rows

    @property
    def dimension(self) -> int:
        return self.n_b + self.n * self.n_a

    @cached_property
    def matrix(self) -> IntMatrix:
        return assemble_fourblock(self.a, self.b, self.c, self.d, self.n)

    @property
    def box(self) -> tuple[IntVector, IntVector]:
        return self.lower, self.upper


def stochastic_part(instance: FourBlockInstance) -> IntMatrix:
    """The instance matrix with the C/D rows removed (B and A blocks only)."""
    zero_c = IntMatrix([], cols=instance.n_b)
    zero_d = IntMatrix([], cols=instance.n_a)
    return assemble_fourblock(instance.a, instance.b, zero_c, zero_d, instance.n)


def nfold_part(instance: FourBlockInstance) -> IntMatrix:
    """The instance matrix restricted to the copy columns (D row on top, diagonal A)."""
    zero_b = IntMatrix([[] for _ in range(instance.d_a)], cols=0) if instance.d_a else IntMatrix([], cols=0)
    zero_c = IntMatrix([[] for _ in range(instance.d_c)], cols=0) if instance.d_c else IntMatrix([], cols=0)
    return assemble_fourblock(instance.a, zero_b, zero_c, instance.d, instance.n)


# --- stochastic integer multi-commodity flow --------------------------------


@dataclass(frozen=True)
class SmcfSpec:
    """Two-stage stochastic integer multi-commodity flow description.

    ``arcs`` are ordered (tail, head) pairs over ``nodes`` vertices.
    Each commodity has a balanced per-node demand vector (positive
    entries supply, negative demand); each scenario has nonnegative
    per-arc capacities.  Costs are charged on the aggregate first-stage
    flow; excess over observed capacity is penalized linearly per unit
    with the per-arc penalty slopes.
    """

    nodes: int
    arcs: tuple[tuple[int, int], ...]
    demands: tuple[IntVector, ...]
    capacities: tuple[IntVector, ...]
    flow_costs: tuple[Fraction, ...]
    penalty_costs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple((int(t), int(h)) for t, h in self.arcs))
        object.__setattr__(self, "demands", tuple(tuple(int(x) for x in d) for d in self.demands))
        object.__setattr__(
            self, "capacities", tuple(tuple(int(x) for x in c) for c in self.capacities)
        )
        object.__setattr__(self, "flow_costs", tuple(Fraction(x) for x in self.flow_costs))
        object.__setattr__(self, "penalty_costs", tuple(Fraction(x) for x in self.penalty_costs))
        if self.nodes < 1:
            raise ValueError("need at least one node")
        if not self.arcs:
            raise ValueError("need at least one arc")
        for t, h in self.arcs:
            if not (0 <= t < self.nodes and 0 <= h < self.nodes):
                raise ValueError(f"arc ({t},{h}) references a missing node")
        for dvec in self.demands:
            if len(dvec) != self.nodes:
                raise ValueError("demand vectors must have one entry per node")
            if sum(dvec) != 0:
                raise ValueError(f"unbalanced demand vector {dvec}")
        for cvec in self.capacities:
            if len(cvec) != len(self.arcs):
                raise ValueError("capacity vectors must have one entry per arc")
            if any(x < 0 for x in cvec):
                raise ValueError("capacities must be nonnegative")
        if len(self.flow_costs) != len(self.arcs) or len(self.penalty_costs) != len(self.arcs):
            raise ValueError("cost vectors must have one entry per arc")
        if any(p < 0 for p in self.penalty_costs):
            raise ValueError("penalty slopes must be nonnegative")


def incidence_matrix(spec: SmcfSpec) -> IntMatrix:
    """Node-arc incidence: +1 at the tail of an arc, -1 at its head."""
    rows = [[0] * len(spec.arcs) for _ in range(spec.nodes)]
    for j, (t, h) in enumerate(spec.arcs):
        rows[t][j] += 1
        rows[h][j] -= 1
    return IntMatrix(rows, cols=len(spec.arcs))


def generate_smcf(spec: SmcfSpec) -> FourBlockInstance:
    """Compile a flow spec into a 4-block instance.

    First-stage variables are the aggregate per-arc flows; copy k holds
    commodity k's flows plus that scenario's slack and excess columns.
    The commodity and scenario counts are padded to agree: missing
    commodities get zero demands, missing scenarios replicate the last
    one (or zero capacities when there is none).  Flow variables are
    bounded by the relevant commodity supply and excess by the total
    supply, which keeps the box finite without cutting off an optimum.
    """
    n_arcs = len(spec.arcs)
    n_copies = max(len(spec.demands), len(spec.capacities), 1)
    demands = list(spec.demands)
    while len(demands) < n_copies:
        demands.append((0,) * spec.nodes)
    capacities = list(spec.capacities)
    while len(capacities) < n_copies:
        capacities.append(capacities[-1] if capacities else (0,) * n_arcs)

    supply = [sum(x for x in d if x > 0) for d in demands]
    total_supply = sum(supply)

    inc = incidence_matrix(spec)
    ident = IntMatrix.identity(n_arcs)

    # C = -I on aggregate flows; D picks out each commodity's flow columns
    c_block = IntMatrix([[-x for x in row] for row in ident.entries], cols=n_arcs)
    d_block = IntMatrix(
        [list(row) + [0] * (2 * n_arcs) for row in ident.entries], cols=3 * n_arcs
    )
    # B: aggregate flows enter only the capacity rows
    b_block = IntMatrix(
        [[0] * n_arcs for _ in range(spec.nodes)] + [list(r) for r in ident.entries],
        cols=n_arcs,
    )
    # A: conservation rows on the commodity flows, capacity rows on slack/excess
    a_rows = []
    for i in range(spec.nodes):
        a_rows.append(list(inc.row(i)) + [0] * (2 * n_arcs))
    for i in range(n_arcs):
        a_rows.append([0] * n_arcs + list(ident.row(i)) + [-x for x in ident.row(i)])
    a_block = IntMatrix(a_rows, cols=3 * n_arcs)

    rhs = [0] * n_arcs
    for k in range(n_copies):
        rhs.extend(demands[k])
        rhs.extend(capacities[k])

    lower = [0] * (n_arcs + n_copies * 3 * n_arcs)
    upper = [total_supply] * n_arcs
    for k in range(n_copies):
        upper.extend([supply[k]] * n_arcs)          # commodity flows
        upper.extend(list(capacities[k]))           # slack
        upper.extend([total_supply] * n_arcs)       # excess
    # per copy the columns are (commodity flows, slack, excess)
    terms: list[list] = [[LinearTerm(cst)] if cst else [] for cst in spec.flow_costs]
    for _ in range(n_copies):
        terms.extend([[] for _ in range(2 * n_arcs)])
        terms.extend([[LinearTerm(p)] if p else [] for p in spec.penalty_costs])

    return FourBlockInstance(
        a=a_block,
        b=b_block,
        c=c_block,
        d=d_block,
        n=n_copies,
        lower=tuple(lower),
        upper=tuple(upper),
        rhs=tuple(rhs),
        objective=SeparableObjective(terms),
    )


def random_smcf_spec(seed: int) -> SmcfSpec:
    """Small deterministic random flow spec for the instance generator CLI.

    Sizes are capped so the compiled instance stays within the Graver
    completion guard: arcs * (1 + 3 * copies) <= 12.
    """
    rng = random.Random(seed)
    nodes = rng.randint(2, 3)
    arc_pool = [(t, h) for t in range(nodes) for h in range(nodes) if t != h]
    rng.shuffle(arc_pool)
    arcs = tuple(sorted(arc_pool[: rng.randint(1, min(2, len(arc_pool)))]))
    n_comm = 1 if len(arcs) == 2 else rng.randint(1, 2)
    demands = []
    for _ in range(n_comm):
        # demand along an existing arc keeps the instance routable
        src, dst = rng.choice(arcs)
        amount = rng.randint(1, 2)
        d = [0] * nodes
        d[src] += amount
        d[dst] -= amount
        demands.append(tuple(d))
    capacities = tuple(
        tuple(rng.randint(0, 2) for _ in arcs) for _ in range(n_comm)
    )
    flow_costs = tuple(Fraction(rng.randint(0, 3)) for _ in arcs)
    penalty_costs = tuple(Fraction(rng.randint(1, 5)) for _ in arcs)
    return SmcfSpec(
        nodes=nodes,
        arcs=arcs,
        demands=tuple(demands),
        capacities=capacities,
        flow_costs=flow_costs,
        penalty_costs=penalty_costs,
    )


# --- JSON wire format --------------------------------------------------------
#
# {"A": [[...]], "B": [[...]], "C": [[...]], "D": [[...]], "N": 2,
#  "l": [...], "u": [...], "b": [...], "objective": [[term, ...], ...]}
#
# A matrix with zero rows serializes as []; with zero columns as one
# empty array per row.  Widths of empty blocks are reconciled from
# their partners on parse.


def _matrix_to_json(m: IntMatrix) -> list:
    return [list(row) for row in m.entries]


def _matrix_from_json(obj, rows_hint: int | None, cols_hint: int | None, name: str) -> IntMatrix:
    if not isinstance(obj, list) or any(not isinstance(r, list) for r in obj):
        raise ValueError(f"block {name} must be an array of arrays")
    for row in obj:
        for x in row:
            if not isinstance(x, int) or isinstance(x, bool):
                raise ValueError(f"block {name} must contain integers only")
    if obj:
        return IntMatrix(obj)
    if rows_hint:
        # zero-column block with a known row count
        return IntMatrix([[] for _ in range(rows_hint)], cols=0)
    return IntMatrix([], cols=cols_hint or 0)


def instance_to_json_obj(instance: FourBlockInstance) -> dict:
    return {
        "A": _matrix_to_json(instance.a),
        "B": _matrix_to_json(instance.b),
        "C": _matrix_to_json(instance.c),
        "D": _matrix_to_json(instance.d),
        "N": instance.n,
        "l": list(instance.lower),
        "u": list(instance.upper),
        "b": list(instance.rhs),
        "objective": objective_to_json_obj(instance.objective),
    }


def instance_from_json_obj(obj: dict) -> FourBlockInstance:
    if not isinstance(obj, dict):
        raise ValueError("instance must be a JSON object")
    missing = {"A", "B", "C", "D", "N", "l", "u", "b", "objective"} - obj.keys()
    if missing:
        raise ValueError(f"instance is missing keys: {sorted(missing)}")
    a_raw, b_raw, c_raw, d_raw = obj["A"], obj["B"], obj["C"], obj["D"]
    a = _matrix_from_json(a_raw, None, None, "A")
    d_a = a.rows
    n_a = a.cols
    b = _matrix_from_json(b_raw, d_a, None, "B")
    n_b = b.cols
    d = _matrix_from_json(d_raw, None, n_a, "D")
    d_c = d.rows
    c = _matrix_from_json(c_raw, d_c, n_b, "C")
    n = obj["N"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError("N must be a positive integer")

    def int_vec(key):
        v = obj[key]
        if not isinstance(v, list) or any(
            not isinstance(x, int) or isinstance(x, bool) for x in v
        ):
            raise ValueError(f"{key} must be an array of integers")
        return tuple(v)

    return FourBlockInstance(
        a=a,
        b=b,
        c=c,
        d=d,
        n=n,
        lower=int_vec("l"),
        upper=int_vec("u"),
        rhs=int_vec("b"),
        objective=objective_from_json_obj(obj["objective"]),
    )


def smcf_spec_to_json_obj(spec: SmcfSpec) -> dict:
    return {
        "nodes": spec.nodes,
        "arcs": [list(a) for a in spec.arcs],
        "demands": [list(d) for d in spec.demands],
        "capacities": [list(c) for c in spec.capacities],
        "flow_costs": [str(x) for x in spec.flow_costs],
        "penalty_costs": [str(x) for x in spec.penalty_costs],
    }


def smcf_spec_from_json_obj(obj: dict) -> SmcfSpec:
    if not isinstance(obj, dict):
        raise ValueError("flow spec must be a JSON object")
    missing = {"nodes", "arcs", "demands", "capacities", "flow_costs", "penalty_costs"} - obj.keys()
    if missing:
        raise ValueError(f"flow spec is missing keys: {sorted(missing)}")
    return SmcfSpec(
        nodes=obj["nodes"],
        arcs=tuple(tuple(a) for a in obj["arcs"]),
        demands=tuple(tuple(d) for d in obj["demands"]),
        capacities=tuple(tuple(c) for c in obj["capacities"]),
        flow_costs=tuple(Fraction(x) for x in obj["flow_costs"]),
        penalty_costs=tuple(Fraction(x) for x in obj["penalty_costs"]),
    )
