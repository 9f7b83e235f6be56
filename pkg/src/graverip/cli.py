"""Command-line interface.

Subcommands: solve an instance, compute a Graver basis, report norm
bounds, generate a stochastic multi-commodity flow instance, and verify
a proposed solution.  All files are JSON; output is canonical (sorted
keys, compact separators) so identical inputs produce byte-identical
results.  Exit codes: 0 success, 1 infeasible (solve), 2 input error,
3 size-guard rejection.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .bounds import determinant_bounds, fourblock_bound_alternative, fourblock_bound_primary, measure_stochastic_constants, ppi_bound
from .errors import SizeGuardExceeded
from .fourblock import (
    generate_smcf,
    instance_from_json_obj,
    instance_to_json_obj,
    random_smcf_spec,
    smcf_spec_from_json_obj,
    stochastic_part,
)
from .graver import graver_completion
from .intlinalg import IntMatrix
from .solver import INFEASIBLE, OPTIMAL, brute_force_solve, solve

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_INPUT_ERROR = 2
EXIT_SIZE_GUARD = 3


class _InputError(Exception):
    pass


def _canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _InputError(
            f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc


def _write_output(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_instance(path: str):
    try:
        return instance_from_json_obj(_load_json(path))
    except (ValueError, KeyError, TypeError) as exc:
        raise _InputError(f"{path}: {exc}") from exc


def _parse_epsilon(text: str) -> Fraction:
    try:
        eps = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise _InputError(f"invalid epsilon {text!r}: {exc}") from exc
    if eps <= 0:
        raise _InputError("epsilon must be positive")
    return eps


def _cmd_solve(args) -> int:
    instance = _load_instance(args.input)
    epsilon = _parse_epsilon(args.epsilon)
    outcome = solve(instance, epsilon, use_exact_graver=args.use_exact_graver)
    result = {"status": outcome.status}
    if outcome.restricted_box is not None:
        result["restricted_box"] = {
            "l": list(outcome.restricted_box[0]),
            "u": list(outcome.restricted_box[1]),
        }
    if outcome.status == OPTIMAL:
        result["z"] = list(outcome.z)
        result["value"] = str(outcome.value)
        result["trail_steps"] = len(outcome.trail)
    if args.brute_check:
        reference = brute_force_solve(instance)
        agree = reference.status == outcome.status and (
            outcome.status != OPTIMAL or reference.value == outcome.value
        )
        result["brute_check"] = "ok" if agree else "mismatch"
        if not agree:
            _write_output(_canonical_dumps(result), args.output)
            return EXIT_INPUT_ERROR
    _write_output(_canonical_dumps(result), args.output)
    return EXIT_OK if outcome.status == OPTIMAL else EXIT_INFEASIBLE


def _cmd_graver(args) -> int:
    obj = _load_json(args.input)
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise _InputError(f"{args.input}: expected an object with a 'matrix' key")
    try:
        matrix = IntMatrix(obj["matrix"], cols=obj.get("cols"))
    except (ValueError, TypeError) as exc:
        raise _InputError(f"{args.input}: {exc}") from exc
    basis = graver_completion(matrix)
    result = {
        "count": len(basis),
        "elements": [list(v) for v in basis.elements],
        "max_l1": basis.max_l1,
        "max_linf": basis.max_linf,
    }
    _write_output(_canonical_dumps(result), args.output)
    return EXIT_OK


def _cmd_bounds(args) -> int:
    instance = _load_instance(args.input)
    stoch = graver_completion(stochastic_part(instance))
    g, xi, eta = measure_stochastic_constants(
        stoch, instance.n_b, instance.n_a, instance.n
    )
    big_m = max(1, instance.c.max_abs_entry(), instance.d.max_abs_entry())
    reports = [
        {
            "name": "fourblock_primary",
            "value": fourblock_bound_primary(
                instance.n_a, instance.n_b, instance.d_c, big_m, g, instance.n
            ),
            "inputs": {"n_a": instance.n_a, "n_b": instance.n_b, "d_c": instance.d_c,
                       "M": big_m, "g": g, "N": instance.n},
        },
    ]
    if instance.d_c > 0:
        # the alternative formula vanishes identically for d_c == 0
        reports.append(
            {
                "name": "fourblock_alternative",
                "value": fourblock_bound_alternative(
                    instance.n_a, instance.n_b, instance.d_c, big_m, g, xi, eta, instance.n
                ),
                "inputs": {"n_a": instance.n_a, "n_b": instance.n_b, "d_c": instance.d_c,
                           "M": big_m, "g": g, "xi": xi, "eta": eta, "N": instance.n},
            }
        )
    e = instance.matrix
    try:
        reports.extend(r.to_json_obj() for r in determinant_bounds(e))
    except SizeGuardExceeded:
        reports.extend(r.to_json_obj() for r in determinant_bounds(e, exact=False))
    if e.rows == 1:
        reports.append(
            {
                "name": "ppi",
                "value": ppi_bound(max(1, e.max_abs_entry())),
                "inputs": {"M": max(1, e.max_abs_entry())},
            }
        )
    _write_output(_canonical_dumps({"bounds": reports}), args.output)
    return EXIT_OK


def _cmd_gen_smcf(args) -> int:
    if args.input is not None:
        try:
            spec = smcf_spec_from_json_obj(_load_json(args.input))
        except (ValueError, KeyError, TypeError) as exc:
            raise _InputError(f"{args.input}: {exc}") from exc
    else:
        spec = random_smcf_spec(args.seed)
    instance = generate_smcf(spec)
    _write_output(_canonical_dumps(instance_to_json_obj(instance)), args.output)
    return EXIT_OK


def _cmd_verify(args) -> int:
    instance = _load_instance(args.input)
    try:
        z = json.loads(args.z)
    except json.JSONDecodeError as exc:
        raise _InputError(f"invalid --z: {exc.msg}") from exc
    if not isinstance(z, list) or any(not isinstance(x, int) or isinstance(x, bool) for x in z):
        raise _InputError("--z must be a JSON array of integers")
    if len(z) != instance.dimension:
        raise _InputError(
            f"--z has {len(z)} coordinates, instance needs {instance.dimension}"
        )
    z = tuple(z)
    feasible = instance.matrix.mul_vec(z) == instance.rhs and all(
        l <= x <= u for x, l, u in zip(z, instance.lower, instance.upper)
    )
    result = {"feasible": feasible, "optimal": None, "value": None}
    if feasible:
        result["value"] = str(instance.objective.value(z))
    if args.brute_check:
        reference = brute_force_solve(instance)
        if reference.status == OPTIMAL:
            result["optimal"] = feasible and instance.objective.value(z) == reference.value
        else:
            result["optimal"] = False
    _write_output(_canonical_dumps(result), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graverip",
        description="Exact Graver-basis solver for N-fold 4-block separable convex integer programs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve an instance file")
    p_solve.add_argument("input")
    p_solve.add_argument("-o", "--output", default=None)
    p_solve.add_argument("--epsilon", default="1/2", help="continuous oracle tolerance (rational, default 1/2)")
    p_solve.add_argument(
        "--use-exact-graver",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="use the exact Graver sup-norm for the proximity box when computable",
    )
    p_solve.add_argument("--brute-check", action="store_true", help="cross-check against exhaustive enumeration")
    p_solve.set_defaults(func=_cmd_solve)

    p_graver = sub.add_parser("graver", help="compute the Graver basis of a matrix file")
    p_graver.add_argument("input")
    p_graver.add_argument("-o", "--output", default=None)
    p_graver.set_defaults(func=_cmd_graver)

    p_bounds = sub.add_parser("bounds", help="report Graver norm bounds for an instance")
    p_bounds.add_argument("input")
    p_bounds.add_argument("-o", "--output", default=None)
    p_bounds.set_defaults(func=_cmd_bounds)

    p_gen = sub.add_parser("gen-smcf", help="generate a stochastic multi-commodity flow instance")
    p_gen.add_argument("input", nargs="?", default=None, help="flow spec JSON; omit to randomize")
    p_gen.add_argument("-o", "--output", default=None)
    p_gen.add_argument("--seed", type=int, default=0, help="seed for the randomized spec")
    p_gen.set_defaults(func=_cmd_gen_smcf)

    p_verify = sub.add_parser("verify", help="check a proposed solution")
    p_verify.add_argument("input")
    p_verify.add_argument("-o", "--output", default=None)
    p_verify.add_argument("--z", required=True, help="candidate point as a JSON array")
    p_verify.add_argument("--brute-check", action="store_true", help="also test optimality exhaustively")
    p_verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except SizeGuardExceeded as exc:
        print(f"size guard: {exc}", file=sys.stderr)
        return EXIT_SIZE_GUARD


if __name__ == "__main__":
    sys.exit(main())
