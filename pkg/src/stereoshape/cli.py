"""Command-line interface.

Structured results go to stdout as JSON; diagnostics go to stderr.

Exit codes: 0 success / Equivalent / true, 1 negative result, 2 Degenerate,
3 invalid input, 4 internal error.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import consistency as cons
from . import io
from .equivalence import EXIT_CODES, degeneracy_check, recover_transform
from .exceptions import InvalidInputError
from .group_action import (
    FullTransform,
    RestrictedTransform,
    act,
    nonproper_witness,
    paper_example_report,
    scalar_stabilizer_check,
)
from .linalg_core import DEFAULT_TOL, Tolerances, as_config, random_config
from .projection import iota
from .suite import format_table, run_all

EXIT_OK, EXIT_NEGATIVE, EXIT_DEGENERATE, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2, 3, 4
SEED_ENV = "STEREOSHAPE_SEED"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInputError(message)


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InvalidInputError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--rank-tol", type=float, default=DEFAULT_TOL.rank_rel_tol)
    common.add_argument("--residual-tol", type=float, default=DEFAULT_TOL.residual_rel_tol)
    common.add_argument("--zero-tol", type=float, default=DEFAULT_TOL.zero_tol)
    common.add_argument("--seed", type=int, default=None, help=f"defaults to ${SEED_ENV} or 0")
    common.add_argument("--out", type=Path, default=None, help="also write the JSON result here")

    parser = _Parser(prog="stereoshape", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("project", parents=[common], help="apply the perspective map to a configuration")
    p.add_argument("--in", dest="inputs", action="append", required=True, type=Path)

    p = sub.add_parser("act", parents=[common], help="apply a transform (g, d) to a configuration")
    p.add_argument("--in", dest="inputs", action="append", required=True, type=Path)
    p.add_argument("--transform", required=True, type=Path)
    p.add_argument("--restricted", action="store_true", help="require an affine g")

    for name, helptext in (
        ("recover", "project two scene configurations and recover the affine motion"),
        ("equiv", "decide orbit equivalence of two images"),
        ("degen", "rank report for the linear systems of two images"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--in", dest="inputs", action="append", required=True, type=Path)

    p = sub.add_parser("demo-nonfree", parents=[common], help="scalar stabilizer of the full action")
    p.add_argument("--lambda", dest="lam", type=float, default=3.0)
    p.add_argument("--in", dest="inputs", action="append", type=Path)
    p.add_argument("--n", type=int, default=6)

    p = sub.add_parser("demo-nonproper", parents=[common], help="SVD witness of non-properness")
    p.add_argument("--t", type=float, action="append", help="scale(s) for g = diag(t, 1, 1, 1); default 10, 100, 1000")
    p.add_argument("--g", type=Path, help="JSON file with a 4x4 g (key \"g\", 16 numbers)")
    p.add_argument("--p", type=float, nargs=4, help="unit fixed vector of g (default e2)")

    p = sub.add_parser("demo-paper-example", parents=[common], help="evaluate the displayed 4x6 example")
    for name in ("alpha", "beta", "gamma", "delta"):
        p.add_argument(f"--{name}", type=float, default=1.0)

    p = sub.add_parser("consistency", parents=[common], help="representational consistency checks")
    p.add_argument("--structure", required=True, type=Path)
    p.add_argument("--rep", action="append", type=Path, help="representation file; omit to use Aut(S)")

    sub.add_parser("suite", parents=[common], help="run the acceptance battery")
    return parser


def _tol(args) -> Tolerances:
    return Tolerances(args.rank_tol, args.residual_tol, args.zero_tol)


def _two(args) -> tuple[np.ndarray, np.ndarray]:
    if len(args.inputs) != 2:
        raise InvalidInputError(f"{args.command} needs exactly two --in files, got {len(args.inputs)}")
    return io.load_matrix(args.inputs[0]), io.load_matrix(args.inputs[1])


def _one(args) -> np.ndarray:
    if len(args.inputs) != 1:
        raise InvalidInputError(f"{args.command} needs exactly one --in file, got {len(args.inputs)}")
    return io.load_matrix(args.inputs[0])


def _cmd_project(args, tol):
    X = as_config(_one(args))
    return io.matrix_to_json_obj(iota(X, tol)), EXIT_OK


def _cmd_act(args, tol):
    A = as_config(_one(args))
    g, d = io.transform_from_json_obj(io.load_json(args.transform))
    cls = RestrictedTransform if args.restricted else FullTransform
    return io.matrix_to_json_obj(act(cls(g, d), A)), EXIT_OK


def _cmd_equiv(args, tol):
    P, Q = _two(args)
    if args.command == "recover":
        P, Q = iota(as_config(P), tol), iota(as_config(Q), tol)
    decision = recover_transform(P, Q, tol)
    return decision.to_json_obj(), EXIT_CODES[decision.status]


def _cmd_degen(args, tol):
    report = degeneracy_check(*_two(args), tol)
    return report, EXIT_OK if report["rank4_ok"] else EXIT_DEGENERATE


def _cmd_nonfree(args, tol):
    if args.inputs:
        A = as_config(_one(args))
    else:
        A = random_config(args.n, seed=args.seed, cls="M", tol=tol)
    report = scalar_stabilizer_check(args.lam, A, tol)
    return report, EXIT_OK if report["holds"] else EXIT_NEGATIVE


def _cmd_nonproper(args, tol):
    p = np.array(args.p if args.p is not None else [0.0, 1.0, 0.0, 0.0])
    if args.g is not None:
        obj = io.load_json(args.g)
        if not isinstance(obj, dict) or not isinstance(obj.get("g"), list) or len(obj["g"]) != 16:
            raise InvalidInputError('g file must hold {"g": [16 numbers]}')
        gs = [np.array([io.finite_number(v, "g") for v in obj["g"]]).reshape(4, 4)]
    else:
        gs = [np.diag([t, 1.0, 1.0, 1.0]) for t in (args.t or [10.0, 100.0, 1000.0])]
    witnesses = [nonproper_witness(g, p, tol) for g in gs]
    ok = all(w.orthonormality_residual < 1e-12 and w.last_column_residual < 1e-12 for w in witnesses)
    return {"witnesses": [w.to_json_obj() for w in witnesses], "in_K": ok}, EXIT_OK if ok else EXIT_NEGATIVE


def _cmd_paper_example(args, tol):
    report = paper_example_report(args.alpha, args.beta, args.gamma, args.delta, tol)
    return report, EXIT_OK if report["holds"] else EXIT_NEGATIVE


def _cmd_consistency(args, tol):
    S = cons.FiniteStructure.from_json_obj(io.load_json(args.structure))
    if args.rep:
        reps = [cons.RepresentationMap.from_json_obj(io.load_json(path), S) for path in args.rep]
        report = {"representations_valid": [cons.is_representation(r, S, S) for r in reps],
                  **cons.pairwise_consistent(reps)}
        return report, EXIT_OK if report["consistent"] else EXIT_NEGATIVE
    report = cons.theorem_report(S)
    return report, EXIT_OK if report["theorem_respected"] else EXIT_NEGATIVE


def _cmd_suite(args, tol):
    results = run_all(seed=args.seed)
    print(format_table(results), file=sys.stderr)
    passed = all(r.passed for r in results)
    return {"passed": passed, "seed": args.seed, "checks": [r.to_json_obj() for r in results]}, \
        EXIT_OK if passed else EXIT_NEGATIVE


COMMANDS = {
    "project": _cmd_project,
    "act": _cmd_act,
    "recover": _cmd_equiv,
    "equiv": _cmd_equiv,
    "degen": _cmd_degen,
    "demo-nonfree": _cmd_nonfree,
    "demo-nonproper": _cmd_nonproper,
    "demo-paper-example": _cmd_paper_example,
    "consistency": _cmd_consistency,
    "suite": _cmd_suite,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.seed is None:
            args.seed = _default_seed()
        result, code = COMMANDS[args.command](args, _tol(args))
        text = io.dumps(result)
        if args.out is not None:
            args.out.write_text(text + "\n")
    except InvalidInputError as exc:
        print(f"stereoshape: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001
        print(f"stereoshape: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
