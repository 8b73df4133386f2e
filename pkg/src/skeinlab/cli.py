"""``skeinlab`` command-line entry point.

Every command writes one JSON document (sorted keys) to stdout or ``--output``.
Exit status: 0 success, 1 bad input, 2 internal invariant violated,
3 at least one acceptance check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import classify as C
from . import diagram as dg
from . import link as L
from . import reptheory as R
from . import spin as S
from . import trivalent as T
from .ring import PoleEncountered, RingParseError, as_ratfunc, eval_complex

EVAL_TOL = 1e-9


class UsageError(ValueError):
    pass


def _bindings(pairs) -> dict:
    out = {}
    for item in pairs or ():
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"--eval expects var=value, got {item!r}")
        try:
            out[name.strip()] = complex(value.strip().replace("i", "j"))
        except ValueError as exc:
            raise UsageError(f"cannot read {value!r} as a complex number") from exc
    return out


def _complex_str(z: complex) -> str:
    re_, im = (0.0 if abs(z.real) < EVAL_TOL else z.real), (0.0 if abs(z.imag) < EVAL_TOL else z.imag)
    return f"{re_:.12g}{im:+.12g}j"


def _diagram(args):
    if bool(args.gauss) == bool(args.pd):
        raise UsageError("give exactly one of --gauss or --pd")
    return L.parse_gauss(args.gauss) if args.gauss else L.parse_pd(args.pd)


def cmd_state_sum(args) -> dict:
    diag = _diagram(args)
    res = L.bracket(diag) if args.command == "bracket" else L.o2_invariant(diag)
    out = {"input": {"gauss": args.gauss, "pd": args.pd}, **res.as_dict()}
    if args.command == "o2":
        out["closed_form"] = str(L.o2_closed_form(res.writhe))
    bind = _bindings(args.eval)
    if bind:
        out["eval"] = {
            "bindings": {k: _complex_str(v) for k, v in sorted(bind.items())},
            "tolerance": EVAL_TOL,
            "raw": _complex_str(eval_complex(res.raw, bind, EVAL_TOL)),
            "normalized": _complex_str(eval_complex(res.normalized, bind, EVAL_TOL)),
        }
    return out


def cmd_classify(args) -> dict:
    rep = C.report(args.case)
    if args.report:
        Path(args.report).write_text(json.dumps(rep, sort_keys=True, indent=2) + "\n")
    return rep


def cmd_gram(args) -> dict:
    if args.points % 2 or args.points < 2:
        raise UsageError("--points must be a positive even number")
    d = as_ratfunc(args.d)
    basis = dg.box_basis(args.points // 2)
    G = dg.gram_matrix(basis, d)
    null = dg.negligible_vectors(basis, d, G)
    return {
        "points": args.points,
        "d": str(d),
        "basis": [str(m) for m in basis],
        "rank": dg.rank(G),
        "null_space": [json.loads(v.to_json()) for v in null],
    }


def cmd_decompose(args) -> dict:
    mult = R.decompose_matching_rep(6)
    return {
        "multiplicities": {",".join(map(str, p)): m for p, m in mult.items()},
        "traces": {",".join(map(str, p)): R.matching_action_trace(p) for p in mult},
        "orthogonality": R.orthogonality_holds(6),
    }


def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def cmd_st_eval(args) -> dict:
    g = T.TrivalentGraph.from_json(_load_json(args.graph))
    params = T.TrivalentParams(args.t if args.t is not None else "t")
    out = {"graph": g.to_json(), "t": str(params.t), "value": str(T.evaluate_closed(g, params))}
    if args.oracle:
        if args.t is None:
            raise UsageError("--oracle needs an integer --t")
        oracle = T.tensor_oracle(int(args.t), g)
        out["oracle"] = str(oracle)
        out["oracle_agrees"] = as_ratfunc(oracle) == as_ratfunc(out["value"])
    return out


def cmd_st_braiding(args) -> dict:
    X = T.so3q_crossing(eps=args.perturb, tree=args.tree)
    rep = T.verify_braiding(X)
    rep["crossing"] = {"tree": args.tree, "perturb": str(as_ratfunc(args.perturb))}
    return rep


def cmd_spin(args) -> dict:
    tangle = S.ShadedTangleSpec.from_json(_load_json(args.tangle))
    inputs = [S.LoopFunctional.from_json(_load_json(p)) for p in args.inputs.split(",") if p] if args.inputs else []
    f = S.action1(tangle, inputs, n=args.n)
    return json.loads(f.to_json())


def cmd_suite(args) -> dict:
    from .acceptance import run_all

    checks = run_all(args.seed)
    for c in checks:
        print(c.line(), file=sys.stderr)
    return {
        "seed": args.seed,
        "checks": [{"number": c.number, "title": c.title, "passed": c.passed, "summary": c.summary} for c in checks],
        "passed": sum(c.passed for c in checks),
        "total": len(checks),
    }


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="skeinlab", description="Exact skein-theory computations.")
    p.add_argument("--output", help="write the JSON report here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    for name in ("bracket", "o2"):
        s = sub.add_parser(name, help=f"{name} state sum of a virtual link diagram")
        s.add_argument("--gauss")
        s.add_argument("--pd")
        s.add_argument("--eval", action="append", metavar="VAR=VALUE", help="numeric side report")
        s.set_defaults(func=cmd_state_sum)

    s = sub.add_parser("classify", help="constraint systems and family residuals")
    s.add_argument("--case", choices=("unoriented", "oriented"), default="unoriented")
    s.add_argument("--report")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("gram", help="Gram matrix rank and null space on matchings")
    s.add_argument("--points", type=int, required=True)
    s.add_argument("--d", default="d")
    s.set_defaults(func=cmd_gram)

    s = sub.add_parser("decompose-s6", help="S6 multiplicities on 6-point matchings")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("st-eval", help="evaluate a closed trivalent graph")
    s.add_argument("--graph", required=True)
    s.add_argument("--t", type=int)
    s.add_argument("--oracle", action="store_true")
    s.set_defaults(func=cmd_st_eval)

    s = sub.add_parser("st-braiding", help="check the SO(3)_q crossing")
    s.add_argument("--tree", choices=("I", "H"), default="I")
    s.add_argument("--perturb", default="0")
    s.set_defaults(func=cmd_st_braiding)

    s = sub.add_parser("spin", help="apply a shaded tangle to loop functionals")
    s.add_argument("--tangle", required=True)
    s.add_argument("--inputs", default="")
    s.add_argument("--n", type=int)
    s.set_defaults(func=cmd_spin)

    s = sub.add_parser("suite", help="run the acceptance checks")
    s.add_argument("--seed", type=int, default=7)
    s.set_defaults(func=cmd_suite)
    return p


_INPUT_ERRORS = (
    UsageError, L.ParseError, L.InconsistentCode, RingParseError, PoleEncountered,
    S.ArityMismatch, S.ShadingInconsistent, T.NonClosedGraph, T.NonCubicGraph,
    T.BoundaryTooLarge, C.UnsupportedRelation, dg.BoundaryMismatch, KeyError,
)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (T.TerminationViolation, ArithmeticError, AssertionError) as exc:
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    if args.command == "suite" and report["passed"] != report["total"]:
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
