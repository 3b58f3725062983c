"""Command line entry point: ``modtwist <subcommand> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import fp_linalg as fl
from .corpus import write_corpus
from .descent import cross_validate, decide
from .elliptic import Thm2Problem, classify_iq, lift_witness, pgl_criterion, thm2_search
from .errors import DescentError, RouteDisagreement, SearchCapExceeded
from .problem_io import dumps, matrix_json, parse_group_file, parse_problem, to_jsonable, verdict_json

EXIT_OK, EXIT_ERROR, EXIT_REFUSED = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _descent_problem(path):
    prob = parse_problem(path)
    return prob.projectivize() if isinstance(prob, Thm2Problem) else prob


def _thm2_problem(path) -> Thm2Problem:
    prob = parse_problem(path)
    if not isinstance(prob, Thm2Problem):
        raise DescentError(f"{path}: expected a problem with task thm2")
    return prob


def cmd_check(args, out) -> int:
    prob = _descent_problem(args.file)
    verdict = decide(prob)
    report = {"problem": prob.name, "p": prob.p, "v": prob.v}
    report.update(verdict_json(verdict))
    out.write(dumps(report))
    return EXIT_OK


def _problem_files(target):
    path = Path(target)
    if path.is_dir():
        return sorted(path.glob("*.json"))
    return [path]


def cmd_verify(args, out) -> int:
    rows = []
    for path in _problem_files(args.target):
        prob = parse_problem(path)
        if isinstance(prob, Thm2Problem):
            prob = prob.projectivize()
        report = cross_validate(prob, all_cp=args.all_cp)
        rows.append({
            "file": path.name,
            "problem": prob.name,
            "p": prob.p,
            "defined_over_Q": report["defined_over_Q"],
            "verdicts": report["verdicts"],
            "refused": sorted(report["refused"]),
            "corollary": report["corollary"],
        })
    out.write(dumps({"agree": True, "problems": len(rows), "results": rows}))
    return EXIT_OK


def cmd_thm2(args, out) -> int:
    prob = _thm2_problem(args.file)
    w = thm2_search(prob)
    g = pgl_criterion(prob)
    report = {"problem": prob.name, "p": prob.p, "tau": prob.tau, "d": prob.d,
              "witness": to_jsonable(w) if w else None,
              "pgl_g": matrix_json(g) if g else None}
    if g is not None:
        report["lift"] = matrix_json(lift_witness(g, prob.eps_p[prob.tau], prob.p))
    report["agree"] = (w is None) == (g is None)
    out.write(dumps(report))
    return EXIT_OK if report["agree"] else EXIT_ERROR


def cmd_classify(args, out) -> int:
    prob = _thm2_problem(args.file)
    w = thm2_search(prob)
    report = {"problem": prob.name, "p": prob.p}
    if w is None:
        report.update({"witness": None, "class": None})
    else:
        report.update({"witness": to_jsonable(w), "class": str(classify_iq(prob, w))})
    if prob.p % 4 == 3:
        report["note"] = "p = 3 mod 4: -1 is not a square, so h^2 = -I is impossible"
    out.write(dumps(report))
    return EXIT_OK


def cmd_survey(args, out) -> int:
    from .survey import survey, survey_tsv
    name, G, H, eps = parse_group_file(args.group)
    fl.check_prime(args.p)
    rows = survey(G, H, eps, args.p)
    header = f"{name or Path(args.group).stem} |G|={G.n} |H|={H.order} p={args.p}"
    out.write(survey_tsv(rows, header))
    if args.figure:
        from .plotting import survey_figure
        survey_figure(rows, args.figure, title=header)
    return EXIT_OK


def cmd_corpus(args, out) -> int:
    paths = write_corpus(args.out)
    for path in paths:
        out.write(f"{path.name}\n")
    out.write(f"# {len(paths)} problem files written to {args.out}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="modtwist", description="Descent of twisted modular curves over Q")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("check", help="decide one problem")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify", help="cross-validate every route on a file or directory")
    p.add_argument("target")
    p.add_argument("--all-cp", action="store_true", help="rerun the c_p route for every admissible choice")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("thm2", help="GL2 witness search and its PGL2 counterpart")
    p.add_argument("file")
    p.set_defaults(func=cmd_thm2)

    p = sub.add_parser("classify", help="classify the witness of an imaginary quadratic case")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("survey", help="tabulate descent over all representations up to conjugacy")
    p.add_argument("--group", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--figure", help="also write a bar chart to this path")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("corpus", help="write the synthetic corpus")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args, out)
    except SearchCapExceeded as e:
        err.write(f"refused: {e}\n")
        return EXIT_REFUSED
    except RouteDisagreement as e:
        err.write(f"error: {e}\n")
        out.write(dumps({"agree": False, "verdicts": (e.report or {}).get("verdicts", {})}))
        return EXIT_ERROR
    except DescentError as e:
        err.write(f"error: {e}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
