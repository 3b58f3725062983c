"""
Deciding whether the twist attached to a DescentProblem descends to Q.

Four independent routes are available:

* ``solve_theorem1``: search for an extension R of rho to G with det class eps.
* ``solve_cyclic``: when G/H is cyclic, look for a strongly compatible g_tau.
* ``solve_via_props``: the conjugation criteria on the kernel N of eps
  (c_p in H when eps is nontrivial on H, an extra g outside PSL2 otherwise).
* ``solve_oracle``: brute-force extension of the cocycle xi from H to G.

All verdicts are relative to the declared finite quotient G.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

from . import fp_linalg as fl
from .cohomology import (Cocycle, TwistedAction, build_x, cocycle_extension_search, prop3_check,
                         prop3_holds, prop4_check, prop4_holds, prop4_x_p, verify_cocycle,
                         xi_from_rep)
from .errors import ContractError, RouteDisagreement, SearchCapExceeded
from .groups import Subgroup, Violation, cyclic_quotient_data
from .reps import (DescentProblem, Mode, ProjRep, compatibility_witnesses, corollary_descent,
                   invariance_witnesses, iter_extensions, lemma1_extend, plan_extension,
                   verify_proj_rep)

THM1 = "Thm1Direct"
CYCLIC = "CyclicLemma1"
PROP3 = "Prop3"
PROP4 = "Prop4"
ORACLE = "Oracle"

DEFAULT_MAX_NODES = 10**8


def search_cap() -> int:
    raw = os.environ.get("DESCENT_MAX_NODES")
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_NODES
    try:
        cap = int(raw.strip(), 10)
    except ValueError:
        raise ContractError(f"DESCENT_MAX_NODES must be a decimal integer, got {raw!r}")
    if cap < 0:
        raise ContractError("DESCENT_MAX_NODES must be nonnegative")
    return cap


@dataclass
class DescentVerdict:
    defined_over_Q: bool
    route: str
    witness: Optional[dict] = None
    certificate: Optional[dict] = None
    notes: list = field(default_factory=list)


def _require_cyclotomic(problem: DescentProblem):
    bad = verify_proj_rep(problem)
    if bad is not None:
        raise ContractError(f"rho fails the cyclotomic determinant check: {bad}")


def _quotient_note(problem: DescentProblem) -> str:
    if cyclic_quotient_data(problem.G, problem.H) is not None:
        return "quotient-complete: G/H is cyclic, so any extension factors through G"
    return "quotient-relative: only extensions factoring through the declared G were searched"


def solve_theorem1(problem: DescentProblem, cap: Optional[int] = None) -> DescentVerdict:
    _require_cyclotomic(problem)
    cap = search_cap() if cap is None else cap
    G, p = problem.G, problem.p
    plan = plan_extension(problem.H, G.whole, p, det_sign=problem.eps)
    estimate = plan.estimate()
    if estimate > cap:
        raise SearchCapExceeded(f"direct search space {estimate} exceeds the cap {cap}",
                                estimate=estimate, cap=cap)
    counter: dict = {}
    for images in iter_extensions(problem.H, problem.rho.images, G.whole, p,
                                  det_sign=problem.eps, counter=counter, plan=plan):
        R = ProjRep(G.whole, images, p)
        return DescentVerdict(True, THM1, {"extension": R},
                              {"nodes_visited": counter["nodes"], "search_space": estimate})
    return DescentVerdict(False, THM1, None, {
        "new_generators": list(plan.new_gens),
        "candidates_per_level": plan.level_sizes,
        "search_space": estimate,
        "nodes_visited": counter.get("nodes", 0),
    }, [_quotient_note(problem)])


def cyclic_census(problem: DescentProblem, tau: int, d: int) -> dict:
    """Sizes of the four witness sets for the quotient generator tau."""
    return {
        "tau": tau,
        "d": d,
        "scanned": len(fl.enumerate_projective(problem.p)),
        Mode.PLAIN.value: len(invariance_witnesses(problem, tau, Mode.PLAIN)),
        Mode.STRONG.value: len(invariance_witnesses(problem, tau, Mode.STRONG)),
        Mode.COMPATIBLE.value: len(compatibility_witnesses(problem, tau, d, Mode.COMPATIBLE)),
        Mode.STRONGLY_COMPATIBLE.value: len(compatibility_witnesses(problem, tau, d,
                                                                    Mode.STRONGLY_COMPATIBLE)),
    }


def solve_cyclic(problem: DescentProblem) -> Optional[DescentVerdict]:
    """None when G/H is not cyclic (route not applicable)."""
    _require_cyclotomic(problem)
    data = cyclic_quotient_data(problem.G, problem.H)
    if data is None:
        return None
    tau, d = data
    census = cyclic_census(problem, tau, d)
    strong = compatibility_witnesses(problem, tau, d, Mode.STRONGLY_COMPATIBLE)
    if strong:
        g = strong[0]
        R = lemma1_extend(problem.rho, tau, g, d)
        return DescentVerdict(True, CYCLIC, {"tau": tau, "d": d, "g_tau": g, "extension": R}, census)
    notes = []
    if census[Mode.COMPATIBLE.value]:
        notes.append("rho extends to G, but no extension has cyclotomic determinant")
    return DescentVerdict(False, CYCLIC, None, census, notes)


def admissible_cp(problem: DescentProblem) -> list:
    """Choices of c: in H with eps = -1 when eps|H is nontrivial, else anywhere with eps = -1."""
    pool = problem.H.members if not problem.eps_trivial_on_H else range(problem.G.n)
    return [c for c in pool if problem.eps[c] == -1]


def _rbar_candidates(problem: DescentProblem, base: Subgroup):
    N = problem.N
    return iter_extensions(base, {x: problem.rho(x) for x in base.members}, N, problem.p,
                           det_sign={x: 1 for x in N.members})


def solve_via_props(problem: DescentProblem, c: Optional[int] = None) -> DescentVerdict:
    _require_cyclotomic(problem)
    choices = admissible_cp(problem)
    if c is None:
        c = choices[0]
    elif c not in choices:
        raise ContractError(f"c = {c} is not an admissible choice")
    N, p = problem.N, problem.p
    tried = 0
    if not problem.eps_trivial_on_H:
        for images in _rbar_candidates(problem, problem.H_cap_N):
            tried += 1
            rbar = ProjRep(N, images, p)
            if prop3_holds(problem, rbar, c):
                return DescentVerdict(True, PROP3, {"rbar": rbar, "c_p": c}, {"rbar_tried": tried})
        return DescentVerdict(False, PROP3, None, {"c_p": c, "rbar_tried": tried},
                              [_quotient_note(problem)])
    outside = fl.enumerate_projective(p, "PGL-PSL")
    for images in _rbar_candidates(problem, problem.H):
        tried += 1
        rbar = ProjRep(N, images, p)
        for g in outside:
            if prop4_holds(problem, rbar, g, c):
                return DescentVerdict(True, PROP4, {"rbar": rbar, "g": g, "c": c}, {"rbar_tried": tried})
    return DescentVerdict(False, PROP4, None,
                          {"c": c, "rbar_tried": tried, "g_scanned_per_rbar": len(outside)},
                          [_quotient_note(problem)])


def solve_oracle(problem: DescentProblem) -> DescentVerdict:
    xi = xi_from_rep(problem)
    x = cocycle_extension_search(xi)
    index = problem.G.n // problem.H.order
    if x is None:
        return DescentVerdict(False, ORACLE, None, {
            "index": index, "values_per_coset_rep": len(fl.enumerate_projective(problem.p, "PSL"))})
    return DescentVerdict(True, ORACLE, {"cocycle": x}, {"index": index})


def decide(problem: DescentProblem) -> DescentVerdict:
    """Production path: cyclic route when applicable, else the direct search, else the props."""
    verdict = solve_cyclic(problem)
    if verdict is not None:
        return verdict
    try:
        return solve_theorem1(problem)
    except SearchCapExceeded:
        return solve_via_props(problem)


def extension_problem(problem: DescentProblem, R: ProjRep) -> DescentProblem:
    return DescentProblem(problem.G, problem.G.whole, problem.eps, R, problem.p, problem.v)


def check_witness(problem: DescentProblem, verdict: DescentVerdict) -> Optional[Violation]:
    """Re-verify a yes-verdict's witness with the checker for its route."""
    if not verdict.defined_over_Q:
        return None
    w = verdict.witness or {}
    if verdict.route in (THM1, CYCLIC):
        R = w["extension"]
        bad = verify_proj_rep(extension_problem(problem, R))
        if bad:
            return bad
        if R.restrict(problem.H) != problem.rho:
            return Violation("extension does not restrict to rho")
        if verdict.route == CYCLIC and R(w["tau"]) != w["g_tau"]:
            return Violation("extension does not send tau to g_tau")
        return None
    if verdict.route == PROP3:
        return None if prop3_check(problem, w["rbar"], w["c_p"]) else Violation("prop3 witness fails")
    if verdict.route == PROP4:
        if not prop4_check(problem, w["rbar"], w["g"], w["c"]):
            return Violation("prop4 witness fails")
        x, bad = build_x(w["rbar"], prop4_x_p(w["g"], problem.V, problem.p), w["c"],
                         TwistedAction.for_problem(problem))
        if bad:
            return bad
        if x.restrict(problem.H).values != xi_from_rep(problem).values:
            return Violation("cocycle built from the prop4 witness does not extend xi")
        return None
    if verdict.route == ORACLE:
        x: Cocycle = w["cocycle"]
        bad = verify_cocycle(x)
        if bad:
            return bad
        if x.restrict(problem.H).values != xi_from_rep(problem).values:
            return Violation("oracle cocycle does not extend xi")
        return None
    raise ContractError(f"unknown route {verdict.route}")


def cross_validate(problem: DescentProblem, all_cp: bool = False, cap: Optional[int] = None) -> dict:
    """
    Run every applicable route (and the oracle when within its cap), check
    each witness, and raise ``RouteDisagreement`` unless all verdicts agree.
    With ``all_cp`` the prop route is rerun for every admissible c.
    """
    verdicts: dict = {}
    refused: dict = {}
    try:
        verdicts[THM1] = solve_theorem1(problem, cap)
    except SearchCapExceeded as e:
        refused[THM1] = str(e)
    cyc = solve_cyclic(problem)
    if cyc is not None:
        verdicts[CYCLIC] = cyc
    choices = admissible_cp(problem) if all_cp else admissible_cp(problem)[:1]
    for c in choices:
        v = solve_via_props(problem, c)
        verdicts[f"{v.route}[c={c}]"] = v
    try:
        verdicts[ORACLE] = solve_oracle(problem)
    except SearchCapExceeded as e:
        refused[ORACLE] = str(e)
    corollary = corollary_descent(problem) if problem.H.is_normal() else None

    report = {
        "problem": problem.name,
        "p": problem.p,
        "v": problem.v,
        "verdicts": {k: v.defined_over_Q for k, v in verdicts.items()},
        "refused": refused,
        "corollary": corollary,
        "results": verdicts,
    }
    answers = set(report["verdicts"].values())
    if len(answers) > 1:
        raise RouteDisagreement(f"routes disagree on {problem.name or 'problem'}: {report['verdicts']}",
                                report)
    if corollary is True and answers == {False}:
        raise RouteDisagreement("the irreducible-and-strongly-invariant shortcut says yes, routes say no",
                                report)
    for name, v in verdicts.items():
        bad = check_witness(problem, v)
        if bad is not None:
            raise RouteDisagreement(f"{name} witness fails re-verification: {bad}", report)
    report["defined_over_Q"] = answers.pop() if answers else None
    report["agree"] = True
    return report
