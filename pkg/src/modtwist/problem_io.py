"""
JSON problem files and verdict reports.

A problem file looks like::

    {
      "task": "descent",            # or "thm2"
      "name": "s3_diag12_p7",        # optional
      "p": 7,
      "v": 3,                        # optional, defaults to the least nonresidue
      "group": {"perm_gens": [[1, 2, 0], [1, 0, 2]]},   # or {"cayley": [[...], ...]}
      "subgroup_gens": [1],
      "epsilon": [1, -1, ...],       # sign of each element of G
      "rho": {"0": [1, 0, 0, 1], ...},   # element index -> row-major matrix
      "epsilon_p": [1, 6, ...],      # thm2 only: residues of each element
      "tau": 1                       # thm2 only
    }

For ``descent`` the rho matrices are canonical projective representatives;
for ``thm2`` they are genuine GL2 matrices.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Union

from . import fp_linalg as fl
from .cohomology import Cocycle
from .elliptic import Thm2Problem, Thm2Witness
from .errors import DescentError, GroupTableError, ProblemFormatError
from .groups import build_group, subgroup_closure
from .reps import DescentProblem, LinRep, ProjRep, verify_proj_rep

KNOWN_FIELDS = {"task", "name", "p", "v", "group", "subgroup_gens", "epsilon", "rho", "epsilon_p", "tau"}
TASKS = ("descent", "thm2")


def _int(value, path):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ProblemFormatError(f"expected an integer, got {value!r}", path)
    return value


def _int_list(value, path):
    if not isinstance(value, list):
        raise ProblemFormatError("expected a list", path)
    return [_int(x, f"{path}[{i}]") for i, x in enumerate(value)]


def problem_from_dict(data: dict) -> Union[DescentProblem, Thm2Problem]:
    if not isinstance(data, dict):
        raise ProblemFormatError("top level must be an object")
    unknown = sorted(set(data) - KNOWN_FIELDS)
    if unknown:
        raise ProblemFormatError(f"unknown field(s) {unknown}")
    task = data.get("task", "descent")
    if task not in TASKS:
        raise ProblemFormatError(f"task must be one of {TASKS}, got {task!r}", "task")
    for key in ("p", "group", "subgroup_gens", "epsilon", "rho"):
        if key not in data:
            raise ProblemFormatError("missing required field", key)
    p = _int(data["p"], "p")
    try:
        fl.check_prime(p)
    except DescentError as e:
        raise ProblemFormatError(str(e), "p") from None
    name = data.get("name", "")
    if not isinstance(name, str):
        raise ProblemFormatError("expected a string", "name")

    if not isinstance(data["group"], dict):
        raise ProblemFormatError("expected an object", "group")
    extra = set(data["group"]) - {"cayley", "perm_gens"}
    if extra:
        raise ProblemFormatError(f"unknown field(s) {sorted(extra)}", "group")
    try:
        G = build_group(data["group"])
    except (GroupTableError, TypeError, ValueError) as e:
        raise ProblemFormatError(str(e), "group") from None

    gens = _int_list(data["subgroup_gens"], "subgroup_gens")
    for i, g in enumerate(gens):
        if not 0 <= g < G.n:
            raise ProblemFormatError(f"element {g} out of range", f"subgroup_gens[{i}]")
    H = subgroup_closure(G, gens)

    eps = _int_list(data["epsilon"], "epsilon")
    if len(eps) != G.n:
        raise ProblemFormatError(f"expected {G.n} values, got {len(eps)}", "epsilon")
    for i, s in enumerate(eps):
        if s not in (1, -1):
            raise ProblemFormatError("sign must be +1 or -1", f"epsilon[{i}]")
    for x in range(G.n):
        for y in range(G.n):
            if eps[G.table[x][y]] != eps[x] * eps[y]:
                raise ProblemFormatError(f"not multiplicative on the pair ({x}, {y})", "epsilon")

    rho_raw = data["rho"]
    if not isinstance(rho_raw, dict):
        raise ProblemFormatError("expected an object keyed by element index", "rho")
    images = {}
    for key, m in rho_raw.items():
        path = f"rho.{key}"
        try:
            x = int(key)
        except ValueError:
            raise ProblemFormatError("key is not an element index", path) from None
        if x not in H:
            raise ProblemFormatError(f"element {x} is not in the subgroup H", path)
        m = _int_list(m, path)
        if len(m) != 4:
            raise ProblemFormatError("a matrix needs 4 entries", path)
        if any(not 0 <= e < p for e in m):
            raise ProblemFormatError(f"entries must lie in [0, {p})", path)
        if fl.det(tuple(m), p) == 0:
            raise ProblemFormatError("singular matrix", path)
        images[x] = tuple(m)
    missing = [x for x in H.members if x not in images]
    if missing:
        raise ProblemFormatError(f"no image for element(s) {missing}", "rho")

    v = data.get("v")
    if v is not None:
        v = _int(v, "v")
        if v % p == 0 or fl.legendre_class(v, p) is not fl.DetClass.NONSQUARE:
            raise ProblemFormatError(f"v = {v} is not a quadratic nonresidue mod {p}", "v")

    if task == "descent":
        for key in ("epsilon_p", "tau"):
            if key in data:
                raise ProblemFormatError("only allowed for task thm2", key)
        for x, m in images.items():
            if fl.canonical(m, p) != m:
                raise ProblemFormatError("projective images must be canonical representatives",
                                         f"rho.{x}")
        try:
            problem = DescentProblem(G, H, tuple(eps), ProjRep(H, images, p), p, v, name)
        except DescentError as e:
            raise ProblemFormatError(str(e)) from None
        bad = verify_proj_rep(problem)
        if bad:
            raise ProblemFormatError(str(bad), "rho")
        return problem

    for key in ("epsilon_p", "tau"):
        if key not in data:
            raise ProblemFormatError("required for task thm2", key)
    eps_p = _int_list(data["epsilon_p"], "epsilon_p")
    if len(eps_p) != G.n:
        raise ProblemFormatError(f"expected {G.n} values, got {len(eps_p)}", "epsilon_p")
    for i, e in enumerate(eps_p):
        if not 0 < e < p:
            raise ProblemFormatError(f"residue must lie in [1, {p})", f"epsilon_p[{i}]")
        if fl.legendre_class(e, p).sign != eps[i]:
            raise ProblemFormatError("square class of epsilon_p disagrees with epsilon", f"epsilon_p[{i}]")
    tau = _int(data["tau"], "tau")
    try:
        problem = Thm2Problem(G, H, tau, LinRep(H, images, p), tuple(eps_p), p, v, name)
        problem.projectivize()
    except DescentError as e:
        raise ProblemFormatError(str(e)) from None
    return problem


def parse_problem(path) -> Union[DescentProblem, Thm2Problem]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ProblemFormatError(f"cannot read problem file: {e}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemFormatError(f"malformed JSON: {e}") from None
    return problem_from_dict(data)


def matrix_json(m) -> list:
    return [int(x) for x in m]


def table_json(images: dict) -> dict:
    return {str(x): matrix_json(images[x]) for x in sorted(images)}


def problem_to_dict(problem: Union[DescentProblem, Thm2Problem]) -> dict:
    out = {"task": "thm2" if isinstance(problem, Thm2Problem) else "descent"}
    if problem.name:
        out["name"] = problem.name
    out["p"] = problem.p
    out["v"] = problem.v
    out["group"] = {"cayley": [list(row) for row in problem.G.table]}
    out["subgroup_gens"] = list(problem.H.generators)
    out["epsilon"] = list(problem.eps)
    out["rho"] = table_json(problem.rho.images)
    if isinstance(problem, Thm2Problem):
        out["epsilon_p"] = list(problem.eps_p)
        out["tau"] = problem.tau
    return out


def emit_problem(problem, path) -> None:
    Path(path).write_text(dumps(problem_to_dict(problem)))


_NUM_LIST = re.compile(r"\[\s*(-?\d+(?:,\s*-?\d+)*)\s*\]")


def dumps(obj) -> str:
    """Indented JSON with flat integer lists (matrices, table rows) kept on one line."""
    text = json.dumps(obj, indent=2)
    return _NUM_LIST.sub(lambda m: "[" + ", ".join(re.split(r",\s*", m.group(1))) + "]", text) + "\n"


def to_jsonable(obj):
    """Serialize witnesses: reps and cocycles become element -> matrix maps."""
    if isinstance(obj, ProjRep) or isinstance(obj, LinRep):
        return table_json(obj.images)
    if isinstance(obj, Cocycle):
        return {"values": table_json(obj.values), "epsilon": list(obj.action.eps),
                "V": matrix_json(obj.action.V)}
    if isinstance(obj, Thm2Witness):
        return {"h": matrix_json(obj.h), "chi": {str(s): c for s, c in obj.chi}, "lambda": obj.lam}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, tuple) and len(obj) == 4 and all(isinstance(x, int) for x in obj):
        return matrix_json(obj)
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if hasattr(obj, "value") and hasattr(obj, "name"):
        return obj.value
    return obj


def verdict_json(verdict) -> dict:
    out = {
        "defined_over_Q": verdict.defined_over_Q,
        "route": verdict.route,
        "witness": to_jsonable(verdict.witness) if verdict.witness else {},
        "certificate": to_jsonable(verdict.certificate) if verdict.certificate else {},
    }
    if verdict.notes:
        out["notes"] = list(verdict.notes)
    return out


GROUP_FIELDS = {"name", "group", "subgroup_gens", "epsilon"}


def group_setup_from_dict(data: dict):
    """
    Survey input: ``group``, ``subgroup_gens`` and ``epsilon`` as in a problem
    file, without rho.  Returns (name, G, H, eps).
    """
    if not isinstance(data, dict):
        raise ProblemFormatError("top level must be an object")
    unknown = sorted(set(data) - GROUP_FIELDS)
    if unknown:
        raise ProblemFormatError(f"unknown field(s) {unknown}")
    for key in ("group", "subgroup_gens", "epsilon"):
        if key not in data:
            raise ProblemFormatError("missing required field", key)
    try:
        G = build_group(data["group"])
    except (GroupTableError, TypeError, ValueError, KeyError) as e:
        raise ProblemFormatError(str(e), "group") from None
    gens = _int_list(data["subgroup_gens"], "subgroup_gens")
    for i, g in enumerate(gens):
        if not 0 <= g < G.n:
            raise ProblemFormatError(f"element {g} out of range", f"subgroup_gens[{i}]")
    eps = _int_list(data["epsilon"], "epsilon")
    if len(eps) != G.n:
        raise ProblemFormatError(f"expected {G.n} values, got {len(eps)}", "epsilon")
    for i, s in enumerate(eps):
        if s not in (1, -1):
            raise ProblemFormatError("sign must be +1 or -1", f"epsilon[{i}]")
    for x in range(G.n):
        for y in range(G.n):
            if eps[G.table[x][y]] != eps[x] * eps[y]:
                raise ProblemFormatError(f"not multiplicative on the pair ({x}, {y})", "epsilon")
    if all(s == 1 for s in eps):
        raise ProblemFormatError("epsilon must be nontrivial", "epsilon")
    name = data.get("name", "")
    if not isinstance(name, str):
        raise ProblemFormatError("expected a string", "name")
    return name, G, subgroup_closure(G, gens), tuple(eps)


def parse_group_file(path):
    try:
        data = json.loads(Path(path).read_text())
    except OSError as e:
        raise ProblemFormatError(f"cannot read group file: {e}") from None
    except json.JSONDecodeError as e:
        raise ProblemFormatError(f"malformed JSON: {e}") from None
    return group_setup_from_dict(data)
