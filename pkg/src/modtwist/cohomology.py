"""
Nonabelian 1-cocycles with values in PSL2(F_p), where G acts through the
quadratic character eps: elements with eps = -1 act by conjugation with V,
the rest act trivially.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional

from . import fp_linalg as fl
from .errors import ContractError, SearchCapExceeded
from .fp_linalg import DetClass, Mat2
from .groups import Subgroup, Violation
from .reps import IDENTITY, DescentProblem, ProjRep, verify_proj_rep

MAX_ORACLE_INDEX = 4


@dataclass(frozen=True)
class TwistedAction:
    eps: tuple
    V: Mat2
    p: int

    def act(self, s: int, x: Mat2) -> Mat2:
        if self.eps[s] == 1:
            return x
        V = self.V
        # V^2 is scalar, so V^-1 = V projectively
        return fl.pgl_mul(fl.pgl_mul(V, x, self.p), V, self.p)

    @classmethod
    def for_problem(cls, problem: DescentProblem) -> "TwistedAction":
        return cls(problem.eps, problem.V, problem.p)


@dataclass
class Cocycle:
    domain: Subgroup
    values: Dict[int, Mat2]
    action: TwistedAction

    def __call__(self, s: int) -> Mat2:
        return self.values[s]

    def restrict(self, sub: Subgroup) -> "Cocycle":
        return Cocycle(sub, {x: self.values[x] for x in sub.members}, self.action)

    def key(self) -> tuple:
        return tuple(self.values[x] for x in self.domain.members)


def eta(action: TwistedAction, s: int) -> Mat2:
    return IDENTITY if action.eps[s] == 1 else action.V


def xi_from_rep(problem: DescentProblem) -> Cocycle:
    """The cocycle s -> rho^vee(s) eta(s) on H."""
    bad = verify_proj_rep(problem)
    if bad is not None:
        raise ContractError(f"rho does not have cyclotomic determinant: {bad}")
    action = TwistedAction.for_problem(problem)
    p = problem.p
    values = {s: fl.pgl_mul(fl.contragredient(problem.rho(s), p), eta(action, s), p)
              for s in problem.H.members}
    return Cocycle(problem.H, values, action)


def verify_cocycle(x: Cocycle) -> Optional[Violation]:
    G = x.domain.parent
    p = x.action.p
    dom = x.domain.members
    for s in dom:
        if fl.pgl_det_class(x(s), p) is not DetClass.SQUARE:
            return Violation("value outside PSL2", (s,))
    for s in dom:
        xs = x(s)
        for t in dom:
            if x(G.table[s][t]) != fl.pgl_mul(xs, x.action.act(s, x(t)), p):
                return Violation("cocycle identity fails", (s, t))
    return None


def are_cohomologous(pi: Cocycle, pi2: Cocycle) -> Optional[Mat2]:
    """First a in PSL2 with pi(g) = a^-1 pi2(g) (g.a) for every g, else None."""
    if pi.domain.members != pi2.domain.members:
        raise ContractError("cocycles live on different domains")
    if pi.action != pi2.action:
        raise ContractError("cocycles use different actions")
    p = pi.action.p
    act = pi.action.act
    dom = pi.domain.members
    for a in fl.enumerate_projective(p, "PSL"):
        a_inv = fl.pgl_inv(a, p)
        if all(pi(g) == fl.pgl_mul(fl.pgl_mul(a_inv, pi2(g), p), act(g, a), p) for g in dom):
            return a
    return None


def coboundary_twist(pi: Cocycle, a: Mat2) -> Cocycle:
    """The cohomologous cocycle g -> a pi(g) (g.a)^-1."""
    p = pi.action.p
    vals = {g: fl.pgl_mul(fl.pgl_mul(a, pi(g), p), fl.pgl_inv(pi.action.act(g, a), p), p)
            for g in pi.domain.members}
    return Cocycle(pi.domain, vals, pi.action)


def cocycle_extension_search(pi: Cocycle, target: Optional[Subgroup] = None) -> Optional[Cocycle]:
    """
    Brute force: extend ``pi`` from its domain to ``target`` (default the
    whole group) by trying every PSL2 value on each nontrivial coset
    representative r, filling x(r g) = x(r) (r.pi(g)), and checking the
    cocycle identity on every pair as soon as it is fully assigned.
    """
    sub = pi.domain
    G = sub.parent
    target = target or G.whole
    if not sub.is_subgroup_of(target):
        raise ContractError("the cocycle's domain is not inside the target")
    index = target.order // sub.order
    if index > MAX_ORACLE_INDEX:
        raise SearchCapExceeded(f"index {index} exceeds the oracle cap {MAX_ORACLE_INDEX}",
                                estimate=index, cap=MAX_ORACLE_INDEX)
    if index == 1:
        return pi
    act, p = pi.action.act, pi.action.p
    table = G.table
    reps = [r for r in _target_coset_reps(target, sub) if r != 0]
    coset_of = {}
    for k, r in enumerate(reps, start=1):
        for g in sub.members:
            coset_of[table[r][g]] = k
    for g in sub.members:
        coset_of[g] = 0
    # pairs to check once coset k is assigned: all of a, b, ab in cosets <= k, one of them k
    checks = [[] for _ in range(len(reps) + 1)]
    for a in target.members:
        for b in target.members:
            lvl = max(coset_of[a], coset_of[b], coset_of[table[a][b]])
            checks[lvl].append((a, b, table[a][b]))
    psl = fl.enumerate_projective(p, "PSL")

    def dfs(k: int, vals: dict):
        if k > len(reps):
            return vals
        r = reps[k - 1]
        for xr in psl:
            trial = dict(vals)
            for g in sub.members:
                trial[table[r][g]] = fl.pgl_mul(xr, act(r, pi(g)), p)
            if all(trial[ab] == fl.pgl_mul(trial[a], act(a, trial[b]), p) for a, b, ab in checks[k]):
                found = dfs(k + 1, trial)
                if found is not None:
                    return found
        return None

    vals = dfs(1, dict(pi.values))
    if vals is None:
        return None
    return Cocycle(target, vals, pi.action)


def _target_coset_reps(target: Subgroup, sub: Subgroup) -> list:
    G = target.parent
    covered: set = set()
    reps = []
    for x in target.members:
        if x in covered:
            continue
        reps.append(x)
        covered.update(G.table[x][h] for h in sub.members)
    return reps


def enumerate_cocycles(domain: Subgroup, action: TwistedAction) -> list:
    """
    Every cocycle on ``domain``: values on the generators range over PSL2,
    the rest follow from x(a t) = x(a) (a.x(t)); inconsistent assignments are
    discarded as soon as a partial closure conflicts.
    """
    G = domain.parent
    p = action.p
    gens = list(domain.generators)
    psl = fl.enumerate_projective(p, "PSL")
    out = []

    def propagate(vals: dict, gs: list) -> Optional[dict]:
        res = dict(vals)
        queue, seen = [0], {0}
        while queue:
            a = queue.pop()
            xa = res[a]
            for t in gs:
                b = G.table[a][t]
                xb = fl.pgl_mul(xa, action.act(a, res[t]), p)
                old = res.get(b)
                if old is None:
                    res[b] = xb
                elif old != xb:
                    return None
                if b not in seen:
                    seen.add(b)
                    queue.append(b)
        return res

    def dfs(k: int, vals: dict):
        if k == len(gens):
            out.append(Cocycle(domain, vals, action))
            return
        s = gens[k]
        for v in psl:
            if s in vals and vals[s] != v:
                continue
            nxt = propagate({**vals, s: v}, gens[:k + 1])
            if nxt is not None:
                dfs(k + 1, nxt)

    dfs(0, {0: IDENTITY})
    return out


def cocycle_from_hom(R: ProjRep, action: TwistedAction) -> Cocycle:
    """s -> R^vee(s) eta(s); a cocycle whenever det class of R matches eps."""
    p = R.p
    vals = {s: fl.pgl_mul(fl.contragredient(R(s), p), eta(action, s), p) for s in R.domain.members}
    return Cocycle(R.domain, vals, action)


def build_x(rbar: ProjRep, x_p: Mat2, c: int, action: TwistedAction):
    """
    Assemble the function on G that equals rbar^vee on the kernel N of eps
    and x_p (c . rbar^vee(c^-1 s)) = x_p V rbar^vee(c^-1 s) V off N.

    Returns ``(cocycle, violation)``; ``violation`` is None exactly when the
    assembled function passes ``verify_cocycle``.
    """
    if action.eps[c] != -1:
        raise ContractError(f"eps(c) must be -1, got +1 for c = {c}")
    N = rbar.domain
    G = N.parent
    p = action.p
    c_inv = G.inv(c)
    dual = {s: fl.contragredient(rbar(s), p) for s in N.members}
    vals = {}
    for s in range(G.n):
        if s in N:
            vals[s] = dual[s]
        else:
            vals[s] = fl.pgl_mul(x_p, action.act(c, dual[G.table[c_inv][s]]), p)
    x = Cocycle(G.whole, vals, action)
    return x, verify_cocycle(x)


def _check_rbar(problem: DescentProblem, rbar: ProjRep, sub: Subgroup):
    G, p = problem.G, problem.p
    if rbar.domain.members != problem.N.members:
        raise ContractError("rbar must be defined on the kernel of eps")
    for s in rbar.domain.members:
        if not fl.is_psl(rbar(s), p):
            raise ContractError(f"rbar({s}) lies outside PSL2")
    for s in sub.members:
        if rbar(s) != problem.rho(s):
            raise ContractError(f"rbar does not extend rho at {s}")
    N = rbar.domain.members
    for a in N:
        for b in N:
            if rbar(G.table[a][b]) != fl.pgl_mul(rbar(a), rbar(b), p):
                raise ContractError(f"rbar is not a homomorphism at ({a}, {b})")


def prop3_check(problem: DescentProblem, rbar: ProjRep, c_p: int) -> bool:
    """
    For eps nontrivial on H: with c_p in H and eps(c_p) = -1, decide whether
    rbar(c^-1 s c) = rho(c)^-1 rbar(s) rho(c) for every s in N.
    """
    if problem.eps_trivial_on_H:
        raise ContractError("eps is trivial on H; use prop4_check")
    if c_p not in problem.H:
        raise ContractError(f"c_p = {c_p} is not in H")
    if problem.eps[c_p] != -1:
        raise ContractError(f"eps(c_p) must be -1 for c_p = {c_p}")
    _check_rbar(problem, rbar, problem.H_cap_N)
    return prop3_holds(problem, rbar, c_p)


def prop3_holds(problem: DescentProblem, rbar: ProjRep, c_p: int) -> bool:
    """The conjugation identity of ``prop3_check`` without precondition checks."""
    G, p = problem.G, problem.p
    rc_inv = fl.pgl_inv(problem.rho(c_p), p)
    c_inv = G.inv(c_p)
    return all(rbar(G.conj(c_inv, s)) == fl.pgl_conj(rc_inv, rbar(s), p) for s in problem.N.members)


def prop4_check(problem: DescentProblem, rbar: ProjRep, g: Mat2, c: int) -> bool:
    """
    For eps trivial on H: decide whether rbar(c^2) = g^2 and
    rbar(c^-1 s c) = g^-1 rbar(s) g for every s in N.
    """
    if not problem.eps_trivial_on_H:
        raise ContractError("eps is nontrivial on H; use prop3_check")
    if problem.eps[c] != -1:
        raise ContractError(f"eps(c) must be -1 for c = {c}")
    p = problem.p
    if fl.pgl_det_class(g, p) is not DetClass.NONSQUARE:
        raise ContractError("g must lie outside PSL2")
    _check_rbar(problem, rbar, problem.H)
    return prop4_holds(problem, rbar, g, c)


def prop4_holds(problem: DescentProblem, rbar: ProjRep, g: Mat2, c: int) -> bool:
    """The two identities of ``prop4_check`` without precondition checks."""
    G, p = problem.G, problem.p
    if rbar(G.mul(c, c)) != fl.pgl_mul(g, g, p):
        return False
    c_inv = G.inv(c)
    g_inv = fl.pgl_inv(g, p)
    return all(rbar(G.conj(c_inv, s)) == fl.pgl_conj(g_inv, rbar(s), p) for s in problem.N.members)


def prop4_x_p(g: Mat2, V: Mat2, p: int) -> Mat2:
    """x_p = (g^-1)^t V."""
    return fl.pgl_mul(fl.contragredient(g, p), V, p)
