"""
Projective and linear representation tables, the cyclotomic-determinant
predicate, invariance/compatibility witnesses, and the cyclic extension
construction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, Iterator, Mapping, Optional

from . import fp_linalg as fl
from .errors import ContractError
from .fp_linalg import DetClass, Mat2
from .groups import (FiniteGroup, Subgroup, Violation, _closure, coset_power,
                     cyclic_quotient_data, verify_character)

IDENTITY = (1, 0, 0, 1)


class Mode(enum.Enum):
    PLAIN = "Plain"
    STRONG = "Strong"
    COMPATIBLE = "Compatible"
    STRONGLY_COMPATIBLE = "StronglyCompatible"


@dataclass
class ProjRep:
    domain: Subgroup
    images: Dict[int, Mat2]
    p: int

    def __call__(self, x: int) -> Mat2:
        return self.images[x]

    @property
    def group(self) -> FiniteGroup:
        return self.domain.parent

    def restrict(self, sub: Subgroup) -> "ProjRep":
        return ProjRep(sub, {x: self.images[x] for x in sub.members}, self.p)

    def image_set(self) -> set:
        return set(self.images.values())

    def __eq__(self, other):
        return (isinstance(other, ProjRep) and self.p == other.p
                and self.domain.members == other.domain.members and self.images == other.images)


@dataclass
class LinRep:
    domain: Subgroup
    images: Dict[int, Mat2]
    p: int

    def __call__(self, x: int) -> Mat2:
        return self.images[x]

    def projectivize(self) -> ProjRep:
        return ProjRep(self.domain, {x: fl.canonical(m, self.p) for x, m in self.images.items()}, self.p)


@dataclass
class DescentProblem:
    """
    A projective representation ``rho`` of the subgroup H (standing for G_F)
    of G (standing for G_Q), together with the quadratic character ``eps`` of
    G cutting out Q(p), written as a tuple of signs indexed by element.
    """

    G: FiniteGroup
    H: Subgroup
    eps: tuple
    rho: ProjRep
    p: int
    v: Optional[int] = None
    name: str = ""
    _N: Subgroup = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        fl.check_prime(self.p)
        self.eps = tuple(int(s) for s in self.eps)
        if self.v is None:
            self.v = fl.smallest_nonresidue(self.p)
        if fl.legendre_class(self.v, self.p) is not DetClass.NONSQUARE:
            raise ContractError(f"v = {self.v} is a square mod {self.p}")
        if self.H.parent is not self.G and self.H.parent != self.G:
            raise ContractError("H is not a subgroup of G")
        if len(self.eps) != self.G.n:
            raise ContractError(f"eps has {len(self.eps)} values for a group of order {self.G.n}")
        bad = verify_character(self.G, dict(enumerate(self.eps)))
        if bad:
            raise ContractError(f"eps is not a quadratic character: {bad}")
        if all(s == 1 for s in self.eps):
            raise ContractError("eps is trivial on G, so Q(p) would equal Q")
        if self.rho.domain.members != self.H.members:
            raise ContractError("rho is not defined on exactly H")
        if self.rho.p != self.p:
            raise ContractError("rho lives over a different prime")
        self._N = Subgroup(self.G, tuple(x for x in range(self.G.n) if self.eps[x] == 1))

    @property
    def N(self) -> Subgroup:
        """Kernel of eps (stands for G_Q(p))."""
        return self._N

    @property
    def H_cap_N(self) -> Subgroup:
        return self.H.intersect(self._N)

    @property
    def eps_trivial_on_H(self) -> bool:
        return all(self.eps[x] == 1 for x in self.H.members)

    @property
    def V(self) -> Mat2:
        return fl.standard_V(self.p, self.v)[1]

    def with_v(self, v: int) -> "DescentProblem":
        return DescentProblem(self.G, self.H, self.eps, self.rho, self.p, v, self.name)


def verify_proj_rep(problem: DescentProblem) -> Optional[Violation]:
    """Homomorphism property of rho plus agreement of its det class with eps on H."""
    rho, G, p = problem.rho, problem.G, problem.p
    H = problem.H.members
    for x in H:
        if x not in rho.images:
            return Violation("rho undefined", (x,))
        m = rho.images[x]
        if fl.det(m, p) == 0:
            return Violation("singular image", (x,))
        if fl.canonical(m, p) != m:
            return Violation("image is not a canonical projective representative", (x,))
    if rho.images[0] != IDENTITY:
        return Violation("rho(e) is not the identity", (0,))
    for x in H:
        if fl.pgl_det_class(rho.images[x], p).sign != problem.eps[x]:
            return Violation("det class of rho disagrees with eps", (x,))
    for x in H:
        for y in H:
            if rho.images[G.table[x][y]] != fl.pgl_mul(rho.images[x], rho.images[y], p):
                return Violation("rho is not a homomorphism", (x, y))
    return None


def verify_lin_rep(rho: LinRep, eps_p: Mapping[int, int]) -> Optional[Violation]:
    """det(rho(s)) = eps_p(s) on the domain and rho is a homomorphism."""
    G, p = rho.domain.parent, rho.p
    dom = rho.domain.members
    for x in dom:
        if fl.det(rho.images[x], p) != eps_p[x] % p:
            return Violation("det(rho) differs from eps_p", (x,))
    for x in dom:
        for y in dom:
            if rho.images[G.table[x][y]] != fl.mat_mul(rho.images[x], rho.images[y], p):
                return Violation("rho is not a homomorphism", (x, y))
    return None


def contragredient_rep(rho: ProjRep) -> ProjRep:
    return ProjRep(rho.domain, {x: fl.contragredient(m, rho.p) for x, m in rho.images.items()}, rho.p)


def _conjugation_pairs(problem: DescentProblem, tau: int):
    G, rho = problem.G, problem.rho
    return [(rho(s), rho(G.conj(tau, s))) for s in problem.H.generators]


def _require_normal(problem: DescentProblem):
    if not problem.H.is_normal():
        # the conjugation condition is only pinned down for Galois F
        raise ContractError("invariance is only defined here for H normal in G")


def invariance_witnesses(problem: DescentProblem, tau: int, mode: Mode = Mode.PLAIN) -> list:
    """
    Every g in PGL2 with rho(tau s tau^-1) = g rho(s) g^-1 for all s in H, in
    enumeration order.  ``Mode.STRONG`` also asks det class of g = eps(tau).
    """
    if not 0 <= tau < problem.G.n:
        raise ContractError(f"tau = {tau} is not an element of G")
    _require_normal(problem)
    p = problem.p
    pairs = _conjugation_pairs(problem, tau)
    if mode is Mode.STRONG:
        candidates = fl.classes_with_det(p, DetClass.from_sign(problem.eps[tau]))
    elif mode is Mode.PLAIN:
        candidates = fl.enumerate_projective(p)
    else:
        raise ContractError(f"invariance mode must be Plain or Strong, got {mode}")
    mul = fl.pgl_mul
    return [g for g in candidates if all(mul(g, a, p) == mul(b, g, p) for a, b in pairs)]


def compatibility_witnesses(problem: DescentProblem, tau: int, d: int,
                            mode: Mode = Mode.COMPATIBLE) -> list:
    """Invariance witnesses g that also satisfy g^d = rho(tau^d)."""
    G = problem.G
    if coset_power(G, problem.H, tau) != d:
        raise ContractError(f"d = {d} is not the least k with tau^k in H")
    base = {Mode.COMPATIBLE: Mode.PLAIN, Mode.STRONGLY_COMPATIBLE: Mode.STRONG}.get(mode)
    if base is None:
        raise ContractError(f"compatibility mode must be Compatible or StronglyCompatible, got {mode}")
    target = problem.rho(G.pow(tau, d))
    p = problem.p
    return [g for g in invariance_witnesses(problem, tau, base) if fl.pgl_pow(g, d, p) == target]


def lemma1_extend(rbar: ProjRep, tau: int, g: Mat2, d: int) -> ProjRep:
    """
    Extend ``rbar`` from a normal subgroup L with cyclic quotient generated
    by the coset of ``tau`` (order d) by R(tau^n s) = g^n rbar(s).
    """
    L, p = rbar.domain, rbar.p
    G = L.parent
    if not L.is_normal():
        raise ContractError("the subgroup is not normal")
    if coset_power(G, L, tau) != d or d * L.order != G.n:
        raise ContractError(f"the coset of tau = {tau} does not generate a cyclic quotient of order {d}")
    for s in L.generators:
        lhs = rbar(G.conj(tau, s))
        rhs = fl.pgl_conj(g, rbar(s), p)
        if lhs != rhs:
            raise ContractError(f"invariance fails: rbar(tau s tau^-1) != g rbar(s) g^-1 for s = {s}")
    if fl.pgl_pow(g, d, p) != rbar(G.pow(tau, d)):
        raise ContractError("compatibility fails: g^d != rbar(tau^d)")
    images = {}
    tau_n, g_n = 0, IDENTITY
    for _ in range(d):
        for s in L.members:
            images[G.table[tau_n][s]] = fl.pgl_mul(g_n, rbar(s), p)
        tau_n = G.table[tau_n][tau]
        g_n = fl.pgl_mul(g_n, g, p)
    R = ProjRep(G.whole, images, p)
    for x in range(G.n):
        for y in range(G.n):
            assert images[G.table[x][y]] == fl.pgl_mul(images[x], images[y], p), (x, y)
    return R


def schur_irreducible(rho: ProjRep) -> bool:
    """Trivial projective centralizer of the image (absolute irreducibility)."""
    return fl.centralizer_is_trivial(rho.image_set(), rho.p)


def corollary_descent(problem: DescentProblem) -> Optional[bool]:
    """
    True when H has cyclic quotient, rho has trivial centralizer and a
    strong invariance witness exists for the quotient generator; None (not
    applicable) otherwise.  Never returns False.
    """
    data = cyclic_quotient_data(problem.G, problem.H)
    if data is None:
        return None
    tau, _ = data
    if not schur_irreducible(problem.rho):
        return None
    if invariance_witnesses(problem, tau, Mode.STRONG):
        return True
    return None


# --- homomorphism extension search -----------------------------------------------------


@dataclass
class ExtensionPlan:
    """New generators adjoined to a base subgroup, with the candidate pool at each level."""

    new_gens: list
    gen_lists: list  # generators of the subgroup after adjoining each new generator
    powers: list  # (m, s^m) with s^m already in the previous subgroup
    candidates: list

    @property
    def level_sizes(self) -> list:
        return [len(c) for c in self.candidates]

    def estimate(self) -> int:
        """Node count of the unpruned search tree."""
        total, width = 0, 1
        for c in self.candidates:
            width *= len(c)
            total += width
        return total


def plan_extension(base: Subgroup, target: Subgroup, p: int, det_sign=None) -> ExtensionPlan:
    G = base.parent
    if not base.is_subgroup_of(target):
        raise ContractError("the base subgroup is not contained in the target")
    gens = list(base.generators)
    current = set(base.members)
    new_gens, gen_lists, powers, candidates = [], [], [], []
    for x in target.members:
        if x in current:
            continue
        prev = Subgroup(G, tuple(current))
        m = coset_power(G, prev, x)
        powers.append((m, G.pow(x, m)))
        new_gens.append(x)
        gens = gens + [x]
        gen_lists.append(tuple(gens))
        current = set(_closure(G, gens))
        if det_sign is None:
            candidates.append(fl.enumerate_projective(p))
        else:
            candidates.append(fl.classes_with_det(p, DetClass.from_sign(det_sign[x])))
    return ExtensionPlan(new_gens, gen_lists, powers, candidates)


def _propagate(G: FiniteGroup, images: dict, gens: tuple, p: int) -> Optional[dict]:
    """Extend ``images`` to the subgroup generated by ``gens``; None on conflict."""
    out = dict(images)
    queue = [0]
    seen = {0}
    table = G.table
    mul = fl.pgl_mul
    while queue:
        a = queue.pop()
        fa = out[a]
        for t in gens:
            b = table[a][t]
            fb = mul(fa, out[t], p)
            old = out.get(b)
            if old is None:
                out[b] = fb
            elif old != fb:
                return None
            if b not in seen:
                seen.add(b)
                queue.append(b)
    return out


def iter_extensions(base: Subgroup, base_images: Mapping[int, Mat2], target: Subgroup, p: int,
                    det_sign=None, rng=None, counter: Optional[dict] = None,
                    plan: Optional[ExtensionPlan] = None) -> Iterator[dict]:
    """
    Depth-first enumeration of every homomorphism target -> PGL2(F_p) that
    agrees with ``base_images`` on ``base`` and, when ``det_sign`` is given,
    has det class eps on the new generators.  Each new generator's image is
    pruned by its power relation before the full closure check.  ``rng``
    shuffles candidate order (for random sampling); ``counter["nodes"]``
    accumulates the number of candidate images tried.
    """
    G = base.parent
    plan = plan or plan_extension(base, target, p, det_sign)
    start = {x: base_images[x] for x in base.members}
    base_gens = tuple(base.generators)
    if _propagate(G, {0: IDENTITY, **{g: start[g] for g in base_gens}}, base_gens, p) != start:
        raise ContractError("base images do not form a homomorphism on the base subgroup")
    if counter is not None:
        counter.setdefault("nodes", 0)

    def dfs(level: int, images: dict):
        if level == len(plan.new_gens):
            yield dict(images)
            return
        s = plan.new_gens[level]
        m, s_m = plan.powers[level]
        need = images[s_m]
        pool = plan.candidates[level]
        if rng is not None:
            pool = list(pool)
            rng.shuffle(pool)
        for g in pool:
            if counter is not None:
                counter["nodes"] += 1
            if fl.pgl_pow(g, m, p) != need:
                continue
            trial = dict(images)
            trial[s] = g
            nxt = _propagate(G, trial, plan.gen_lists[level], p)
            if nxt is not None:
                yield from dfs(level + 1, nxt)

    yield from dfs(0, start)


def all_homomorphisms(target: Subgroup, p: int, det_sign=None) -> Iterator[ProjRep]:
    G = target.parent
    for imgs in iter_extensions(G.trivial, {0: IDENTITY}, target, p, det_sign):
        yield ProjRep(target, imgs, p)


def random_homomorphism(target: Subgroup, p: int, rng, det_sign=None) -> ProjRep:
    G = target.parent
    imgs = next(iter_extensions(G.trivial, {0: IDENTITY}, target, p, det_sign, rng=rng))
    return ProjRep(target, imgs, p)


def conjugate_rep(rho: ProjRep, a: Mat2) -> ProjRep:
    p = rho.p
    return ProjRep(rho.domain, {x: fl.pgl_conj(a, m, p) for x, m in rho.images.items()}, p)
