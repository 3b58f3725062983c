"""
The GL2-level criterion for mod-p representations of elliptic curves over a
cyclic field F.

E[p] is modelled as F_p^2 with the determinant form playing the role of the
Weil pairing.  A witness is a matrix h with det(h) = eps_p(tau), a character
chi of H with rho(tau s tau^-1) = chi(s) h rho(s) h^-1, and a sign lam with
h^d = lam rho(tau^d).  Input tables are taken exactly as given; no basis
reordering is applied.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from . import fp_linalg as fl
from .errors import ContractError
from .fp_linalg import InvolutionClass, Mat2
from .groups import FiniteGroup, Subgroup, coset_power, verify_character
from .reps import DescentProblem, LinRep, Mode, compatibility_witnesses, verify_lin_rep


@dataclass
class Thm2Problem:
    G: FiniteGroup
    H: Subgroup
    tau: int
    rho: LinRep
    eps_p: tuple
    p: int
    v: Optional[int] = None
    name: str = ""

    def __post_init__(self):
        fl.check_prime(self.p)
        p = self.p
        self.eps_p = tuple(int(x) % p for x in self.eps_p)
        if len(self.eps_p) != self.G.n:
            raise ContractError(f"eps_p has {len(self.eps_p)} values for a group of order {self.G.n}")
        bad = verify_character(self.G, dict(enumerate(self.eps_p)), p=p)
        if bad:
            raise ContractError(f"eps_p is not a character: {bad}")
        if not self.H.is_normal():
            raise ContractError("H must be normal in G")
        self.d = self.G.n // self.H.order
        if not 0 <= self.tau < self.G.n or coset_power(self.G, self.H, self.tau) != self.d:
            raise ContractError(f"the coset of tau = {self.tau} does not generate G/H")
        if self.rho.domain.members != self.H.members:
            raise ContractError("rho is not defined on exactly H")
        bad = verify_lin_rep(self.rho, dict(enumerate(self.eps_p)))
        if bad:
            raise ContractError(f"rho fails the determinant check: {bad}")
        if self.v is None:
            self.v = fl.smallest_nonresidue(p)

    @property
    def eps(self) -> tuple:
        return tuple(fl.legendre_class(x, self.p).sign for x in self.eps_p)

    def projectivize(self) -> DescentProblem:
        return DescentProblem(self.G, self.H, self.eps, self.rho.projectivize(), self.p, self.v, self.name)


@dataclass(frozen=True)
class Thm2Witness:
    h: Mat2
    chi: tuple  # (element, value) pairs over H
    lam: int

    def chi_map(self) -> dict:
        return dict(self.chi)


def thm2_witnesses(problem: Thm2Problem) -> Iterator[Thm2Witness]:
    """Every witness, scanning the det fiber of eps_p(tau) in lexicographic order."""
    G, H, p, tau, d = problem.G, problem.H, problem.p, problem.tau, problem.d
    rho = problem.rho
    pairs = [(s, rho(s), rho(G.conj(tau, s))) for s in H.members]
    target = rho(G.pow(tau, d))
    for h in fl.det_fiber(p, problem.eps_p[tau]):
        h_inv = fl.mat_inv(h, p)
        chi = []
        for s, a, b in pairs:
            c = fl.scalar_ratio(b, fl.mat_mul(fl.mat_mul(h, a, p), h_inv, p), p)
            if c is None:
                break
            chi.append((s, c))
        else:
            lam = fl.scalar_ratio(fl.mat_pow(h, d, p), target, p)
            if lam is None:
                continue
            # det(h)^d = det(rho(tau^d)) forces lam^2 = 1
            assert lam in (1, p - 1), lam
            yield Thm2Witness(h, tuple(chi), 1 if lam == 1 else -1)


def thm2_search(problem: Thm2Problem) -> Optional[Thm2Witness]:
    return next(thm2_witnesses(problem), None)


def check_thm2_witness(problem: Thm2Problem, w: Thm2Witness) -> bool:
    G, p = problem.G, problem.p
    if fl.det(w.h, p) != problem.eps_p[problem.tau]:
        return False
    chi = w.chi_map()
    if verify_character(G, chi, domain=problem.H, p=p) is not None:
        return False
    h_inv = fl.mat_inv(w.h, p)
    for s in problem.H.members:
        lhs = problem.rho(G.conj(problem.tau, s))
        rhs = fl.mat_scale(chi[s], fl.mat_mul(fl.mat_mul(w.h, problem.rho(s), p), h_inv, p), p)
        if lhs != rhs:
            return False
    hd = fl.mat_pow(w.h, problem.d, p)
    return hd == fl.mat_scale(w.lam, problem.rho(G.pow(problem.tau, problem.d)), p)


def pgl_criterion(problem: Thm2Problem) -> Optional[Mat2]:
    """
    First g in PGL2 with rho(tau s tau^-1) = g rho(s) g^-1 on H,
    g^d = rho(tau^d) and det class of g equal to that of eps_p(tau).
    """
    proj = problem.projectivize()
    found = compatibility_witnesses(proj, problem.tau, problem.d, Mode.STRONGLY_COMPATIBLE)
    return found[0] if found else None


def lift_witness(g: Mat2, target_det: int, p: int) -> Mat2:
    """The representative lam*g with det = target_det, taking the smaller lam."""
    dg = fl.det(g, p)
    if fl.legendre_class(target_det, p) is not fl.legendre_class(dg, p):
        raise ContractError(f"no lift of {g} has determinant {target_det % p}: square classes differ")
    want = target_det * fl.inv_mod(dg, p) % p
    for lam in range(1, p):
        if lam * lam % p == want:
            return fl.mat_scale(lam, g, p)
    raise AssertionError("unreachable: a square has a square root")


def classify_iq(problem: Thm2Problem, w: Thm2Witness) -> InvolutionClass:
    """
    Classify a witness when F is imaginary quadratic and tau is a complex
    conjugation (d = 2, tau^2 = 1, eps_p(tau) = -1).
    """
    p = problem.p
    if problem.d != 2:
        raise ContractError(f"need a quadratic extension, got d = {problem.d}")
    if problem.G.mul(problem.tau, problem.tau) != 0:
        raise ContractError("tau is not an involution")
    if problem.eps_p[problem.tau] != p - 1:
        raise ContractError("eps_p(tau) is not -1")
    tag = fl.classify_involution(w.h, p)
    if p % 4 == 3:
        assert tag.kind == InvolutionClass.DIAG
    return tag
