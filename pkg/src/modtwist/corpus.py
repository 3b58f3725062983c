"""Named fixtures and the fixed synthetic corpus of descent and thm2 problems."""

from __future__ import annotations

import random
from pathlib import Path

from . import fp_linalg as fl
from .elliptic import Thm2Problem
from .groups import (Subgroup, cyclic_group, dihedral_group, direct_product,
                     quaternion_group, subgroup_closure, symmetric_group)
from .problem_io import emit_problem
from .reps import IDENTITY, DescentProblem, LinRep, ProjRep, _propagate, all_homomorphisms, random_homomorphism

PRIMES = (7, 11, 13)


def _perm_sign(perm) -> int:
    sign, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _cyclic_sign(n: int) -> tuple:
    return tuple((-1) ** k for k in range(n))


def _cube_root_of_unity(p: int) -> int:
    return next(x for x in range(2, p) if pow(x, 3, p) == 1)


def c2_trivial(p: int = 7) -> DescentProblem:
    """G = C2 over trivial H, rho trivial, eps nontrivial."""
    G = cyclic_group(2)
    H = G.trivial
    return DescentProblem(G, H, (1, -1), ProjRep(H, {0: IDENTITY}, p), p, name=f"c2_trivial_p{p}")


def s3_diag(p: int = 7) -> DescentProblem:
    """
    G = S3, H = A3, eps = sign, rho sends the 3-cycle to diag(1, w) for w a
    cube root of unity (w = 2 when p = 7).
    """
    G = symmetric_group(3)
    sigma = G.labels.index((1, 2, 0))
    H = subgroup_closure(G, [sigma])
    w = _cube_root_of_unity(p)
    images = {0: IDENTITY, sigma: (1, 0, 0, w), G.mul(sigma, sigma): (1, 0, 0, w * w % p)}
    eps = tuple(_perm_sign(x) for x in G.labels)
    return DescentProblem(G, H, eps, ProjRep(H, images, p), p, name=f"s3_diag_p{p}")


def cyclic_unipotent(p: int = 7, shift: int = 1) -> DescentProblem:
    """
    G = C_{2p} generated by tau = 1, H = <tau^2> of order p, rho(tau^2) the
    unipotent [[1, shift], [0, 1]].  At p = 7 this is the C14 example.
    """
    n = 2 * p
    G = cyclic_group(n)
    H = subgroup_closure(G, [2])
    images = {(2 * k) % n: (1, k * shift % p, 0, 1) for k in range(p)}
    return DescentProblem(G, H, _cyclic_sign(n), ProjRep(H, images, p), p,
                          name=f"c{n}_unipotent_s{shift}_p{p}")


def c4_over_c2(p: int, image=IDENTITY, name: str = "") -> DescentProblem:
    """G = C4, H = C2 = ker eps, rho(tau^2) = ``image`` (an involution or 1 in PSL2)."""
    G = cyclic_group(4)
    H = subgroup_closure(G, [2])
    return DescentProblem(G, H, _cyclic_sign(4), ProjRep(H, {0: IDENTITY, 2: image}, p), p,
                          name=name or f"c4_over_c2_p{p}")


def _psl_involutions(p: int) -> list:
    return [x for x in fl.enumerate_projective(p, "PSL") if x != IDENTITY and fl.pgl_mul(x, x, p) == IDENTITY]


# --- Thm2 fixtures -------------------------------------------------------------------


def klein_thm2(p: int = 7, rho_s=None, eps_s=None, name: str = "") -> Thm2Problem:
    """
    G = C2 x C2 = <tau, s>, H = <s>; index a*2 + b for tau^a s^b, so s = 1, tau = 2.
    Default: rho(s) = diag(1, -1), eps_p(tau) = eps_p(s) = -1.
    """
    G = direct_product(cyclic_group(2), cyclic_group(2))
    s, tau = 1, 2
    H = subgroup_closure(G, [s])
    rho_s = rho_s if rho_s is not None else (1, 0, 0, p - 1)
    eps_s = eps_s if eps_s is not None else fl.det(rho_s, p)
    eps_p = tuple(pow(p - 1, x // 2, p) * pow(eps_s, x % 2, p) % p for x in range(4))
    rho = LinRep(H, {0: IDENTITY, s: tuple(rho_s)}, p)
    return Thm2Problem(G, H, tau, rho, eps_p, p, name=name or f"klein_thm2_p{p}")


def c2xc4_thm2(p: int = 13, rho_s=None, eps_s: int = 5, name: str = "") -> Thm2Problem:
    """
    G = C2 x C4 = <tau, s> (index 4a + b for tau^a s^b), H = <s>, eps_p(tau) = -1
    and eps_p(s) = eps_s of order 4.  Needed at p = 1 mod 4, where involutions
    alone cannot carry a nonsquare determinant.
    """
    G = direct_product(cyclic_group(2), cyclic_group(4))
    s, tau = 1, 4
    H = subgroup_closure(G, [s])
    rho_s = rho_s if rho_s is not None else (1, 0, 0, eps_s % p)
    eps_p = tuple(pow(p - 1, x // 4, p) * pow(eps_s, x % 4, p) % p for x in range(8))
    images = {x: fl.mat_pow(rho_s, x, p) for x in range(4)}
    return Thm2Problem(G, H, tau, LinRep(H, images, p), eps_p, p, name=name or f"c2xc4_thm2_p{p}")


def c2p_thm2_unipotent(p: int = 7) -> Thm2Problem:
    """Linear lift of the cyclic unipotent example: eps_p(tau) = -1, rho(tau^2) unipotent."""
    n = 2 * p
    G = cyclic_group(n)
    H = subgroup_closure(G, [2])
    images = {(2 * k) % n: (1, k % p, 0, 1) for k in range(p)}
    eps_p = tuple(pow(p - 1, k, p) for k in range(n))
    return Thm2Problem(G, H, 1, LinRep(H, images, p), eps_p, p, name=f"c{n}_thm2_unipotent_p{p}")


def s3xc2_dihedral(p: int = 7, twist: bool = False) -> DescentProblem:
    """
    G = S3 x C2 (index 2a + b), H = S3 x 1 with rho(3-cycle) = diag(1, w) and
    rho(swap) = antidiagonal swap, a dihedral image of order 6.  eps is -1 on
    the C2 factor; on H it is forced by det(swap) = -1.  With ``twist`` the
    swap goes to [[0, 1], [w, 0]] instead.
    """
    S3 = symmetric_group(3)
    G = direct_product(S3, cyclic_group(2))
    sigma, swap = S3.labels.index((1, 2, 0)), S3.labels.index((1, 0, 2))
    H = subgroup_closure(G, [2 * sigma, 2 * swap])
    w = _cube_root_of_unity(p)
    r_sigma = (1, 0, 0, w)
    r_swap = (0, 1, 1, 0) if not twist else fl.canonical((0, 1, w, 0), p)
    base = {0: IDENTITY, sigma: r_sigma, swap: r_swap}
    imgs = _propagate(S3, base, (sigma, swap), p)
    minus_one = fl.legendre_class(p - 1, p).sign
    eps = tuple((minus_one if _perm_sign(S3.labels[x // 2]) == -1 else 1) * (-1) ** (x % 2)
                for x in range(G.n))
    rho = ProjRep(H, {2 * a: m for a, m in imgs.items()}, p)
    suffix = "_twist" if twist else ""
    return DescentProblem(G, H, eps, rho, p, name=f"s3xc2_dihedral{suffix}_p{p}")


def s4_a4_octahedral(p: int) -> DescentProblem:
    """
    G = S4, H = A4, eps = sign, rho the restriction to A4 of the first
    faithful S4 -> PGL2(F_p) in enumeration order whose det class is the sign
    (p = 3, 5 mod 8), or whose image lies in PSL2 (p = 1, 7 mod 8, where no
    faithful map with det class sign exists and the verdict is no).
    """
    S4 = symmetric_group(4)
    sign = {x: _perm_sign(S4.labels[x]) for x in range(S4.n)}
    A4 = Subgroup(S4, tuple(x for x in range(S4.n) if sign[x] == 1))
    for det_sign in (sign, {x: 1 for x in range(S4.n)}):
        for R in all_homomorphisms(S4.whole, p, det_sign=det_sign):
            if len(R.image_set()) == S4.n:
                return DescentProblem(S4, A4, tuple(sign[x] for x in range(S4.n)), R.restrict(A4), p,
                                      name=f"s4_a4_octahedral_p{p}")
    raise AssertionError(f"PGL2(F_{p}) has no S4 subgroup")


def d4_over_center(p: int, image=IDENTITY, name: str = "") -> DescentProblem:
    """
    G = D4, H = its center <r^2>, eps = -1 on reflections.  G/H is a Klein
    four-group, so only the direct and cocycle routes apply.
    """
    G = dihedral_group(4)
    rot = G.labels.index((1, 2, 3, 0))
    z = G.mul(rot, rot)
    H = subgroup_closure(G, [z])
    eps = tuple(1 if _is_rotation(lab) else -1 for lab in G.labels)
    return DescentProblem(G, H, eps, ProjRep(H, {0: IDENTITY, z: image}, p), p,
                          name=name or f"d4_over_center_p{p}")


def named_fixtures() -> dict:
    probs = []
    for p in PRIMES:
        probs.append(c2_trivial(p))
        probs.append(cyclic_unipotent(p))
        probs.append(c4_over_c2(p, name=f"c4_over_c2_trivial_p{p}"))
        for k, inv in enumerate(_psl_involutions(p)[:2]):
            probs.append(c4_over_c2(p, inv, name=f"c4_over_c2_inv{k}_p{p}"))
            probs.append(d4_over_center(p, inv, name=f"d4_over_center_inv{k}_p{p}"))
    for p in (7, 13):
        probs.append(s3_diag(p))
        probs.append(s3xc2_dihedral(p))
        probs.append(s3xc2_dihedral(p, twist=True))
    probs.append(cyclic_unipotent(7, 3))
    probs.extend(s4_a4_octahedral(p) for p in PRIMES)
    return {prob.name: prob for prob in probs}


def thm2_fixtures() -> dict:
    probs = [klein_thm2(7),
             klein_thm2(7, rho_s=IDENTITY, eps_s=1, name="klein_thm2_trivial_p7"),
             c2xc4_thm2(13),
             c2p_thm2_unipotent(7)]
    out = {prob.name: prob for prob in probs}
    rng = random.Random(2024)
    for p, maker, order, eps_s in ((7, klein_thm2, 2, 6), (13, c2xc4_thm2, 4, 5)):
        pool = [m for m in fl.det_fiber(p, eps_s) if fl.mat_pow(m, order, p) == IDENTITY]
        for k, m in enumerate(rng.sample(pool, 4)):
            name = f"{maker.__name__}_rand{k}_p{p}"
            out[name] = maker(p, rho_s=m, eps_s=eps_s, name=name)
    return out


# --- random problems ------------------------------------------------------------------


def _configurations():
    """(label, G, H, eps) with [G:H] <= 4 and eps nontrivial."""
    confs = []
    C2, C4, C6 = cyclic_group(2), cyclic_group(4), cyclic_group(6)
    confs.append(("c2_e", C2, C2.trivial, _cyclic_sign(2)))
    confs.append(("c4_e", C4, C4.trivial, _cyclic_sign(4)))
    confs.append(("c6_c2", C6, subgroup_closure(C6, [3]), _cyclic_sign(6)))
    confs.append(("c6_c3", C6, subgroup_closure(C6, [2]), _cyclic_sign(6)))
    K = direct_product(C2, C2)
    eps_a = tuple((-1) ** (x // 2) for x in range(4))
    eps_ab = tuple((-1) ** (x // 2 + x % 2) for x in range(4))
    confs.append(("klein_b_epsa", K, subgroup_closure(K, [1]), eps_a))
    confs.append(("klein_b_epsab", K, subgroup_closure(K, [1]), eps_ab))
    S3 = symmetric_group(3)
    sign = tuple(_perm_sign(x) for x in S3.labels)
    confs.append(("s3_a3", S3, subgroup_closure(S3, [S3.labels.index((1, 2, 0))]), sign))
    confs.append(("s3_swap", S3, subgroup_closure(S3, [S3.labels.index((1, 0, 2))]), sign))
    D4 = dihedral_group(4)
    rot = D4.labels.index((1, 2, 3, 0))
    ref = D4.labels.index((0, 3, 2, 1))
    rot_sign = tuple(1 if _is_rotation(lab) else -1 for lab in D4.labels)
    confs.append(("d4_c4", D4, subgroup_closure(D4, [rot]), rot_sign))
    confs.append(("d4_center", D4, subgroup_closure(D4, [D4.mul(rot, rot)]), rot_sign))
    confs.append(("d4_refl", D4, subgroup_closure(D4, [ref, D4.mul(rot, rot)]), rot_sign))
    Q = quaternion_group()
    # index s*4 + u for units 1, i, j, k; eps kills <j>
    eps_q = tuple(1 if x % 4 in (0, 2) else -1 for x in range(8))
    confs.append(("q8_i", Q, subgroup_closure(Q, [1]), eps_q))
    return confs


def _is_rotation(perm) -> bool:
    m = len(perm)
    k = perm[0]
    return all(perm[i] == (i + k) % m for i in range(m))


def random_problems(seed: int = 12345) -> list:
    out = []
    rng = random.Random(seed)
    for p in PRIMES:
        for label, G, H, eps in _configurations():
            eps_map = dict(enumerate(eps))
            R = random_homomorphism(G.whole, p, rng, det_sign=eps_map)
            out.append(DescentProblem(G, H, eps, R.restrict(H), p, name=f"restrict_{label}_p{p}"))
            rho = random_homomorphism(H, p, rng, det_sign=eps_map)
            out.append(DescentProblem(G, H, eps, rho, p, name=f"random_{label}_p{p}"))
    return out


def guaranteed_yes(problem: DescentProblem) -> bool:
    return problem.name.startswith("restrict_") or problem.name.startswith("c2_trivial") \
        or problem.name.startswith("s3_diag") or problem.name.startswith("c4_over_c2_trivial")


def corpus_problems() -> list:
    return list(named_fixtures().values()) + random_problems()


def write_corpus(out_dir) -> list:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for prob in corpus_problems() + list(thm2_fixtures().values()):
        path = out / f"{prob.name}.json"
        emit_problem(prob, path)
        paths.append(path)
    return paths
