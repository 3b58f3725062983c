"""
Acceptance suite.  Each test is one numbered criterion; a one-line PASS/FAIL
summary per criterion is printed at the end of the pytest run (see conftest).
All checks are exact.
"""

import random

import pytest

from modtwist import fp_linalg as fl
from modtwist.cohomology import (MAX_ORACLE_INDEX, TwistedAction, coboundary_twist, cocycle_extension_search, enumerate_cocycles,
                                 verify_cocycle, xi_from_rep)
from modtwist.corpus import _configurations, corpus_problems, cyclic_unipotent, s3_diag, thm2_fixtures
from modtwist.descent import (CYCLIC, admissible_cp, check_witness, cross_validate, decide, solve_via_props)
from modtwist.elliptic import check_thm2_witness, lift_witness, pgl_criterion, thm2_search, thm2_witnesses
from modtwist.errors import ContractError
from modtwist.groups import (cyclic_group, cyclic_quotient_data, dihedral_group, direct_product,
                             quaternion_group, subgroup_closure, symmetric_group, verify_character)
from modtwist.reps import (DescentProblem, Mode, ProjRep, lemma1_extend, random_homomorphism, verify_proj_rep)

PRIMES = (7, 11, 13)


@pytest.fixture(scope="module")
def corpus():
    return corpus_problems() + [prob.projectivize() for prob in thm2_fixtures().values()]


def test_criterion_1_group_order_census():
    """enumerate_projective matches p(p-1)(p+1) and half of it for PSL2"""
    expected = {7: (336, 168), 11: (1320, 660), 13: (2184, 1092)}
    for p, (pgl, psl) in expected.items():
        assert pgl == p * (p - 1) * (p + 1)
        assert len(fl.enumerate_projective(p, "PGL")) == pgl
        assert len(fl.enumerate_projective(p, "PSL")) == psl
        assert len(fl.enumerate_projective(p, "PGL-PSL")) == pgl - psl


def _det_mutant(prob):
    """Multiply one nontrivial image by diag(1, v), flipping its det class."""
    s = next(x for x in prob.H.members if x != 0)
    flip = fl.canonical(fl.mat_mul(prob.rho(s), (1, 0, 0, prob.v), prob.p), prob.p)
    rho = ProjRep(prob.H, {**prob.rho.images, s: flip}, prob.p)
    return DescentProblem(prob.G, prob.H, prob.eps, rho, prob.p, prob.v, prob.name + "_mutant")


def test_criterion_2_xi_is_cocycle(corpus):
    """xi passes verify_cocycle on the corpus; det-violating mutants are rejected"""
    mutants = 0
    for prob in corpus:
        assert verify_proj_rep(prob) is None, prob.name
        assert verify_cocycle(xi_from_rep(prob)) is None, prob.name
        if prob.H.order > 1:
            bad = _det_mutant(prob)
            assert verify_proj_rep(bad) is not None
            with pytest.raises(ContractError):
                xi_from_rep(bad)
            mutants += 1
    assert mutants >= 50


def _small_groups():
    C2 = cyclic_group(2)
    yield from (cyclic_group(n) for n in range(2, 9))
    yield direct_product(C2, C2)
    yield direct_product(C2, cyclic_group(4))
    yield direct_product(C2, direct_product(C2, C2))
    yield symmetric_group(3)
    yield dihedral_group(4)
    yield quaternion_group()


def _all_subgroups(G):
    found = {}
    for a in range(G.n):
        for b in range(a, G.n):
            H = subgroup_closure(G, [a, b])
            found[H.members] = H
    return [found[k] for k in sorted(found)]


def _quadratic_characters(G):
    out = [(1,) * G.n]
    for K in _all_subgroups(G):
        if 2 * K.order == G.n and K.is_normal():
            out.append(tuple(1 if x in K else -1 for x in range(G.n)))
    return out


def test_criterion_3_restriction_extension_lemma():
    """extendable cocycle <=> class in the image of restriction, |G| <= 8, p = 7"""
    p = 7
    V = fl.standard_V(p, fl.smallest_nonresidue(p))[1]
    psl = fl.enumerate_projective(p, "PSL")
    pairs = checked = oracle = 0
    for G in _small_groups():
        for eps in _quadratic_characters(G):
            action = TwistedAction(eps, V, p)
            restricted_from = enumerate_cocycles(G.whole, action)
            for gamma in _all_subgroups(G):
                pairs += 1
                image = {tuple(x.values[s] for s in gamma.members) for x in restricted_from}
                local = enumerate_cocycles(gamma, action)
                keys = {c.key() for c in local}
                seen = set()
                for c in local:
                    if c.key() in seen:
                        continue
                    orbit = {coboundary_twist(c, a).key() for a in psl}
                    assert orbit <= keys
                    seen |= orbit
                    class_in_image = bool(orbit & image)
                    for k in orbit:
                        assert (k in image) == class_in_image
                        checked += 1
                index = G.n // gamma.order
                sample = local if index <= 2 else local[:5] if index <= MAX_ORACLE_INDEX else []
                for c in sample[:40]:
                    assert (cocycle_extension_search(c) is not None) == (c.key() in image)
                    oracle += 1
                assert seen == keys
    assert pairs > 100 and checked > 10_000 and oracle > 1000


def test_criterion_4_route_agreement(corpus):
    """Thm1, cyclic, Prop 3/4 and the cocycle oracle agree on the whole corpus"""
    assert len(corpus) >= 50
    assert {prob.p for prob in corpus} == set(PRIMES)
    answers = {True: 0, False: 0}
    for prob in corpus:
        report = cross_validate(prob, all_cp=True)
        assert report["agree"]
        assert len(report["verdicts"]) >= 2, prob.name
        answers[report["defined_over_Q"]] += 1
    assert answers[True] >= 10 and answers[False] >= 10


def test_criterion_5_named_fixtures():
    """S3/diag(1,2) descends with a checkable witness; C14 unipotent does not"""
    s3 = s3_diag(7)
    report = cross_validate(s3)
    assert report["defined_over_Q"] is True
    for verdict in report["results"].values():
        assert check_witness(s3, verdict) is None
    assert report["results"][CYCLIC].witness["g_tau"] == (0, 1, 1, 0)

    c14 = cyclic_unipotent(7)
    assert c14.G.n == 14
    report = cross_validate(c14)
    assert report["defined_over_Q"] is False
    cert = report["results"][CYCLIC].certificate
    assert cert[Mode.COMPATIBLE.value] > 0
    assert cert[Mode.STRONGLY_COMPATIBLE.value] == 0
    assert report["results"][CYCLIC].notes


def test_criterion_6_theorem2_lifting():
    """pgl_criterion <=> thm2_search; every chi multiplicative; every lambda = +-1"""
    fixtures = thm2_fixtures()
    assert {prob.p for prob in fixtures.values()} == {7, 13}
    both = {True: 0, False: 0}
    for prob in fixtures.values():
        g = pgl_criterion(prob)
        w = thm2_search(prob)
        assert (g is None) == (w is None), prob.name
        both[w is not None] += 1
        for w in thm2_witnesses(prob):
            assert w.lam in (1, -1)
            assert verify_character(prob.G, w.chi_map(), domain=prob.H, p=prob.p) is None
            assert check_thm2_witness(prob, w)
        if g is not None:
            h = lift_witness(g, prob.eps_p[prob.tau], prob.p)
            assert fl.det(h, prob.p) == prob.eps_p[prob.tau]
    assert both[True] > 0 and both[False] > 0


def test_criterion_7_involution_classification():
    """GL2(F_7): 56 involutions of det -1, all similar to diag(1,-1); GL2(F_13): h^2 = -I only for 5I, 8I"""
    p = 7
    minus_one = (p - 1, 0, 0, p - 1)
    hits = [h for h in fl.enumerate_gl2(p) if fl.det(h, p) == p - 1
            and fl.mat_mul(h, h, p) in ((1, 0, 0, 1), minus_one)]
    assert len(hits) == 56
    for h in hits:
        assert fl.mat_mul(h, h, p) == (1, 0, 0, 1)
        assert fl.similarity_witness(h, (1, 0, 0, p - 1), p) is not None

    p = 13
    minus_one = (p - 1, 0, 0, p - 1)
    roots = [h for h in fl.enumerate_gl2(p) if fl.det(h, p) == p - 1 and fl.mat_mul(h, h, p) == minus_one]
    assert roots == [(5, 0, 0, 5), (8, 0, 0, 8)]


def test_criterion_8_choice_independence(corpus):
    """verdicts invariant under every nonresidue v < 20 and every admissible c_p"""
    for prob in corpus:
        base = decide(prob).defined_over_Q
        vs = fl.nonresidues_below(prob.p, 20)
        assert len(vs) >= 3
        for v in vs:
            other = prob.with_v(v)
            assert decide(other).defined_over_Q == base, (prob.name, v)
            for c in admissible_cp(other):
                assert solve_via_props(other, c).defined_over_Q == base, (prob.name, v, c)


def test_criterion_9_round_trip():
    """restrictions of 100 random R: G -> PGL2(F_7) descend; lemma1_extend rebuilds R"""
    rng = random.Random(20240917)
    configs = _configurations()
    cyclic_seen = 0
    for k in range(100):
        label, G, H, eps = configs[k % len(configs)]
        R = random_homomorphism(G.whole, 7, rng, det_sign=dict(enumerate(eps)))
        assert verify_proj_rep(DescentProblem(G, G.whole, eps, R, 7)) is None
        prob = DescentProblem(G, H, eps, R.restrict(H), 7, name=f"{label}_{k}")
        verdict = decide(prob)
        assert verdict.defined_over_Q, prob.name
        assert check_witness(prob, verdict) is None
        data = cyclic_quotient_data(G, H)
        if data is not None:
            tau, d = data
            assert lemma1_extend(R.restrict(H), tau, R(tau), d) == R
            cyclic_seen += 1
    assert cyclic_seen >= 50
