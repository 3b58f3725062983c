import pytest

from modtwist import fp_linalg as fl
from modtwist.corpus import c2p_thm2_unipotent, c2xc4_thm2, klein_thm2, thm2_fixtures
from modtwist.elliptic import (Thm2Problem, check_thm2_witness, classify_iq, lift_witness, pgl_criterion,
                               thm2_search, thm2_witnesses)
from modtwist.errors import ContractError
from modtwist.fp_linalg import InvolutionClass
from modtwist.groups import cyclic_group, direct_product, subgroup_closure
from modtwist.reps import IDENTITY, LinRep


def test_klein_witness_diag():
    prob = klein_thm2(7)
    ws = list(thm2_witnesses(prob))
    diag = [w for w in ws if w.h == (1, 0, 0, 6)]
    assert len(diag) == 1
    w = diag[0]
    assert set(w.chi_map().values()) == {1} and w.lam == 1
    assert check_thm2_witness(prob, w)
    assert all(check_thm2_witness(prob, w) for w in ws)


def test_trivial_rho_witness_exists():
    prob = klein_thm2(7, rho_s=IDENTITY, eps_s=1, name="t")
    w = thm2_search(prob)
    assert w is not None and fl.det(w.h, 7) == 6
    assert any(x.h == (1, 0, 0, 6) for x in thm2_witnesses(prob))


def test_unipotent_has_no_witness():
    prob = c2p_thm2_unipotent(7)
    assert thm2_search(prob) is None
    assert pgl_criterion(prob) is None


def test_pgl_criterion_klein():
    prob = klein_thm2(7)
    g = pgl_criterion(prob)
    assert g is not None
    from modtwist.reps import Mode, compatibility_witnesses
    found = compatibility_witnesses(prob.projectivize(), prob.tau, prob.d, Mode.STRONGLY_COMPATIBLE)
    assert (1, 0, 0, 6) in found


@pytest.mark.parametrize("name", sorted(thm2_fixtures()))
def test_pgl_criterion_equivalent_to_gl2_search(name):
    prob = thm2_fixtures()[name]
    w = thm2_search(prob)
    g = pgl_criterion(prob)
    assert (w is None) == (g is None)
    if g is not None:
        h = lift_witness(g, prob.eps_p[prob.tau], prob.p)
        assert fl.det(h, prob.p) == prob.eps_p[prob.tau]


def test_lift_examples():
    assert lift_witness((1, 0, 0, 6), 6, 7) == (1, 0, 0, 6)
    assert lift_witness(IDENTITY, 4, 7) == (2, 0, 0, 2)
    with pytest.raises(ContractError):
        lift_witness(IDENTITY, 3, 7)


def test_classify_examples():
    prob = klein_thm2(7)
    for w in thm2_witnesses(prob):
        assert classify_iq(prob, w) == InvolutionClass.diag_one_minus_one()


def test_classify_requires_quadratic():
    prob = c2p_thm2_unipotent(7)
    from modtwist.elliptic import Thm2Witness
    with pytest.raises(ContractError):
        classify_iq(c2xc4_thm2(13), Thm2Witness(IDENTITY, (), 1))
    assert prob.d == 2


def test_scalar_witness_at_13():
    # G = C2 x C4, H = <s> with trivial rho: tau may map to i*I when -1 = i^2 and det(iI) = -1
    G = direct_product(cyclic_group(2), cyclic_group(4))
    H = subgroup_closure(G, [1])
    eps_p = tuple(pow(12, x // 4, 13) for x in range(8))
    prob = Thm2Problem(G, H, 4, LinRep(H, {x: IDENTITY for x in H.members}, 13), eps_p, 13)
    scal = [w for w in thm2_witnesses(prob) if fl.is_scalar(w.h)]
    assert sorted(w.h for w in scal) == [(5, 0, 0, 5), (8, 0, 0, 8)]
    for w in scal:
        assert w.lam == -1
        assert classify_iq(prob, w) == InvolutionClass.scalar_i(w.h[0])


def test_problem_validation():
    G = direct_product(cyclic_group(2), cyclic_group(2))
    H = subgroup_closure(G, [1])
    rho = LinRep(H, {0: IDENTITY, 1: (1, 0, 0, 6)}, 7)
    with pytest.raises(ContractError):
        Thm2Problem(G, H, 1, rho, (1, 6, 6, 1), 7)  # tau in H
    with pytest.raises(ContractError):
        Thm2Problem(G, H, 2, rho, (1, 3, 6, 1), 7)  # det rho(s) = 6 but eps_p(s) = 3
    with pytest.raises(ContractError):
        Thm2Problem(G, H, 2, rho, (1, 6, 6, 6), 7)  # not multiplicative
