import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from modtwist.errors import GroupTableError
from modtwist.groups import (FiniteGroup, build_group, coset_reps, cyclic_group, cyclic_quotient_data,
                             dihedral_group, direct_product, quaternion_group, subgroup_closure,
                             symmetric_group, verify_character)

S3 = symmetric_group(3)
C14 = cyclic_group(14)
SIGMA = S3.labels.index((1, 2, 0))


def test_cayley_c2():
    G = build_group({"cayley": [[0, 1], [1, 0]]})
    assert G.n == 2 and G.mul(1, 1) == 0


def test_perm_gens_s3():
    G = build_group({"perm_gens": [[1, 2, 0], [1, 0, 2]]})
    assert G.n == 6
    assert G.labels[0] == (0, 1, 2)


def test_non_associative_rejected():
    # a Latin square with identity 0 that is not a group (order 5 loop)
    table = [[0, 1, 2, 3, 4],
             [1, 0, 3, 4, 2],
             [2, 4, 0, 1, 3],
             [3, 2, 4, 0, 1],
             [4, 3, 1, 2, 0]]
    with pytest.raises(GroupTableError, match="associat"):
        FiniteGroup(table)


@pytest.mark.parametrize("table", [[[0, 1], [1, 1]], [[1, 0], [0, 1]], [[0, 1, 2], [1, 2, 0]]])
def test_malformed_tables(table):
    with pytest.raises(GroupTableError):
        FiniteGroup(table)


@pytest.mark.parametrize("G", [S3, C14, dihedral_group(4), quaternion_group(),
                               direct_product(cyclic_group(2), cyclic_group(4)), symmetric_group(4)],
                         ids=["s3", "c14", "d4", "q8", "c2xc4", "s4"])
def test_named_groups_associative(G):
    # brute-force associativity as an oracle for the generator-based check
    T = G.table
    for a, b, c in itertools.product(range(G.n), repeat=3):
        if G.n > 8 and (a + b + c) % 7:
            continue
        assert T[T[a][b]][c] == T[a][T[b][c]]
    for a in range(G.n):
        assert G.mul(a, G.inv(a)) == 0


def test_quaternion_is_not_abelian_and_has_one_involution():
    Q = quaternion_group()
    assert sum(1 for x in range(8) if Q.element_order(x) == 2) == 1
    assert Q.mul(1, 2) != Q.mul(2, 1)


def test_subgroup_closure_examples():
    assert S3.trivial.members == (0,)
    assert subgroup_closure(S3, []).members == (0,)
    assert subgroup_closure(S3, [SIGMA]).order == 3
    assert subgroup_closure(C14, [2]).order == 7


def test_coset_reps_examples():
    assert coset_reps(S3, S3.whole) == [0]
    assert len(coset_reps(S3, subgroup_closure(S3, [SIGMA]))) == 2
    assert coset_reps(C14, subgroup_closure(C14, [2])) == [0, 1]


def test_cyclic_quotient_examples():
    assert cyclic_quotient_data(C14, subgroup_closure(C14, [2])) == (1, 2)
    assert cyclic_quotient_data(S3, S3.trivial) is None
    tau, d = cyclic_quotient_data(S3, subgroup_closure(S3, [SIGMA]))
    assert d == 2 and S3.element_order(tau) == 2


def test_cyclic_quotient_non_normal():
    assert cyclic_quotient_data(S3, subgroup_closure(S3, [S3.labels.index((1, 0, 2))])) is None


@given(st.integers(1, 30), st.data())
def test_cyclic_quotient_invariant(n, data):
    G = cyclic_group(n)
    k = data.draw(st.integers(0, n - 1))
    H = subgroup_closure(G, [k])
    tau, d = cyclic_quotient_data(G, H)
    assert G.pow(tau, d) in H
    cosets = {frozenset(G.mul(G.pow(tau, j), h) for h in H) for j in range(d)}
    assert len(cosets) == d and d * H.order == n


def test_verify_character_examples():
    assert verify_character(S3, {x: 1 for x in range(6)}) is None
    assert verify_character(cyclic_group(2), {0: 1, 1: -1}) is None
    bad = verify_character(cyclic_group(3), {0: 1, 1: -1, 2: -1})
    assert bad is not None and bad.witness


def test_element_orders():
    assert S3.element_order(0) == 1
    assert cyclic_group(7).element_order(1) == 7
    assert S3.element_order(S3.labels.index((1, 0, 2))) == 2


@given(st.integers(1, 12), st.integers(1, 12))
def test_direct_product_order_and_identity(a, b):
    G = direct_product(cyclic_group(a), cyclic_group(b))
    assert G.n == a * b
    assert all(G.mul(0, x) == x for x in range(G.n))


def test_subgroup_normality():
    A3 = subgroup_closure(S3, [SIGMA])
    T = subgroup_closure(S3, [S3.labels.index((1, 0, 2))])
    assert A3.is_normal() and not T.is_normal()
    assert A3.intersect(T).members == (0,)
    assert S3.trivial.is_subgroup_of(T)
