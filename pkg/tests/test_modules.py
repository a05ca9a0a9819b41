import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dehntwist.category import CategoryError
from dehntwist.modules import (
    abstract_twist,
    iterated_twist_oracle,
    module_relation_failures,
    yoneda_left,
    yoneda_right,
)
from dehntwist.twistcomplex import index_tuples


def test_yoneda_left_sphere(sphere2):
    m = yoneda_left(sphere2, "L")
    assert m.space("L").dim == 2
    assert m.act((), "L", "e") == frozenset()  # mu_1 vanishes
    assert m.act(("p",), "L", "e") == {"p"}


def test_yoneda_left_a2(a2chain):
    m = yoneda_left(a2chain, "L2")
    assert m.space("L1").dim == 1
    assert m.space("L1").labels == ("a",)


def test_yoneda_right_action(a2chain):
    m = yoneda_right(a2chain, "L1")
    # right module: element first, then the chain, in path order
    assert m.act(("b",), "L2", "a") == {"p1"}


def test_yoneda_relations(sphere2, a2chain):
    for cat, obj in ((sphere2, "L"), (a2chain, "L1")):
        assert module_relation_failures(yoneda_left(cat, obj), 4) == []
        assert module_relation_failures(yoneda_right(cat, obj), 4) == []


def test_twist_dimension_and_degrees(sphere2):
    tw = abstract_twist(yoneda_left(sphere2, "L"), "L")
    space = tw.space("L")
    assert space.dim == 6
    # the new summand carries hom(L,L) (x) M(L) with degrees lowered by one
    new = [d for lab, d in zip(space.labels, space.degrees) if lab[0] == "e"]
    assert sorted(new) == [-1, 1, 1, 3]


def test_twist_requires_left_module(a2chain):
    with pytest.raises(CategoryError):
        abstract_twist(yoneda_right(a2chain, "L1"), "L1")


def test_twist_relations(a2chain):
    tw = abstract_twist(yoneda_left(a2chain, "L2"), "L1")
    assert module_relation_failures(tw, 4) == []
    assert module_relation_failures(tw, 2, units=True) == []


def test_iterated_twist_relations(a2chain):
    oracle = iterated_twist_oracle(a2chain, ["L1", "L2"], "L1")
    assert module_relation_failures(oracle, 4) == []


def test_oracle_empty_list_is_yoneda(a2chain):
    oracle = iterated_twist_oracle(a2chain, [], "L2")
    plain = yoneda_left(a2chain, "L2")
    for obj in a2chain.objects:
        assert oracle.space(obj) == plain.space(obj)


def test_oracle_needs_spheres(a2chain):
    with pytest.raises(CategoryError):
        iterated_twist_oracle(a2chain, ["nope"], "L1")


def test_sphere_oracle_homology_rank(sphere2):
    oracle = iterated_twist_oracle(sphere2, ["L"], "L")
    h = oracle.complex_at("L").homology()
    assert h.total_rank == 2
    assert h.ranks == {1: 1, 3: 1}


def test_oracle_dimension_matches_tuple_count(a2chain):
    # the twisted module's dimension at each object equals the sum over
    # increasing index tuples of the product of hom dimensions along the chain
    spheres = ["L1", "L2"]
    oracle = iterated_twist_oracle(a2chain, spheres, "L1")
    for obj in a2chain.objects:
        expected = 0
        for tup in index_tuples(len(spheres)):
            objs = [obj] + [spheres[j - 1] for j in tup] + ["L1"]
            dim = 1
            for x, y in zip(objs, objs[1:]):
                dim *= a2chain.hom(x, y).dim
            expected += dim
        assert oracle.space(obj).dim == expected


def test_oracle_a2_count(a2chain):
    oracle = iterated_twist_oracle(a2chain, ["L1", "L2"], "L1")
    assert oracle.space("L1").dim == 9


@given(
    n=st.integers(0, 2),
    n_prime=st.sampled_from(["L1", "L2"]),
    at=st.sampled_from(["L1", "L2"]),
)
@settings(max_examples=12, deadline=None)
def test_twist_degrees_drop_by_tuple_length(a2chain_mod, n, n_prime, at):
    # degree of a tuple-(i1..ik) element is the chain degree minus k
    cat = a2chain_mod
    spheres = ["L1", "L2"][:n]
    oracle = iterated_twist_oracle(cat, spheres, n_prime)
    space = oracle.space(at)

    def chain_degree(lab, depth=0):
        if isinstance(lab, str):
            return cat.degree(lab), 0
        if lab[0] == "m":
            return chain_degree(lab[1])
        _, b, inner = lab
        d, k = chain_degree(inner)
        return d + cat.degree(b), k + 1

    for lab, deg in zip(space.labels, space.degrees):
        total, k = chain_degree(lab)
        assert deg == total - k


@pytest.fixture(scope="module")
def a2chain_mod(a2chain):
    return a2chain
