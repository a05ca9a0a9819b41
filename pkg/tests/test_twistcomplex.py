import pytest

from dehntwist.bimodule import (
    BimodulePreMorphism,
    bimodule_relation_failures,
    component_degree_violations,
    cone,
    diagonal,
    is_closed,
    premorphisms_equal,
    product_bimodule,
    structure_tables_equal,
    zero_premorphism,
)
from dehntwist.category import CategoryError
from dehntwist.modules import yoneda_left, yoneda_right
from dehntwist.twistcomplex import (
    TwistTower,
    check_closedness_cases,
    check_evaluation_closedness,
    classify_case,
    classify_kind,
    drop_suffix_component,
    index_tuples,
    rearrange_cone,
    structure_census,
)


def test_index_tuples_small():
    assert index_tuples(0) == [()]
    assert index_tuples(2) == [(), (1,), (2,), (1, 2)]
    assert len(index_tuples(3)) == 8
    threes = index_tuples(3)
    assert threes == sorted(threes, key=lambda t: (len(t), t))


def test_stage_one_is_the_product(tower_sphere, sphere2):
    left = tower_sphere.L(1)
    prod = product_bimodule(yoneda_left(sphere2, "L"), yoneda_right(sphere2, "L"))
    for pair in left.pairs():
        assert left.dim(*pair) == prod.dim(*pair)
        assert left.space(*pair).degrees == prod.space(*pair).degrees


def test_stage_dims_a2(tower_a2):
    assert tower_a2.L(2).dim("L1", "L1") == 3
    summands = tower_a2.summands(tower_a2.L(2), "L1", "L1")
    assert [(s.index_tuple, s.dim) for s in summands] == [((2,), 1), ((1, 2), 2)]


def test_stage_mixed_inputs_vanish(tower_a2):
    stage = tower_a2.L(2)
    for (a, b) in stage.pairs():
        for m in stage.space(a, b).labels:
            for x in tower_a2.cat.chains(1, dst=a):
                for y in tower_a2.cat.chains(1, src=b):
                    assert stage.act(x, a, b, m, y) == frozenset()


def test_stage_relations(tower_a2):
    assert bimodule_relation_failures(tower_a2.L(1), 4) == []
    assert bimodule_relation_failures(tower_a2.L(2), 4) == []


def test_ev0_is_single_multiplication(tower_sphere):
    ev = tower_sphere.ev(0)
    out = ev.comp((), "L", "L", ((1,), ("e", "p")), ())
    assert out == {((), ("p",))}
    out2 = ev.comp(("p",), "L", "L", ((1,), ("e", "e")), ())
    assert out2 == frozenset()  # mu_3 vanishes on the sphere


def test_suffix_contraction_lands_one_step_down(tower_a2):
    ev = tower_a2.ev(1)
    # chain e1 (x) a (x) b over the tuple (1,2); collapsing the last block
    # multiplies a and b into p1 and lands in the tuple (1) summand, while
    # the total collapse mu_3 vanishes on this category
    out = ev.comp((), "L1", "L1", ((1, 2), ("e1", "a", "b")), ())
    assert out == {((1,), ("e1", "p1"))}
    # on a length-one tuple the only term is the total collapse
    out2 = ev.comp((), "L1", "L1", ((2,), ("a", "b")), ())
    assert out2 == {((), ("p1",))}


def test_ev_components_have_degree_zero(tower_a2):
    for i in range(tower_a2.n):
        assert component_degree_violations(tower_a2.ev(i), 4) == []
    assert component_degree_violations(tower_a2.tilde_ev(), 4) == []


def test_ev_closed(tower_a2, tower_sphere):
    for tower in (tower_sphere, tower_a2):
        for i in range(tower.n):
            assert is_closed(tower.ev(i), 4)
        assert is_closed(tower.tilde_ev(), 4)


def test_cone_model_dims(tower_sphere, tower_a2):
    assert tower_sphere.G(1).dim("L", "L") == 6
    h = tower_sphere.G(1).complex_at("L", "L").homology()
    assert h.total_rank == 2
    assert tower_a2.G(2).dim("L1", "L1") == 9


def test_cone_model_n0_is_diagonal(a2chain):
    tower = TwistTower(a2chain, [])
    g0 = tower.G(0)
    d = diagonal(a2chain)
    for pair in d.pairs():
        assert g0.dim(*pair) == d.dim(*pair)
        assert [lab for (tup, (lab,)) in g0.space(*pair).labels] == list(
            d.space(*pair).labels
        )


def test_twist_complex_dims(tower_sphere, tower_a2):
    assert tower_sphere.E(1).dim("L", "L") == 4
    dims = {p: tower_a2.E(2).dim(*p) for p in tower_a2.E(2).pairs()}
    assert dims == {
        ("L1", "L1"): 7,
        ("L1", "L2"): 8,
        ("L2", "L1"): 5,
        ("L2", "L2"): 7,
    }


def test_twist_complex_dim_is_cone_model_minus_diagonal(tower_a2, a2chain):
    for a, b in tower_a2.E(2).pairs():
        assert tower_a2.E(2).dim(a, b) == tower_a2.G(2).dim(a, b) - a2chain.hom(a, b).dim


def test_twist_complex_relations(tower_a2):
    assert bimodule_relation_failures(tower_a2.E(2), 4) == []
    assert bimodule_relation_failures(tower_a2.G(2), 4) == []


def test_stage_one_collapse_equals_surgery_map(tower_sphere, sphere2):
    # with one sphere the rearranged complex is the product bimodule and the
    # collapse morphism is mu_{r+s+2} on the nose
    e1 = tower_sphere.E(1)
    diag = tower_sphere.diagonal
    cat = sphere2

    def comp(achain, a, b, m, bchain):
        tup, chain = m
        return cat.mu_apply(achain + chain + bchain)

    direct = BimodulePreMorphism(e1, diag, 0, "mu", comp)
    ok, witness = premorphisms_equal(tower_sphere.tilde_ev(1), direct, 4)
    assert ok, witness


def test_rearranged_tables_agree(tower_a2):
    tower_a2.E(2)
    assert tower_a2.rearrangement_checks
    assert all(c["tables_equal"] for c in tower_a2.rearrangement_checks)


def test_rearrange_cone_generic(sphere2):
    # f with no component into the cone's target part leaves g unchanged
    d = diagonal(sphere2)
    g = zero_premorphism(d, d)
    c = cone(g)

    def comp(achain, a, b, m, bchain):
        if not achain and not bchain:
            return frozenset({("c0", m)})
        return frozenset()

    f = BimodulePreMorphism(d, c, 0, "into-shifted", comp)
    f_t, g_t, check = rearrange_cone(f, g)
    assert check["tables_equal"]
    for m in d.space("L", "L").labels:
        assert g_t.comp((), "L", "L", ("c1", m), ()) == frozenset()


def test_cone_of_collapse_matches_cone_model(tower_a2):
    # the cone over the collapse morphism and the iterated cone carry the
    # same homology at every pair, degree by degree
    c = cone(tower_a2.tilde_ev(), check_bound=None)
    for pair in tower_a2.G(2).pairs():
        h_cone = c.complex_at(*pair).homology(representatives=False).ranks
        h_model = tower_a2.G(2).complex_at(*pair).homology(representatives=False).ranks
        assert h_cone == h_model


def test_closedness_cases_pass(tower_sphere, tower_a2):
    rep = check_evaluation_closedness(tower_sphere, 4)
    assert rep.ok
    assert rep.per_ev[0]["0"].blocks > 0
    rep2 = check_evaluation_closedness(tower_a2, 4)
    assert rep2.ok
    assert rep2.per_ev[1]["3"].blocks > 0


def test_closedness_cases_n3(tower_a3):
    rep = check_evaluation_closedness(tower_a3, 3)
    assert rep.ok
    # interior-run blocks only show up once tuples reach length three
    assert rep.per_ev[2]["1"].blocks > 0


def test_mutated_morphism_fails_with_witness(tower_a2):
    bad = drop_suffix_component(tower_a2.ev(1), (1, 2), 1)
    cases, _ = check_closedness_cases(bad, 4)
    mismatches = {c: len(t.mismatches) for c, t in cases.items() if t.mismatches}
    assert mismatches, "the mutation must be detected"
    witness = next(t.mismatches[0] for t in cases.values() if t.mismatches)
    achain, a, b, m, bchain, tup, lhs, rhs = witness
    assert m[0] == (1, 2)
    assert lhs != rhs


def test_classify_case_shapes():
    assert classify_case((1, 2, 3), ()) == "0"
    assert classify_case((1, 2, 3), (1,)) == "3"
    assert classify_case((1, 2, 3), (1, 2)) == "3"
    assert classify_case((1, 2, 3), (2,)) == "1"
    assert classify_case((1, 2, 3, 4), (1, 3)) == "2"
    assert classify_case((1, 2, 3), (2, 3)) == "other"
    assert classify_case((1, 2, 3), (1, 3)) == "other"
    assert classify_case((1, 2), (1, 2)) == "other"
    assert classify_case((1, 2), (3,)) == "other"


def test_classify_kind_shapes():
    assert classify_kind((1, 2), (), 1, 1) == "full"
    assert classify_kind((1, 2), (1,), 0, 0) == "suffix"
    assert classify_kind((1, 2), (2,), 1, 0) == "prefix"
    assert classify_kind((1, 2, 3), (1, 3), 0, 0) == "middle"
    assert classify_kind((1, 2), (1, 2), 1, 0) == "prefix"
    assert classify_kind((1, 2), (1, 2), 0, 2) == "suffix"
    assert classify_kind((1, 2), (1, 2), 0, 0) == "internal"
    assert classify_kind((), (), 0, 0) == "diagonal"


def test_census_reports_missing_collapse(tower_a2):
    census = structure_census(tower_a2, tower_a2.E(2), bound=2)
    comparison = census["reference_comparison"]
    assert not census["has_diagonal_summand"]
    for klass in ("mixed", "left", "right"):
        assert comparison[klass].get("collapse_listed_but_no_target") is True
        assert comparison[klass]["unlisted_kinds"] == []
    assert "left/prefix" in census["counts"]
    assert "right/suffix" in census["counts"]


def test_census_cone_model_has_collapse(tower_a2):
    census = structure_census(tower_a2, tower_a2.G(2), bound=2)
    assert census["has_diagonal_summand"]
    assert any(key.endswith("/full") for key in census["counts"])


def test_tower_index_bounds(tower_a2):
    with pytest.raises(CategoryError):
        tower_a2.L(3)
    with pytest.raises(CategoryError):
        tower_a2.ev(2)


def test_tower_rejects_non_sphere(a2chain):
    bad = a2chain
    with pytest.raises(CategoryError):
        TwistTower(bad, ["L1", "nope"])
