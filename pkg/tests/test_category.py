import pytest

from dehntwist.category import (
    AInftyCategory,
    AInftyFunctor,
    CategoryError,
    Generator,
    ParseError,
    check_ainfty,
    default_max_order,
    identity_functor,
    parse_category,
)

from conftest import FIXTURES


def test_parse_sphere2(sphere2):
    assert sphere2.objects == ("L",)
    assert sphere2.hom("L", "L").dim == 2
    assert sphere2.sphere_dim == {"L": 2}
    assert sphere2.unit("L") == "e"
    assert sphere2.mu_apply(("p", "p")) == frozenset()
    assert sphere2.mu_apply(("e", "p")) == {"p"}


def test_parse_a2chain(a2chain):
    assert a2chain.objects == ("L1", "L2")
    total = sum(
        a2chain.hom(x, y).dim for x in a2chain.objects for y in a2chain.objects
    )
    assert total == 6
    assert a2chain.mu_apply(("a", "b")) == {"p1"}
    assert a2chain.mu_apply(("b", "a")) == {"p2"}
    assert a2chain.degree("a") == 1


def test_degree_law_error_names_line():
    text = """category bad
object L
gen L L e 0
gen L L p 2
unit L e
mu 2 : p p -> p
"""
    with pytest.raises(ParseError) as err:
        parse_category(text)
    assert err.value.line == 6
    assert "degree law" in str(err.value)


def test_unknown_generator_line():
    text = "category bad\nobject L\ngen L L e 0\nunit L e\nmu 2 : e q -> e\n"
    with pytest.raises(ParseError) as err:
        parse_category(text)
    assert err.value.line == 5


def test_non_composable_entry_rejected():
    text = """category bad
object L1
object L2
gen L1 L1 e1 0
gen L2 L2 e2 0
gen L1 L2 a 1
unit L1 e1
unit L2 e2
mu 2 : a a -> a
"""
    with pytest.raises(ParseError) as err:
        parse_category(text)
    assert "compose" in str(err.value)


def test_unit_row_consistency():
    good = "category c\nobject L\ngen L L e 0\ngen L L p 2\nunit L e\nmu 2 : e p -> p\n"
    cat = parse_category(good)
    assert cat.mu_apply(("e", "p")) == {"p"}
    bad = "category c\nobject L\ngen L L e 0\ngen L L p 2\nunit L e\nmu 2 : p e -> e\n"
    with pytest.raises(ParseError):
        parse_category(bad)


def test_missing_unit_rejected():
    with pytest.raises(ParseError):
        parse_category("category c\nobject L\ngen L L e 0\n")


def test_sphere_shape_enforced():
    text = """category c
object L
sphere L 2
gen L L e 0
gen L L p 2
gen L L q 3
unit L e
"""
    with pytest.raises(ParseError) as err:
        parse_category(text)
    assert "sphere" in str(err.value)


def test_check_ainfty_passes_bundled(sphere2, a2chain):
    assert check_ainfty(sphere2, 6).ok
    assert check_ainfty(a2chain, 6).ok


def test_check_ainfty_catches_broken_fixture():
    cat = parse_category((FIXTURES / "broken_assoc.afc").read_text())
    rep = check_ainfty(cat, 3)
    assert not rep.ok
    orders = {v.order for v in rep.violations}
    assert 3 in orders
    chains = {v.chain for v in rep.violations}
    assert ("g", "f", "g") in chains


def test_degree_breaking_constant_rejected_at_construction(a2chain):
    # the degree law is validated before relations ever run, so an entry
    # like mu2(p1, p1) = p1 cannot even be constructed
    gens = list(a2chain.gens.values())
    mu = dict(a2chain.mu)
    mu[("p1", "p1")] = frozenset({"p1"})
    with pytest.raises(CategoryError):
        AInftyCategory("bad", a2chain.objects, gens, a2chain.units, mu, a2chain.sphere_dim)


def test_default_max_order_capped(a2chain):
    assert default_max_order(a2chain) == 8


def test_chain_enumeration(a2chain):
    assert a2chain.chains(0) == ((),)
    assert len(a2chain.chains(1)) == 4
    # every composable length-2 word over {p1, p2, a, b}
    assert set(a2chain.chains(2)) == {
        ("p1", "p1"), ("p1", "a"), ("a", "p2"), ("a", "b"),
        ("p2", "p2"), ("p2", "b"), ("b", "p1"), ("b", "a"),
    }
    assert all(c[-1] in ("a", "p2", "b") for c in a2chain.chains(2, dst="L2") or [("a",)])
    with_units = a2chain.chains(1, units=True)
    assert len(with_units) == 6


def test_mu_preimages(a2chain):
    assert a2chain.mu_preimages("p1") == (("a", "b"), ("e1", "p1"), ("p1", "e1"))
    assert a2chain.mu_preimages("a") == (("a", "e2"), ("e1", "a"))


def test_identity_functor_strict(a2chain):
    phi = identity_functor(a2chain)
    assert phi.strict
    assert phi.on_object("L1") == "L1"
    assert phi.component(("a",)) == {"a"}


def test_functor_validation(a2chain):
    with pytest.raises(CategoryError):
        AInftyFunctor(a2chain, {o: o for o in a2chain.objects}, {"a": frozenset({"b"})})
