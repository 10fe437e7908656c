import pytest

from sketchforge import (
    Atom,
    Bang,
    Base,
    Comp,
    Id,
    IllTyped,
    Pair,
    Proj1,
    Proj2,
    Prod,
    UNIT,
    infer,
    is_pure,
)
from conftest import generate_exprs


def test_infer_product_application(corpus):
    sgp = corpus["Sgp"]
    G = Base("G")
    e = Comp(Atom("prd"), Pair(Proj1(G, G), Proj2(G, G)))
    assert infer(sgp, e) == (Prod(G, G), G)


def test_infer_identity(corpus):
    oper = corpus["Oper"]
    assert infer(oper, Id(Base("X"))) == (Base("X"), Base("X"))


def test_infer_rejects_bad_composition(corpus):
    oper = corpus["Oper"]
    with pytest.raises(IllTyped):
        infer(oper, Comp(Atom("f"), Atom("f")))


def test_infer_pair_and_bang(corpus):
    oper = corpus["Oper"]
    X, Y = Base("X"), Base("Y")
    assert infer(oper, Pair(Atom("f"), Id(X))) == (X, Prod(Y, X))
    assert infer(oper, Bang(Prod(X, Y))) == (Prod(X, Y), UNIT)


def test_purity_of_atoms(corpus):
    nat = corpus["Nat"]
    assert is_pure(nat, Atom("z"))
    assert not is_pure(nat, Comp(Atom("s"), Atom("z")))


def test_projections_and_pairings_are_pure(corpus):
    sgp = corpus["Sgp"]
    G = Base("G")
    assert is_pure(sgp, Pair(Proj1(G, G), Proj2(G, G)))
    assert is_pure(sgp, Id(G))
    assert is_pure(sgp, Bang(G))


def test_purity_is_a_homomorphism(corpus):
    """Purity of compounds is the conjunction of the parts, exhaustively on
    generated expressions."""
    dm = corpus["Dm"]
    for e in generate_exprs(dm, depth=4):
        if isinstance(e, Comp):
            assert is_pure(dm, e) == (is_pure(dm, e.after)
                                      and is_pure(dm, e.before))
        elif isinstance(e, Pair):
            assert is_pure(dm, e) == (is_pure(dm, e.fst)
                                      and is_pure(dm, e.snd))
        elif isinstance(e, (Id, Proj1, Proj2, Bang)):
            assert is_pure(dm, e)


def test_infer_total_on_generated(corpus):
    nat = corpus["Nat"]
    for e in generate_exprs(nat, depth=4):
        dom, cod = infer(nat, e)
        assert infer(nat, e) == (dom, cod)  # deterministic
