import pytest

from sketchforge import (
    ArityMismatch,
    Atom,
    Base,
    Comp,
    Equation,
    Id,
    Pair,
    Prod,
    Proj1,
    Proj2,
    SApp,
    SVar,
    Spec,
    TermDecl,
    UNIT,
    UnknownVariable,
    desugar_equation,
    infer,
    validate,
)


def test_validate_oper_is_clean(corpus):
    assert validate(corpus["Oper"]) == []


def test_validate_flags_non_parallel_equation():
    X, Y, Z = Base("X"), Base("Y"), Base("Z")
    s = Spec(types=("X", "Y", "Z"),
             terms=(TermDecl("f", X, Y), TermDecl("g", X, Z)),
             equations=(Equation("bad", Atom("f"), Atom("g")),))
    codes = [d.code for d in validate(s)]
    assert codes == ["NonParallelEquation"]


def test_validate_flags_unknown_symbol():
    X, Y = Base("X"), Base("Y")
    s = Spec(types=("X", "Y"), terms=(TermDecl("f", X, Y),),
             equations=(Equation("bad", Atom("g"), Atom("f")),))
    assert [d.code for d in validate(s)] == ["UnknownSymbol"]
    s2 = Spec(types=("X",), terms=(TermDecl("f", X, Base("W")),))
    assert [d.code for d in validate(s2)] == ["UnknownSymbol"]


def test_desugar_associativity_shape(corpus):
    sgp = corpus["Sgp"]
    G = Base("G")
    lhs, rhs = desugar_equation(
        sgp,
        SApp("prd", (SVar("x"), SApp("prd", (SVar("y"), SVar("z"))))),
        SApp("prd", (SApp("prd", (SVar("x"), SVar("y"))), SVar("z"))),
        {"x": G, "y": G, "z": G})
    source = Prod(Prod(G, G), G)
    assert infer(sgp, lhs) == (source, G)
    assert infer(sgp, rhs) == (source, G)
    x = Comp(Proj1(G, G), Proj1(Prod(G, G), G))
    y = Comp(Proj2(G, G), Proj1(Prod(G, G), G))
    z = Proj2(Prod(G, G), G)
    assert lhs == Comp(Atom("prd"), Pair(x, Comp(Atom("prd"), Pair(y, z))))
    assert rhs == Comp(Atom("prd"), Pair(Comp(Atom("prd"), Pair(x, y)), z))


def test_desugar_single_variable_is_identity_projection(corpus):
    oper = corpus["Oper"]
    X = Base("X")
    lhs, rhs = desugar_equation(oper, SApp("f", (SVar("x"),)),
                                SApp("f", (SVar("x"),)), {"x": X})
    assert lhs == rhs == Comp(Atom("f"), Id(X))


def test_desugar_differential_equation_is_parallel(corpus):
    dm = corpus["Dm"]
    G = Base("G")
    lhs, rhs = desugar_equation(
        dm,
        SApp("dif", (SApp("prd", (SVar("x"), SVar("y"))),)),
        SApp("prd", (SApp("dif", (SVar("x"),)), SApp("dif", (SVar("y"),)))),
        {"x": G, "y": G})
    assert infer(dm, lhs) == (Prod(G, G), G)
    assert infer(dm, lhs) == infer(dm, rhs)


def test_desugar_constant_without_variables(corpus):
    dm = corpus["Dm"]
    lhs, rhs = desugar_equation(dm, SApp("dif", (SApp("unt", ()),)),
                                SApp("unt", ()), {})
    assert infer(dm, lhs) == (UNIT, Base("G"))
    assert infer(dm, rhs) == (UNIT, Base("G"))


def test_desugar_errors(corpus):
    sgp = corpus["Sgp"]
    G = Base("G")
    with pytest.raises(UnknownVariable):
        desugar_equation(sgp, SVar("x"), SVar("x"), {})
    with pytest.raises(ArityMismatch):
        desugar_equation(sgp, SApp("prd", (SVar("x"),)), SVar("x"), {"x": G})


def test_corpus_equations_are_parallel(corpus):
    for name, spec in corpus.items():
        for eq in spec.equations:
            assert infer(spec, eq.lhs) == infer(spec, eq.rhs), (name, eq.name)


def test_pure_subspec_is_wide(corpus):
    dm = corpus["Dm"]
    sub = dm.pure_subspec()
    assert sub.types == dm.types
    assert [d.name for d in sub.terms] == ["prd", "unt"]
    assert len(sub.equations) == 3
