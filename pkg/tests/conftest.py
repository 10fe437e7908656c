import itertools
from pathlib import Path

import pytest

from sketchforge import (
    Atom,
    Bang,
    Base,
    Comp,
    Id,
    Pair,
    Proj1,
    Proj2,
    Prod,
    Spec,
    UNIT,
    infer,
    make_oracle,
    parse_file,
    underlying_spec,
)
from sketchforge.parser import Parser

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

FIXTURE_SPECS = [
    ("oper.sf", "Oper"),
    ("sgp.sf", "Sgp"),
    ("mon.sf", "Mon"),
    ("dm.sf", "Dm"),
    ("nat.sf", "Nat"),
    ("state.sf", "St"),
]


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def corpus() -> dict[str, Spec]:
    """The decorated fixture presentations, by block name."""
    out = {}
    for filename, name in FIXTURE_SPECS:
        out[name] = underlying_spec(parse_file(FIXTURES / filename)[name])
    out["Mgm"] = underlying_spec(parse_file(FIXTURES / "sgp.sf")["Mgm"])
    out["NatPred"] = underlying_spec(parse_file(FIXTURES / "nat.sf")["NatPred"])
    return out


@pytest.fixture(scope="session")
def oracle():
    return make_oracle()


def goal(spec: Spec, text: str):
    """Parse an equation text (combinator or sugared) against a spec."""
    parser = Parser(f"g : {text}")
    eq = parser.parse_equation(spec)
    assert parser.peek().kind == "eof"
    return eq.lhs, eq.rhs


def proof_corpus(corpus) -> list[tuple[str, Spec, object, object]]:
    """Entailment goals that must all be proven: unit laws, beta/eta
    instances, reassociations and consequences of the differential laws."""
    sgp, mon, dm = corpus["Sgp"], corpus["Mon"], corpus["Dm"]
    nat, natp, oper = corpus["Nat"], corpus["NatPred"], corpus["Oper"]
    goals = []

    def add(name, spec, text):
        goals.append((name, spec, *goal(spec, text)))

    add("sgp-assoc", sgp, "prd(x, prd(y, z)) == prd(prd(x, y), z)"
        " where x y z : G")
    add("sgp-reassoc-4", sgp,
        "prd(x, prd(y, prd(z, w))) == prd(prd(prd(x, y), z), w)"
        " where x y z w : G")
    add("sgp-reassoc-5", sgp,
        "prd(v, prd(x, prd(y, prd(z, w)))) =="
        " prd(prd(prd(prd(v, x), y), z), w) where v x y z w : G")
    add("sgp-middle", sgp,
        "prd(prd(x, y), prd(z, w)) == prd(x, prd(y, prd(z, w)))"
        " where x y z w : G")
    add("sgp-beta", sgp, "p1[G, G] . pair(prd, prd) == prd")
    add("sgp-eta", sgp, "pair(p1[G, G], p2[G, G]) == id[G * G]")
    add("sgp-unitlaw", sgp, "prd . id[G * G] == id[G] . prd")
    add("mon-unit-both", mon, "prd(unt, prd(x, unt)) == x where x : G")
    add("mon-unit-chain", mon,
        "prd(prd(x, unt), y) == prd(x, y) where x y : G")
    add("mon-closed", mon, "prd(unt, unt) == unt")
    add("mon-swap-unit", mon,
        "prd(x, prd(unt, y)) == prd(prd(x, unt), y) where x y : G")
    add("dm-axiom", dm, "dif(prd(x, y)) == prd(dif(x), dif(y)) where x y : G")
    add("dm-triple", dm, "dif(dif(dif(x))) == unt where x : G")
    add("dm-dif-unt-left", dm, "prd(dif(unt), x) == x where x : G")
    add("dm-under-prd", dm, "dif(prd(unt, x)) == dif(x) where x : G")
    add("dm-square-prd", dm,
        "dif(dif(prd(x, y))) == unt where x y : G")
    add("nat-unit", nat, "s . id[N] == s")
    add("nat-z-chain", nat, "(s . z) . id[1] == s . z")
    add("nat-collapse", nat, "bang[N] . s == bang[N]")
    add("natp-axiom", natp, "p . s == id[N]")
    add("natp-replacement", natp, "s . p . s == s")
    add("natp-double", natp, "p . s . p . s == id[N]")
    add("oper-unit", oper, "f . id[X] == id[Y] . f")
    add("oper-eta", oper, "pair(p1[X, Y], p2[X, Y]) == id[X * Y]")
    return goals


# A small exhaustive expression generator, used for closure properties.


def generate_exprs(spec: Spec, depth: int, per_level: int = 400):
    """All well-typed expressions over a spec's signature up to a depth,
    capped per level; deterministic order."""
    types = set()
    for decl in spec.terms:
        from sketchforge.expr import type_subexprs
        types.update(type_subexprs(decl.dom))
        types.update(type_subexprs(decl.cod))
    for name in spec.types:
        types.add(Base(name))
    types.add(UNIT)
    types = sorted(types, key=repr)

    level = []
    for decl in spec.terms:
        level.append(Atom(decl.name))
    for t in types:
        level.append(Id(t))
        level.append(Bang(t))
        if isinstance(t, Prod):
            level.append(Proj1(t.left, t.right))
            level.append(Proj2(t.left, t.right))
    seen = list(level)
    for _d in range(depth - 1):
        new = []
        for a in seen:
            adom, acod = infer(spec, a)
            for b in level:
                bdom, bcod = infer(spec, b)
                if bcod == adom:
                    new.append(Comp(a, b))
                if adom == bdom:
                    new.append(Pair(a, b))
                if len(new) > per_level:
                    break
            if len(new) > per_level:
                break
        seen.extend(new)
        level = new
    return seen
