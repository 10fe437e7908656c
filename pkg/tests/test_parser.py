from pathlib import Path

import pytest

from sketchforge import (
    ParamConstSpec,
    ParamSpec,
    format_document,
    format_spec,
    parse_document,
    parse_file,
)
from sketchforge.parser import ParseError


def all_fixture_files(fixtures_dir: Path):
    return sorted(fixtures_dir.glob("*.sf"))


def test_roundtrip_on_corpus(fixtures_dir):
    for path in all_fixture_files(fixtures_dir):
        doc = parse_file(path)
        printed = format_document(doc)
        doc2 = parse_document(printed)
        assert list(doc.entries) == list(doc2.entries), path.name
        for name in doc.entries:
            assert doc.entries[name] == doc2.entries[name], (path.name, name)


def test_printing_is_idempotent(fixtures_dir):
    for path in all_fixture_files(fixtures_dir):
        printed = format_document(parse_file(path))
        again = format_document(parse_document(printed))
        assert printed == again, path.name


def test_param_blocks_print_their_keywords(fixtures_dir):
    doc = parse_file(fixtures_dir / "pi.sf")
    pia = doc["Pia"]
    assert isinstance(pia, ParamConstSpec)
    text = format_spec(pia, "Pia")
    assert "param type A" in text
    assert "param const a : A" in text
    assert isinstance(doc["PiA"], ParamSpec)


def test_extends_merges_declarations(fixtures_dir):
    doc = parse_file(fixtures_dir / "dm.sf")
    mon, dm = doc["Mon"], doc["Dm"]
    assert set(mon.term_names()) <= set(dm.term_names())
    assert len(dm.equations) == 6


def test_sugared_and_combinator_equations_coexist():
    doc = parse_document("""
        spec T {
          type N
          term s : N -> N
          term p : N -> N
          eq a : p . s == id[N]
          eq b : p(s(x)) == x where x : N
        }
    """)
    spec = doc["T"]
    a, b = spec.equations
    assert a.lhs != b.lhs  # combinator form keeps the raw tree
    from sketchforge import normalize
    assert normalize(spec, a.lhs) == normalize(spec, b.lhs)
    assert normalize(spec, a.rhs) == normalize(spec, b.rhs)


def test_parse_error_reports_location():
    with pytest.raises(ParseError) as err:
        parse_document("spec X { type }")
    assert "1:" in str(err.value)


def test_unknown_reference_is_an_error():
    with pytest.raises(ParseError):
        parse_document("morphism m : A -> B { }")


def test_invalid_spec_rejected_at_parse_time():
    with pytest.raises(ParseError) as err:
        parse_document("spec X { type T term f : T -> U }")
    assert "UnknownSymbol" in str(err.value)


def test_non_parallel_sugared_equation_rejected():
    with pytest.raises(ParseError):
        parse_document("""
            spec X {
              type T
              type U
              term f : T -> U
              eq bad : f(x) == x where x : T
            }
        """)
