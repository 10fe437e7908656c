"""Canonical pretty-printer for the DSL; parsing its output restores the
same objects (equations print in combinator form, never re-sugared)."""

from __future__ import annotations

from .expr import (
    UNIT,
    Atom,
    Bang,
    Comp,
    Id,
    Pair,
    Proj1,
    Proj2,
    Prod,
    Base,
    TermExpr,
    TypeExpr,
)
from .morphism import Morphism, NatTrans
from .spec import ParamConstSpec, ParamSpec, Spec, underlying_spec


def format_type(t: TypeExpr) -> str:
    if t == UNIT:
        return "1"
    if isinstance(t, Base):
        return t.name
    assert isinstance(t, Prod)
    left = format_type(t.left)
    if isinstance(t.left, Prod):
        left = f"({left})"
    return f"{left} * {format_type(t.right)}"


def format_term(e: TermExpr) -> str:
    if isinstance(e, Atom):
        return e.name
    if isinstance(e, Id):
        return f"id[{format_type(e.at)}]"
    if isinstance(e, Proj1):
        return f"p1[{format_type(e.left)}, {format_type(e.right)}]"
    if isinstance(e, Proj2):
        return f"p2[{format_type(e.left)}, {format_type(e.right)}]"
    if isinstance(e, Bang):
        return f"bang[{format_type(e.source)}]"
    if isinstance(e, Pair):
        return f"pair({format_term(e.fst)}, {format_term(e.snd)})"
    assert isinstance(e, Comp)
    after = format_term(e.after)
    if isinstance(e.after, Comp):
        after = f"({after})"
    return f"{after} . {format_term(e.before)}"


def format_spec(obj: Spec | ParamSpec | ParamConstSpec, name: str = "S") -> str:
    spec = underlying_spec(obj)
    param_type = None
    param_const = None
    if isinstance(obj, ParamSpec):
        param_type = obj.param_type
    elif isinstance(obj, ParamConstSpec):
        param_type = obj.base.param_type
        param_const = obj.param_const
    lines = [f"spec {name} {{"]
    for t in spec.types:
        if t == param_type:
            lines.append(f"  param type {t}")
        else:
            lines.append(f"  type {t}")
    for d in spec.terms:
        if d.name == param_const:
            lines.append(f"  param const {d.name} : {param_type}")
        elif d.pure:
            lines.append(f"  pure term {d.name} : {format_type(d.dom)} -> "
                         f"{format_type(d.cod)}")
        else:
            lines.append(f"  term {d.name} : {format_type(d.dom)} -> "
                         f"{format_type(d.cod)}")
    for eq in spec.equations:
        lines.append(f"  eq {eq.name} : {format_term(eq.lhs)} == "
                     f"{format_term(eq.rhs)}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def format_morphism(m: Morphism, name: str, src_name: str,
                    dst_name: str) -> str:
    lines = [f"morphism {name} : {src_name} -> {dst_name} {{"]
    for sym, image in m.type_map:
        lines.append(f"  type {sym} => {format_type(image)}")
    for sym, image in m.term_map:
        lines.append(f"  term {sym} => {format_term(image)}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def format_nat(nt: NatTrans, name: str, source_name: str,
               target_name: str) -> str:
    lines = [f"transform {name} : {source_name} => {target_name} {{"]
    for sym, comp in nt.components:
        lines.append(f"  at {sym} => {format_term(comp)}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def format_document(entries) -> str:
    """Print a document: an iterable of (name, object) pairs.

    Morphism and transformation blocks refer to earlier blocks by name, so
    their endpoints must appear among the entries.
    """
    entries = list(entries)
    spec_names: list[tuple[str, object]] = []
    morphism_names: list[tuple[str, Morphism]] = []
    out = []

    def spec_name_of(spec: Spec) -> str:
        for n, obj in spec_names:
            if underlying_spec(obj) == spec:
                return n
        raise KeyError("morphism endpoint is not a named block")

    def morphism_name_of(m: Morphism) -> str:
        for n, obj in morphism_names:
            if obj == m:
                return n
        raise KeyError("transformation endpoint is not a named block")

    for name, obj in entries:
        if isinstance(obj, NatTrans):
            out.append(format_nat(obj, name, morphism_name_of(obj.source),
                                  morphism_name_of(obj.target)))
        elif isinstance(obj, Morphism):
            out.append(format_morphism(obj, name, spec_name_of(obj.src),
                                       spec_name_of(obj.dst)))
            morphism_names.append((name, obj))
        else:
            out.append(format_spec(obj, name))
            spec_names.append((name, obj))
    return "\n".join(out)
