"""Presentation-level morphisms and natural transformations.

A morphism sends declared types to type expressions and declared terms to
term expressions of the target; it is a real theory morphism when the image
of every source equation is entailed in the target.  Entailment is delegated
to an oracle callable ``oracle(spec, lhs, rhs) -> verdict`` so this module
stays independent of the deduction engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .expr import (
    UNIT,
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
    SpecError,
    TermExpr,
    TypeExpr,
    infer,
    is_pure,
)
from .spec import Spec


class SpecMismatch(SpecError):
    pass


@dataclass(frozen=True)
class Morphism:
    src: Spec
    dst: Spec
    type_map: tuple[tuple[str, TypeExpr], ...]
    term_map: tuple[tuple[str, TermExpr], ...]

    @staticmethod
    def make(src: Spec, dst: Spec, type_map: dict[str, TypeExpr],
             term_map: dict[str, TermExpr]) -> "Morphism":
        tm = tuple(sorted(type_map.items()))
        fm = tuple(sorted(term_map.items()))
        return Morphism(src, dst, tm, fm)

    @property
    def types(self) -> dict[str, TypeExpr]:
        return dict(self.type_map)

    @property
    def terms(self) -> dict[str, TermExpr]:
        return dict(self.term_map)

    def on_type(self, t: TypeExpr) -> TypeExpr:
        return apply_type(self.types, t)

    def on_term(self, e: TermExpr) -> TermExpr:
        return apply_term(self.types, self.terms, e)


def apply_type(type_map: dict[str, TypeExpr], t: TypeExpr) -> TypeExpr:
    if isinstance(t, Base):
        try:
            return type_map[t.name]
        except KeyError:
            raise SpecMismatch(f"type {t.name!r} has no image") from None
    if isinstance(t, Prod):
        return Prod(apply_type(type_map, t.left), apply_type(type_map, t.right))
    return t


def apply_term(type_map: dict[str, TypeExpr], term_map: dict[str, TermExpr],
               e: TermExpr) -> TermExpr:
    ty = lambda t: apply_type(type_map, t)
    if isinstance(e, Atom):
        try:
            return term_map[e.name]
        except KeyError:
            raise SpecMismatch(f"term {e.name!r} has no image") from None
    if isinstance(e, Id):
        return Id(ty(e.at))
    if isinstance(e, Comp):
        return Comp(apply_term(type_map, term_map, e.after),
                    apply_term(type_map, term_map, e.before))
    if isinstance(e, Pair):
        return Pair(apply_term(type_map, term_map, e.fst),
                    apply_term(type_map, term_map, e.snd))
    if isinstance(e, Proj1):
        return Proj1(ty(e.left), ty(e.right))
    if isinstance(e, Proj2):
        return Proj2(ty(e.left), ty(e.right))
    if isinstance(e, Bang):
        return Bang(ty(e.source))
    raise IllTyped(f"not a term expression: {e!r}")


def identity_morphism(s: Spec) -> Morphism:
    return Morphism.make(
        s, s,
        {name: Base(name) for name in s.types},
        {decl.name: Atom(decl.name) for decl in s.terms})


def compose_morphisms(g: Morphism, f: Morphism) -> Morphism:
    """The composite g∘f; requires cod f and dom g to be the same Spec."""
    if f.dst != g.src:
        raise SpecMismatch("morphisms are not composable")
    return Morphism.make(
        f.src, g.dst,
        {name: g.on_type(t) for name, t in f.type_map},
        {name: g.on_term(e) for name, e in f.term_map})


def typecheck_morphism(m: Morphism) -> None:
    """Raise unless images exist for all generators and are well-typed."""
    types = m.types
    terms = m.terms
    for name in m.src.types:
        if name not in types:
            raise SpecMismatch(f"type {name!r} has no image")
    for decl in m.src.terms:
        if decl.name not in terms:
            raise SpecMismatch(f"term {decl.name!r} has no image")
        image = terms[decl.name]
        dom, cod = infer(m.dst, image)
        want = (m.on_type(decl.dom), m.on_type(decl.cod))
        if (dom, cod) != want:
            raise IllTyped(
                f"image of {decl.name!r} has type {dom!r}->{cod!r}, "
                f"expected {want[0]!r}->{want[1]!r}")


@dataclass(frozen=True)
class CheckReport:
    status: str  # "proven" | "refuted" | "unknown"
    details: tuple[tuple[str, object], ...] = ()

    @property
    def is_proven(self) -> bool:
        return self.status == "proven"


Oracle = Callable[[Spec, TermExpr, TermExpr], object]


def _aggregate(details: list[tuple[str, object]]) -> CheckReport:
    status = "proven"
    for _name, verdict in details:
        if getattr(verdict, "is_refuted", False):
            status = "refuted"
            break
        if not getattr(verdict, "is_proven", False):
            status = "unknown"
    return CheckReport(status, tuple(details))


def check_morphism(m: Morphism, oracle: Oracle) -> CheckReport:
    """Verify typing plus entailment of every image equation in the target."""
    typecheck_morphism(m)
    details = []
    for eq in m.src.equations:
        details.append((eq.name, oracle(m.dst, m.on_term(eq.lhs),
                                        m.on_term(eq.rhs))))
    return _aggregate(details)


def is_decorated_morphism(m: Morphism) -> bool:
    """True when every pure generator of the source has a pure image."""
    terms = m.terms
    return all(is_pure(m.dst, terms[d.name]) for d in m.src.terms if d.pure)


@dataclass(frozen=True)
class NatTrans:
    source: Morphism
    target: Morphism
    components: tuple[tuple[str, TermExpr], ...]

    @staticmethod
    def make(source: Morphism, target: Morphism,
             components: dict[str, TermExpr]) -> "NatTrans":
        if source.src != target.src or source.dst != target.dst:
            raise SpecMismatch(
                "natural transformation needs parallel morphisms")
        return NatTrans(source, target, tuple(sorted(components.items())))

    @property
    def component_map(self) -> dict[str, TermExpr]:
        return dict(self.components)

    def component_at(self, t: TypeExpr) -> TermExpr:
        """Component at an arbitrary type: products componentwise, unit Id."""
        if isinstance(t, Base):
            try:
                return self.component_map[t.name]
            except KeyError:
                raise SpecMismatch(f"no component at {t.name!r}") from None
        if t == UNIT:
            return Id(UNIT)
        assert isinstance(t, Prod)
        left = self.source.on_type(t.left)
        right = self.source.on_type(t.right)
        cl = Comp(self.component_at(t.left), Proj1(left, right))
        cr = Comp(self.component_at(t.right), Proj2(left, right))
        return Pair(cl, cr)


def typecheck_nat(nt: NatTrans) -> None:
    for name in nt.source.src.types:
        comp = nt.component_map.get(name)
        if comp is None:
            raise SpecMismatch(f"no component at {name!r}")
        dom, cod = infer(nt.source.dst, comp)
        want = (nt.source.on_type(Base(name)), nt.target.on_type(Base(name)))
        if (dom, cod) != want:
            raise IllTyped(
                f"component at {name!r} has type {dom!r}->{cod!r}, "
                f"expected {want[0]!r}->{want[1]!r}")


def check_nat(nt: NatTrans, oracle: Oracle) -> CheckReport:
    """Verify the naturality square for every declared term of the source."""
    typecheck_nat(nt)
    details = []
    for decl in nt.source.src.terms:
        lhs = Comp(nt.target.on_term(Atom(decl.name)),
                   nt.component_at(decl.dom))
        rhs = Comp(nt.component_at(decl.cod),
                   nt.source.on_term(Atom(decl.name)))
        details.append((decl.name, oracle(nt.source.dst, lhs, rhs)))
    return _aggregate(details)


def whisker(m: Morphism, nt: NatTrans) -> NatTrans:
    """Postcompose a transformation with a morphism out of its target."""
    if nt.source.dst != m.src:
        raise SpecMismatch("whiskering endpoints do not match")
    return NatTrans.make(
        compose_morphisms(m, nt.source), compose_morphisms(m, nt.target),
        {name: m.on_term(c) for name, c in nt.components})
