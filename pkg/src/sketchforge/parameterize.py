"""The expansion of a decorated presentation: every non-pure term gets the
parameter type added to its domain, and the coKleisli view that inverts it.

``translate_term`` is the structural recursion behind the expansion: a
general atom ``f : X -> Y`` becomes ``f' : A * X -> Y``, a pure atom factors
through the projection that forgets the parameter, composition threads the
parameter through with a pairing, and pairing/projections/collapsing are
untouched up to that same projection.
"""

from __future__ import annotations

import warnings
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
    TermExpr,
    infer,
    is_pure,
)
from .morphism import Morphism
from .spec import Equation, ParamSpec, Spec, TermDecl


def translate_term(d: Spec, e: TermExpr, param: str,
                   prime_names: dict[str, str]) -> TermExpr:
    """Translate a term of the decorated source into the expansion.

    The result has domain ``A * dom(e)`` and the same codomain.
    """
    a = Base(param)
    dom, _cod = infer(d, e)
    if isinstance(e, Atom):
        if is_pure(d, e):
            return Comp(e, Proj2(a, dom))
        return Atom(prime_names[e.name])
    if isinstance(e, Id):
        return Proj2(a, e.at)
    if isinstance(e, Comp):
        fdom, _ = infer(d, e.before)
        inner = translate_term(d, e.before, param, prime_names)
        outer = translate_term(d, e.after, param, prime_names)
        return Comp(outer, Pair(Proj1(a, fdom), inner))
    if isinstance(e, Pair):
        return Pair(translate_term(d, e.fst, param, prime_names),
                    translate_term(d, e.snd, param, prime_names))
    if isinstance(e, (Proj1, Proj2)):
        return Comp(e, Proj2(a, dom))
    if isinstance(e, Bang):
        return Bang(Prod(a, e.source))
    raise IllTyped(f"not a term expression: {e!r}")


@dataclass(frozen=True)
class Expansion:
    source: Spec
    expanded: ParamSpec
    param: str
    prime_names: tuple[tuple[str, str], ...]
    pure_image: Morphism

    @property
    def prime_map(self) -> dict[str, str]:
        return dict(self.prime_names)

    @property
    def spec(self) -> Spec:
        return self.expanded.base


def _fresh_param(d: Spec, wanted: str) -> str:
    taken = set(d.types) | set(d.term_names())
    name = wanted
    while name in taken:
        name += "'"
    if name != wanted:
        warnings.warn(
            f"parameter type renamed to {name!r}: {wanted!r} is already "
            f"declared", stacklevel=3)
    return name


def expand(d: Spec, param_name: str = "A") -> Expansion:
    """Add a parameter type to the domain of every non-pure term.

    Pure terms and pure equations are copied verbatim; each general term
    ``f`` gets a counterpart ``f'`` and each remaining equation has both
    sides translated.
    """
    param = _fresh_param(d, param_name)
    taken = set(d.types) | set(d.term_names()) | {param}
    primes: dict[str, str] = {}
    for decl in d.terms:
        if decl.pure:
            primes[decl.name] = decl.name
        else:
            prime = decl.name + "'"
            while prime in taken:
                prime += "'"
            taken.add(prime)
            primes[decl.name] = prime

    a = Base(param)
    terms = []
    for decl in d.terms:
        if decl.pure:
            terms.append(decl)
        else:
            terms.append(TermDecl(primes[decl.name], Prod(a, decl.dom),
                                  decl.cod, pure=False))
    equations = []
    for eq in d.equations:
        if d.equation_is_pure(eq):
            equations.append(eq)
        else:
            equations.append(Equation(
                eq.name,
                translate_term(d, eq.lhs, param, primes),
                translate_term(d, eq.rhs, param, primes)))
    base = Spec(types=(param,) + d.types, terms=tuple(terms),
                equations=tuple(equations))
    expanded = ParamSpec(base, param)

    pure_sub = d.pure_subspec()
    pure_image = Morphism.make(
        pure_sub, base,
        {name: Base(name) for name in pure_sub.types},
        {decl.name: Atom(decl.name) for decl in pure_sub.terms})
    return Expansion(d, expanded, param,
                     tuple(sorted(primes.items())), pure_image)


def expand_morphism(phi: Morphism, x_src: Expansion, x_dst: Expansion) -> Morphism:
    """The action of the expansion on a decoration-preserving morphism."""
    type_map = {x_src.param: Base(x_dst.param)}
    type_map.update(phi.types)
    term_map = {}
    dst_primes = x_dst.prime_map
    for decl in x_src.source.terms:
        image = phi.terms[decl.name]
        if decl.pure:
            term_map[decl.name] = image
        else:
            term_map[x_src.prime_map[decl.name]] = translate_term(
                x_dst.source, image, x_dst.param, dst_primes)
    return Morphism.make(x_src.spec, x_dst.spec, type_map, term_map)


def collapse_param(x: Expansion) -> Morphism:
    """The morphism from the expansion back onto the source that sends the
    parameter type to the unit type and each ``f'`` to ``f`` precomposed
    with the projection that drops the unit factor."""
    d = x.source
    type_map = {x.param: UNIT}
    type_map.update({name: Base(name) for name in d.types})
    term_map = {}
    for decl in d.terms:
        if decl.pure:
            term_map[decl.name] = Atom(decl.name)
        else:
            term_map[x.prime_map[decl.name]] = Comp(
                Atom(decl.name), Proj2(UNIT, decl.dom))
    return Morphism.make(x.spec, d, type_map, term_map)


# ---------------------------------------------------------------------------
# The coKleisli view of a parameterized presentation.  Its terms are virtual:
# one term X -> Y for every term A * X -> Y of the underlying presentation,
# compared through a caller-supplied entailment oracle.


@dataclass(frozen=True)
class KlTerm:
    """A coKleisli term, wrapping an underlying term ``A * X -> Y``."""
    under: TermExpr
    dom: object  # TypeExpr
    cod: object  # TypeExpr


Oracle = Callable[[Spec, TermExpr, TermExpr], object]


@dataclass(frozen=True)
class CoKleisliView:
    over: ParamSpec

    @property
    def param(self) -> str:
        return self.over.param_type

    @property
    def spec(self) -> Spec:
        return self.over.base

    def counit_at(self, t) -> TermExpr:
        return Proj2(Base(self.param), t)

    def comult_at(self, t) -> TermExpr:
        a = Base(self.param)
        return Pair(Proj1(a, t), Id(Prod(a, t)))

    def lift(self, e: TermExpr) -> KlTerm:
        dom, cod = infer(self.spec, e)
        if not (isinstance(dom, Prod) and dom.left == Base(self.param)):
            raise IllTyped(
                f"underlying term must have domain {self.param} * X")
        return KlTerm(e, dom.right, cod)

    def identity(self, t) -> KlTerm:
        return self.lift(self.counit_at(t))

    def embed(self, e: TermExpr) -> KlTerm:
        """A term of the underlying presentation, seen as a coKleisli term."""
        dom, _cod = infer(self.spec, e)
        return self.lift(Comp(e, self.counit_at(dom)))

    def compose(self, g: KlTerm, f: KlTerm) -> KlTerm:
        if f.cod != g.dom:
            raise IllTyped("coKleisli composition mismatch")
        a = Base(self.param)
        return self.lift(Comp(g.under, Pair(Proj1(a, f.dom), f.under)))

    def equal(self, f: KlTerm, g: KlTerm, oracle: Oracle):
        return oracle(self.spec, f.under, g.under)

    def purity_witness(self, f: KlTerm, oracle: Oracle) -> TermExpr | None:
        """A declared-term expression ``g`` with ``f = g∘eps``, if one is
        entailed; the coKleisli term is pure exactly when such a witness
        exists."""
        eps = self.counit_at(f.dom)
        for decl in self.spec.terms:
            if (decl.dom, decl.cod) != (f.dom, f.cod):
                continue
            candidate = Comp(Atom(decl.name), eps)
            verdict = oracle(self.spec, f.under, candidate)
            if getattr(verdict, "is_proven", False):
                return Atom(decl.name)
        return None

    def is_pure(self, f: KlTerm, oracle: Oracle) -> bool:
        return self.purity_witness(f, oracle) is not None


def cokleisli(p: ParamSpec) -> CoKleisliView:
    return CoKleisliView(p)


@dataclass(frozen=True)
class CoKleisliMorphism:
    """A morphism from a decorated presentation into a coKleisli view."""
    src: Spec
    dst: CoKleisliView
    term_map: tuple[tuple[str, KlTerm], ...]

    @property
    def terms(self) -> dict[str, KlTerm]:
        return dict(self.term_map)


def cokleisli_unit(x: Expansion) -> CoKleisliMorphism:
    """The unit of the expansion/coKleisli adjunction: each type goes to
    itself and each term to the coKleisli term on its translation."""
    view = cokleisli(x.expanded)
    terms = {}
    for decl in x.source.terms:
        under = translate_term(x.source, Atom(decl.name), x.param,
                               x.prime_map)
        terms[decl.name] = view.lift(under)
    return CoKleisliMorphism(x.source, view, tuple(sorted(terms.items())))


def unit_is_decorated(x: Expansion, oracle: Oracle) -> bool:
    """Pure generators must land on pure coKleisli terms."""
    unit = cokleisli_unit(x)
    view = unit.dst
    return all(view.is_pure(unit.terms[decl.name], oracle)
               for decl in x.source.terms if decl.pure)


def triangle_obligations(x: Expansion, oracle: Oracle) -> list[tuple[str, object]]:
    """Generator-wise proof obligations for both triangle identities.

    The composite of the counit with the expanded unit fixes every generator
    of the expansion, and the composite of the coKleisli'd counit with the
    unit fixes every coKleisli generator; each reduces to one entailment in
    the expanded presentation.
    """
    view = cokleisli(x.expanded)
    unit = cokleisli_unit(x)
    spec = x.spec
    out: list[tuple[str, object]] = []
    for decl in x.source.terms:
        k = unit.terms[decl.name]
        if decl.pure:
            # Counit on a pure coKleisli term goes through its witness.
            witness = view.purity_witness(k, oracle)
            if witness is None:
                out.append((f"eta-{decl.name}",
                            oracle(spec, k.under, k.under)))
                continue
            recovered = Comp(witness, view.counit_at(k.dom))
            out.append((f"counit-unit-{decl.name}",
                        oracle(spec, k.under, recovered)))
            out.append((f"unit-counit-{decl.name}",
                        oracle(spec, k.under, recovered)))
        else:
            prime = Atom(x.prime_map[decl.name])
            out.append((f"counit-unit-{decl.name}",
                        oracle(spec, k.under, prime)))
            out.append((f"unit-counit-{decl.name}",
                        oracle(spec, k.under, prime)))
    return out
