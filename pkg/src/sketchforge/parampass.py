"""Parameter passing: adjoin a constant of the parameter type by pushout,
build the passing morphism that partially applies every parameterized term
at that constant, assemble the lax cocone this yields, and check that the
passing morphisms are natural in the underlying specification.
"""

from __future__ import annotations

from dataclasses import dataclass

from .base_specs import param_base
from .colimit import Pushout, pushout
from .expr import (
    UNIT,
    Atom,
    Bang,
    Base,
    Comp,
    Id,
    Pair,
    SpecError,
    TermExpr,
)
from .morphism import (
    CheckReport,
    Morphism,
    NatTrans,
    _aggregate,
    compose_morphisms,
    identity_morphism,
    whisker,
)
from .parameterize import Expansion, collapse_param, expand, expand_morphism, translate_term
from .spec import ParamConstSpec, ParamSpec, Spec


class IncompatibleCocone(SpecError):
    pass


@dataclass(frozen=True)
class WithParameter:
    """The result of adjoining a parameter constant to a parameterized
    presentation: the new presentation plus the two pushout injections."""
    spec: ParamConstSpec
    include: Morphism        # parameterized presentation -> extended one
    anchor: Morphism         # the one-type-one-constant presentation -> extended
    pushout: Pushout


def add_parameter(p: ParamSpec) -> WithParameter:
    """Adjoin a fresh constant of the parameter type by pushout along the
    ground parameter presentations."""
    base = param_base(p.param_type)
    gamma = Morphism.make(base.with_type.base, p.base,
                          {p.param_type: Base(p.param_type)}, {})
    po = pushout(gamma, base.embed_type)
    const = po.right.terms[base.with_const.param_const].name
    param_image = po.left.types[p.param_type]
    assert isinstance(param_image, Base)
    extended = ParamConstSpec(ParamSpec(po.spec, param_image.name), const)
    return WithParameter(extended, po.left, po.right, po)


@dataclass(frozen=True)
class LaxCocone:
    """The triangle over the collapse of an expansion: two legs into the
    presentation with a parameter and the comparison cell between them."""
    source: Spec              # the decorated presentation d
    expansion: Expansion
    extended: ParamConstSpec  # T_a
    base: Morphism            # collapse: expansion -> d
    leg_param: Morphism       # j_A : expansion -> T_a
    leg_source: Morphism      # j   : d -> T_a
    cell: NatTrans            # leg_source∘base => leg_param


def passing_morphism(d: Spec, x: Expansion | None = None) -> Morphism:
    """The morphism from a decorated presentation into its presentation
    with a parameter: types are fixed and a general term goes to its
    parameterized counterpart applied at the constant."""
    return lax_cocone(d, x).leg_source


def lax_cocone(d: Spec, x: Expansion | None = None) -> LaxCocone:
    x = x or expand(d)
    wp = add_parameter(x.expanded)
    extended = wp.spec
    leg_param = wp.include
    const = Atom(extended.param_const)
    term_map = {}
    for decl in d.terms:
        if decl.pure:
            term_map[decl.name] = leg_param.on_term(Atom(decl.name))
        else:
            prime = leg_param.on_term(Atom(x.prime_map[decl.name]))
            dom = leg_param.on_type(decl.dom)
            term_map[decl.name] = Comp(
                prime, Pair(Comp(const, Bang(dom)), Id(dom)))
    leg_source = Morphism.make(
        d, extended.spec,
        {name: leg_param.types[name] for name in d.types}, term_map)
    base = collapse_param(x)
    components = {name: Id(leg_param.on_type(Base(name))) for name in d.types}
    components[x.param] = const
    cell = NatTrans.make(compose_morphisms(leg_source, base), leg_param,
                         components)
    return LaxCocone(d, x, extended, base, leg_param, leg_source, cell)


@dataclass(frozen=True)
class ProbeCocone:
    """A lax cocone over the same base: target presentation, both legs and
    the component of the cell at the parameter type."""
    target: Spec
    leg_param: Morphism   # expansion -> target
    leg_source: Morphism  # d -> target
    cell_at_param: TermExpr


def collapse_cocone(c: LaxCocone) -> ProbeCocone:
    """The degenerate cocone on the source itself, whose mediating morphism
    collapses the parameter constant to the identity of the unit type."""
    return ProbeCocone(c.source, c.base, identity_morphism(c.source),
                       Id(UNIT))


def self_cocone(c: LaxCocone) -> ProbeCocone:
    return ProbeCocone(c.extended.spec, c.leg_param, c.leg_source,
                       Atom(c.extended.param_const))


def mediating(c: LaxCocone, other: ProbeCocone) -> Morphism:
    """The unique morphism out of the presentation with a parameter that
    matches another cocone over the same base: it agrees with the
    parameterized leg on its image and sends the constant to the other
    cocone's cell component."""
    if other.leg_param.src != c.expansion.spec or other.leg_source.src != c.source:
        raise IncompatibleCocone("cocone legs do not match the expansion")
    type_map = {}
    term_map = {}
    for name, image in c.leg_param.type_map:
        if isinstance(image, Base):
            type_map[image.name] = other.leg_param.on_type(Base(name))
    for name, image in c.leg_param.term_map:
        if isinstance(image, Atom):
            term_map[image.name] = other.leg_param.on_term(Atom(name))
    term_map[c.extended.param_const] = other.cell_at_param
    spec = c.extended.spec
    missing = (set(spec.types) - set(type_map)) | \
              (set(spec.term_names()) - set(term_map))
    if missing:
        raise IncompatibleCocone(
            f"generators without forced image: {sorted(missing)}")
    return Morphism.make(spec, other.target, type_map, term_map)


def cocone_equations(c: LaxCocone, oracle) -> CheckReport:
    """The defining equations of the lax colimit triangle: the collapse of
    the extended presentation splits both legs and the cell."""
    probe = collapse_cocone(c)
    t_a = mediating(c, probe)
    details = []
    # t_a ∘ leg_param = base, generator-wise.
    lhs = compose_morphisms(t_a, c.leg_param)
    details.extend(_morphisms_equal(lhs, c.base, oracle, "collapse-param"))
    # t_a ∘ leg_source = identity.
    rhs = compose_morphisms(t_a, c.leg_source)
    details.extend(_morphisms_equal(rhs, identity_morphism(c.source), oracle,
                                    "collapse-source"))
    # t_a ∘ cell = identity transformation of the base.
    collapsed = whisker(t_a, c.cell)
    for name, comp in collapsed.components:
        want = Id(collapsed.source.on_type(Base(name)))
        details.append((f"collapse-cell-{name}",
                        oracle(c.source, comp, want)))
    return _aggregate(details)


def _morphisms_equal(m1: Morphism, m2: Morphism, oracle, tag: str):
    details = []
    for name in m1.src.types:
        same = m1.on_type(Base(name)) == m2.on_type(Base(name))
        details.append((f"{tag}-type-{name}",
                        _BoolVerdict(same)))
    for name in m1.src.term_names():
        details.append((f"{tag}-term-{name}",
                        oracle(m1.dst, m1.on_term(Atom(name)),
                               m2.on_term(Atom(name)))))
    return details


@dataclass(frozen=True)
class _BoolVerdict:
    ok: bool

    @property
    def is_proven(self):
        return self.ok

    @property
    def is_refuted(self):
        return not self.ok


def check_passing_naturality(phi: Morphism, oracle,
                             param_name: str = "A") -> CheckReport:
    """Naturality of the passing morphisms in the decorated presentation:
    passing after the underlying morphism agrees with the expanded-and-
    extended morphism after passing, generator-wise."""
    x_src = expand(phi.src, param_name)
    x_dst = expand(phi.dst, param_name)
    c_src = lax_cocone(phi.src, x_src)
    c_dst = lax_cocone(phi.dst, x_dst)
    expanded_phi = expand_morphism(phi, x_src, x_dst)
    # Extend the expanded morphism with constant |-> constant.
    type_map = dict(expanded_phi.type_map)
    term_map = dict(expanded_phi.term_map)
    term_map[c_src.extended.param_const] = Atom(c_dst.extended.param_const)
    extended_phi = Morphism.make(c_src.extended.spec, c_dst.extended.spec,
                                 type_map, term_map)
    path1 = compose_morphisms(c_dst.leg_source, phi)
    path2 = compose_morphisms(extended_phi, c_src.leg_source)
    return _aggregate(_morphisms_equal(path1, path2, oracle, "square"))
