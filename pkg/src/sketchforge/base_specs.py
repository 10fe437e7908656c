"""The ground diagram of parameter specifications.

Three tiny presentations anchor everything parameter-shaped: the empty
presentation, the one with a single parameter type, and the one that adds a
constant of that type, together with the collapse and inclusion morphisms
between them and the distinguished transformation whose only component is
the constant itself.
"""

from __future__ import annotations

from dataclasses import dataclass

from .expr import UNIT, Atom, Base, Id
from .morphism import Morphism, NatTrans, compose_morphisms
from .spec import ParamConstSpec, ParamSpec, Spec, TermDecl


@dataclass(frozen=True)
class ParamBase:
    empty: Spec                      # no generators at all
    with_type: ParamSpec             # one type A
    with_const: ParamConstSpec       # A plus a : 1 -> A
    drop_type: Morphism              # with_type -> empty,  A |-> 1
    drop_const: Morphism             # with_const -> empty, a |-> id[1]
    embed_empty: Morphism            # empty -> with_const
    embed_type: Morphism             # with_type -> with_const
    point: NatTrans                  # embed_empty∘drop_type => embed_type


def param_base(param_type: str = "A", param_const: str = "a") -> ParamBase:
    empty = Spec()
    with_type = ParamSpec(Spec(types=(param_type,)), param_type)
    const_decl = TermDecl(param_const, UNIT, Base(param_type))
    with_const = ParamConstSpec(
        ParamSpec(Spec(types=(param_type,), terms=(const_decl,)), param_type),
        param_const)

    drop_type = Morphism.make(with_type.base, empty, {param_type: UNIT}, {})
    drop_const = Morphism.make(with_const.spec, empty,
                               {param_type: UNIT}, {param_const: Id(UNIT)})
    embed_empty = Morphism.make(empty, with_const.spec, {}, {})
    embed_type = Morphism.make(with_type.base, with_const.spec,
                               {param_type: Base(param_type)}, {})
    point = NatTrans.make(
        compose_morphisms(embed_empty, drop_type), embed_type,
        {param_type: Atom(param_const)})
    return ParamBase(empty, with_type, with_const, drop_type, drop_const,
                     embed_empty, embed_type, point)
