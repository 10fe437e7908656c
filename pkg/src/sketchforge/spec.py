"""Finite presentations: declared types, decorated terms and named equations.

A ``Spec`` is a plain presentation.  ``ParamSpec`` distinguishes one declared
type as the type of parameters; ``ParamConstSpec`` additionally distinguishes
a constant of that type.  Equations may be written with named variables; the
desugarer turns variables into projections from the product of all variables.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property

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
    UnitType,
    UnknownSymbol,
    base_names,
    infer,
    is_pure,
    type_leaves,
)


class ArityMismatch(SpecError):
    pass


class UnknownVariable(SpecError):
    pass


@dataclass(frozen=True)
class TermDecl:
    name: str
    dom: TypeExpr
    cod: TypeExpr
    pure: bool = False


@dataclass(frozen=True)
class Equation:
    name: str
    lhs: TermExpr
    rhs: TermExpr


@dataclass(frozen=True)
class Diagnostic:
    code: str
    where: str
    message: str

    def __str__(self):
        return f"[{self.code}] at {self.where}: {self.message}"


@dataclass(frozen=True)
class Spec:
    types: tuple[str, ...] = ()
    terms: tuple[TermDecl, ...] = ()
    equations: tuple[Equation, ...] = ()

    @cached_property
    def term_index(self) -> dict[str, TermDecl]:
        return {d.name: d for d in self.terms}

    def type_names(self) -> tuple[str, ...]:
        return self.types

    def term_signature(self, name: str) -> tuple[TypeExpr, TypeExpr, bool]:
        decl = self.term_index.get(name)
        if decl is None:
            raise UnknownSymbol(f"undeclared term {name!r}")
        return decl.dom, decl.cod, decl.pure

    def term_names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.terms)

    def with_type(self, name: str) -> "Spec":
        return replace(self, types=self.types + (name,))

    def with_term(self, decl: TermDecl) -> "Spec":
        return replace(self, terms=self.terms + (decl,))

    def with_equation(self, eq: Equation) -> "Spec":
        return replace(self, equations=self.equations + (eq,))

    def equation_is_pure(self, eq: Equation) -> bool:
        return is_pure(self, eq.lhs) and is_pure(self, eq.rhs)

    def pure_subspec(self) -> "Spec":
        """The wide subpresentation of pure terms and pure equations."""
        terms = tuple(d for d in self.terms if d.pure)
        sub = Spec(self.types, terms, ())
        eqs = tuple(e for e in self.equations if self.equation_is_pure(e))
        return replace(sub, equations=eqs)


@dataclass(frozen=True)
class ParamSpec:
    base: Spec
    param_type: str

    def __post_init__(self):
        if self.param_type not in self.base.types:
            raise UnknownSymbol(
                f"parameter type {self.param_type!r} is not declared")


@dataclass(frozen=True)
class ParamConstSpec:
    base: ParamSpec
    param_const: str

    def __post_init__(self):
        dom, cod, _pure = self.base.base.term_signature(self.param_const)
        if dom != UNIT or cod != Base(self.base.param_type):
            raise IllTyped(
                f"parameter constant {self.param_const!r} must have type "
                f"1 -> {self.base.param_type}")

    @property
    def spec(self) -> Spec:
        return self.base.base


def underlying_spec(s) -> Spec:
    """The plain presentation under a Spec / ParamSpec / ParamConstSpec."""
    if isinstance(s, Spec):
        return s
    if isinstance(s, ParamSpec):
        return s.base
    if isinstance(s, ParamConstSpec):
        return s.base.base
    raise TypeError(f"not a specification: {s!r}")


# ---------------------------------------------------------------------------
# Validation


def validate(spec: Spec) -> list[Diagnostic]:
    """Check all presentation invariants; an empty list means valid."""
    out: list[Diagnostic] = []
    seen_types: set[str] = set()
    for name in spec.types:
        if name in seen_types:
            out.append(Diagnostic("DuplicateType", name, "type declared twice"))
        seen_types.add(name)
    seen_terms: set[str] = set()
    for decl in spec.terms:
        if decl.name in seen_terms:
            out.append(Diagnostic("DuplicateTerm", decl.name,
                                  "term declared twice"))
        seen_terms.add(decl.name)
        for t in (decl.dom, decl.cod):
            for base in sorted(base_names(t)):
                if base not in seen_types:
                    out.append(Diagnostic("UnknownSymbol", decl.name,
                                          f"undeclared type {base!r}"))
    seen_eqs: set[str] = set()
    for eq in spec.equations:
        if eq.name in seen_eqs:
            out.append(Diagnostic("DuplicateEquation", eq.name,
                                  "equation declared twice"))
        seen_eqs.add(eq.name)
        try:
            ldom, lcod = infer(spec, eq.lhs)
            rdom, rcod = infer(spec, eq.rhs)
        except UnknownSymbol as err:
            out.append(Diagnostic("UnknownSymbol", eq.name, str(err)))
            continue
        except IllTyped as err:
            out.append(Diagnostic("IllTyped", eq.name, str(err)))
            continue
        if (ldom, lcod) != (rdom, rcod):
            out.append(Diagnostic(
                "NonParallelEquation", eq.name,
                f"sides have types {ldom!r}->{lcod!r} vs {rdom!r}->{rcod!r}"))
    return out


# ---------------------------------------------------------------------------
# Variable sugar.  ``prd(x, prd(y, z)) == prd(prd(x, y), z) where x y z : G``
# desugars to a parallel pair out of the product of the variables, taken in
# first-occurrence order (left side first) and nested to the left.


class SugarExpr:
    __slots__ = ()


@dataclass(frozen=True)
class SVar(SugarExpr):
    name: str


@dataclass(frozen=True)
class SApp(SugarExpr):
    head: str
    args: tuple[SugarExpr, ...]


def _occurring_vars(e: SugarExpr, declared: dict[str, TypeExpr],
                    order: list[str]) -> None:
    if isinstance(e, SVar):
        if e.name not in declared:
            raise UnknownVariable(f"variable {e.name!r} has no declared sort")
        if e.name not in order:
            order.append(e.name)
    elif isinstance(e, SApp):
        for a in e.args:
            _occurring_vars(a, declared, order)


def _var_product(sorts: list[TypeExpr]) -> TypeExpr:
    if not sorts:
        return UNIT
    out = sorts[0]
    for s in sorts[1:]:
        out = Prod(out, s)
    return out


def _projections(sorts: list[TypeExpr]) -> list[TermExpr]:
    """Projections of each factor out of the left-nested product of sorts."""
    n = len(sorts)
    if n == 0:
        return []
    projs: list[TermExpr] = [Id(sorts[0])]
    acc = sorts[0]
    for s in sorts[1:]:
        projs = [Comp(p, Proj1(acc, s)) if not isinstance(p, Id)
                 else Proj1(acc, s) for p in projs]
        projs.append(Proj2(acc, s))
        acc = Prod(acc, s)
    return projs


def _assemble(shape: TypeExpr, args: list[TermExpr], source: TypeExpr,
              head: str) -> TermExpr:
    """Tuple the argument list into the shape of an atom's domain tree."""
    if isinstance(shape, Prod):
        nleft = len(type_leaves(shape.left))
        left = _assemble(shape.left, args[:nleft], source, head)
        right = _assemble(shape.right, args[nleft:], source, head)
        return Pair(left, right)
    if isinstance(shape, UnitType):
        return Bang(source)
    if not args:
        raise ArityMismatch(f"too few arguments to {head!r}")
    return args[0]


def desugar_expr(spec: Spec, e: SugarExpr, var_sorts: dict[str, TypeExpr],
                 projs: dict[str, TermExpr], source: TypeExpr) -> TermExpr:
    """Elaborate a sugared expression into a term with domain ``source``."""
    if isinstance(e, SVar):
        return projs[e.name]
    assert isinstance(e, SApp)
    dom, _cod, _pure = spec.term_signature(e.head)
    slots = type_leaves(dom)
    if len(slots) != len(e.args):
        raise ArityMismatch(
            f"{e.head!r} expects {len(slots)} arguments, got {len(e.args)}")
    arg_terms = []
    for slot, arg in zip(slots, e.args):
        t = desugar_expr(spec, arg, var_sorts, projs, source)
        _adom, acod = infer(spec, t)
        if acod != slot:
            raise IllTyped(
                f"argument of {e.head!r} has type {acod!r}, expected {slot!r}")
        arg_terms.append(t)
    return Comp(Atom(e.head), _assemble(dom, arg_terms, source, e.head))


def desugar_equation(spec: Spec, lhs: SugarExpr, rhs: SugarExpr,
                     var_sorts: dict[str, TypeExpr]) -> tuple[TermExpr, TermExpr]:
    """Turn a sugared equation into a parallel pair of combinator terms.

    Variables become projections from the left-nested product of the
    variables that occur, ordered by first occurrence in the left side and
    then the right side.  Declared but unused variables are ignored.
    """
    order: list[str] = []
    _occurring_vars(lhs, var_sorts, order)
    _occurring_vars(rhs, var_sorts, order)
    sorts = [var_sorts[v] for v in order]
    source = _var_product(sorts)
    projs = dict(zip(order, _projections(sorts)))
    left = desugar_expr(spec, lhs, var_sorts, projs, source)
    right = desugar_expr(spec, rhs, var_sorts, projs, source)
    ldom, lcod = infer(spec, left)
    rdom, rcod = infer(spec, right)
    if (ldom, lcod) != (rdom, rcod):
        raise IllTyped(
            f"desugared sides are not parallel: {lcod!r} vs {rcod!r}")
    return left, right
