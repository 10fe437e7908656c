"""Type and term expression trees over a signature with chosen binary products.

Types are binary product trees over declared base names plus the unit type.
Terms are combinator trees: atoms, identities, composites, pairings,
projections and the collapsing map into the unit type.  Nothing here is
normalized: ``1 * X`` is a different type from ``X`` and ``f . id[X]`` a
different term from ``f``; identifications live in the deduction layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator


class SpecError(Exception):
    """Base class for errors raised by the workbench."""


class UnknownSymbol(SpecError):
    pass


class IllTyped(SpecError):
    pass


# ---------------------------------------------------------------------------
# Type expressions


class TypeExpr:
    __slots__ = ()

    def __mul__(self, other: "TypeExpr") -> "Prod":
        return Prod(self, other)


@dataclass(frozen=True)
class UnitType(TypeExpr):
    __slots__ = ()

    def __repr__(self):
        return "UNIT"


UNIT = UnitType()


@dataclass(frozen=True)
class Base(TypeExpr):
    name: str

    def __repr__(self):
        return f"Base({self.name!r})"


@dataclass(frozen=True)
class Prod(TypeExpr):
    left: TypeExpr
    right: TypeExpr

    def __repr__(self):
        return f"Prod({self.left!r}, {self.right!r})"


def type_subexprs(t: TypeExpr) -> Iterator[TypeExpr]:
    """All subexpressions of ``t``, including ``t`` itself."""
    yield t
    if isinstance(t, Prod):
        yield from type_subexprs(t.left)
        yield from type_subexprs(t.right)


def base_names(t: TypeExpr) -> set[str]:
    return {s.name for s in type_subexprs(t) if isinstance(s, Base)}


def type_leaves(t: TypeExpr) -> list[TypeExpr]:
    """Non-unit leaves of a product tree, left to right."""
    if isinstance(t, Prod):
        return type_leaves(t.left) + type_leaves(t.right)
    if isinstance(t, UnitType):
        return []
    return [t]


# ---------------------------------------------------------------------------
# Term expressions


class TermExpr:
    __slots__ = ()


@dataclass(frozen=True)
class Atom(TermExpr):
    name: str

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True)
class Id(TermExpr):
    at: TypeExpr

    def __repr__(self):
        return f"Id({self.at!r})"


@dataclass(frozen=True)
class Comp(TermExpr):
    """Classical composition: ``Comp(after, before)`` is after∘before."""

    after: TermExpr
    before: TermExpr

    def __repr__(self):
        return f"Comp({self.after!r}, {self.before!r})"


@dataclass(frozen=True)
class Pair(TermExpr):
    fst: TermExpr
    snd: TermExpr

    def __repr__(self):
        return f"Pair({self.fst!r}, {self.snd!r})"


@dataclass(frozen=True)
class Proj1(TermExpr):
    left: TypeExpr
    right: TypeExpr

    def __repr__(self):
        return f"Proj1({self.left!r}, {self.right!r})"


@dataclass(frozen=True)
class Proj2(TermExpr):
    left: TypeExpr
    right: TypeExpr

    def __repr__(self):
        return f"Proj2({self.left!r}, {self.right!r})"


@dataclass(frozen=True)
class Bang(TermExpr):
    """The collapsing map from a type into the unit type."""

    source: TypeExpr

    def __repr__(self):
        return f"Bang({self.source!r})"


def compose(*terms: TermExpr) -> TermExpr:
    """Right-nested composition of one or more terms, first-listed applied last."""
    if not terms:
        raise ValueError("compose needs at least one term")
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = Comp(t, out)
    return out


def term_subexprs(e: TermExpr) -> Iterator[TermExpr]:
    """All term subexpressions of ``e``, including ``e`` itself, preorder."""
    yield e
    if isinstance(e, Comp):
        yield from term_subexprs(e.after)
        yield from term_subexprs(e.before)
    elif isinstance(e, Pair):
        yield from term_subexprs(e.fst)
        yield from term_subexprs(e.snd)


def term_size(e: TermExpr) -> int:
    """Number of term nodes (type annotations not counted)."""
    if isinstance(e, (Comp, Pair)):
        a, b = (e.after, e.before) if isinstance(e, Comp) else (e.fst, e.snd)
        return 1 + term_size(a) + term_size(b)
    return 1


def atoms_of(e: TermExpr) -> set[str]:
    return {s.name for s in term_subexprs(e) if isinstance(s, Atom)}


# ---------------------------------------------------------------------------
# Signatures: the minimal interface expr-level operations need from a Spec.
# A signature is anything with ``type_names()`` and ``term_signature(name)``
# returning (dom, cod, pure).  spec.Spec implements it.


def check_type(sig, t: TypeExpr) -> None:
    """Raise UnknownSymbol unless every base name in ``t`` is declared."""
    declared = sig.type_names()
    for name in base_names(t):
        if name not in declared:
            raise UnknownSymbol(f"undeclared type {name!r}")


def infer(sig, e: TermExpr) -> tuple[TypeExpr, TypeExpr]:
    """Infer the unique (dom, cod) of ``e`` or raise IllTyped/UnknownSymbol."""
    if isinstance(e, Atom):
        dom, cod, _pure = sig.term_signature(e.name)
        return dom, cod
    if isinstance(e, Id):
        check_type(sig, e.at)
        return e.at, e.at
    if isinstance(e, Comp):
        fdom, fcod = infer(sig, e.before)
        gdom, gcod = infer(sig, e.after)
        if fcod != gdom:
            raise IllTyped(f"cannot compose: middle types differ in {e!r}")
        return fdom, gcod
    if isinstance(e, Pair):
        fdom, fcod = infer(sig, e.fst)
        gdom, gcod = infer(sig, e.snd)
        if fdom != gdom:
            raise IllTyped(f"pair components have different domains in {e!r}")
        return fdom, Prod(fcod, gcod)
    if isinstance(e, Proj1):
        check_type(sig, e.left)
        check_type(sig, e.right)
        return Prod(e.left, e.right), e.left
    if isinstance(e, Proj2):
        check_type(sig, e.left)
        check_type(sig, e.right)
        return Prod(e.left, e.right), e.right
    if isinstance(e, Bang):
        check_type(sig, e.source)
        return e.source, UNIT
    raise IllTyped(f"not a term expression: {e!r}")


def is_pure(sig, e: TermExpr) -> bool:
    """A term is pure iff every atom leaf is declared pure.

    Identities, projections and collapsings are always pure; composites and
    pairs are pure iff their parts are.
    """
    if isinstance(e, Atom):
        _dom, _cod, pure = sig.term_signature(e.name)
        return pure
    if isinstance(e, Comp):
        return is_pure(sig, e.after) and is_pure(sig, e.before)
    if isinstance(e, Pair):
        return is_pure(sig, e.fst) and is_pure(sig, e.snd)
    if isinstance(e, (Id, Proj1, Proj2, Bang)):
        return True
    raise IllTyped(f"not a term expression: {e!r}")
