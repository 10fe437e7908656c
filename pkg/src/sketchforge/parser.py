"""Parser for the specification DSL.

A document is a sequence of named blocks::

    spec Mon {
      type G
      pure term prd : G * G -> G
      pure term unt : 1 -> G
      eq assoc : prd(x, prd(y, z)) == prd(prd(x, y), z) where x y z : G
    }
    morphism collapse : Mon -> Other { type G => 1  term prd => bang[1 * 1] }
    transform t : m1 => m2 { at G => e }

Equations are written either in combinator form (``p . s == id[N]``) or with
named variables and application syntax plus a ``where`` clause; applications
make the whole equation sugared.  ``//`` starts a line comment.
"""

from __future__ import annotations

from dataclasses import dataclass

from .expr import (
    UNIT,
    Atom,
    Bang,
    Base,
    Comp,
    Id,
    Pair,
    Proj1,
    Proj2,
    Prod,
    SpecError,
    TermExpr,
    TypeExpr,
)
from .morphism import Morphism, NatTrans
from .spec import (
    Equation,
    ParamConstSpec,
    ParamSpec,
    SApp,
    Spec,
    SVar,
    TermDecl,
    desugar_equation,
    underlying_spec,
    validate,
)


class ParseError(SpecError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


_SYMBOLS = ("==", "=>", "->", "{", "}", "(", ")", "[", "]", ":", ",", "*",
            ".", ";")
_KEYWORDS = {"spec", "extends", "type", "term", "pure", "param", "const",
             "eq", "where", "morphism", "transform", "at", "id", "p1", "p2",
             "bang", "pair"}


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "unit" | symbol text | "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        two = text[i:i + 2]
        if two in _SYMBOLS:
            out.append(Token(two, two, line, col))
            i += 2
            col += 2
            continue
        if c in _SYMBOLS:
            out.append(Token(c, c, line, col))
            i += 1
            col += 1
            continue
        if c == "1":
            out.append(Token("unit", "1", line, col))
            i += 1
            col += 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_'#"):
                j += 1
            out.append(Token("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", line, col)
    out.append(Token("eof", "", line, max(col, 1)))
    return out


# Raw expression trees, resolved against a specification afterwards.


class Raw:
    __slots__ = ()


@dataclass(frozen=True)
class RName(Raw):
    name: str


@dataclass(frozen=True)
class RApply(Raw):
    head: str
    args: tuple[Raw, ...]


@dataclass(frozen=True)
class RId(Raw):
    at: TypeExpr


@dataclass(frozen=True)
class RProj(Raw):
    index: int
    left: TypeExpr
    right: TypeExpr


@dataclass(frozen=True)
class RBang(Raw):
    source: TypeExpr


@dataclass(frozen=True)
class RPair(Raw):
    fst: Raw
    snd: Raw


@dataclass(frozen=True)
class RComp(Raw):
    after: Raw
    before: Raw


def _has_apply(r: Raw) -> bool:
    if isinstance(r, RApply):
        return True
    if isinstance(r, RPair):
        return _has_apply(r.fst) or _has_apply(r.snd)
    if isinstance(r, RComp):
        return _has_apply(r.after) or _has_apply(r.before)
    return False


def _to_sugar(r: Raw, variables: dict) -> SApp | SVar:
    if isinstance(r, RName):
        if r.name in variables:
            return SVar(r.name)
        return SApp(r.name, ())
    if isinstance(r, RApply):
        return SApp(r.head, tuple(_to_sugar(a, variables) for a in r.args))
    raise SpecError(
        "combinator syntax cannot be mixed with variable applications")


def _to_term(r: Raw) -> TermExpr:
    if isinstance(r, RName):
        return Atom(r.name)
    if isinstance(r, RId):
        return Id(r.at)
    if isinstance(r, RProj):
        cls = Proj1 if r.index == 1 else Proj2
        return cls(r.left, r.right)
    if isinstance(r, RBang):
        return Bang(r.source)
    if isinstance(r, RPair):
        return Pair(_to_term(r.fst), _to_term(r.snd))
    if isinstance(r, RComp):
        return Comp(_to_term(r.after), _to_term(r.before))
    raise SpecError("application syntax needs variable sugar")


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    # -- token plumbing ------------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str) -> Token:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(f"expected {kind!r}, found {t.text!r}",
                             t.line, t.col)
        return self.next()

    def expect_ident(self, *texts: str) -> Token:
        t = self.expect("ident")
        if texts and t.text not in texts:
            raise ParseError(f"expected {' or '.join(texts)}, found "
                             f"{t.text!r}", t.line, t.col)
        return t

    def at_ident(self, text: str) -> bool:
        t = self.peek()
        return t.kind == "ident" and t.text == text

    # -- types ---------------------------------------------------------------

    def parse_type(self) -> TypeExpr:
        left = self.parse_type_atom()
        if self.peek().kind == "*":
            self.next()
            return Prod(left, self.parse_type())
        return left

    def parse_type_atom(self) -> TypeExpr:
        t = self.peek()
        if t.kind == "unit":
            self.next()
            return UNIT
        if t.kind == "(":
            self.next()
            inner = self.parse_type()
            self.expect(")")
            return inner
        name = self.expect("ident")
        return Base(name.text)

    # -- expressions ---------------------------------------------------------

    def parse_expr(self) -> Raw:
        left = self.parse_app()
        if self.peek().kind == ".":
            self.next()
            return RComp(left, self.parse_expr())
        return left

    def parse_app(self) -> Raw:
        t = self.peek()
        if t.kind == "(":
            self.next()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if t.kind != "ident":
            raise ParseError(f"expected an expression, found {t.text!r}",
                             t.line, t.col)
        name = self.next().text
        if name == "id":
            self.expect("[")
            at = self.parse_type()
            self.expect("]")
            return RId(at)
        if name in ("p1", "p2"):
            self.expect("[")
            left = self.parse_type()
            self.expect(",")
            right = self.parse_type()
            self.expect("]")
            return RProj(1 if name == "p1" else 2, left, right)
        if name == "bang":
            self.expect("[")
            src = self.parse_type()
            self.expect("]")
            return RBang(src)
        if name == "pair":
            self.expect("(")
            fst = self.parse_expr()
            self.expect(",")
            snd = self.parse_expr()
            self.expect(")")
            return RPair(fst, snd)
        if self.peek().kind == "(":
            self.next()
            args = [self.parse_expr()]
            while self.peek().kind == ",":
                self.next()
                args.append(self.parse_expr())
            self.expect(")")
            return RApply(name, tuple(args))
        return RName(name)

    # -- blocks ----------------------------------------------------------------

    def parse_document(self) -> "Document":
        doc = Document()
        while self.peek().kind != "eof":
            t = self.expect_ident("spec", "morphism", "transform")
            if t.text == "spec":
                self.parse_spec_block(doc)
            elif t.text == "morphism":
                self.parse_morphism_block(doc)
            else:
                self.parse_transform_block(doc)
        return doc

    def parse_spec_block(self, doc: "Document") -> None:
        name = self.expect("ident").text
        base = Spec()
        param_type: str | None = None
        param_const: str | None = None
        if self.at_ident("extends"):
            self.next()
            parent_tok = self.expect("ident")
            parent = doc.get(parent_tok.text)
            if parent is None:
                raise ParseError(f"unknown specification {parent_tok.text!r}",
                                 parent_tok.line, parent_tok.col)
            if isinstance(parent, ParamSpec):
                param_type = parent.param_type
            elif isinstance(parent, ParamConstSpec):
                param_type = parent.base.param_type
                param_const = parent.param_const
            base = underlying_spec(parent)
        self.expect("{")
        spec = base
        while self.peek().kind != "}":
            t = self.expect_ident("type", "term", "pure", "param", "eq")
            if t.text == "type":
                spec = spec.with_type(self.expect("ident").text)
            elif t.text in ("term", "pure"):
                pure = t.text == "pure"
                if pure:
                    self.expect_ident("term")
                spec = spec.with_term(self.parse_term_decl(pure))
            elif t.text == "param":
                which = self.expect_ident("type", "const")
                if which.text == "type":
                    tok = self.expect("ident")
                    if param_type is not None:
                        raise ParseError("parameter type declared twice",
                                         tok.line, tok.col)
                    param_type = tok.text
                    spec = spec.with_type(param_type)
                else:
                    tok = self.expect("ident")
                    self.expect(":")
                    at = self.expect("ident")
                    if param_type is None or at.text != param_type:
                        raise ParseError(
                            "parameter constant must have the parameter type",
                            at.line, at.col)
                    if param_const is not None:
                        raise ParseError("parameter constant declared twice",
                                         tok.line, tok.col)
                    param_const = tok.text
                    spec = spec.with_term(
                        TermDecl(param_const, UNIT, Base(param_type)))
            else:
                spec = spec.with_equation(self.parse_equation(spec))
        self.expect("}")
        problems = validate(spec)
        if problems:
            t = self.peek()
            raise ParseError(f"invalid specification {name!r}: "
                             + "; ".join(map(str, problems)), t.line, t.col)
        obj: Spec | ParamSpec | ParamConstSpec = spec
        if param_type is not None:
            obj = ParamSpec(spec, param_type)
            if param_const is not None:
                obj = ParamConstSpec(obj, param_const)
        doc.add(name, obj)

    def parse_term_decl(self, pure: bool) -> TermDecl:
        name = self.expect("ident").text
        self.expect(":")
        dom = self.parse_type()
        self.expect("->")
        cod = self.parse_type()
        return TermDecl(name, dom, cod, pure)

    def parse_equation(self, spec: Spec) -> Equation:
        name = self.expect("ident").text
        self.expect(":")
        lhs = self.parse_expr()
        tok = self.expect("==")
        rhs = self.parse_expr()
        variables: dict[str, TypeExpr] = {}
        has_where = self.at_ident("where")
        if has_where:
            self.next()
            while True:
                names = [self.expect("ident").text]
                while self.peek().kind == "ident":
                    names.append(self.next().text)
                self.expect(":")
                sort = self.parse_type()
                for v in names:
                    variables[v] = sort
                if self.peek().kind == ",":
                    self.next()
                    continue
                break
        if has_where or _has_apply(lhs) or _has_apply(rhs):
            try:
                left, right = desugar_equation(
                    spec, _to_sugar(lhs, variables),
                    _to_sugar(rhs, variables), variables)
            except SpecError as err:
                raise ParseError(f"in equation {name!r}: {err}",
                                 tok.line, tok.col) from err
            return Equation(name, left, right)
        return Equation(name, _to_term(lhs), _to_term(rhs))

    def parse_morphism_block(self, doc: "Document") -> None:
        name = self.expect("ident").text
        self.expect(":")
        src = self._spec_ref(doc)
        self.expect("->")
        dst = self._spec_ref(doc)
        self.expect("{")
        type_map: dict[str, TypeExpr] = {}
        term_map: dict[str, TermExpr] = {}
        while self.peek().kind != "}":
            t = self.expect_ident("type", "term")
            sym = self.expect("ident").text
            self.expect("=>")
            if t.text == "type":
                type_map[sym] = self.parse_type()
            else:
                term_map[sym] = _to_term(self.parse_expr())
        self.expect("}")
        doc.add(name, Morphism.make(src, dst, type_map, term_map))

    def parse_transform_block(self, doc: "Document") -> None:
        name = self.expect("ident").text
        self.expect(":")
        source = self._morphism_ref(doc)
        self.expect("=>")
        target = self._morphism_ref(doc)
        self.expect("{")
        components: dict[str, TermExpr] = {}
        while self.peek().kind != "}":
            self.expect_ident("at")
            sym = self.expect("ident").text
            self.expect("=>")
            components[sym] = _to_term(self.parse_expr())
        self.expect("}")
        doc.add(name, NatTrans.make(source, target, components))

    def _spec_ref(self, doc: "Document") -> Spec:
        tok = self.expect("ident")
        obj = doc.get(tok.text)
        if obj is None or isinstance(obj, (Morphism, NatTrans)):
            raise ParseError(f"unknown specification {tok.text!r}",
                             tok.line, tok.col)
        return underlying_spec(obj)

    def _morphism_ref(self, doc: "Document") -> Morphism:
        tok = self.expect("ident")
        obj = doc.get(tok.text)
        if not isinstance(obj, Morphism):
            raise ParseError(f"unknown morphism {tok.text!r}",
                             tok.line, tok.col)
        return obj


class Document:
    """Named parse results, in document order."""

    def __init__(self):
        self.entries: dict[str, object] = {}

    def add(self, name: str, obj) -> None:
        if name in self.entries:
            raise SpecError(f"duplicate block name {name!r}")
        self.entries[name] = obj

    def get(self, name: str):
        return self.entries.get(name)

    def __getitem__(self, name: str):
        obj = self.entries.get(name)
        if obj is None:
            raise KeyError(name)
        return obj

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def __iter__(self):
        return iter(self.entries.items())

    def specs(self) -> dict[str, Spec | ParamSpec | ParamConstSpec]:
        return {k: v for k, v in self.entries.items()
                if not isinstance(v, (Morphism, NatTrans))}

    def name_of(self, obj) -> str | None:
        for name, value in self.entries.items():
            if value == obj or (not isinstance(obj, (Morphism, NatTrans))
                                and not isinstance(value, (Morphism, NatTrans))
                                and underlying_spec(value) == underlying_spec(obj)):
                return name
        return None


def parse_document(text: str) -> Document:
    return Parser(text).parse_document()


def parse_file(path) -> Document:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_document(fh.read())
