"""Finite colimits of presentations: pushouts along a span, decomposition of
a presentation into elementary pieces, and regluing.

All colimits are computed by the same symbol quotient: a union-find over the
type and term symbols of the disjoint union of the parts, where a class may
additionally be bound to an expression (a type symbol to the unit type or a
product, a term symbol to a compound term).  Bound symbols disappear from
the result by substitution.  Each surviving class is named by the smallest
name of its members, and distinct classes that want the same name are told
apart with ``#1``/``#2`` suffixes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

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
    infer,
)
from .morphism import Morphism, apply_term, apply_type
from .spec import Equation, Spec, TermDecl


class UnsupportedPushout(SpecError):
    pass


class InvalidDiagram(SpecError):
    pass


# ---------------------------------------------------------------------------
# Symbol quotient over part-qualified slots


class _Quotient:
    def __init__(self, error):
        self.order: list[tuple] = []
        self.parent: dict[tuple, tuple] = {}
        self.bindings: dict[tuple, list] = {}
        self.error = error

    def slot(self, kind: str, pid: str, name: str) -> tuple:
        s = (kind, pid, name)
        if s not in self.parent:
            self.parent[s] = s
            self.order.append(s)
        return s

    def find(self, s: tuple) -> tuple:
        while self.parent[s] != s:
            self.parent[s] = self.parent[self.parent[s]]
            s = self.parent[s]
        return s

    def union(self, a: tuple, b: tuple) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        self.parent[rb] = ra
        if rb in self.bindings:
            self.bindings.setdefault(ra, []).extend(self.bindings.pop(rb))

    def bind(self, s: tuple, pid: str, expr) -> None:
        self.bindings.setdefault(self.find(s), []).append((pid, expr))

    def equate_types(self, pa: str, a: TypeExpr, pb: str, b: TypeExpr) -> None:
        if isinstance(a, Base) and isinstance(b, Base):
            self.union(self.slot("type", pa, a.name),
                       self.slot("type", pb, b.name))
        elif isinstance(a, Base):
            self.bind(self.slot("type", pa, a.name), pb, b)
        elif isinstance(b, Base):
            self.bind(self.slot("type", pb, b.name), pa, a)
        elif isinstance(a, Prod) and isinstance(b, Prod):
            self.equate_types(pa, a.left, pb, b.left)
            self.equate_types(pa, a.right, pb, b.right)
        elif a != b:
            raise self.error(f"cannot identify types {a!r} and {b!r}")

    def equate_terms(self, pa: str, a: TermExpr, pb: str, b: TermExpr) -> None:
        if isinstance(a, Atom) and isinstance(b, Atom):
            self.union(self.slot("term", pa, a.name),
                       self.slot("term", pb, b.name))
        elif isinstance(a, Atom):
            self.bind(self.slot("term", pa, a.name), pb, b)
        elif isinstance(b, Atom):
            self.bind(self.slot("term", pb, b.name), pa, a)
        elif a != b:
            raise self.error(f"cannot identify terms {a!r} and {b!r}")

    def resolve(self) -> "_Resolution":
        classes: dict[tuple, list[tuple]] = {}
        for s in self.order:
            classes.setdefault(self.find(s), []).append(s)

        # Name the unbound classes, deterministically.
        names: dict[tuple, str] = {}
        wanted: dict[str, list[tuple]] = {}
        for root, members in classes.items():
            if self.bindings.get(root):
                continue
            want = min(name for _k, _p, name in members)
            wanted.setdefault((root[0], want), []).append(root)
        for (_kind, want), roots in wanted.items():
            if len(roots) == 1:
                names[roots[0]] = want
            else:
                for i, root in enumerate(roots, start=1):
                    names[root] = f"{want}#{i}"

        memo: dict[tuple, object] = {}
        visiting: set[tuple] = set()

        def resolve_slot(s: tuple):
            s = self.find(s)
            if s in memo:
                return memo[s]
            if s in visiting:
                raise self.error(f"cyclic identification at {s[2]!r}")
            visiting.add(s)
            bound = self.bindings.get(s, [])
            if bound:
                resolved = [
                    resolve_type(pid, e) if s[0] == "type"
                    else resolve_term(pid, e)
                    for pid, e in bound]
                first = resolved[0]
                for other in resolved[1:]:
                    if other != first:
                        raise self.error(
                            f"conflicting identifications at {s[2]!r}: "
                            f"{first!r} vs {other!r}")
                out = first
            else:
                out = (Base(names[s]) if s[0] == "type" else Atom(names[s]))
            visiting.discard(s)
            memo[s] = out
            return out

        def resolve_type(pid: str, t: TypeExpr) -> TypeExpr:
            if isinstance(t, Base):
                return resolve_slot(self.slot("type", pid, t.name))
            if isinstance(t, Prod):
                return Prod(resolve_type(pid, t.left),
                            resolve_type(pid, t.right))
            return t

        def resolve_term(pid: str, e: TermExpr) -> TermExpr:
            if isinstance(e, Atom):
                return resolve_slot(self.slot("term", pid, e.name))
            if isinstance(e, Id):
                return Id(resolve_type(pid, e.at))
            if isinstance(e, Comp):
                return Comp(resolve_term(pid, e.after),
                            resolve_term(pid, e.before))
            if isinstance(e, Pair):
                return Pair(resolve_term(pid, e.fst),
                            resolve_term(pid, e.snd))
            if isinstance(e, Proj1):
                return Proj1(resolve_type(pid, e.left),
                             resolve_type(pid, e.right))
            if isinstance(e, Proj2):
                return Proj2(resolve_type(pid, e.left),
                             resolve_type(pid, e.right))
            if isinstance(e, Bang):
                return Bang(resolve_type(pid, e.source))
            raise self.error(f"not a term expression: {e!r}")

        return _Resolution(resolve_type, resolve_term)


@dataclass
class _Resolution:
    type_of: object  # (pid, TypeExpr) -> TypeExpr
    term_of: object  # (pid, TermExpr) -> TermExpr


def _quotient_spec(parts: list[tuple[str, Spec]], q: _Quotient,
                   error) -> tuple[Spec, dict[str, Morphism]]:
    res = q.resolve()

    types: list[str] = []
    for pid, spec in parts:
        for name in spec.types:
            image = res.type_of(pid, Base(name))
            if isinstance(image, Base) and image.name not in types:
                types.append(image.name)

    decls: dict[str, TermDecl] = {}
    for pid, spec in parts:
        for decl in spec.terms:
            image = res.term_of(pid, Atom(decl.name))
            if not isinstance(image, Atom):
                continue
            dom = res.type_of(pid, decl.dom)
            cod = res.type_of(pid, decl.cod)
            prev = decls.get(image.name)
            if prev is None:
                decls[image.name] = TermDecl(image.name, dom, cod, decl.pure)
            else:
                if (prev.dom, prev.cod) != (dom, cod):
                    raise error(
                        f"identified terms disagree on type at {image.name!r}")
                if decl.pure and not prev.pure:
                    decls[image.name] = TermDecl(image.name, dom, cod, True)

    equations: list[Equation] = []
    eq_names: set[str] = set()
    for pid, spec in parts:
        for eq in spec.equations:
            name = eq.name if eq.name not in eq_names else f"{pid}.{eq.name}"
            eq_names.add(name)
            equations.append(Equation(name, res.term_of(pid, eq.lhs),
                                      res.term_of(pid, eq.rhs)))

    glued = Spec(tuple(types), tuple(decls.values()), tuple(equations))
    injections = {}
    for pid, spec in parts:
        injections[pid] = Morphism.make(
            spec, glued,
            {name: res.type_of(pid, Base(name)) for name in spec.types},
            {d.name: res.term_of(pid, Atom(d.name)) for d in spec.terms})
    return glued, injections


# ---------------------------------------------------------------------------
# Pushout


@dataclass(frozen=True)
class Pushout:
    spec: Spec
    left: Morphism   # S1 -> S3
    right: Morphism  # S2 -> S3


def _is_type_basic(m: Morphism) -> bool:
    return all(isinstance(t, Base) or t == UNIT for _n, t in m.type_map)


def pushout(f: Morphism, g: Morphism) -> Pushout:
    """The pushout of presentations along a common source.

    At least one leg must send every declared type to a declared type or to
    the unit type; identifications that put genuine product expressions on
    both sides of a type are out of scope.
    """
    if f.src != g.src:
        raise UnsupportedPushout("legs do not share their source")
    if not (_is_type_basic(f) or _is_type_basic(g)):
        raise UnsupportedPushout("neither leg is type-basic")
    s0, s1, s2 = f.src, f.dst, g.dst

    q = _Quotient(UnsupportedPushout)
    for pid, spec in (("1", s1), ("2", s2)):
        for name in spec.types:
            q.slot("type", pid, name)
        for name in spec.term_names():
            q.slot("term", pid, name)
    for name in s0.types:
        q.equate_types("1", f.on_type(Base(name)), "2", g.on_type(Base(name)))
    for name in s0.term_names():
        q.equate_terms("1", f.on_term(Atom(name)), "2", g.on_term(Atom(name)))

    glued, inj = _quotient_spec([("1", s1), ("2", s2)], q, UnsupportedPushout)
    return Pushout(glued, inj["1"], inj["2"])


def mediate(po: Pushout, q1: Morphism, q2: Morphism) -> Morphism:
    """The mediating morphism out of a pushout towards a commuting cospan.

    Every generator of the pushout is the image of a generator of one leg,
    so its image is forced; the caller checks commutation of the cospan.
    """
    if q1.src != po.left.src or q2.src != po.right.src or q1.dst != q2.dst:
        raise InvalidDiagram("cospan does not match the pushout span")
    type_map: dict[str, TypeExpr] = {}
    term_map: dict[str, TermExpr] = {}
    for source, leg in ((q1, po.left), (q2, po.right)):
        for name, image in leg.type_map:
            if isinstance(image, Base) and image.name not in type_map:
                type_map[image.name] = source.on_type(Base(name))
        for name, image in leg.term_map:
            if isinstance(image, Atom) and image.name not in term_map:
                term_map[image.name] = source.on_term(Atom(name))
    missing = set(po.spec.types) - set(type_map)
    missing |= set(po.spec.term_names()) - set(term_map)
    if missing:
        raise InvalidDiagram(f"generators without preimage: {sorted(missing)}")
    return Morphism.make(po.spec, q1.dst, type_map, term_map)


# ---------------------------------------------------------------------------
# Diagrams of elementary specifications


ELEMENTARY_KINDS = ("Type", "Term", "Selid", "Comp", "2-Prod", "2-Tuple",
                    "0-Prod", "0-Tuple", "Equa")


@dataclass(frozen=True)
class ElementarySpec:
    kind: str
    payload: Spec

    def __post_init__(self):
        if self.kind not in ELEMENTARY_KINDS:
            raise InvalidDiagram(f"unknown elementary kind {self.kind!r}")


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    morphism: Morphism


@dataclass
class Diagram:
    nodes: dict[str, ElementarySpec | Spec] = field(default_factory=dict)
    edges: dict[str, Edge] = field(default_factory=dict)

    def payload(self, node_id: str) -> Spec:
        node = self.nodes[node_id]
        return node.payload if isinstance(node, ElementarySpec) else node


def glue(d: Diagram) -> tuple[Spec, dict[str, Morphism]]:
    """Colimit of a diagram of presentations by iterated symbol quotient."""
    for eid, edge in d.edges.items():
        if edge.source not in d.nodes or edge.target not in d.nodes:
            raise InvalidDiagram(f"edge {eid!r} has a dangling endpoint")
        if (edge.morphism.src != d.payload(edge.source)
                or edge.morphism.dst != d.payload(edge.target)):
            raise InvalidDiagram(f"edge {eid!r} does not match its endpoints")

    q = _Quotient(InvalidDiagram)
    parts = []
    for nid in d.nodes:
        spec = d.payload(nid)
        for name in spec.types:
            q.slot("type", nid, name)
        for name in spec.term_names():
            q.slot("term", nid, name)
        parts.append((nid, spec))
    for edge in d.edges.values():
        m = edge.morphism
        for name in m.src.types:
            q.equate_types(edge.source, Base(name),
                           edge.target, m.on_type(Base(name)))
        for name in m.src.term_names():
            q.equate_terms(edge.source, Atom(name),
                           edge.target, m.on_term(Atom(name)))

    return _quotient_spec(parts, q, InvalidDiagram)


# ---------------------------------------------------------------------------
# Decomposition into elementary specifications


class _Decomposer:
    def __init__(self, spec: Spec):
        self.spec = spec
        self.d = Diagram()
        self.type_defs: dict[TypeExpr, tuple[str, TypeExpr]] = {}
        self.term_defs: dict[TermExpr, tuple[str, TermExpr, TypeExpr, TypeExpr]] = {}
        self.counter = 0

    def fresh(self, prefix: str) -> str:
        self.counter += 1
        return f"{prefix}{self.counter}"

    def add_node(self, nid: str, kind: str, payload: Spec) -> str:
        self.d.nodes[nid] = ElementarySpec(kind, payload)
        return nid

    def add_edge(self, source: str, target: str, type_map, term_map) -> None:
        m = Morphism.make(self.d.payload(source), self.d.payload(target),
                          type_map, term_map)
        self.d.edges[self.fresh("e")] = Edge(source, target, m)

    # -- type layer ---------------------------------------------------------

    def def_type(self, t: TypeExpr) -> tuple[str, TypeExpr]:
        """The node presenting a type expression and the expression for it
        in that node's local symbols."""
        found = self.type_defs.get(t)
        if found is not None:
            return found
        if isinstance(t, Base):
            nid = self.add_node(f"ty:{t.name}", "Type", Spec(types=(t.name,)))
            out = (nid, t)
        elif t == UNIT:
            nid = self.add_node("unit", "0-Prod", Spec())
            out = (nid, UNIT)
        else:
            assert isinstance(t, Prod)
            self.def_type(t.left)
            self.def_type(t.right)
            nid = self.add_node(self.fresh("prod"), "2-Prod",
                                Spec(types=("~l", "~r")))
            out = (nid, Prod(Base("~l"), Base("~r")))
            self.type_defs[t] = out
            self.type_border(t.left, nid, Base("~l"))
            self.type_border(t.right, nid, Base("~r"))
        self.type_defs[t] = out
        return out

    def type_border(self, t: TypeExpr, node: str, local: TypeExpr) -> None:
        """Identify a node's local type symbol with the presentation of t."""
        def_node, def_expr = self.def_type(t)
        if isinstance(t, Base):
            self.add_edge(def_node, node, {t.name: local}, {})
            return
        bid = self.add_node(self.fresh("b"), "Type", Spec(types=("~v",)))
        self.add_edge(bid, def_node, {"~v": def_expr}, {})
        self.add_edge(bid, node, {"~v": local}, {})

    # -- term layer ---------------------------------------------------------

    def def_term(self, e: TermExpr) -> tuple[str, TermExpr, TypeExpr, TypeExpr]:
        """The node presenting a term subexpression: node id, the expression
        for it in local symbols, and its local dom/cod expressions."""
        found = self.term_defs.get(e)
        if found is not None:
            return found
        dom, cod = infer(self.spec, e)
        if isinstance(e, Atom):
            decl = self.spec.term_index[e.name]
            nid = self.add_node(
                f"term:{e.name}", "Term",
                Spec(types=("~d", "~c"),
                     terms=(TermDecl(e.name, Base("~d"), Base("~c"),
                                     decl.pure),)))
            out = (nid, Atom(e.name), Base("~d"), Base("~c"))
            self.term_defs[e] = out
            self.type_border(dom, nid, Base("~d"))
            self.type_border(cod, nid, Base("~c"))
        elif isinstance(e, Id):
            nid = self.add_node(self.fresh("selid"), "Selid",
                                Spec(types=("~x",)))
            out = (nid, Id(Base("~x")), Base("~x"), Base("~x"))
            self.term_defs[e] = out
            self.type_border(e.at, nid, Base("~x"))
        elif isinstance(e, Bang):
            nid = self.add_node(self.fresh("coll"), "0-Tuple",
                                Spec(types=("~x",)))
            out = (nid, Bang(Base("~x")), Base("~x"), UNIT)
            self.term_defs[e] = out
            self.type_border(e.source, nid, Base("~x"))
        elif isinstance(e, (Proj1, Proj2)):
            nid, _vertex = self.def_type(Prod(e.left, e.right))
            local = (Proj1 if isinstance(e, Proj1) else Proj2)(
                Base("~l"), Base("~r"))
            out = (nid, local, Prod(Base("~l"), Base("~r")),
                   Base("~l") if isinstance(e, Proj1) else Base("~r"))
            self.term_defs[e] = out
        elif isinstance(e, Comp):
            nid = self.add_node(
                self.fresh("comp"), "Comp",
                Spec(types=("~d", "~m", "~c"),
                     terms=(TermDecl("~f", Base("~d"), Base("~m")),
                            TermDecl("~g", Base("~m"), Base("~c")))))
            out = (nid, Comp(Atom("~g"), Atom("~f")), Base("~d"), Base("~c"))
            self.term_defs[e] = out
            mid = infer(self.spec, e.before)[1]
            self.type_border(dom, nid, Base("~d"))
            self.type_border(mid, nid, Base("~m"))
            self.type_border(cod, nid, Base("~c"))
            self.term_border(e.before, nid, "~f")
            self.term_border(e.after, nid, "~g")
        else:
            assert isinstance(e, Pair)
            nid = self.add_node(
                self.fresh("tup"), "2-Tuple",
                Spec(types=("~d", "~l", "~r"),
                     terms=(TermDecl("~f", Base("~d"), Base("~l")),
                            TermDecl("~g", Base("~d"), Base("~r")))))
            out = (nid, Pair(Atom("~f"), Atom("~g")), Base("~d"),
                   Prod(Base("~l"), Base("~r")))
            self.term_defs[e] = out
            lcod = infer(self.spec, e.fst)[1]
            rcod = infer(self.spec, e.snd)[1]
            self.type_border(dom, nid, Base("~d"))
            self.type_border(lcod, nid, Base("~l"))
            self.type_border(rcod, nid, Base("~r"))
            self.term_border(e.fst, nid, "~f")
            self.term_border(e.snd, nid, "~g")
        return self.term_defs[e]

    def term_border(self, e: TermExpr, node: str, local: str) -> None:
        def_node, def_expr, def_dom, def_cod = self.def_term(e)
        payload = self.d.payload(node)
        decl = payload.term_index[local]
        bid = self.add_node(
            self.fresh("tb"), "Term",
            Spec(types=("~a", "~b"),
                 terms=(TermDecl("~t", Base("~a"), Base("~b")),)))
        self.add_edge(bid, def_node, {"~a": def_dom, "~b": def_cod},
                      {"~t": def_expr})
        self.add_edge(bid, node, {"~a": decl.dom, "~b": decl.cod},
                      {"~t": Atom(local)})

    # -- driver -------------------------------------------------------------

    def run(self) -> Diagram:
        for name in self.spec.types:
            self.def_type(Base(name))
        for decl in self.spec.terms:
            self.def_term(Atom(decl.name))
        for eq in self.spec.equations:
            dom, cod = infer(self.spec, eq.lhs)
            nid = self.add_node(
                f"eq:{eq.name}", "Equa",
                Spec(types=("~d", "~c"),
                     terms=(TermDecl("~l", Base("~d"), Base("~c")),
                            TermDecl("~r", Base("~d"), Base("~c"))),
                     equations=(Equation(eq.name, Atom("~l"), Atom("~r")),)))
            self.type_border(dom, nid, Base("~d"))
            self.type_border(cod, nid, Base("~c"))
            self.term_border(eq.lhs, nid, "~l")
            self.term_border(eq.rhs, nid, "~r")
        return self.d


def decompose(s: Spec) -> Diagram:
    """Present a specification as a diagram of elementary specifications:
    one node per type, declared term, occurring product, and syntactic
    constructor in equation sides, glued along explicit borders."""
    return _Decomposer(s).run()


# ---------------------------------------------------------------------------
# Isomorphism up to renaming, for round-trip checks


def canonical_form(s: Spec) -> tuple:
    """A renaming-invariant encoding: symbols are replaced by their first
    occurrence index, declaration order preserved."""
    type_ids = {name: f"T{i}" for i, name in enumerate(s.types)}
    term_ids = {d.name: f"f{i}" for i, d in enumerate(s.terms)}

    def enc_type(t: TypeExpr):
        if isinstance(t, Base):
            return type_ids[t.name]
        if isinstance(t, Prod):
            return ("*", enc_type(t.left), enc_type(t.right))
        return "1"

    def enc_term(e: TermExpr):
        if isinstance(e, Atom):
            return term_ids[e.name]
        if isinstance(e, Id):
            return ("id", enc_type(e.at))
        if isinstance(e, Comp):
            return ("o", enc_term(e.after), enc_term(e.before))
        if isinstance(e, Pair):
            return ("pair", enc_term(e.fst), enc_term(e.snd))
        if isinstance(e, Proj1):
            return ("p1", enc_type(e.left), enc_type(e.right))
        if isinstance(e, Proj2):
            return ("p2", enc_type(e.left), enc_type(e.right))
        return ("bang", enc_type(e.source))

    return (
        len(s.types),
        tuple((enc_type(d.dom), enc_type(d.cod), d.pure) for d in s.terms),
        tuple(sorted((enc_term(eq.lhs), enc_term(eq.rhs))
                     for eq in s.equations)),
    )


def isomorphic_presentations(a: Spec, b: Spec) -> bool:
    """Bijective-renaming equality, assuming compatible declaration order."""
    return canonical_form(a) == canonical_form(b)
