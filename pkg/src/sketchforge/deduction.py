"""The equational engine: term normalization, bounded congruence saturation
and entailment with countermodel search.

Normalization orients the structural equations of the logic as rewrite
rules: compositions reassociate to the right, identities are stripped,
projections cancel pairings (and pairing of projections of one term
collapses), and any term into the unit type becomes the collapsing map.

Entailment works on *element terms*: a morphism applied to a generic point
of its domain.  At that level composition is substitution, so the
substitution and replacement rules of the logic become ordinary congruence,
and each specification equation becomes a rewrite rule whose variables stand
for the projections of the generic point.  Saturation is a small typed
e-graph; it is sound and deliberately budget-bounded, with a tri-state
verdict.  Refutations are found by brute-force enumeration of finite models
and are always verified before being reported.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

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
)
from .models import FinModel, check_model, enumerate_models, eval_term
from .spec import Spec


class NonParallelGoal(SpecError):
    pass


class RenamingMismatch(SpecError):
    pass


@dataclass(frozen=True)
class Budget:
    max_depth: int = 6
    max_iters: int = 8
    max_model_size: int = 3
    max_nodes: int = 20000

    def with_overrides(self, max_depth=None, max_iters=None,
                       max_model_size=None) -> "Budget":
        return Budget(
            max_depth if max_depth is not None else self.max_depth,
            max_iters if max_iters is not None else self.max_iters,
            max_model_size if max_model_size is not None else self.max_model_size,
            self.max_nodes)


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class Verdict:
    status: str  # "proven" | "refuted" | "unknown"
    trace: tuple[str, ...] = ()
    model: FinModel | None = None
    reason: str = ""

    @property
    def is_proven(self) -> bool:
        return self.status == "proven"

    @property
    def is_refuted(self) -> bool:
        return self.status == "refuted"

    @property
    def is_unknown(self) -> bool:
        return self.status == "unknown"

    @staticmethod
    def proven(trace) -> "Verdict":
        return Verdict("proven", trace=tuple(trace))

    @staticmethod
    def refuted(model: FinModel) -> "Verdict":
        return Verdict("refuted", model=model)

    @staticmethod
    def unknown(reason: str) -> "Verdict":
        return Verdict("unknown", reason=reason)


# ---------------------------------------------------------------------------
# Normalization of combinator terms


_MAX_NORMALIZE_STEPS = 100_000


class _Normalizer:
    def __init__(self, spec: Spec):
        self.spec = spec
        self.steps = 0

    def _tick(self):
        self.steps += 1
        if self.steps > _MAX_NORMALIZE_STEPS:  # termination guard
            raise IllTyped("normalization step bound exceeded")

    def norm(self, e: TermExpr) -> TermExpr:
        if isinstance(e, Comp):
            out = self.comp(self.norm(e.after), self.norm(e.before))
        elif isinstance(e, Pair):
            out = self.pair(self.norm(e.fst), self.norm(e.snd))
        else:
            out = e
        return self.collapse(out)

    def comp(self, a: TermExpr, b: TermExpr) -> TermExpr:
        """Compose two normalized terms and renormalize the head."""
        self._tick()
        if isinstance(a, Comp):  # reassociate (a1∘a2)∘b to a1∘(a2∘b)
            return self.comp(a.after, self.comp(a.before, b))
        if isinstance(a, Id):
            return b
        if isinstance(b, Id):
            return a
        if isinstance(b, Bang) and b.source == UNIT:
            return a  # the collapsing of the unit type is its identity
        if isinstance(a, Proj1) and isinstance(b, Pair):
            return b.fst
        if isinstance(a, Proj2) and isinstance(b, Pair):
            return b.snd
        if isinstance(b, Comp) and isinstance(b.after, Pair):
            if isinstance(a, Proj1):
                return self.comp(b.after.fst, b.before)
            if isinstance(a, Proj2):
                return self.comp(b.after.snd, b.before)
        return self.collapse(Comp(a, b))

    def pair(self, f: TermExpr, g: TermExpr) -> TermExpr:
        self._tick()
        if (isinstance(f, Proj1) and isinstance(g, Proj2)
                and (f.left, f.right) == (g.left, g.right)):
            return Id(Prod(f.left, f.right))
        if (isinstance(f, Comp) and isinstance(g, Comp)
                and isinstance(f.after, Proj1) and isinstance(g.after, Proj2)
                and (f.after.left, f.after.right) == (g.after.left, g.after.right)
                and f.before == g.before):
            return f.before
        return Pair(f, g)

    def collapse(self, e: TermExpr) -> TermExpr:
        if isinstance(e, Bang):
            return e
        dom, cod = infer(self.spec, e)
        if cod == UNIT:
            return Bang(dom)
        return e


def normalize(spec: Spec, e: TermExpr) -> TermExpr:
    """Canonical form of a well-typed term; idempotent, type-preserving."""
    infer(spec, e)  # typecheck up front
    return _Normalizer(spec).norm(e)


# ---------------------------------------------------------------------------
# Element terms: a morphism applied to a generic point of its domain.
# Smart constructors keep element terms in canonical form for the pure
# theory: projections cancel pairs, pairing of both projections of one term
# collapses, and anything of unit type is the unit value.


class ElTerm:
    __slots__ = ()


@dataclass(frozen=True)
class EVar(ElTerm):
    name: str
    ty: TypeExpr


@dataclass(frozen=True)
class EStar(ElTerm):
    @property
    def ty(self) -> TypeExpr:
        return UNIT


ESTAR = EStar()


@dataclass(frozen=True)
class EPair(ElTerm):
    fst: ElTerm
    snd: ElTerm

    @property
    def ty(self) -> TypeExpr:
        return Prod(self.fst.ty, self.snd.ty)


@dataclass(frozen=True)
class EProj(ElTerm):
    index: int  # 1 or 2
    arg: ElTerm
    ty: TypeExpr


@dataclass(frozen=True)
class EApp(ElTerm):
    head: str
    arg: ElTerm
    ty: TypeExpr


def e_var(name: str, ty: TypeExpr) -> ElTerm:
    return ESTAR if ty == UNIT else EVar(name, ty)


def e_pair(a: ElTerm, b: ElTerm) -> ElTerm:
    if (isinstance(a, EProj) and isinstance(b, EProj)
            and a.index == 1 and b.index == 2 and a.arg == b.arg):
        return a.arg
    return EPair(a, b)


def e_proj(index: int, arg: ElTerm) -> ElTerm:
    if isinstance(arg, EPair):
        return arg.fst if index == 1 else arg.snd
    if not isinstance(arg.ty, Prod):
        raise IllTyped(f"projection from non-product element {arg!r}")
    ty = arg.ty.left if index == 1 else arg.ty.right
    if ty == UNIT:
        return ESTAR
    return EProj(index, arg, ty)


def e_app(spec: Spec, head: str, arg: ElTerm) -> ElTerm:
    dom, cod, _pure = spec.term_signature(head)
    if arg.ty != dom:
        raise IllTyped(f"bad argument type for {head!r}")
    if cod == UNIT:
        return ESTAR
    return EApp(head, arg, cod)


def element_of(spec: Spec, e: TermExpr, point: ElTerm) -> ElTerm:
    """Apply a morphism term to an element term of its domain type."""
    if isinstance(e, Atom):
        return e_app(spec, e.name, point)
    if isinstance(e, Id):
        return point
    if isinstance(e, Comp):
        return element_of(spec, e.after, element_of(spec, e.before, point))
    if isinstance(e, Pair):
        return e_pair(element_of(spec, e.fst, point),
                      element_of(spec, e.snd, point))
    if isinstance(e, Proj1):
        return e_proj(1, point)
    if isinstance(e, Proj2):
        return e_proj(2, point)
    if isinstance(e, Bang):
        return ESTAR
    raise IllTyped(f"not a term expression: {e!r}")


def el_depth(t: ElTerm) -> int:
    if isinstance(t, EPair):
        return 1 + max(el_depth(t.fst), el_depth(t.snd))
    if isinstance(t, (EProj, EApp)):
        return 1 + el_depth(t.arg)
    return 1


# ---------------------------------------------------------------------------
# Patterns: element terms of an equation side with the projections of the
# generic point abstracted into typed pattern variables.


class Pattern:
    __slots__ = ()


@dataclass(frozen=True)
class PVar(Pattern):
    name: str
    ty: TypeExpr


@dataclass(frozen=True)
class PStar(Pattern):
    pass


@dataclass(frozen=True)
class PPair(Pattern):
    fst: Pattern
    snd: Pattern


@dataclass(frozen=True)
class PProj(Pattern):
    index: int
    arg: Pattern
    ty: TypeExpr


@dataclass(frozen=True)
class PApp(Pattern):
    head: str
    arg: Pattern
    ty: TypeExpr


def _coord_path(t: ElTerm, root: ElTerm) -> tuple[int, ...] | None:
    if t == root:
        return ()
    if isinstance(t, EProj):
        inner = _coord_path(t.arg, root)
        if inner is not None:
            return inner + (t.index,)
    return None


def _coord_pattern(t: ElTerm, root: ElTerm) -> Pattern:
    """A projection chain out of the generic point, split into one pattern
    variable per base-type leaf so both equation sides share variables."""
    if isinstance(t, EStar):
        return PStar()
    if isinstance(t.ty, Prod):
        return PPair(_coord_pattern(e_proj(1, t), root),
                     _coord_pattern(e_proj(2, t), root))
    path = _coord_path(t, root)
    assert path is not None
    return PVar("v" + "".join(map(str, path)), t.ty)


def to_pattern(t: ElTerm, root: ElTerm) -> Pattern:
    if _coord_path(t, root) is not None or isinstance(t, EStar):
        return _coord_pattern(t, root)
    if isinstance(t, EPair):
        return PPair(to_pattern(t.fst, root), to_pattern(t.snd, root))
    if isinstance(t, EProj):
        return PProj(t.index, to_pattern(t.arg, root), t.ty)
    if isinstance(t, EApp):
        return PApp(t.head, to_pattern(t.arg, root), t.ty)
    raise IllTyped(f"cannot patternize {t!r}")


def pattern_vars(p: Pattern) -> set[str]:
    if isinstance(p, PVar):
        return {p.name}
    if isinstance(p, PPair):
        return pattern_vars(p.fst) | pattern_vars(p.snd)
    if isinstance(p, (PProj, PApp)):
        return pattern_vars(p.arg)
    return set()


def pattern_depth(p: Pattern) -> int:
    if isinstance(p, PPair):
        return 1 + max(pattern_depth(p.fst), pattern_depth(p.snd))
    if isinstance(p, (PProj, PApp)):
        return 1 + pattern_depth(p.arg)
    return 1


@dataclass(frozen=True)
class Rule:
    name: str
    lhs: Pattern
    rhs: Pattern


def rules_of_spec(spec: Spec) -> list[Rule]:
    rules = []
    for eq in spec.equations:
        dom, _cod = infer(spec, eq.lhs)
        point = e_var("@" + eq.name, dom)
        left = to_pattern(element_of(spec, normalize(spec, eq.lhs), point), point)
        right = to_pattern(element_of(spec, normalize(spec, eq.rhs), point), point)
        if left == right:
            continue
        if pattern_vars(right) <= pattern_vars(left):
            rules.append(Rule(eq.name + ">", left, right))
        if pattern_vars(left) <= pattern_vars(right):
            rules.append(Rule(eq.name + "<", right, left))
    return rules


# ---------------------------------------------------------------------------
# A small typed e-graph over element terms.


class CongruenceState:
    """Union-find over hash-consed element-term nodes, closed under
    congruence; merges only ever grow the relation."""

    def __init__(self, spec: Spec, budget: Budget):
        self.spec = spec
        self.budget = budget
        self.parent: list[int] = []
        self.types: list[TypeExpr] = []
        self.min_depth: list[int] = []
        self.hashcons: dict[tuple, int] = {}
        self.class_nodes: dict[int, set[tuple]] = {}
        self.node_parents: dict[int, set[tuple]] = {}
        self.pending: list[tuple] = []
        self.trace: list[str] = []
        self.star_class: int | None = None
        self.rounds_used = 0

    # -- union-find ---------------------------------------------------------

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def _fresh(self, ty: TypeExpr, depth: int) -> int:
        i = len(self.parent)
        self.parent.append(i)
        self.types.append(ty)
        self.min_depth.append(depth)
        self.class_nodes[i] = set()
        self.node_parents[i] = set()
        return i

    def canonical(self, key: tuple) -> tuple:
        kind = key[0]
        if kind in ("pair",):
            return (kind, self.find(key[1]), self.find(key[2]))
        if kind in ("proj",):
            return (kind, key[1], self.find(key[2]))
        if kind in ("app",):
            return (kind, key[1], self.find(key[2]))
        return key

    def add_node(self, key: tuple, ty: TypeExpr, depth: int) -> int:
        key = self.canonical(key)
        found = self.hashcons.get(key)
        if found is not None:
            c = self.find(found)
            if depth < self.min_depth[c]:
                self.min_depth[c] = depth
            return c
        c = self._fresh(ty, depth)
        self.hashcons[key] = c
        self.class_nodes[c].add(key)
        for child in _node_children(key):
            self.node_parents[self.find(child)].add(key)
        if ty == UNIT:
            star = self.add_star()
            self.union(c, star, "collapsing")
            return self.find(c)
        return c

    def add_star(self) -> int:
        if self.star_class is None:
            c = self._fresh(UNIT, 1)
            self.hashcons[("star",)] = c
            self.class_nodes[c].add(("star",))
            self.star_class = c
        return self.find(self.star_class)

    def add_term(self, t: ElTerm) -> int:
        if isinstance(t, EStar):
            return self.add_star()
        if isinstance(t, EVar):
            return self.add_node(("var", t.name), t.ty, 1)
        if isinstance(t, EPair):
            a = self.add_term(t.fst)
            b = self.add_term(t.snd)
            c = self.add_node(("pair", a, b), t.ty,
                              1 + max(self.min_depth[a], self.min_depth[b]))
            return c
        if isinstance(t, EProj):
            a = self.add_term(t.arg)
            return self.add_node(("proj", t.index, a), t.ty,
                                 1 + self.min_depth[a])
        if isinstance(t, EApp):
            a = self.add_term(t.arg)
            return self.add_node(("app", t.head, a), t.ty,
                                 1 + self.min_depth[a])
        raise IllTyped(f"not an element term: {t!r}")

    def union(self, a: int, b: int, why: str) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if len(self.class_nodes[ra]) < len(self.class_nodes[rb]):
            ra, rb = rb, ra
        self.parent[rb] = ra
        if len(self.trace) < 400:
            self.trace.append(why)
        self.min_depth[ra] = min(self.min_depth[ra], self.min_depth[rb])
        self.class_nodes[ra] |= self.class_nodes.pop(rb)
        moved = self.node_parents.pop(rb)
        self.node_parents[ra] |= moved
        self.pending.extend(moved)
        return True

    def rebuild(self) -> None:
        """Restore congruence: recanonicalize parents of merged classes."""
        while self.pending:
            key = self.pending.pop()
            old = self.hashcons.pop(key, None)
            if old is None:
                continue
            new_key = self.canonical(key)
            existing = self.hashcons.get(new_key)
            if existing is not None:
                self.union(old, existing, "congruence")
            else:
                self.hashcons[new_key] = self.find(old)
                self.class_nodes[self.find(old)].add(new_key)
                for child in _node_children(new_key):
                    self.node_parents[self.find(child)].add(new_key)

    # -- introspection ------------------------------------------------------

    @property
    def universe(self) -> set[tuple]:
        return set(self.hashcons)

    def classes(self) -> list[set[tuple]]:
        roots = sorted({self.find(i) for i in range(len(self.parent))})
        return [set(self.class_nodes.get(r, ())) for r in roots]

    # -- structural rules ---------------------------------------------------

    def eta_expand_pass(self) -> bool:
        """Give every product-typed class a pair node built from its own
        projections, so pair-shaped patterns match opaque product values."""
        changed = False
        for _ in range(8):
            step = False
            roots = sorted({self.find(i) for i in range(len(self.parent))})
            for c in roots:
                c = self.find(c)
                ty = self.types[c]
                if not isinstance(ty, Prod):
                    continue
                if any(n[0] == "pair" for n in self.class_nodes.get(c, ())):
                    continue
                d = self.min_depth[c]
                p1 = self.add_node(("proj", 1, c), ty.left, d + 1)
                p2 = self.add_node(("proj", 2, c), ty.right, d + 1)
                pair = self.add_node(
                    ("pair", p1, p2), ty,
                    1 + max(self.min_depth[p1], self.min_depth[p2]))
                step |= self.union(c, pair, "product expansion")
            self.rebuild()
            changed |= step
            if not step:
                break
        return changed

    def structural_pass(self) -> bool:
        changed = False
        for key, cls in list(self.hashcons.items()):
            kind = key[0]
            if kind == "proj":
                _k, index, arg = key
                for node in list(self.class_nodes.get(self.find(arg), ())):
                    if node[0] == "pair":
                        target = node[1] if index == 1 else node[2]
                        changed |= self.union(cls, target, "pairing")
            elif kind == "pair":
                _k, a, b = key
                for na in list(self.class_nodes.get(self.find(a), ())):
                    if na[0] != "proj" or na[1] != 1:
                        continue
                    for nb in list(self.class_nodes.get(self.find(b), ())):
                        if (nb[0] == "proj" and nb[1] == 2
                                and self.find(na[2]) == self.find(nb[2])):
                            changed |= self.union(cls, na[2],
                                                  "pairing uniqueness")
        self.rebuild()
        changed |= self.eta_expand_pass()
        return changed

    # -- e-matching ---------------------------------------------------------

    def ematch(self, p: Pattern, cls: int, subst: dict):
        cls = self.find(cls)
        if isinstance(p, PVar):
            bound = subst.get(p.name)
            if bound is not None:
                if self.find(bound) == cls:
                    yield subst
                return
            if self.types[cls] == p.ty:
                new = dict(subst)
                new[p.name] = cls
                yield new
            return
        for node in list(self.class_nodes.get(cls, ())):
            if isinstance(p, PStar):
                if node[0] == "star":
                    yield subst
                    return
            elif isinstance(p, PPair):
                if node[0] == "pair":
                    for s1 in self.ematch(p.fst, node[1], subst):
                        yield from self.ematch(p.snd, node[2], s1)
            elif isinstance(p, PProj):
                if node[0] == "proj" and node[1] == p.index:
                    yield from self.ematch(p.arg, node[2], subst)
            elif isinstance(p, PApp):
                if node[0] == "app" and node[1] == p.head:
                    yield from self.ematch(p.arg, node[2], subst)

    def instantiate(self, p: Pattern, subst: dict, cap: int) -> int | None:
        if isinstance(p, PVar):
            return self.find(subst[p.name])
        if isinstance(p, PStar):
            return self.add_star()
        if isinstance(p, PPair):
            a = self.instantiate(p.fst, subst, cap)
            b = self.instantiate(p.snd, subst, cap)
            if a is None or b is None:
                return None
            depth = 1 + max(self.min_depth[a], self.min_depth[b])
            if depth > cap:
                return None
            return self.add_node(("pair", a, b),
                                 Prod(self.types[a], self.types[b]), depth)
        if isinstance(p, (PProj, PApp)):
            a = self.instantiate(p.arg, subst, cap)
            if a is None:
                return None
            depth = 1 + self.min_depth[a]
            if depth > cap:
                return None
            if isinstance(p, PProj):
                return self.add_node(("proj", p.index, a), p.ty, depth)
            return self.add_node(("app", p.head, a), p.ty, depth)
        raise IllTyped(f"not a pattern: {p!r}")

    def saturate(self, rules: list[Rule], stop: "tuple[int, int] | None" = None) -> bool:
        """Run bounded saturation; True when the stop pair got merged."""
        seed_depth = max(self.min_depth, default=1)
        cap = seed_depth + self.budget.max_depth
        for _round in range(self.budget.max_iters):
            self.rounds_used += 1
            changed = self.structural_pass()
            matches = []
            for rule in rules:
                for cls in sorted({self.find(i)
                                   for i in range(len(self.parent))}):
                    if self.find(cls) != cls:
                        continue
                    for subst in self.ematch(rule.lhs, cls, {}):
                        matches.append((rule, cls, subst))
            for rule, cls, subst in matches:
                if len(self.parent) > self.budget.max_nodes:
                    break
                made = self.instantiate(rule.rhs, subst, cap)
                if made is not None:
                    changed |= self.union(cls, made, rule.name)
            self.rebuild()
            changed |= self.structural_pass()
            if stop is not None and self.find(stop[0]) == self.find(stop[1]):
                return True
            if not changed:
                break
        return (stop is not None
                and self.find(stop[0]) == self.find(stop[1]))


def _node_children(key: tuple):
    kind = key[0]
    if kind == "pair":
        return (key[1], key[2])
    if kind in ("proj", "app"):
        return (key[2],)
    return ()


# ---------------------------------------------------------------------------
# Entailment


def _countermodel(spec: Spec, lhs: TermExpr, rhs: TermExpr,
                  budget: Budget) -> FinModel | None:
    dom, _cod = infer(spec, lhs)
    names = list(spec.types)
    if not names:
        return None
    for sizes in itertools.product(range(budget.max_model_size + 1),
                                   repeat=len(names)):
        free = dict(zip(names, sizes))
        for m in enumerate_models(spec, free_sizes=free):
            for v in m.carrier(dom):
                if eval_term(m, lhs, v) != eval_term(m, rhs, v):
                    if not check_model(spec, m):
                        return m
    return None


def entails(spec: Spec, lhs: TermExpr, rhs: TermExpr,
            budget: Budget = DEFAULT_BUDGET) -> Verdict:
    """Decide ``lhs ≡ rhs`` under the specification's equations.

    Proven verdicts come from normalization, canonical evaluation or
    congruence saturation and are sound; refuted verdicts carry a verified
    finite countermodel; anything else is unknown.
    """
    ldom, lcod = infer(spec, lhs)
    rdom, rcod = infer(spec, rhs)
    if (ldom, lcod) != (rdom, rcod):
        raise NonParallelGoal(
            f"goal sides have types {ldom!r}->{lcod!r} vs {rdom!r}->{rcod!r}")
    nl = normalize(spec, lhs)
    nr = normalize(spec, rhs)
    if nl == nr:
        return Verdict.proven(("normalization",))
    point = e_var("@goal", ldom)
    el, er = element_of(spec, nl, point), element_of(spec, nr, point)
    if el == er:
        return Verdict.proven(("canonical evaluation",))
    state = CongruenceState(spec, budget)
    a = state.add_term(el)
    b = state.add_term(er)
    state.rebuild()
    if state.saturate(rules_of_spec(spec), stop=(a, b)):
        return Verdict.proven(tuple(state.trace) or ("saturation",))
    model = _countermodel(spec, nl, nr, budget)
    if model is not None:
        return Verdict.refuted(model)
    return Verdict.unknown("budget exhausted")


def make_oracle(budget: Budget = DEFAULT_BUDGET):
    def oracle(spec: Spec, lhs: TermExpr, rhs: TermExpr) -> Verdict:
        return entails(spec, lhs, rhs, budget)
    return oracle


# ---------------------------------------------------------------------------
# Bounded term enumeration and equivalence of presentations


def _type_universe(spec: Spec, extra: tuple[TypeExpr, ...]) -> list[TypeExpr]:
    from .expr import type_subexprs
    seen: dict[TypeExpr, None] = {UNIT: None}
    for decl in spec.terms:
        for t in (decl.dom, decl.cod):
            for s in type_subexprs(t):
                seen[s] = None
    for name in spec.types:
        seen[Base(name)] = None
    for t in extra:
        for s in type_subexprs(t):
            seen[s] = None
    return list(seen)


def enumerate_terms(spec: Spec, dom: TypeExpr, cod: TypeExpr,
                    max_height: int, cap_per_slot: int = 64,
                    max_total: int = 4000) -> list[TermExpr]:
    """Normalized terms dom -> cod of bounded height, smallest first.

    Bottom-up typed enumeration over the type subexpressions of the
    signature, growing only from the previous frontier, with hard caps so
    the search stays desk-scale.
    """
    universe = _type_universe(spec, (dom, cod))
    slots: dict[tuple[TypeExpr, TypeExpr], dict[TermExpr, None]] = {}
    total = 0

    def slot(d, c):
        return slots.setdefault((d, c), {})

    def put(d, c, e) -> bool:
        nonlocal total
        s = slot(d, c)
        if total >= max_total or len(s) >= cap_per_slot or e in s:
            return False
        s[e] = None
        total += 1
        return True

    frontier: list[tuple[TypeExpr, TypeExpr, TermExpr]] = []

    def seed(d, c, e):
        if put(d, c, e):
            frontier.append((d, c, e))

    for decl in spec.terms:
        seed(decl.dom, decl.cod, normalize(spec, Atom(decl.name)))
    for t in universe:
        seed(t, t, Id(t) if t != UNIT else Bang(UNIT))
        seed(t, UNIT, Bang(t))
        if isinstance(t, Prod):
            seed(t, t.left, Proj1(t.left, t.right))
            seed(t, t.right, Proj2(t.left, t.right))

    for _h in range(max_height - 1):
        new: list[tuple[TypeExpr, TypeExpr, TermExpr]] = []

        def grown(d, c, e):
            if put(d, c, e):
                new.append((d, c, e))

        for d1, c1, f in frontier:
            for (d2, c2), gs in list(slots.items()):
                if d2 == c1:  # g∘f with f new
                    for g in list(gs):
                        grown(d1, c2, normalize(spec, Comp(g, f)))
                if c2 == d1:  # f∘g with g old
                    for g in list(gs):
                        grown(d2, c1, normalize(spec, Comp(f, g)))
            for t in universe:
                if not isinstance(t, Prod):
                    continue
                if c1 == t.left:
                    for g in list(slot(d1, t.right)):
                        grown(d1, t, normalize(spec, Pair(f, g)))
                if c1 == t.right:
                    for g in list(slot(d1, t.left)):
                        grown(d1, t, normalize(spec, Pair(g, f)))
        frontier = new
        if not frontier:
            break

    return sorted(slot(dom, cod), key=lambda e: (len(repr(e)), repr(e)))


def _candidate_images(src: Spec, dst: Spec, rename, budget: Budget):
    """Per-generator candidate images in dst, name matches first."""
    out = []
    for decl in src.terms:
        want_dom = rename(decl.dom)
        want_cod = rename(decl.cod)
        candidates: list[TermExpr] = []
        try:
            ddom, dcod, _p = dst.term_signature(decl.name)
            if (ddom, dcod) == (want_dom, want_cod):
                candidates.append(Atom(decl.name))
        except Exception:
            pass
        if not candidates:
            candidates = enumerate_terms(dst, want_dom, want_cod,
                                         budget.max_depth)[:24]
        if not candidates:
            return None
        out.append((decl.name, candidates))
    return out


def equivalent_specs(s1: Spec, s2: Spec, budget: Budget = DEFAULT_BUDGET,
                     renaming: dict[str, str] | None = None) -> Verdict:
    """Proven when generator-preserving morphisms both ways exist whose
    round trips are provably the identity; otherwise unknown."""
    from .morphism import Morphism, check_morphism, compose_morphisms

    renaming = renaming or {name: name for name in s1.types}
    if sorted(renaming.get(t, t) for t in s1.types) != sorted(s2.types):
        raise RenamingMismatch("type names do not correspond")
    fwd_types = {name: Base(renaming.get(name, name)) for name in s1.types}
    bwd_types = {renaming.get(name, name): Base(name) for name in s1.types}

    def rename_fwd(t):
        from .morphism import apply_type
        return apply_type(fwd_types, t)

    def rename_bwd(t):
        from .morphism import apply_type
        return apply_type(bwd_types, t)

    oracle = make_oracle(budget)
    fwd_cands = _candidate_images(s1, s2, rename_fwd, budget)
    bwd_cands = _candidate_images(s2, s1, rename_bwd, budget)
    if fwd_cands is None or bwd_cands is None:
        return Verdict.unknown("no candidate images")

    attempts = 0

    def assignments(cands):
        names = [n for n, _ in cands]
        for combo in itertools.product(*(c for _, c in cands)):
            yield dict(zip(names, combo))

    for fwd_terms in assignments(fwd_cands):
        fwd = Morphism.make(s1, s2, fwd_types, fwd_terms)
        if not check_morphism(fwd, oracle).is_proven:
            continue
        for bwd_terms in assignments(bwd_cands):
            attempts += 1
            if attempts > 512:
                return Verdict.unknown("candidate budget exhausted")
            bwd = Morphism.make(s2, s1, bwd_types, bwd_terms)
            if not check_morphism(bwd, oracle).is_proven:
                continue
            round1 = compose_morphisms(bwd, fwd)
            round2 = compose_morphisms(fwd, bwd)
            ok = all(
                entails(s1, round1.terms[d.name], Atom(d.name), budget).is_proven
                for d in s1.terms) and all(
                entails(s2, round2.terms[d.name], Atom(d.name), budget).is_proven
                for d in s2.terms)
            if ok:
                return Verdict.proven(("mutually inverse generator maps",))
    return Verdict.unknown("no inverse pair found within budget")
