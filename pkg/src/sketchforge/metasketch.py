"""Limit sketches and finite set-valued realizations.

A limit sketch is a graph with potential identities, composites, limit
cones and tuples; a realization sends points to finite sets and arrows to
functions so that every potential feature becomes a real one (cones become
limiting cones, computed here as subsets of finite products).  Potential
monomorphisms are encoded as pullback cones.

The two built-in sketches are the sketch of graphs and the sketch of
equational specifications whose realizations are exactly the presentations
handled by this package; ``spec_to_realization`` and ``realization_to_spec``
convert back and forth.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .deduction import normalize
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
    term_subexprs,
    type_subexprs,
)
from .spec import Equation, Spec, TermDecl


class NonFiniteUniverse(SpecError):
    pass


class InvalidRealization(SpecError):
    pass


# ---------------------------------------------------------------------------
# Sketch data


@dataclass(frozen=True)
class SketchArrow:
    name: str
    src: str
    dst: str


@dataclass(frozen=True)
class Path:
    """A composable sequence of arrow names, applied left to right; the
    empty path is the identity at ``start``."""
    start: str
    arrows: tuple[str, ...] = ()


@dataclass(frozen=True)
class Cone:
    """A potential limit: a finite base diagram, a vertex, and a projection
    path for every base node."""
    name: str
    vertex: str
    nodes: tuple[tuple[str, str], ...]          # (node id, point)
    edges: tuple[tuple[str, str, str], ...]     # (from node, to node, arrow)
    legs: tuple[tuple[str, Path], ...]          # node id -> path from vertex


@dataclass(frozen=True)
class PotentialTuple:
    """A mediating arrow into a potential limit: the source point's own legs
    over the same base, and the arrow that must equal the induced map."""
    name: str
    cone: str
    source: str
    legs: tuple[tuple[str, Path], ...]
    arrow: str


@dataclass(frozen=True)
class LimitSketch:
    name: str
    points: tuple[str, ...]
    arrows: tuple[SketchArrow, ...]
    potential_ids: tuple[tuple[str, str], ...] = ()      # (point, arrow)
    potential_comps: tuple[tuple[str, str, str], ...] = ()  # (first, second, comp)
    cones: tuple[Cone, ...] = ()
    tuples: tuple[PotentialTuple, ...] = ()
    equalities: tuple[tuple[Path, Path], ...] = ()

    def arrow(self, name: str) -> SketchArrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise SpecError(f"unknown sketch arrow {name!r}")

    def cone_named(self, name: str) -> Cone:
        for c in self.cones:
            if c.name == name:
                return c
        raise SpecError(f"unknown cone {name!r}")

    def mono_arrows(self) -> tuple[str, ...]:
        """Arrows whose injectivity is demanded through a pullback cone."""
        return tuple(c.name[5:] for c in self.cones
                     if c.name.startswith("mono:"))


def mono_cone(sketch_arrow: SketchArrow) -> Cone:
    """Injectivity of an arrow as a potential limit: the pullback of the
    arrow along itself must be the diagonal."""
    m = sketch_arrow
    return Cone(
        name=f"mono:{m.name}",
        vertex=m.src,
        nodes=(("x", m.src), ("y", m.src), ("b", m.dst)),
        edges=(("x", "b", m.name), ("y", "b", m.name)),
        legs=(("x", Path(m.src)), ("y", Path(m.src)),
              ("b", Path(m.src, (m.name,)))))


# ---------------------------------------------------------------------------
# Realizations


@dataclass
class Realization:
    over: LimitSketch
    point_sets: dict[str, tuple]
    arrow_fns: dict[str, dict]

    def copy(self) -> "Realization":
        return Realization(self.over, dict(self.point_sets),
                           {k: dict(v) for k, v in self.arrow_fns.items()})


@dataclass(frozen=True)
class RViolation:
    kind: str
    subject: str
    detail: str = ""

    def __str__(self):
        text = f"[{self.kind}] {self.subject}"
        return f"{text}: {self.detail}" if self.detail else text


def eval_path(r: Realization, path: Path, value):
    for name in path.arrows:
        value = r.arrow_fns[name][value]
    return value


def cone_limit(r: Realization, cone: Cone) -> list[tuple]:
    """The limit of the cone's base, as tuples indexed by the base nodes."""
    node_ids = [n for n, _p in cone.nodes]
    points = dict(cone.nodes)
    sets = [r.point_sets[points[n]] for n in node_ids]
    index = {n: i for i, n in enumerate(node_ids)}
    out = []
    for combo in itertools.product(*sets):
        ok = True
        for nfrom, nto, arrow in cone.edges:
            if r.arrow_fns[arrow][combo[index[nfrom]]] != combo[index[nto]]:
                ok = False
                break
        if ok:
            out.append(combo)
    return out


def check_realization(r: Realization) -> list[RViolation]:
    """All the ways a realization fails to realize its sketch."""
    out: list[RViolation] = []
    sk = r.over
    for p in sk.points:
        if p not in r.point_sets:
            out.append(RViolation("MissingPointSet", p))
    for a in sk.arrows:
        fn = r.arrow_fns.get(a.name)
        if fn is None:
            out.append(RViolation("MissingArrow", a.name))
            continue
        src = set(r.point_sets.get(a.src, ()))
        dst = set(r.point_sets.get(a.dst, ()))
        if set(fn) != src:
            out.append(RViolation("ArrowDomain", a.name,
                                  "table does not cover the source set"))
        elif not set(fn.values()) <= dst:
            out.append(RViolation("ArrowRange", a.name,
                                  "table leaves the target set"))
    if out:
        return out
    for point, arrow in sk.potential_ids:
        fn = r.arrow_fns[arrow]
        if any(fn[v] != v for v in r.point_sets[point]):
            out.append(RViolation("IdentityNotIdentity", arrow))
    for first, second, comp in sk.potential_comps:
        f, g, h = (r.arrow_fns[x] for x in (first, second, comp))
        if any(g[f[v]] != h[v] for v in r.point_sets[sk.arrow(first).src]):
            out.append(RViolation("CompositeMismatch", comp))
    for lhs, rhs in sk.equalities:
        for v in r.point_sets[lhs.start]:
            if eval_path(r, lhs, v) != eval_path(r, rhs, v):
                out.append(RViolation(
                    "EqualityFailed", "∘".join(reversed(lhs.arrows)) or "id",
                    f"differs from {'∘'.join(reversed(rhs.arrows)) or 'id'} "
                    f"at {v!r}"))
                break
    from collections import Counter
    for cone in sk.cones:
        limit = cone_limit(r, cone)
        node_ids = [n for n, _p in cone.nodes]
        legs = dict(cone.legs)
        image = []
        for v in r.point_sets[cone.vertex]:
            image.append(tuple(eval_path(r, legs[n], v) for n in node_ids))
        if len(set(image)) != len(image) or Counter(image) != Counter(limit):
            out.append(RViolation("ConeNotLimiting", cone.name,
                                  f"vertex has {len(set(image))} distinct "
                                  f"images, limit has {len(limit)} elements"))
    for tup in sk.tuples:
        cone = sk.cone_named(tup.cone)
        node_ids = [n for n, _p in cone.nodes]
        cone_legs = dict(cone.legs)
        tup_legs = dict(tup.legs)
        fn = r.arrow_fns[tup.arrow]
        for v in r.point_sets[tup.source]:
            want = tuple(eval_path(r, tup_legs[n], v) for n in node_ids)
            got = tuple(eval_path(r, cone_legs[n], fn[v]) for n in node_ids)
            if want != got:
                out.append(RViolation("TupleNotMediating", tup.arrow,
                                      f"at {v!r}"))
                break
    return out


# ---------------------------------------------------------------------------
# Built-in sketches


def graph_sketch() -> LimitSketch:
    """Two points and two arrows: types, terms, domain and codomain."""
    return LimitSketch(
        name="graphs",
        points=("Type", "Term"),
        arrows=(SketchArrow("dom", "Term", "Type"),
                SketchArrow("codom", "Term", "Type")))


def _spec_sketch(with_equations: bool) -> LimitSketch:
    points = ["Type", "Term", "Cons", "Comp", "Selid", "Type^2", "2-Cone",
              "2-Prod", "Pair", "Unit", "Final", "Coll"]
    arrows = [
        SketchArrow("dom", "Term", "Type"),
        SketchArrow("codom", "Term", "Type"),
        SketchArrow("fst", "Cons", "Term"),
        SketchArrow("snd", "Cons", "Term"),
        SketchArrow("i", "Comp", "Cons"),
        SketchArrow("comp", "Comp", "Term"),
        SketchArrow("i0", "Selid", "Type"),
        SketchArrow("selid", "Selid", "Term"),
        SketchArrow("b1", "Type^2", "Type"),
        SketchArrow("b2", "Type^2", "Type"),
        SketchArrow("c1", "2-Cone", "Term"),
        SketchArrow("c2", "2-Cone", "Term"),
        SketchArrow("2base", "2-Cone", "Type^2"),
        SketchArrow("j", "2-Prod", "Type^2"),
        SketchArrow("2prod", "2-Prod", "2-Cone"),
        SketchArrow("2dom", "Pair", "2-Cone"),
        SketchArrow("2codom", "Pair", "2-Prod"),
        SketchArrow("pair", "Pair", "Term"),
        SketchArrow("0base", "Type", "Unit"),
        SketchArrow("j0", "Final", "Unit"),
        SketchArrow("final", "Final", "Type"),
        SketchArrow("0dom", "Coll", "Final"),
        SketchArrow("0codom", "Coll", "Type"),
        SketchArrow("coll", "Coll", "Term"),
    ]
    cones = [
        Cone("Cons", "Cons",
             nodes=(("t1", "Term"), ("t2", "Term"), ("m", "Type")),
             edges=(("t1", "m", "codom"), ("t2", "m", "dom")),
             legs=(("t1", Path("Cons", ("fst",))),
                   ("t2", Path("Cons", ("snd",))),
                   ("m", Path("Cons", ("fst", "codom"))))),
        Cone("Type^2", "Type^2",
             nodes=(("x", "Type"), ("y", "Type")),
             edges=(),
             legs=(("x", Path("Type^2", ("b1",))),
                   ("y", Path("Type^2", ("b2",))))),
        Cone("2-Cone", "2-Cone",
             nodes=(("t1", "Term"), ("t2", "Term"), ("v", "Type")),
             edges=(("t1", "v", "dom"), ("t2", "v", "dom")),
             legs=(("t1", Path("2-Cone", ("c1",))),
                   ("t2", Path("2-Cone", ("c2",))),
                   ("v", Path("2-Cone", ("c1", "dom"))))),
        Cone("Unit", "Unit", nodes=(), edges=(), legs=()),
    ]
    equalities = [
        (Path("Comp", ("comp", "dom")), Path("Comp", ("i", "fst", "dom"))),
        (Path("Comp", ("comp", "codom")), Path("Comp", ("i", "snd", "codom"))),
        (Path("Selid", ("selid", "dom")), Path("Selid", ("i0",))),
        (Path("Selid", ("selid", "codom")), Path("Selid", ("i0",))),
        (Path("2-Cone", ("2base", "b1")), Path("2-Cone", ("c1", "codom"))),
        (Path("2-Cone", ("2base", "b2")), Path("2-Cone", ("c2", "codom"))),
        (Path("2-Prod", ("2prod", "2base")), Path("2-Prod", ("j",))),
        (Path("Pair", ("2codom", "j")), Path("Pair", ("2dom", "2base"))),
        (Path("Pair", ("pair", "dom")), Path("Pair", ("2dom", "c1", "dom"))),
        (Path("Pair", ("pair", "codom")),
         Path("Pair", ("2codom", "2prod", "c1", "dom"))),
        (Path("Final", ("final", "0base")), Path("Final", ("j0",))),
        (Path("Coll", ("coll", "dom")), Path("Coll", ("0codom",))),
        (Path("Coll", ("coll", "codom")), Path("Coll", ("0dom", "final"))),
    ]
    monos = ["i", "i0", "j", "2dom", "j0", "0codom"]
    name = "equational specifications"
    if with_equations:
        points[2:2] = ["Para", "Equa"]
        arrows.extend([
            SketchArrow("left", "Para", "Term"),
            SketchArrow("right", "Para", "Term"),
            SketchArrow("equa", "Equa", "Para"),
        ])
        cones.append(
            Cone("Para", "Para",
                 nodes=(("t1", "Term"), ("t2", "Term"),
                        ("d", "Type"), ("c", "Type")),
                 edges=(("t1", "d", "dom"), ("t2", "d", "dom"),
                        ("t1", "c", "codom"), ("t2", "c", "codom")),
                 legs=(("t1", Path("Para", ("left",))),
                       ("t2", Path("Para", ("right",))),
                       ("d", Path("Para", ("left", "dom"))),
                       ("c", Path("Para", ("left", "codom"))))))
        monos.append("equa")
    else:
        name = "equational specifications without equations"
    sk = LimitSketch(name, tuple(points), tuple(arrows), (), (),
                     tuple(cones), (), tuple(equalities))
    mono_cones = tuple(mono_cone(sk.arrow(m)) for m in monos)
    return LimitSketch(sk.name, sk.points, sk.arrows, (), (),
                       sk.cones + mono_cones, (), sk.equalities)


def spec_sketch() -> LimitSketch:
    """The sketch of equational specifications, equations included."""
    return _spec_sketch(True)


def spec_sketch_without_equations() -> LimitSketch:
    """The variant without the parallel-pair and equation points."""
    return _spec_sketch(False)


@dataclass(frozen=True)
class SketchMorphism:
    source: LimitSketch
    target: LimitSketch
    point_map: tuple[tuple[str, str], ...]
    arrow_map: tuple[tuple[str, str], ...]

    @property
    def points(self) -> dict[str, str]:
        return dict(self.point_map)

    @property
    def arrows(self) -> dict[str, str]:
        return dict(self.arrow_map)

    def on_path(self, p: Path) -> Path:
        return Path(self.points[p.start],
                    tuple(self.arrows[a] for a in p.arrows))


def check_sketch_morphism(e: SketchMorphism) -> list[RViolation]:
    out = []
    pts, arr = e.points, e.arrows
    for p in e.source.points:
        if pts.get(p) not in e.target.points:
            out.append(RViolation("PointNotMapped", p))
    for a in e.source.arrows:
        image = arr.get(a.name)
        if image is None:
            out.append(RViolation("ArrowNotMapped", a.name))
            continue
        ia = e.target.arrow(image)
        if (ia.src, ia.dst) != (pts.get(a.src), pts.get(a.dst)):
            out.append(RViolation("ArrowEndpointsBroken", a.name))
    if out:
        return out

    def cone_shape(sk, cone, pmap=None, amap=None):
        pmap = pmap or {}
        amap = amap or {}
        nodes = tuple(sorted((n, pmap.get(p, p)) for n, p in cone.nodes))
        edges = tuple(sorted((f, t, amap.get(a, a)) for f, t, a in cone.edges))
        legs = tuple(sorted(
            (n, pmap.get(p.start, p.start),
             tuple(amap.get(a, a) for a in p.arrows))
            for n, p in cone.legs))
        return (pmap.get(cone.vertex, cone.vertex), nodes, edges, legs)

    target_shapes = {cone_shape(e.target, c) for c in e.target.cones}
    for cone in e.source.cones:
        if cone_shape(e.source, cone, pts, arr) not in target_shapes:
            out.append(RViolation("ConeNotPreserved", cone.name))
    for point, arrow in e.source.potential_ids:
        if (pts[point], arr[arrow]) not in e.target.potential_ids:
            out.append(RViolation("IdentityNotPreserved", arrow))
    for f, g, h in e.source.potential_comps:
        if (arr[f], arr[g], arr[h]) not in e.target.potential_comps:
            out.append(RViolation("CompositeNotPreserved", h))
    return out


def compose_sketch_morphisms(e2: SketchMorphism,
                             e1: SketchMorphism) -> SketchMorphism:
    if e1.target is not e2.source and e1.target != e2.source:
        raise SpecError("sketch morphisms are not composable")
    p2, a2 = e2.points, e2.arrows
    return SketchMorphism(
        e1.source, e2.target,
        tuple((k, p2[v]) for k, v in e1.point_map),
        tuple((k, a2[v]) for k, v in e1.arrow_map))


def identity_sketch_morphism(sk: LimitSketch) -> SketchMorphism:
    return SketchMorphism(sk, sk,
                          tuple((p, p) for p in sk.points),
                          tuple((a.name, a.name) for a in sk.arrows))


def builtin_sketches() -> tuple[LimitSketch, LimitSketch, SketchMorphism]:
    """The graph sketch, the specification sketch, and the inclusion."""
    gr = graph_sketch()
    eq = spec_sketch()
    incl = SketchMorphism(gr, eq,
                          (("Type", "Type"), ("Term", "Term")),
                          (("dom", "dom"), ("codom", "codom")))
    return gr, eq, incl


def precompose(e: SketchMorphism, r: Realization) -> Realization:
    """Restrict a realization of the target along a sketch morphism."""
    if r.over != e.target:
        raise SpecError("realization is not over the morphism's target")
    points = {p: tuple(r.point_sets[e.points[p]]) for p in e.source.points}
    arrows = {a.name: dict(r.arrow_fns[e.arrows[a.name]])
              for a in e.source.arrows}
    return Realization(e.source, points, arrows)


# ---------------------------------------------------------------------------
# Specifications as realizations of the specification sketch


STAR = "*"


def spec_to_realization(s: Spec, max_terms: int = 10000) -> Realization:
    """Encode a presentation as a set-valued realization: the chosen sets
    hold the type expressions, normalized terms and syntactic features that
    occur, and the limit vertices hold the computed tuples."""
    sk = spec_sketch()

    types: dict[TypeExpr, None] = {}
    terms: dict[TermExpr, None] = {}

    def add_type(t: TypeExpr):
        for sub in type_subexprs(t):
            types.setdefault(sub, None)

    def add_term(e: TermExpr):
        for sub in term_subexprs(e):
            if sub not in terms:
                terms[sub] = None
                d, c = infer(s, sub)
                add_type(d)
                add_type(c)

    for decl in s.terms:
        add_type(decl.dom)
        add_type(decl.cod)
        add_term(Atom(decl.name))
    eq_pairs: dict[tuple[TermExpr, TermExpr], None] = {}
    for eq in s.equations:
        lhs = normalize(s, eq.lhs)
        rhs = normalize(s, eq.rhs)
        eq_pairs.setdefault((lhs, rhs), None)
        add_term(lhs)
        add_term(rhs)
    # Projections of every occurring product, so product cones have legs.
    for t in list(types):
        if isinstance(t, Prod):
            add_term(Proj1(t.left, t.right))
            add_term(Proj2(t.left, t.right))
    if len(terms) > max_terms:
        raise NonFiniteUniverse(
            f"term universe exceeds the bound ({len(terms)} > {max_terms})")

    type_list = tuple(types)
    term_list = tuple(terms)
    sig = {e: infer(s, e) for e in term_list}

    cons = tuple((f, g) for f in term_list for g in term_list
                 if sig[f][1] == sig[g][0])
    para = tuple((f, g) for f in term_list for g in term_list
                 if sig[f] == sig[g])
    type2 = tuple((x, y) for x in type_list for y in type_list)
    cone2 = tuple((f, g) for f in term_list for g in term_list
                  if sig[f][0] == sig[g][0])

    comp_elems = tuple((e.before, e.after) for e in term_list
                       if isinstance(e, Comp))
    selid_elems = tuple(e.at for e in term_list if isinstance(e, Id))
    prod_elems = tuple(t for t in type_list if isinstance(t, Prod))
    pair_elems = tuple((e.fst, e.snd) for e in term_list
                       if isinstance(e, Pair))
    final_elems = (UNIT,) if UNIT in types else ()
    coll_elems = tuple(e.source for e in term_list if isinstance(e, Bang))
    equa_elems = tuple(eq_pairs)

    point_sets = {
        "Type": type_list,
        "Term": term_list,
        "Cons": cons,
        "Comp": comp_elems,
        "Selid": selid_elems,
        "Para": para,
        "Equa": equa_elems,
        "Type^2": type2,
        "2-Cone": cone2,
        "2-Prod": prod_elems,
        "Pair": pair_elems,
        "Unit": (STAR,),
        "Final": final_elems,
        "Coll": coll_elems,
    }
    arrow_fns = {
        "dom": {e: sig[e][0] for e in term_list},
        "codom": {e: sig[e][1] for e in term_list},
        "fst": {c: c[0] for c in cons},
        "snd": {c: c[1] for c in cons},
        "i": {c: c for c in comp_elems},
        "comp": {c: Comp(c[1], c[0]) for c in comp_elems},
        "i0": {t: t for t in selid_elems},
        "selid": {t: Id(t) for t in selid_elems},
        "left": {p: p[0] for p in para},
        "right": {p: p[1] for p in para},
        "equa": {q: q for q in equa_elems},
        "b1": {p: p[0] for p in type2},
        "b2": {p: p[1] for p in type2},
        "c1": {c: c[0] for c in cone2},
        "c2": {c: c[1] for c in cone2},
        "2base": {c: (sig[c[0]][1], sig[c[1]][1]) for c in cone2},
        "j": {t: (t.left, t.right) for t in prod_elems},
        "2prod": {t: (Proj1(t.left, t.right), Proj2(t.left, t.right))
                  for t in prod_elems},
        "2dom": {p: p for p in pair_elems},
        "2codom": {p: Prod(sig[p[0]][1], sig[p[1]][1]) for p in pair_elems},
        "pair": {p: Pair(p[0], p[1]) for p in pair_elems},
        "0base": {t: STAR for t in type_list},
        "j0": {t: STAR for t in final_elems},
        "final": {t: t for t in final_elems},
        "0dom": {t: UNIT for t in coll_elems},
        "0codom": {t: t for t in coll_elems},
        "coll": {t: Bang(t) for t in coll_elems},
    }
    return Realization(sk, point_sets, arrow_fns)


def realization_to_spec(r: Realization) -> Spec:
    """Read a presentation back off a realization of the specification
    sketch.  Elements in the image of the feature arrows reconstruct as the
    corresponding syntax; the remaining elements become declared types and
    terms, named after themselves when they are strings or syntax objects."""
    fns = r.arrow_fns
    sets = r.point_sets

    final_types = {fns["final"][f] for f in sets["Final"]}
    prod_vertex = {}
    for p in sets["2-Prod"]:
        cone = fns["2prod"][p]
        vertex = fns["dom"][fns["c1"][cone]]
        if vertex in prod_vertex or vertex in final_types:
            raise InvalidRealization(
                f"type element {vertex!r} has two structural readings")
        prod_vertex[vertex] = p

    type_memo: dict = {}

    def type_of(elem, seen=()):
        if elem in type_memo:
            return type_memo[elem]
        if elem in seen:
            raise InvalidRealization("cyclic product structure")
        if elem in final_types:
            out = UNIT
        elif elem in prod_vertex:
            l, rr = fns["j"][prod_vertex[elem]]
            out = Prod(type_of(l, seen + (elem,)),
                       type_of(rr, seen + (elem,)))
        else:
            out = Base(_symbol(elem, "T", sets["Type"].index(elem)))
        type_memo[elem] = out
        return out

    term_defs: dict = {}

    def note(elem, kind, data):
        if elem in term_defs:
            raise InvalidRealization(
                f"term element {elem!r} has two structural readings")
        term_defs[elem] = (kind, data)

    for c in sets["Comp"]:
        pair_elem = fns["i"][c]
        note(fns["comp"][c],
             "comp", (fns["fst"][pair_elem], fns["snd"][pair_elem]))
    for t in sets["Selid"]:
        note(fns["selid"][t], "id", t)
    for p in sets["Pair"]:
        cone = fns["2dom"][p]
        note(fns["pair"][p], "pair", (fns["c1"][cone], fns["c2"][cone]))
    for k in sets["Coll"]:
        note(fns["coll"][k], "bang", fns["0codom"][k])
    for p in sets["2-Prod"]:
        cone = fns["2prod"][p]
        l, rr = fns["j"][p]
        for leg, ctor in ((fns["c1"][cone], Proj1), (fns["c2"][cone], Proj2)):
            if leg not in term_defs:
                term_defs[leg] = ("proj", (ctor, l, rr))

    term_memo: dict = {}

    def term_of(elem, seen=()):
        if elem in term_memo:
            return term_memo[elem]
        if elem in seen:
            raise InvalidRealization("cyclic term structure")
        definition = term_defs.get(elem)
        if definition is None:
            out = Atom(_symbol(elem, "f", sets["Term"].index(elem)))
        else:
            kind, data = definition
            deeper = seen + (elem,)
            if kind == "comp":
                out = Comp(term_of(data[1], deeper), term_of(data[0], deeper))
            elif kind == "id":
                out = Id(type_of(data))
            elif kind == "pair":
                out = Pair(term_of(data[0], deeper), term_of(data[1], deeper))
            elif kind == "bang":
                out = Bang(type_of(data))
            else:
                ctor, l, rr = data
                out = ctor(type_of(l), type_of(rr))
        term_memo[elem] = out
        return out

    types = tuple(type_of(t).name for t in sets["Type"]
                  if isinstance(type_of(t), Base))
    decls = []
    for elem in sets["Term"]:
        expr = term_of(elem)
        if isinstance(expr, Atom):
            decls.append(TermDecl(expr.name, type_of(fns["dom"][elem]),
                                  type_of(fns["codom"][elem])))
    equations = []
    for i, q in enumerate(sets["Equa"]):
        pair_elem = fns["equa"][q]
        equations.append(Equation(
            f"eq{i}", term_of(fns["left"][pair_elem]),
            term_of(fns["right"][pair_elem])))
    return Spec(types, tuple(decls), tuple(equations))


def _symbol(elem, prefix: str, index: int) -> str:
    if isinstance(elem, Base):
        return elem.name
    if isinstance(elem, Atom):
        return elem.name
    if isinstance(elem, str) and elem.isidentifier():
        return elem
    return f"{prefix}{index}"


# ---------------------------------------------------------------------------
# JSON interchange for hand-written realizations


def _freeze(v):
    if isinstance(v, list):
        return tuple(_freeze(x) for x in v)
    return v


def _thaw(v):
    if isinstance(v, tuple):
        return [_thaw(x) for x in v]
    return v


def realization_from_dict(d: dict, over: LimitSketch | None = None) -> Realization:
    sk = over or spec_sketch()
    points = {p: tuple(_freeze(v) for v in vs)
              for p, vs in d.get("points", {}).items()}
    arrows = {a: {_freeze(x): _freeze(y) for x, y in rows}
              for a, rows in d.get("arrows", {}).items()}
    return Realization(sk, points, arrows)


def realization_to_dict(r: Realization) -> dict:
    return {
        "points": {p: [_thaw(v) for v in vs]
                   for p, vs in r.point_sets.items()},
        "arrows": {a: [[_thaw(x), _thaw(y)]
                       for x, y in sorted(fn.items(), key=repr)]
                   for a, fn in r.arrow_fns.items()},
    }
