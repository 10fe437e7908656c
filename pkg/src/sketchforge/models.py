"""Finite set-valued models: evaluation, checking, exhaustive enumeration,
restriction along morphisms, parameter passing and terminal models.

Values are plain Python data: the unit value is the empty tuple, a value of
a product type is a pair ``(left, right)``, and base-type values are opaque
tokens (enumeration uses ``0..n-1``).  Tables are dictionaries from domain
values to codomain values, so a constant ``c : 1 -> A`` is ``{(): value}``.
"""

from __future__ import annotations

import itertools
import json
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
    atoms_of,
)
from .morphism import Morphism
from .spec import ParamConstSpec, Spec

STAR = ()


class ValueOutOfCarrier(SpecError):
    pass


class NotOverBaseModel(SpecError):
    pass


@dataclass
class FinModel:
    carriers: dict[str, tuple]
    tables: dict[str, dict]

    def carrier(self, t: TypeExpr) -> tuple:
        if isinstance(t, Base):
            try:
                return tuple(self.carriers[t.name])
            except KeyError:
                raise ValueOutOfCarrier(f"no carrier for type {t.name!r}") from None
        if isinstance(t, Prod):
            left = self.carrier(t.left)
            right = self.carrier(t.right)
            return tuple((a, b) for a in left for b in right)
        if t == UNIT:
            return (STAR,)
        raise ValueOutOfCarrier(f"not a type expression: {t!r}")

    def copy(self) -> "FinModel":
        return FinModel(dict(self.carriers),
                        {k: dict(v) for k, v in self.tables.items()})


def eval_term(m: FinModel, e: TermExpr, value):
    """Evaluate a term expression on a value of its domain carrier."""
    if isinstance(e, Atom):
        try:
            table = m.tables[e.name]
        except KeyError:
            raise ValueOutOfCarrier(f"no table for term {e.name!r}") from None
        try:
            return table[value]
        except KeyError:
            raise ValueOutOfCarrier(
                f"value {value!r} outside the table of {e.name!r}") from None
    if isinstance(e, Id):
        return value
    if isinstance(e, Comp):
        return eval_term(m, e.after, eval_term(m, e.before, value))
    if isinstance(e, Pair):
        return (eval_term(m, e.fst, value), eval_term(m, e.snd, value))
    if isinstance(e, Proj1):
        return value[0]
    if isinstance(e, Proj2):
        return value[1]
    if isinstance(e, Bang):
        return STAR
    raise ValueOutOfCarrier(f"not a term expression: {e!r}")


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    witness: object = None
    lhs_value: object = None
    rhs_value: object = None

    def __str__(self):
        if self.kind == "EquationFailed":
            return (f"equation {self.subject} fails at {self.witness!r}: "
                    f"{self.lhs_value!r} != {self.rhs_value!r}")
        return f"{self.kind}: {self.subject} ({self.witness!r})"


def check_model(spec: Spec, m: FinModel) -> list[Violation]:
    out: list[Violation] = []
    for name in spec.types:
        if name not in m.carriers:
            out.append(Violation("MissingCarrier", name))
    if out:
        return out
    for decl in spec.terms:
        table = m.tables.get(decl.name)
        if table is None:
            out.append(Violation("MissingTable", decl.name))
            continue
        dom = set(m.carrier(decl.dom))
        cod = set(m.carrier(decl.cod))
        if set(table) != dom:
            out.append(Violation("TableDomain", decl.name,
                                 witness=sorted(map(repr, set(table) ^ dom))))
        elif not set(table.values()) <= cod:
            out.append(Violation("TableRange", decl.name))
    if out:
        return out
    for eq in spec.equations:
        from .expr import infer
        dom, _cod = infer(spec, eq.lhs)
        for v in m.carrier(dom):
            lv = eval_term(m, eq.lhs, v)
            rv = eval_term(m, eq.rhs, v)
            if lv != rv:
                out.append(Violation("EquationFailed", eq.name, v, lv, rv))
                break
    return out


def enumerate_models(spec: Spec, fixed_carriers: dict[str, tuple] | None = None,
                     free_sizes: dict[str, int] | None = None,
                     fixed_tables: dict[str, dict] | None = None):
    """All models with the given carriers, in deterministic order.

    Carriers are taken from ``fixed_carriers`` or get ``0..n-1`` from
    ``free_sizes``.  Tables listed in ``fixed_tables`` are held constant;
    the remaining ones range over all functions, filtered by the equations.
    Equations are applied as soon as all their atoms have tables, which
    prunes the search tree.
    """
    fixed_carriers = fixed_carriers or {}
    free_sizes = free_sizes or {}
    fixed_tables = fixed_tables or {}
    carriers: dict[str, tuple] = {}
    for name in spec.types:
        if name in fixed_carriers:
            carriers[name] = tuple(fixed_carriers[name])
        elif name in free_sizes:
            carriers[name] = tuple(range(free_sizes[name]))
        else:
            raise ValueOutOfCarrier(f"no carrier or size given for {name!r}")

    free_decls = [d for d in spec.terms if d.name not in fixed_tables]
    # Equations become checkable once the last of their atoms is assigned.
    stage_of: dict[str, int] = {}
    fixed_names = set(fixed_tables)
    checks_at: list[list] = [[] for _ in range(len(free_decls) + 1)]
    for i, d in enumerate(free_decls):
        stage_of[d.name] = i + 1
    for eq in spec.equations:
        needed = atoms_of(eq.lhs) | atoms_of(eq.rhs)
        stage = 0
        ok = True
        for name in needed:
            if name in fixed_names:
                continue
            if name not in stage_of:
                ok = False
                break
            stage = max(stage, stage_of[name])
        if ok:
            checks_at[stage].append(eq)

    base = FinModel(carriers, {k: dict(v) for k, v in fixed_tables.items()})

    def holds(m: FinModel, eq) -> bool:
        from .expr import infer
        dom, _ = infer(spec, eq.lhs)
        return all(eval_term(m, eq.lhs, v) == eval_term(m, eq.rhs, v)
                   for v in m.carrier(dom))

    def go(i: int, m: FinModel):
        if not all(holds(m, eq) for eq in checks_at[i]):
            return
        if i == len(free_decls):
            yield m.copy()
            return
        decl = free_decls[i]
        dom = m.carrier(decl.dom)
        cod = m.carrier(decl.cod)
        for outputs in itertools.product(cod, repeat=len(dom)):
            m.tables[decl.name] = dict(zip(dom, outputs))
            yield from go(i + 1, m)
        m.tables.pop(decl.name, None)

    yield from go(0, base)


def restrict(m: FinModel, phi: Morphism) -> FinModel:
    """Pull a model of the target back along a morphism: carriers and tables
    are read off from the images of the generators."""
    carriers = {name: m.carrier(phi.on_type(Base(name)))
                for name in phi.src.types}
    tables = {}
    for decl in phi.src.terms:
        image = phi.on_term(Atom(decl.name))
        dom = m.carrier(phi.on_type(decl.dom))
        tables[decl.name] = {v: eval_term(m, image, v) for v in dom}
    return FinModel(carriers, tables)


@dataclass
class ModelMorphism:
    source: FinModel
    target: FinModel
    components: dict[str, dict]

    def component_value(self, t: TypeExpr, v):
        if isinstance(t, Base):
            return self.components[t.name][v]
        if isinstance(t, Prod):
            return (self.component_value(t.left, v[0]),
                    self.component_value(t.right, v[1]))
        if t == UNIT:
            return v
        raise ValueOutOfCarrier(f"not a type expression: {t!r}")


def check_model_morphism(spec: Spec, mm: ModelMorphism) -> list[Violation]:
    out: list[Violation] = []
    for name in spec.types:
        comp = mm.components.get(name)
        if comp is None:
            out.append(Violation("MissingComponent", name))
            continue
        src = set(mm.source.carriers[name])
        tgt = set(mm.target.carriers[name])
        if set(comp) != src or not set(comp.values()) <= tgt:
            out.append(Violation("ComponentNotFunction", name))
    if out:
        return out
    for decl in spec.terms:
        for v in mm.source.carrier(decl.dom):
            lhs = mm.component_value(decl.cod,
                                     eval_term(mm.source, Atom(decl.name), v))
            rhs = eval_term(mm.target, Atom(decl.name),
                            mm.component_value(decl.dom, v))
            if lhs != rhs:
                out.append(Violation("NaturalityFailed", decl.name, v, lhs, rhs))
                break
    return out


# ---------------------------------------------------------------------------
# Parameter passing on models


def extend_with_argument(p: ParamConstSpec, m_a: FinModel, alpha) -> FinModel:
    """Interpret the parameter constant as the given argument."""
    if alpha not in m_a.carriers[p.base.param_type]:
        raise ValueOutOfCarrier(
            f"{alpha!r} is not in the carrier of {p.base.param_type!r}")
    out = m_a.copy()
    out.tables[p.param_const] = {STAR: alpha}
    return out


def models_over(p_spec: Spec, base_model: FinModel, base_spec: Spec):
    """All models of ``p_spec`` whose restriction to ``base_spec`` (a wide
    subpresentation, same type names) is ``base_model``."""
    fixed_tables = {d.name: base_model.tables[d.name] for d in base_spec.terms}
    return enumerate_models(p_spec, fixed_carriers=base_model.carriers,
                            fixed_tables=fixed_tables)


def model_key(spec: Spec, m: FinModel, free_terms: tuple[str, ...]):
    """Canonical hashable encoding of the free tables of a model."""
    return tuple(
        (name, tuple(sorted(m.tables[name].items(), key=repr)))
        for name in free_terms)


def _expansion_of(d: Spec, param_name: str):
    from .parameterize import expand
    return expand(d, param_name=param_name)


def terminal_model(d: Spec, m0: FinModel, param_name: str = "A") -> FinModel:
    """The terminal model of the expansion of ``d`` over a model of its pure
    part: the parameter carrier is the set of all models of ``d`` over
    ``m0`` and each parameterized table is pointwise application."""
    x = _expansion_of(d, param_name)
    pure = d.pure_subspec()
    general = tuple(decl.name for decl in d.terms if not decl.pure)
    fibre = list(models_over(d, m0, pure))
    keys = [model_key(d, m, general) for m in fibre]
    carrier_a = tuple(sorted(keys, key=repr))
    by_key = dict(zip(keys, fibre))

    carriers = dict(m0.carriers)
    carriers[x.param] = carrier_a
    tables = {d2.name: dict(m0.tables[d2.name]) for d2 in pure.terms}
    for decl in d.terms:
        if decl.pure:
            continue
        prime = x.prime_map[decl.name]
        table = {}
        for key in carrier_a:
            mu = by_key[key]
            for v in mu.carrier(decl.dom):
                table[(key, v)] = mu.tables[decl.name][v]
        tables[prime] = table
    return FinModel(carriers, tables)


def restricts_to(m: FinModel, base_spec: Spec, base_model: FinModel) -> bool:
    if any(tuple(m.carriers[t]) != tuple(base_model.carriers[t])
           for t in base_spec.types):
        return False
    return all(m.tables[d.name] == base_model.tables[d.name]
               for d in base_spec.terms)


def induced_argument_model(d: Spec, n_a: FinModel, nu,
                           param_name: str = "A") -> FinModel:
    """The model of ``d`` read off from a model of the expansion at one
    parameter value: each parameterized table is partially applied."""
    x = _expansion_of(d, param_name)
    carriers = {name: tuple(n_a.carriers[name]) for name in d.types}
    out = FinModel(carriers, {})
    for decl in d.terms:
        if decl.pure:
            out.tables[decl.name] = dict(n_a.tables[decl.name])
        else:
            prime = x.prime_map[decl.name]
            dom = out.carrier(decl.dom)
            out.tables[decl.name] = {
                v: n_a.tables[prime][(nu, v)] for v in dom}
    return out


def pass_parameter(d: Spec, m_a: FinModel, alpha,
                   param_name: str = "A") -> tuple[FinModel, ModelMorphism]:
    """From a model of the expansion and an argument, produce the induced
    model of ``d`` plus the comparison morphism into ``m_a`` whose component
    at the parameter type is the constant function onto the argument."""
    if alpha not in m_a.carriers[param_name]:
        raise ValueOutOfCarrier(f"{alpha!r} is not a parameter value")
    model = induced_argument_model(d, m_a, alpha, param_name)
    from .parameterize import collapse_param, expand
    x = expand(d, param_name=param_name)
    restricted = restrict(model, collapse_param(x))
    components = {name: {v: v for v in restricted.carriers[name]}
                  for name in d.types}
    components[param_name] = {STAR: alpha}
    return model, ModelMorphism(restricted, m_a, components)


def unique_to_terminal(d: Spec, m0: FinModel, n_a: FinModel,
                       param_name: str = "A") -> ModelMorphism:
    """The unique morphism over ``m0`` from a model of the expansion into the
    terminal one: a parameter value goes to the model it induces."""
    pure = d.pure_subspec()
    if not restricts_to(n_a, pure, m0):
        raise NotOverBaseModel("model does not restrict to the base model")
    x = _expansion_of(d, param_name)
    term = terminal_model(d, m0, param_name)
    general = tuple(decl.name for decl in d.terms if not decl.pure)
    component_a = {}
    for nu in n_a.carriers[param_name]:
        mu = induced_argument_model(d, n_a, nu, param_name)
        key = model_key(d, mu, general)
        if key not in term.carriers[param_name]:
            raise NotOverBaseModel(
                "induced model does not satisfy the specification")
        component_a[nu] = key
    components = {name: {v: v for v in m0.carriers[name]} for name in d.types}
    components[param_name] = component_a
    return ModelMorphism(n_a, term, components)


def terminal_component_choices(d: Spec, m0: FinModel, n_a: FinModel,
                               param_name: str = "A") -> dict:
    """For each parameter value of ``n_a``, the set of terminal parameter
    values that satisfy every naturality constraint pointwise.  The morphism
    above is unique exactly when every choice set is a singleton."""
    x = _expansion_of(d, param_name)
    term = terminal_model(d, m0, param_name)
    shape = FinModel(dict(m0.carriers), {})
    choices = {}
    for nu in n_a.carriers[param_name]:
        allowed = []
        for key in term.carriers[param_name]:
            ok = True
            for decl in d.terms:
                if decl.pure:
                    continue
                prime = x.prime_map[decl.name]
                for v in shape.carrier(decl.dom):
                    if n_a.tables[prime][(nu, v)] != term.tables[prime][(key, v)]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                allowed.append(key)
        choices[nu] = allowed
    return choices


# ---------------------------------------------------------------------------
# JSON interchange


def _to_jsonable(v):
    if isinstance(v, tuple):
        return [_to_jsonable(x) for x in v]
    return v


def _from_jsonable(v):
    if isinstance(v, list):
        return tuple(_from_jsonable(x) for x in v)
    return v


def model_to_dict(m: FinModel) -> dict:
    return {
        "carriers": {k: [_to_jsonable(v) for v in vs]
                     for k, vs in m.carriers.items()},
        "tables": {k: [[_to_jsonable(a), _to_jsonable(b)]
                       for a, b in sorted(t.items(), key=repr)]
                   for k, t in m.tables.items()},
    }


def model_from_dict(d: dict) -> FinModel:
    carriers = {k: tuple(_from_jsonable(v) for v in vs)
                for k, vs in d.get("carriers", {}).items()}
    tables = {k: {_from_jsonable(a): _from_jsonable(b) for a, b in rows}
              for k, rows in d.get("tables", {}).items()}
    return FinModel(carriers, tables)


def load_model(path) -> FinModel:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))


def dump_model(m: FinModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(m), fh, indent=2, sort_keys=True)
        fh.write("\n")
