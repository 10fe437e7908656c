"""Workbench for equational specifications viewed categorically.

The package handles finite presentations of theories with chosen finite
products: a small DSL with parser and printer, an entailment engine with
bounded congruence saturation and countermodel search, pushouts and
elementary decompositions, the parameterization of decorated presentations
with its coKleisli inverse, parameter passing with its lax cocone, finite
set-valued models with exhaustive enumeration and terminal models, and a
meta level of limit sketches whose realizations encode the presentations
themselves.
"""

from .base_specs import ParamBase, param_base
from .colimit import (
    Diagram,
    Edge,
    ElementarySpec,
    InvalidDiagram,
    Pushout,
    UnsupportedPushout,
    canonical_form,
    decompose,
    glue,
    isomorphic_presentations,
    mediate,
    pushout,
)
from .deduction import (
    Budget,
    DEFAULT_BUDGET,
    CongruenceState,
    NonParallelGoal,
    RenamingMismatch,
    Verdict,
    entails,
    enumerate_terms,
    equivalent_specs,
    make_oracle,
    normalize,
)
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
    UnknownSymbol,
    compose,
    infer,
    is_pure,
)
from .metasketch import (
    Cone,
    LimitSketch,
    Realization,
    SketchMorphism,
    builtin_sketches,
    check_realization,
    check_sketch_morphism,
    compose_sketch_morphisms,
    graph_sketch,
    precompose,
    realization_from_dict,
    realization_to_dict,
    realization_to_spec,
    spec_sketch,
    spec_sketch_without_equations,
    spec_to_realization,
)
from .models import (
    FinModel,
    ModelMorphism,
    NotOverBaseModel,
    ValueOutOfCarrier,
    Violation,
    check_model,
    check_model_morphism,
    dump_model,
    enumerate_models,
    eval_term,
    extend_with_argument,
    load_model,
    model_from_dict,
    model_to_dict,
    models_over,
    pass_parameter,
    restrict,
    terminal_component_choices,
    terminal_model,
    unique_to_terminal,
)
from .morphism import (
    CheckReport,
    Morphism,
    NatTrans,
    SpecMismatch,
    check_morphism,
    check_nat,
    compose_morphisms,
    identity_morphism,
    is_decorated_morphism,
    whisker,
)
from .parameterize import (
    CoKleisliView,
    Expansion,
    KlTerm,
    cokleisli,
    cokleisli_unit,
    collapse_param,
    expand,
    expand_morphism,
    translate_term,
    triangle_obligations,
    unit_is_decorated,
)
from .parampass import (
    IncompatibleCocone,
    LaxCocone,
    ProbeCocone,
    WithParameter,
    add_parameter,
    check_passing_naturality,
    cocone_equations,
    collapse_cocone,
    lax_cocone,
    mediating,
    passing_morphism,
    self_cocone,
)
from .parser import Document, ParseError, parse_document, parse_file
from .printer import (
    format_document,
    format_morphism,
    format_nat,
    format_spec,
    format_term,
    format_type,
)
from .spec import (
    ArityMismatch,
    Diagnostic,
    Equation,
    ParamConstSpec,
    ParamSpec,
    SApp,
    Spec,
    SVar,
    TermDecl,
    UnknownVariable,
    desugar_equation,
    underlying_spec,
    validate,
)
