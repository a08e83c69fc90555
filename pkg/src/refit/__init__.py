"""refit: type-directed code reuse.

Given a desired method signature, a natural-language description, and a
handful of tests, find a close-enough method in a corpus, align the two
interfaces optimally with 0-1 integer linear programming over a
type-distance metric, synthesize the wrapper as an executable plan, and
keep backtracking until the tests pass.
"""

from .align import (
    Alignment,
    brute_force_alignments,
    build_constraints,
    build_variables,
    cost_of,
    enumerate_alignments,
    solve_optimal,
)
from .builtins import standard_corpus_path, standard_registry
from .distance import delta, delta_list
from .driver import ReuseConfig, ReuseQuery, ReuseResult, code_reuse
from .featurize import FeatureMultiset, psi, psi_field_list
from .rank import rerank
from .runtime import (
    BuiltinRegistry,
    TestCase,
    eval_plan,
    run_tests,
)
from .search import build_index, keyword_search
from .synth import (
    AdapterPlan,
    defaults_for,
    emit_pseudo_source,
    generate_adapter,
    plan_conversion,
)
from .typemodel import (
    ClassDef,
    CorpusEntry,
    MethodSignature,
    TypeEnv,
    load_corpus,
    parse_signature,
    parse_type,
    print_type,
)

__all__ = [
    "AdapterPlan",
    "Alignment",
    "BuiltinRegistry",
    "ClassDef",
    "CorpusEntry",
    "FeatureMultiset",
    "MethodSignature",
    "ReuseConfig",
    "ReuseQuery",
    "ReuseResult",
    "TestCase",
    "TypeEnv",
    "brute_force_alignments",
    "build_constraints",
    "build_index",
    "build_variables",
    "code_reuse",
    "cost_of",
    "defaults_for",
    "delta",
    "delta_list",
    "emit_pseudo_source",
    "enumerate_alignments",
    "eval_plan",
    "generate_adapter",
    "keyword_search",
    "load_corpus",
    "parse_signature",
    "parse_type",
    "plan_conversion",
    "print_type",
    "psi",
    "psi_field_list",
    "rerank",
    "run_tests",
    "solve_optimal",
    "standard_corpus_path",
    "standard_registry",
]

__version__ = "0.1.0"
