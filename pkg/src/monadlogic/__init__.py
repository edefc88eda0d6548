"""A uniform evaluator for first-order logic with computational binds.

One inductive semantics, parameterized by a computation monad (identity,
non-empty sets, finite distributions, or seeded samplers) and a truth
algebra on the monadic truth space (boolean, three-valued, probability
algebras with several quantifier aggregators, or smooth robustness
values).  Interpretations, the argmax transformation between frameworks,
and weighted model counting via iterated binds round out the library;
``monadlogic`` on the command line drives it in batch mode.
"""

from . import errors
from .algebra import (
    LP3,
    TruthAlgebra,
    WeightedFamily,
    aggregate,
    apply_connective,
    lift_algebra,
    make_algebra,
    parse_algebra_string,
)
from .effects import (
    DISTRIBUTION,
    IDENTITY,
    MONAD_KINDS,
    NONEMPTY_SET,
    SAMPLER,
    Computation,
    Dist,
    NESet,
    Pure,
    RandomKey,
    Realization,
    Sampler,
    bind,
    realize,
    unit,
)
from .model import (
    CTable,
    Domain,
    EnumDomain,
    IntRangeDomain,
    Interpretation,
    RealIntervalDomain,
    TableFunc,
    apply_computational,
    apply_function,
    apply_predicate,
    dump_interpretation,
    load_interpretation,
    quantifier_family,
)
from .semantics import (
    EvalReport,
    Framework,
    eval_formula,
    eval_term,
    evaluate_sentence,
    make_framework,
)
from .syntax import (
    Formula,
    Signature,
    Term,
    free_vars,
    parse_formula,
    parse_signature,
    pretty,
    pretty_term,
)
from .transforms import (
    Network,
    NetworkVar,
    TransformSpec,
    argmax_interpretation,
    load_network,
    wmc_build,
    wmc_bruteforce,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "LP3",
    "TruthAlgebra",
    "WeightedFamily",
    "aggregate",
    "apply_connective",
    "lift_algebra",
    "make_algebra",
    "parse_algebra_string",
    "DISTRIBUTION",
    "IDENTITY",
    "MONAD_KINDS",
    "NONEMPTY_SET",
    "SAMPLER",
    "Computation",
    "Dist",
    "NESet",
    "Pure",
    "RandomKey",
    "Realization",
    "Sampler",
    "bind",
    "realize",
    "unit",
    "CTable",
    "Domain",
    "EnumDomain",
    "IntRangeDomain",
    "Interpretation",
    "RealIntervalDomain",
    "TableFunc",
    "apply_computational",
    "apply_function",
    "apply_predicate",
    "dump_interpretation",
    "load_interpretation",
    "quantifier_family",
    "EvalReport",
    "Framework",
    "eval_formula",
    "eval_term",
    "evaluate_sentence",
    "make_framework",
    "Formula",
    "Signature",
    "Term",
    "free_vars",
    "parse_formula",
    "parse_signature",
    "pretty",
    "pretty_term",
    "Network",
    "NetworkVar",
    "TransformSpec",
    "argmax_interpretation",
    "load_network",
    "wmc_build",
    "wmc_bruteforce",
]
