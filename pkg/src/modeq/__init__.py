"""Logic-system toolkit: satisfiability and stable-model engines, verified
model-preserving reductions, clause-indicator gadget families, and a
machine-to-formula compiler with explicit witness bijections."""

from .formula import (
    And,
    Atom,
    Clause,
    CnfFormula,
    Const,
    EpfFormula,
    FALSE,
    Formula,
    Implies,
    Interpretation,
    Literal,
    Not,
    Or,
    Quantifier,
    QuantifiedFormula,
    TRUE,
    Var,
    collect_vars,
    evaluate,
    evaluate_cnf,
    substitute,
)
from .sat import ModelSet, SolveResult, enumerate_models, qbf_eval, solve
from .systems import (
    MinimalityStrategy,
    SystemId,
    enumerate_models_sys,
    has_model,
    is_minimal_model,
    minimal_membership_formula,
    model_check,
)

__version__ = "0.1.0"

__all__ = [
    "And",
    "Atom",
    "Clause",
    "CnfFormula",
    "Const",
    "EpfFormula",
    "FALSE",
    "Formula",
    "Implies",
    "Interpretation",
    "Literal",
    "MinimalityStrategy",
    "ModelSet",
    "Not",
    "Or",
    "Quantifier",
    "QuantifiedFormula",
    "SolveResult",
    "SystemId",
    "TRUE",
    "Var",
    "collect_vars",
    "enumerate_models",
    "enumerate_models_sys",
    "evaluate",
    "evaluate_cnf",
    "has_model",
    "is_minimal_model",
    "minimal_membership_formula",
    "model_check",
    "qbf_eval",
    "solve",
    "substitute",
]
