"""Regime-indicator independence models and causal effect identification."""
from .estimand import Prob, Product, Sum, estimand_eval, free_variables, parse_estimand, to_text
from .identify import PlanQuery, Step, evaluate_plan, find_plan_sets, identify, natural_violations
from .regime import (
    INT,
    OBS,
    RegimeModel,
    Rewrite,
    Term,
    apply_rule,
    f_mask,
    regime_context,
    regime_universe,
    tci,
)
from .scm import StructuralModel, interventional_oracle, random_structural_model

__all__ = [
    "INT",
    "OBS",
    "PlanQuery",
    "Prob",
    "Product",
    "RegimeModel",
    "Rewrite",
    "Step",
    "StructuralModel",
    "Sum",
    "Term",
    "apply_rule",
    "estimand_eval",
    "evaluate_plan",
    "f_mask",
    "find_plan_sets",
    "free_variables",
    "identify",
    "interventional_oracle",
    "natural_violations",
    "parse_estimand",
    "random_structural_model",
    "regime_context",
    "regime_universe",
    "tci",
    "to_text",
]
