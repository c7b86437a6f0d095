"""Gröbner bases over (mixed rational) Weyl algebras and partial Weyl closure."""

__version__ = "0.1.0"

from .closure import ClosureConfig, ClosureResult, partial_weyl_closure, saturation_approx
from .fields import QQ, PrimeField, parse_field
from .groebner import Budget, BudgetExceeded, GroebnerBasis, buchberger, is_finite_rank, normal_form
from .holonomy import is_holonomic
from .orders import ModuleOrder, default_order, parse_order
from .parser import load_problem, parse_operator, parse_problem
from .symbol import pick_loc_poly, singular_locus
from .weyl import AlgebraSignature, WeylElement, act_on_rational, annihilates

__all__ = [
    "AlgebraSignature", "Budget", "BudgetExceeded", "ClosureConfig", "ClosureResult",
    "GroebnerBasis", "ModuleOrder", "PrimeField", "QQ", "WeylElement", "act_on_rational",
    "annihilates", "buchberger", "default_order", "is_finite_rank", "is_holonomic",
    "load_problem", "normal_form", "parse_field", "parse_operator", "parse_order",
    "parse_problem", "partial_weyl_closure", "pick_loc_poly", "saturation_approx",
    "singular_locus",
]
