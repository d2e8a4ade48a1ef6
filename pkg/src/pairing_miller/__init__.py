"""Miller-loop engines for Tate and Weil pairings, with operation counting.

The vertical-line-free engines replace every vertical line by a conjugate
tangent or a double-add parabola; the even-degree variant also folds the
remaining denominator into the numerator through conjugation.
"""
from .catalog import CatalogEntry, builtin_catalog, get_entry, parse_entry, serialize_entry, validate_params
from .counting import OpCounter, predict_cost, verify_cost, weighted_cost
from .curve import AffinePoint, Curve, INFINITY, double_add, line_eval, parabola_eval, vertical_eval
from .field import ExtField, PrimeField, final_exponentiation
from .miller import ENGINES, Fraction, get_engine, run_with_divisor
from .pairing import PairingContext, context, extension_group_order, sample_point, tate_reduced, weil

__all__ = [
    "AffinePoint", "CatalogEntry", "Curve", "ENGINES", "ExtField", "Fraction", "INFINITY", "OpCounter",
    "PairingContext", "PrimeField", "builtin_catalog", "context", "double_add", "extension_group_order",
    "final_exponentiation", "get_engine", "get_entry", "line_eval", "parabola_eval", "parse_entry",
    "predict_cost", "run_with_divisor", "sample_point", "serialize_entry", "tate_reduced", "validate_params",
    "vertical_eval", "verify_cost", "weighted_cost", "weil",
]
