"""Static checker for under- and overconstrained arithmetic circuits."""

from .circuit import CircuitClass, ConstraintClass, ConstraintSystem, classify_circuit, reduce_degree
from .config import Config
from .dispatch import check
from .field import BN254, FieldElement, Prime
from .poly import Kind, Polynomial, RationalFunction, Var
from .verdict import Category, Truth, Verdict, consistent

__version__ = "0.1.0"

__all__ = [
    "BN254",
    "Category",
    "CircuitClass",
    "Config",
    "ConstraintClass",
    "ConstraintSystem",
    "FieldElement",
    "Kind",
    "Polynomial",
    "Prime",
    "RationalFunction",
    "Truth",
    "Var",
    "Verdict",
    "check",
    "classify_circuit",
    "consistent",
    "reduce_degree",
]
