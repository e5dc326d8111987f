"""Readers for compiler output: binary R1CS with symbol files, and PolyIR text."""

from .polyir import format_polyir, parse_polyir
from .r1cs import R1csFile, lower_r1cs, parse_r1cs, write_r1cs
from .sym import SymRow, SymTable, format_sym, parse_sym

__all__ = [
    "R1csFile",
    "SymRow",
    "SymTable",
    "format_polyir",
    "format_sym",
    "lower_r1cs",
    "parse_polyir",
    "parse_r1cs",
    "parse_sym",
    "write_r1cs",
]
