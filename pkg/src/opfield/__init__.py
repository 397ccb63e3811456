"""Exact constructive algebra of fields with operators."""

from .algebra import (
    Algebra,
    Decomposition,
    LocalBlock,
    build_algebra,
    check_residue_assumption,
    local_decompose,
    radical,
    residue_functional,
)
from .arith import GF, QQ, Field, Matrix, Mod, Poly, kernel_basis, linear_roots, minimal_polynomial
from .decl import load_preset, parse_declaration, serialize_declaration
from .growth import FreeAlphabet, RelationFamily, enumerate_reduced, growth_function
from .operators import (
    associated_endomorphisms,
    build_system,
    classify_single_operator,
    product_rule,
    single_operator_algebra,
    triangularize,
)
from .symbolic import OperatorEngine, SymExpr, apply_letter, apply_word, check_identity
from .words import (
    Letter,
    WordPoly,
    compare_words,
    degree,
    expand_scale,
    parse_word,
    parse_wordpoly,
    sigma_of_word,
)

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "apply_letter",
    "apply_word",
    "associated_endomorphisms",
    "build_algebra",
    "build_system",
    "check_identity",
    "check_residue_assumption",
    "classify_single_operator",
    "compare_words",
    "Decomposition",
    "degree",
    "enumerate_reduced",
    "expand_scale",
    "Field",
    "FreeAlphabet",
    "GF",
    "growth_function",
    "kernel_basis",
    "Letter",
    "linear_roots",
    "load_preset",
    "local_decompose",
    "LocalBlock",
    "Matrix",
    "minimal_polynomial",
    "Mod",
    "OperatorEngine",
    "parse_declaration",
    "parse_word",
    "parse_wordpoly",
    "Poly",
    "product_rule",
    "QQ",
    "radical",
    "RelationFamily",
    "residue_functional",
    "serialize_declaration",
    "sigma_of_word",
    "single_operator_algebra",
    "SymExpr",
    "triangularize",
    "WordPoly",
]
