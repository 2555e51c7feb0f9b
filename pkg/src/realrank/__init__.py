"""Typical rank of real three-way arrays via Groebner bases and real-root counting."""

__version__ = "0.1.0"

from .tensor import (Shape, Tensor3, TensorFormatError, classify, embed, expected_degree,
                     indscal_expected_degree, load_tensor, parse_tensor, print_tensor)
from .roots import UnivariatePoly, isolate_real_roots, sturm_count
from .eliminate import eliminate
from .engine import (RankOptions, RankReport, rank_auto, rank_indscal_minimal, rank_minimal,
                     rank_square_two_slice, rank_tall, rank_tallest_compact)
from .decomposition import FactorTriple, extract_decomposition, verify_decomposition
from .census import CensusSpec, CensusHistogram, emit_report, generate_generic, run_census

__all__ = [
    "Shape", "Tensor3", "TensorFormatError", "classify", "embed", "expected_degree",
    "indscal_expected_degree", "load_tensor", "parse_tensor", "print_tensor",
    "UnivariatePoly", "isolate_real_roots", "sturm_count", "eliminate",
    "RankOptions", "RankReport", "rank_auto", "rank_indscal_minimal", "rank_minimal",
    "rank_square_two_slice", "rank_tall", "rank_tallest_compact",
    "FactorTriple", "extract_decomposition", "verify_decomposition",
    "CensusSpec", "CensusHistogram", "emit_report", "generate_generic", "run_census",
]
