"""Sparse spectral audio coding over redundant trigonometric dictionaries.

Signals are approximated blockwise as short superpositions of unit-norm
complex-exponential, cosine and/or sine atoms drawn from an overcomplete
implicit dictionary. Atom correlations are computed with zero-padded FFTs,
so the dictionary itself is never stored; a self-projection loop makes the
greedy coefficients converge to the orthogonal-projection (OMP) solution.
Slow explicit-dictionary oracles are shipped alongside to arbitrate the
fast paths in tests.
"""

from .audio import UnsupportedWavError, read_wav, write_wav
from .codec import (
    BlockEncodingError,
    BlockRecord,
    EncodedStream,
    EncodeResult,
    PartitionedSignal,
    StreamFormatError,
    StreamHeader,
    block_tolerance,
    decode,
    encode,
    parse_stream,
    partition,
    read_stream,
    reconstruct_block,
    serialize_stream,
    stream_to_json,
    write_stream,
)
from .dictionary import (
    Case,
    DictionarySpec,
    atom_count_for_redundancy,
    conjugate_partner,
    make_atom,
    weight_cos,
    weight_sin,
)
from .estimator import SparseSpectralCoder
from .metrics import (
    MetricsReport,
    classic_spectrogram,
    gain,
    kappa_stats,
    report_from_stream,
    snr,
    sparse_spectrogram_export,
    sparsity_ratio,
    write_block_profile_csv,
    write_metrics_csv,
)
from .oracles import (
    DegenerateSelectionError,
    ExplicitDictionary,
    direct_inner_products,
    least_squares_projection,
    omp_reference,
)
from .pursuit import (
    ConvergenceError,
    SparseApproximation,
    mp,
    project_mp,
    reselect_atom,
    select_atom,
    spmp,
)
from .transforms import inner_products, padded_dft

__version__ = "0.1.0"

__all__ = [
    "BlockEncodingError",
    "BlockRecord",
    "Case",
    "ConvergenceError",
    "DegenerateSelectionError",
    "DictionarySpec",
    "EncodeResult",
    "EncodedStream",
    "ExplicitDictionary",
    "MetricsReport",
    "PartitionedSignal",
    "SparseApproximation",
    "SparseSpectralCoder",
    "StreamFormatError",
    "StreamHeader",
    "UnsupportedWavError",
    "atom_count_for_redundancy",
    "block_tolerance",
    "classic_spectrogram",
    "conjugate_partner",
    "decode",
    "direct_inner_products",
    "encode",
    "gain",
    "inner_products",
    "kappa_stats",
    "least_squares_projection",
    "make_atom",
    "mp",
    "omp_reference",
    "padded_dft",
    "parse_stream",
    "partition",
    "project_mp",
    "read_stream",
    "read_wav",
    "reconstruct_block",
    "report_from_stream",
    "reselect_atom",
    "select_atom",
    "serialize_stream",
    "snr",
    "sparse_spectrogram_export",
    "sparsity_ratio",
    "spmp",
    "stream_to_json",
    "weight_cos",
    "weight_sin",
    "write_block_profile_csv",
    "write_metrics_csv",
    "write_stream",
    "write_wav",
]
