"""Anchor-guided bitext sentence alignment.

Embeddings are 2-D float arrays with one row per sentence. Options are a dict
keyed by the command-line names, e.g. ``{"detect-intervals": True, "k": 4}``.
"""

from ._core import (
    AlignError,
    align,
    bead_cost,
    d_length,
    decode_matrix,
    encode_matrix,
    extract_anchors,
    l2_normalize,
    load_matrix,
    parse_beads,
    print_config,
    similarity,
    strict_prf,
    write_matrix,
)

__all__ = [
    "AlignError",
    "align",
    "bead_cost",
    "d_length",
    "decode_matrix",
    "encode_matrix",
    "extract_anchors",
    "l2_normalize",
    "load_matrix",
    "parse_beads",
    "print_config",
    "similarity",
    "strict_prf",
    "write_matrix",
]
