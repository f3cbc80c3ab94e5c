"""Multitype reconstruction transforms for subject-grouped tabular data.

The heavy lifting lives in the compiled ``mrcst._core`` extension; this
package re-exports its public surface.
"""

from mrcst._core import (
    ENVELOPE_ROWS,
    __version__,
    envelope,
    evaluate,
    fuse,
    grid_search_weights,
    kmeans,
    load_dataset,
    subject_score,
    transform,
)

__all__ = [
    "ENVELOPE_ROWS",
    "__version__",
    "envelope",
    "evaluate",
    "fuse",
    "grid_search_weights",
    "kmeans",
    "load_dataset",
    "subject_score",
    "transform",
]
