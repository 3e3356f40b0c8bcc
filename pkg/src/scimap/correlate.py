"""Pearson correlation between journals' citing (or cited) patterns."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .corpus import CitationMatrix

AXES = ("citing-rows", "cited-columns")
DIAGONAL_POLICIES = ("kept", "zeroed")


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric Pearson matrix over journal patterns.

    Journals whose pattern has zero variance are flagged invalid; every
    entry involving an invalid journal is 0 by convention. For valid
    journals the diagonal is exactly 1 and r(i,j) == r(j,i) bitwise.
    """

    journal_ids: tuple[str, ...]
    r: np.ndarray
    valid: np.ndarray
    axis: str
    diagonal_policy: str

    @property
    def n(self) -> int:
        return len(self.journal_ids)

    def valid_ids(self) -> tuple[str, ...]:
        return tuple(jid for jid, ok in zip(self.journal_ids, self.valid) if ok)

    def invalid_ids(self) -> tuple[str, ...]:
        return tuple(jid for jid, ok in zip(self.journal_ids, self.valid) if not ok)


@njit(cache=True)
def _pairwise_r(centered, norms, valid, out, row_start, row_stop):
    # Each (i, j) entry is a pure function of rows i and j, so any partition
    # of the row range across workers reproduces identical bits.
    n, m = centered.shape
    for i in range(row_start, row_stop):
        if not valid[i]:
            continue
        out[i, i] = 1.0
        for j in range(i + 1, n):
            if not valid[j]:
                continue
            acc = 0.0
            for k in range(m):
                acc += centered[i, k] * centered[j, k]
            rij = acc / (norms[i] * norms[j])
            out[i, j] = rij
            out[j, i] = rij


def _patterns(matrix: CitationMatrix, axis: str, diagonal_policy: str) -> np.ndarray:
    dense = matrix.to_dense()
    if diagonal_policy == "zeroed":
        np.fill_diagonal(dense, 0.0)
    return dense if axis == "citing-rows" else dense.T.copy()


def citing_correlation(
    matrix: CitationMatrix,
    axis: str = "citing-rows",
    diagonal_policy: str = "kept",
) -> CorrelationMatrix:
    """Correlate journal patterns with the standard two-pass Pearson definition.

    With the default axis, journal i's pattern is row i of the citation
    matrix: its distribution of references over all cited journals. The
    `zeroed` diagonal policy drops self-citation cells before correlating.
    """
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    if diagonal_policy not in DIAGONAL_POLICIES:
        raise ValueError(f"diagonal_policy must be one of {DIAGONAL_POLICIES}, got {diagonal_policy!r}")
    n = matrix.n
    if n < 2:
        raise ValueError(f"correlation needs at least 2 journals, got {n}")

    patterns = _patterns(matrix, axis, diagonal_policy)
    means = patterns.mean(axis=1)
    centered = patterns - means[:, None]
    norms = np.sqrt((centered * centered).sum(axis=1))
    valid = norms > 0.0

    out = np.zeros((n, n), dtype=np.float64)
    _pairwise_r(centered, norms, valid, out, 0, n)
    return CorrelationMatrix(
        journal_ids=matrix.registry.ids,
        r=out,
        valid=valid,
        axis=axis,
        diagonal_policy=diagonal_policy,
    )


def correlation_pairs(corr: CorrelationMatrix, floor: float = 0.0) -> list[tuple[str, str, float]]:
    """Valid journal pairs with |r| above `floor`, each pair once, sorted by id pair."""
    ids = corr.journal_ids
    rows = []
    for i in range(corr.n):
        if not corr.valid[i]:
            continue
        for j in range(i + 1, corr.n):
            if not corr.valid[j]:
                continue
            rij = float(corr.r[i, j])
            if abs(rij) > floor:
                a, b = sorted((ids[i], ids[j]))
                rows.append((a, b, rij))
    rows.sort(key=lambda row: (row[0], row[1]))
    return rows
