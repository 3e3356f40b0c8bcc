"""Principal-component factor analysis of journal correlation matrices.

Retention follows the Kaiser criterion (eigenvalue strictly above one)
unless a factor count is forced. Rotation is the classical pairwise
varimax procedure with optional Kaiser normalization of the loading
rows, which reports a sweep count comparable to the iteration counts
printed by desktop statistics packages.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .correlate import CorrelationMatrix
from .eigen import sym_eig

VARIMAX_TOL = 1e-7
VARIMAX_MAX_SWEEPS = 100
DEFAULT_SUPPRESS = 0.1


@dataclass(frozen=True)
class RotationRecord:
    """How (and whether) a loading matrix was rotated.

    ``matrix`` is the composed orthogonal rotation applied on the right of
    the unrotated loadings, including the final column reordering and sign
    flips; ``None`` when no rotation was applied. ``criterion_by_sweep``
    holds the varimax criterion after each sweep so monotone convergence
    can be audited.
    """

    method: str  # "varimax" or "none"
    kaiser_normalized: bool
    iterations: int
    converged: bool
    matrix: np.ndarray | None = None
    criterion_by_sweep: tuple[float, ...] = ()


@dataclass(frozen=True)
class FactorModel:
    """Retained principal components of one correlation matrix.

    ``loadings[i, f]`` couples journal ``journal_ids[i]`` to factor ``f``;
    ``eigenvalues`` keeps the full descending spectrum so explained-variance
    shares can be recomputed against all variables, not just retained ones.
    Journals flagged invalid in the source correlation matrix are excluded
    from the analysis and listed in ``excluded``.
    """

    journal_ids: tuple[str, ...]
    eigenvalues: np.ndarray
    k: int
    loadings: np.ndarray
    explained_variance: float
    rotation: RotationRecord
    excluded: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return len(self.journal_ids)

    def communalities(self) -> np.ndarray:
        """Per-journal sum of squared loadings over the retained factors."""
        return np.sum(self.loadings * self.loadings, axis=1)


def extract(corr: CorrelationMatrix, k: int | None = None) -> FactorModel:
    """Principal-component extraction from a correlation matrix.

    With ``k`` absent, retains every factor whose eigenvalue exceeds one;
    if none does, falls back to a single factor and warns. Loading column
    ``f`` is the f-th eigenvector scaled by the square root of its
    eigenvalue, so the trace identity (sum of communalities equals sum of
    retained eigenvalues) holds by construction.
    """
    keep = [i for i, ok in enumerate(corr.valid) if ok]
    if len(keep) < 2:
        raise ValueError(f"need at least 2 valid journals to factor, have {len(keep)}")
    ids = tuple(corr.journal_ids[i] for i in keep)
    excluded = tuple(corr.journal_ids[i] for i in range(corr.n) if not corr.valid[i])
    r = corr.r[np.ix_(keep, keep)]

    eig = sym_eig(r)
    n = len(ids)
    if k is None:
        k = int(np.sum(eig.values > 1.0))
        if k == 0:
            warnings.warn("no eigenvalue exceeds 1; retaining a single factor")
            k = 1
    else:
        if not 1 <= k <= n:
            raise ValueError(f"factor count must be between 1 and {n}, got {k}")

    # Correlation matrices are positive semidefinite up to rounding; clamp
    # the sub-machine negative tail before the square root.
    scale = np.sqrt(np.maximum(eig.values[:k], 0.0))
    loadings = eig.vectors[:, :k] * scale
    return FactorModel(
        journal_ids=ids,
        eigenvalues=eig.values,
        k=k,
        loadings=loadings,
        explained_variance=float(np.sum(eig.values[:k])) / n,
        rotation=RotationRecord(method="none", kaiser_normalized=False, iterations=0, converged=True),
        excluded=excluded,
    )


def _pair_angle(x: np.ndarray, y: np.ndarray, n: int) -> float:
    # Kaiser's closed-form optimum for one planar rotation: the varimax
    # criterion restricted to a column pair is sinusoidal in 4*phi.
    u = x * x - y * y
    v = 2.0 * x * y
    a = float(np.sum(u))
    b = float(np.sum(v))
    c = float(np.sum(u * u - v * v))
    d = float(2.0 * np.sum(u * v))
    num = d - 2.0 * a * b / n
    den = c - (a * a - b * b) / n
    if num == 0.0 and den == 0.0:
        return 0.0
    return 0.25 * math.atan2(num, den)


def _criterion(w: np.ndarray) -> float:
    # Raw varimax criterion: summed per-column variance of squared loadings.
    sq = w * w
    return float(np.sum(np.mean(sq * sq, axis=0) - np.mean(sq, axis=0) ** 2))


def varimax(
    model: FactorModel,
    kaiser_normalize: bool = True,
    tol: float = VARIMAX_TOL,
    max_sweeps: int = VARIMAX_MAX_SWEEPS,
) -> FactorModel:
    """Rotate a factor model to simple structure by pairwise varimax sweeps.

    Rows are divided by the square root of their communality first when
    ``kaiser_normalize`` is set and restored afterwards. Sweeping stops when
    the relative criterion gain drops below ``tol``. The returned loadings
    equal the unrotated loadings right-multiplied by one composed orthogonal
    matrix (kept on the rotation record), with columns reordered by
    descending sum of squared loadings and signs fixed so each column's
    largest-magnitude loading is positive.
    """
    if model.k == 1:
        return model
    loadings = model.loadings
    n, k = loadings.shape

    weights = np.ones(n)
    if kaiser_normalize:
        h = np.sqrt(np.sum(loadings * loadings, axis=1))
        weights = np.where(h > 0.0, h, 1.0)
    w = loadings / weights[:, None]

    rot = np.eye(k)
    history: list[float] = []
    previous = _criterion(w)
    sweeps = 0
    converged = False
    while sweeps < max_sweeps:
        for p in range(k - 1):
            for q in range(p + 1, k):
                phi = _pair_angle(w[:, p], w[:, q], n)
                if abs(phi) < 1e-15:
                    continue
                c = math.cos(phi)
                s = math.sin(phi)
                xp = w[:, p].copy()
                w[:, p] = c * xp + s * w[:, q]
                w[:, q] = -s * xp + c * w[:, q]
                rp = rot[:, p].copy()
                rot[:, p] = c * rp + s * rot[:, q]
                rot[:, q] = -s * rp + c * rot[:, q]
        sweeps += 1
        current = _criterion(w)
        history.append(current)
        if current - previous <= tol * max(previous, 1e-30):
            converged = True
            previous = current
            break
        previous = current

    rotated = loadings @ rot  # normalization cancels under right-multiplication

    # Canonical column order and sign, folded into the rotation so the
    # composed matrix stays exactly orthogonal.
    ssl = np.sum(rotated * rotated, axis=0)
    order = np.argsort(-ssl, kind="stable")
    signs = np.ones(k)
    for pos, col in enumerate(order):
        lead = int(np.argmax(np.abs(rotated[:, col])))
        if rotated[lead, col] < 0.0:
            signs[pos] = -1.0
    perm = np.zeros((k, k))
    perm[order, np.arange(k)] = 1.0
    composed = rot @ perm * signs
    rotated = loadings @ composed

    record = RotationRecord(
        method="varimax",
        kaiser_normalized=kaiser_normalize,
        iterations=sweeps,
        converged=converged,
        matrix=composed,
        criterion_by_sweep=tuple(history),
    )
    return replace(model, loadings=rotated, rotation=record)


def format_loading(value: float) -> str:
    """Render a loading to three decimals without a leading zero: ``.793``, ``-.115``."""
    rounded = round(value, 3)
    if rounded == 0.0:
        rounded = 0.0  # normalize -0.0
    text = f"{rounded:.3f}"
    if text.startswith("0."):
        return text[1:]
    if text.startswith("-0."):
        return "-" + text[2:]
    return text


@dataclass(frozen=True)
class LoadingRow:
    """One rendered table row: a journal, its primary factor, and per-factor cells."""

    journal_id: str
    primary_factor: int  # 1-based
    primary_loading: float
    cells: tuple[str, ...]


def loading_table(
    model: FactorModel,
    suppress: float = DEFAULT_SUPPRESS,
    top: int | None = None,
) -> tuple[LoadingRow, ...]:
    """Rotated-component-matrix rows in presentation order.

    Journals are grouped by the factor on which they load highest, groups
    in factor order, journals within a group by descending absolute primary
    loading. Cells with absolute loading below ``suppress`` render blank;
    suppression affects rendering only, never the stored model. ``top``
    caps the rows kept per factor group.
    """
    if suppress < 0.0:
        raise ValueError(f"suppression threshold must be nonnegative, got {suppress}")
    primary = np.argmax(np.abs(model.loadings), axis=1)
    rows: list[LoadingRow] = []
    for f in range(model.k):
        group = [i for i in range(model.n) if primary[i] == f]
        group.sort(key=lambda i: (-abs(model.loadings[i, f]), model.journal_ids[i]))
        if top is not None:
            group = group[:top]
        for i in group:
            cells = tuple(
                format_loading(x) if abs(x) >= suppress else ""
                for x in model.loadings[i]
            )
            rows.append(
                LoadingRow(
                    journal_id=model.journal_ids[i],
                    primary_factor=f + 1,
                    primary_loading=float(model.loadings[i, f]),
                    cells=cells,
                )
            )
    return tuple(rows)


def table_text(model: FactorModel, suppress: float = DEFAULT_SUPPRESS, top: int | None = None) -> str:
    """Aligned plain-text rendering of :func:`loading_table`."""
    rows = loading_table(model, suppress=suppress, top=top)
    headers = ["journal"] + [str(f + 1) for f in range(model.k)]
    body = [[row.journal_id, *row.cells] for row in rows]
    widths = [max(len(headers[c]), *(len(r[c]) for r in body)) if body else len(headers[c]) for c in range(len(headers))]
    lines = ["  ".join(h.ljust(widths[c]) for c, h in enumerate(headers)).rstrip()]
    for r in body:
        lines.append("  ".join(cell.ljust(widths[c]) for c, cell in enumerate(r)).rstrip())
    return "\n".join(lines) + "\n"


def model_payload(model: FactorModel) -> dict:
    """JSON-ready summary: spectrum, retention, variance, and rotation record."""
    rotation = {
        "method": model.rotation.method,
        "kaiser_normalized": model.rotation.kaiser_normalized,
        "iterations": model.rotation.iterations,
        "converged": model.rotation.converged,
    }
    return {
        "journals": list(model.journal_ids),
        "excluded": list(model.excluded),
        "eigenvalues": [float(v) for v in model.eigenvalues],
        "k": model.k,
        "explained_variance": model.explained_variance,
        "rotation": rotation,
        "loadings": [[float(x) for x in row] for row in model.loadings],
    }
