"""Two-dimensional journal maps.

Classical (Torgerson) multidimensional scaling embeds correlation-derived
distances by double-centering and eigendecomposition — deterministic, no
iterative optimizer — and factor plots project journals onto two chosen
rotated components. Rendering is plain SVG plus coordinate CSV.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .correlate import CorrelationMatrix
from .eigen import sym_eig
from .factor import FactorModel

DISTANCE_VARIANTS = ("one-minus-r", "euclidean")


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric journal dissimilarities derived from correlations (valid journals only)."""

    journal_ids: tuple[str, ...]
    d: np.ndarray
    variant: str

    @property
    def n(self) -> int:
        return len(self.journal_ids)


@dataclass(frozen=True)
class Layout:
    """Journal coordinates for one map.

    ``stress`` is the normalized residual between the input distances and
    the layout's Euclidean distances (``None`` for factor plots, which are
    direct projections). ``negative_magnitudes`` lists the absolute values
    of any negative eigenvalues of the double-centered matrix — mass the
    embedding had to clamp away, an embeddability diagnostic.
    """

    journal_ids: tuple[str, ...]
    coords: np.ndarray
    method: str  # "classical-mds" or "factor-plot"
    stress: float | None = None
    negative_magnitudes: tuple[float, ...] = ()

    @property
    def n(self) -> int:
        return len(self.journal_ids)


def correlation_to_distance(corr: CorrelationMatrix, variant: str = "one-minus-r") -> DistanceMatrix:
    """Turn correlations into dissimilarities over the valid journal set.

    The default keeps map units directly interpretable in correlation
    terms: d = 1 − r, so r = 1 maps to distance 0 and r = −1 to 2. The
    ``euclidean`` variant uses √(2(1 − r)), the actual Euclidean distance
    between standardized patterns.
    """
    if variant not in DISTANCE_VARIANTS:
        raise ValueError(f"variant must be one of {DISTANCE_VARIANTS}, got {variant!r}")
    keep = [i for i, ok in enumerate(corr.valid) if ok]
    if len(keep) < 2:
        raise ValueError(f"need at least 2 valid journals, have {len(keep)}")
    ids = tuple(corr.journal_ids[i] for i in keep)
    r = corr.r[np.ix_(keep, keep)]
    if variant == "one-minus-r":
        d = 1.0 - r
    else:
        d = np.sqrt(np.maximum(2.0 * (1.0 - r), 0.0))
    np.fill_diagonal(d, 0.0)
    d = 0.5 * (d + d.T)
    return DistanceMatrix(journal_ids=ids, d=d, variant=variant)


def _as_distance_array(d) -> tuple[np.ndarray, tuple[str, ...] | None]:
    if isinstance(d, DistanceMatrix):
        return np.asarray(d.d, dtype=np.float64), d.journal_ids
    return np.asarray(d, dtype=np.float64), None


def classical_mds(d, dim: int = 2) -> Layout:
    """Embed a distance matrix by double centering and eigendecomposition.

    Accepts a :class:`DistanceMatrix` or a plain symmetric array with zero
    diagonal and nonnegative entries. Coordinates are the top-``dim``
    eigenvectors of −½·J·D²·J scaled by the square roots of their
    eigenvalues (negatives clamped to zero and reported); they come out
    centered on the origin, axes ordered by eigenvalue.
    """
    dist, ids = _as_distance_array(d)
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {dist.shape}")
    n = dist.shape[0]
    if not 1 <= dim < n:
        raise ValueError(f"embedding dimension must satisfy 1 <= dim < n = {n}, got {dim}")
    scale = max(float(np.max(np.abs(dist))), 1.0)
    if float(np.max(np.abs(dist - dist.T))) > 1e-9 * scale:
        raise ValueError("distance matrix is not symmetric")
    if float(np.max(np.abs(np.diag(dist)))) > 1e-9 * scale:
        raise ValueError("distance matrix must have a zero diagonal")
    if float(dist.min()) < 0.0:
        raise ValueError("distances must be nonnegative")
    if ids is None:
        ids = tuple(str(i) for i in range(n))

    sq = dist * dist
    centerer = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * (centerer @ sq @ centerer)
    eig = sym_eig(0.5 * (b + b.T))
    # Rounding turns the zero eigenvalues of an exactly embeddable
    # configuration into ±1e-16 noise; only report negatives that carry
    # actual mass relative to the spectrum.
    floor = 1e-12 * max(float(np.max(np.abs(eig.values))), 1e-30)
    negatives = tuple(float(-v) for v in eig.values if v < -floor)
    coords = eig.vectors[:, :dim] * np.sqrt(np.maximum(eig.values[:dim], 0.0))

    fitted = np.sqrt(np.maximum(
        np.sum(coords * coords, axis=1)[:, None]
        + np.sum(coords * coords, axis=1)[None, :]
        - 2.0 * coords @ coords.T,
        0.0,
    ))
    np.fill_diagonal(fitted, 0.0)
    denom = float(np.sum(sq))
    stress = math.sqrt(float(np.sum((dist - fitted) ** 2)) / denom) if denom > 0.0 else 0.0
    return Layout(
        journal_ids=ids,
        coords=coords,
        method="classical-mds",
        stress=stress,
        negative_magnitudes=negatives,
    )


def factor_plot(model: FactorModel, f1: int = 1, f2: int = 2) -> Layout:
    """Project journals onto two rotated components (1-based factor numbers)."""
    for f in (f1, f2):
        if not 1 <= f <= model.k:
            raise ValueError(f"factor index {f} out of range 1..{model.k}")
    coords = model.loadings[:, [f1 - 1, f2 - 1]].copy()
    return Layout(journal_ids=model.journal_ids, coords=coords, method="factor-plot")


def layout_rows(layout: Layout) -> list[tuple[str, float, float]]:
    """(journal_id, x, y) per journal, in layout order."""
    return [
        (jid, float(layout.coords[i, 0]), float(layout.coords[i, 1]))
        for i, jid in enumerate(layout.journal_ids)
    ]


def _letter_code(i: int) -> str:
    letters = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz"
    if i < len(letters):
        return letters[i]
    return letters[i % len(letters)] + str(i // len(letters) + 1)


def svg_scatter(
    layout: Layout,
    letter_labels: bool = False,
    width: int = 640,
    height: int = 480,
    header_comment: str | None = None,
) -> str:
    """Render a layout as a standalone SVG scatter plot.

    With ``letter_labels``, points carry compact letter codes and a legend
    maps codes back to journal ids — the style used for dense maps where
    full titles would overlap.
    """
    n = layout.n
    xs = layout.coords[:, 0]
    ys = layout.coords[:, 1] if layout.coords.shape[1] > 1 else np.zeros(n)
    span_x = float(xs.max() - xs.min()) if n else 1.0
    span_y = float(ys.max() - ys.min()) if n else 1.0
    span = max(span_x, span_y, 1e-12)
    margin = 40.0
    usable_w = width - 2 * margin
    usable_h = height - 2 * margin
    cx = float(xs.min()) + span_x / 2.0
    cy = float(ys.min()) + span_y / 2.0
    unit = min(usable_w, usable_h) / span

    def px(x: float) -> float:
        return margin + usable_w / 2.0 + (x - cx) * unit

    def py(y: float) -> float:
        # SVG's y axis points down; flip so the map reads conventionally.
        return margin + usable_h / 2.0 - (y - cy) * unit

    legend_width = 200 if letter_labels else 0
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width + legend_width}" height="{height}" '
        f'viewBox="0 0 {width + legend_width} {height}">'
    ]
    if header_comment:
        lines.insert(0, f"<!-- {header_comment} -->")
    lines.append(f'<rect x="0" y="0" width="{width}" height="{height}" fill="white" stroke="none"/>')
    lines.append(
        f'<line x1="{margin:.1f}" y1="{py(0.0):.2f}" x2="{width - margin:.1f}" y2="{py(0.0):.2f}" '
        'stroke="#cccccc" stroke-width="1"/>'
    )
    lines.append(
        f'<line x1="{px(0.0):.2f}" y1="{margin:.1f}" x2="{px(0.0):.2f}" y2="{height - margin:.1f}" '
        'stroke="#cccccc" stroke-width="1"/>'
    )
    for i, jid in enumerate(layout.journal_ids):
        x = px(float(xs[i]))
        y = py(float(ys[i]))
        label = _letter_code(i) if letter_labels else jid
        lines.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="#1f4e89"/>')
        lines.append(
            f'<text x="{x + 5:.2f}" y="{y - 5:.2f}" font-size="10" font-family="sans-serif">{_xml(label)}</text>'
        )
    if letter_labels:
        for i, jid in enumerate(layout.journal_ids):
            ly = 20 + 12 * i
            if ly > height - 10:
                break
            lines.append(
                f'<text x="{width + 10}" y="{ly}" font-size="9" font-family="sans-serif">'
                f"{_letter_code(i)}: {_xml(jid)}</text>"
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _xml(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
