"""Local citation environments around a seed journal.

A journal belongs to the seed's environment when it exchanges more than a
fixed fraction (default 1%) of the seed's citation totals on either side:
cited by the seed above the fraction of the seed's total citing, or citing
the seed above the fraction of the seed's total cited. The induced
sub-matrix keeps every cell among the selected journals, not just the
seed-incident ones, so the specialty-level factor analysis sees complete
local citing patterns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import CitationMatrix, make_registry, marginals
from .correlate import citing_correlation
from .factor import FactorModel, extract, varimax

DEFAULT_FRACTION = 0.01
COMPLEXITY_FLOOR = 0.1


@dataclass(frozen=True)
class MemberSelection:
    """Why one journal entered the environment: which side(s) of the rule it passed."""

    journal_id: str
    by_citing: bool  # seed cites this journal above the fraction of its total citing
    by_cited: bool  # this journal cites the seed above the fraction of its total cited

    @property
    def side(self) -> str:
        if self.by_citing and self.by_cited:
            return "both"
        if self.by_citing:
            return "citing"
        if self.by_cited:
            return "cited"
        return "seed"


@dataclass(frozen=True)
class LocalEnvironment:
    """A seed journal with its selected neighbors and their mutual citation cells."""

    seed: str
    fraction: float
    selections: tuple[MemberSelection, ...]  # in parent matrix order, seed included
    submatrix: CitationMatrix

    @property
    def members(self) -> tuple[str, ...]:
        return tuple(s.journal_id for s in self.selections)

    @property
    def size(self) -> int:
        """Member count, including the seed."""
        return len(self.selections)


def local_environment(
    matrix: CitationMatrix,
    seed: str,
    fraction: float = DEFAULT_FRACTION,
) -> LocalEnvironment:
    """Select the journals exchanging more than ``fraction`` of the seed's totals.

    The test is a strict union: cell(seed→j) > fraction·total-citing(seed)
    OR cell(j→seed) > fraction·total-cited(seed). Totals include
    self-citations. The seed is always a member.
    """
    if fraction < 0.0:
        raise ValueError(f"fraction must be nonnegative, got {fraction}")
    registry = matrix.registry
    if seed not in registry:
        raise ValueError(f"unknown seed journal {seed!r}")
    seed_idx = registry.index_of(seed)
    margins = marginals(matrix)
    citing_total = int(margins.total_citing[seed_idx])
    cited_total = int(margins.total_cited[seed_idx])
    if citing_total == 0 and cited_total == 0:
        raise ValueError(
            f"seed journal {seed!r} has zero total citing and zero total cited; "
            "the fraction test has no denominator"
        )

    citing_floor = fraction * citing_total
    cited_floor = fraction * cited_total
    selections = []
    for j, jid in enumerate(registry.ids):
        if j == seed_idx:
            selections.append(MemberSelection(jid, by_citing=False, by_cited=False))
            continue
        by_citing = matrix.count(seed, jid) > citing_floor
        by_cited = matrix.count(jid, seed) > cited_floor
        if by_citing or by_cited:
            selections.append(MemberSelection(jid, by_citing=by_citing, by_cited=by_cited))

    member_ids = {s.journal_id for s in selections}
    sub_registry = make_registry([rec for rec in registry.records if rec.id in member_ids])
    remap = {registry.index_of(jid): sub_registry.index_of(jid) for jid in member_ids}
    cells = {
        (remap[i], remap[j]): count
        for (i, j), count in matrix.cells.items()
        if i in remap and j in remap
    }
    return LocalEnvironment(
        seed=seed,
        fraction=fraction,
        selections=tuple(selections),
        submatrix=CitationMatrix(registry=sub_registry, cells=cells),
    )


def local_factor_analysis(
    env: LocalEnvironment,
    k: int | None = None,
    diagonal_policy: str = "kept",
) -> FactorModel:
    """Factor the environment's citing patterns: correlate, extract, rotate."""
    if env.size < 3:
        raise ValueError(
            f"environment of {env.seed!r} has only {env.size} members (including seed); "
            "factor analysis needs at least 3"
        )
    corr = citing_correlation(env.submatrix, diagonal_policy=diagonal_policy)
    return varimax(extract(corr, k=k))


@dataclass(frozen=True)
class ComplexityReport:
    """How much journals load on more than one factor.

    ``counts[i]`` is the number of factors on which journal
    ``journal_ids[i]`` loads at or above ``floor`` in absolute value;
    ``fill_ratio`` is the fraction of all loading cells at or above the
    floor. A clean simple structure gives counts of one and a fill ratio
    of 1/k; substantial off-diagonal filling signals journals serving
    several specialties at once.
    """

    journal_ids: tuple[str, ...]
    floor: float
    counts: tuple[int, ...]
    fill_ratio: float

    def multi_loaders(self) -> tuple[str, ...]:
        """Journals loading on two or more factors at the floor."""
        return tuple(jid for jid, c in zip(self.journal_ids, self.counts) if c >= 2)


def interfactorial_complexity(model: FactorModel, floor: float = COMPLEXITY_FLOOR) -> ComplexityReport:
    """Count per-journal loadings at or above ``floor`` and the overall fill ratio."""
    if floor < 0.0:
        raise ValueError(f"floor must be nonnegative, got {floor}")
    hits = np.abs(model.loadings) >= floor
    counts = tuple(int(c) for c in hits.sum(axis=1))
    return ComplexityReport(
        journal_ids=model.journal_ids,
        floor=floor,
        counts=counts,
        fill_ratio=float(hits.sum()) / (model.n * model.k),
    )
