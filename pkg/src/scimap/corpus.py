"""Citation corpus: journal registries, sparse citing->cited count matrices, density accounting."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO, Iterable, Iterator

import numpy as np

REGISTRY_HEADER = ("id", "title", "english_original")
EDGE_HEADER = ("citing_id", "cited_id", "count")

_BOOL_VALUES = {"true": True, "false": False}


@dataclass(frozen=True)
class JournalRecord:
    """One registry row. `english_original` records whether the title was originally English."""

    id: str
    title: str
    english_original: bool


@dataclass(frozen=True)
class Registry:
    """Ordered journal registry; file order defines matrix indices.

    All public outputs reference journals by id; the index order is an
    internal detail of the matrix representation.
    """

    records: tuple[JournalRecord, ...]
    index: dict[str, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[JournalRecord]:
        return iter(self.records)

    def __contains__(self, journal_id: str) -> bool:
        return journal_id in self.index

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(rec.id for rec in self.records)

    def index_of(self, journal_id: str) -> int:
        try:
            return self.index[journal_id]
        except KeyError:
            raise ValueError(f"unknown journal id {journal_id!r}") from None


def make_registry(records: Iterable[JournalRecord]) -> Registry:
    recs = tuple(records)
    index: dict[str, int] = {}
    for i, rec in enumerate(recs):
        if not rec.id:
            raise ValueError(f"empty journal id at position {i}")
        if rec.id in index:
            raise ValueError(f"duplicate journal id {rec.id!r}")
        index[rec.id] = i
    return Registry(records=recs, index=index)


@dataclass(frozen=True)
class CitationMatrix:
    """Sparse nonnegative integer matrix of citing->cited counts.

    Zero counts are never stored; `cells` maps (citing index, cited index)
    to a count >= 1. Treat instances as immutable once built: they are safe
    to share read-only across concurrent analyses.
    """

    registry: Registry
    cells: dict[tuple[int, int], int] = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.registry)

    @property
    def e(self) -> int:
        return len(self.cells)

    @property
    def singles(self) -> int:
        return sum(1 for count in self.cells.values() if count == 1)

    def count(self, citing_id: str, cited_id: str) -> int:
        key = (self.registry.index_of(citing_id), self.registry.index_of(cited_id))
        return self.cells.get(key, 0)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n, self.n), dtype=np.float64)
        for (i, j), count in self.cells.items():
            dense[i, j] = count
        return dense

    def sorted_edges(self) -> list[tuple[str, str, int]]:
        """All stored cells as (citing_id, cited_id, count), sorted by id pair."""
        ids = self.registry.ids
        rows = [(ids[i], ids[j], count) for (i, j), count in self.cells.items()]
        rows.sort(key=lambda row: (row[0], row[1]))
        return rows


@dataclass(frozen=True)
class DensityReport:
    """Fill statistics of a citation matrix, kept as exact rationals until rendered."""

    n: int
    possible: int
    e: int
    singles: int
    density: Fraction
    corrected_density: Fraction

    def density_percent(self, decimals: int = 1) -> str:
        return format_percent(self.density, decimals)

    def corrected_percent(self, decimals: int = 1) -> str:
        return format_percent(self.corrected_density, decimals)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "possible": self.possible,
            "e": self.e,
            "singles": self.singles,
            "density": float(self.density),
            "density_percent": self.density_percent(),
            "corrected_density": float(self.corrected_density),
            "corrected_density_percent": self.corrected_percent(),
        }


@dataclass(frozen=True)
class Marginals:
    """Per-journal totals: total-citing is the row sum, total-cited the column sum."""

    total_citing: np.ndarray
    total_cited: np.ndarray

    @property
    def grand_total(self) -> int:
        return int(self.total_citing.sum())


def format_percent(value: Fraction, decimals: int = 1) -> str:
    """Render an exact fraction as a percentage, rounding half up at `decimals` places."""
    if value < 0:
        raise ValueError("percentages are nonnegative here")
    scaled = value * 100 * 10**decimals
    units = (2 * scaled.numerator + scaled.denominator) // (2 * scaled.denominator)
    digits = f"{units:0{decimals + 1}d}"
    return f"{digits[:-decimals]}.{digits[-decimals:]}%" if decimals else f"{digits}%"


def _csv_rows(source: IO[str]) -> Iterator[tuple[int, list[str]]]:
    # yields (1-based line number, fields); blank lines are skipped
    for lineno, row in enumerate(csv.reader(source), start=1):
        if not row or all(not f.strip() for f in row):
            continue
        yield lineno, [f.strip() for f in row]


def _check_header(got: list[str], expected: tuple[str, ...], what: str) -> None:
    if [f.lower() for f in got] != list(expected):
        raise ValueError(f"{what} header must be {','.join(expected)!r}, got {','.join(got)!r}")


def ingest_registry(source: IO[str]) -> Registry:
    """Read a registry CSV (`id,title,english_original` with header) preserving row order."""
    rows = _csv_rows(source)
    try:
        _, header = next(rows)
    except StopIteration:
        raise ValueError("registry file is empty (expected a header line)") from None
    _check_header(header, REGISTRY_HEADER, "registry")

    records: list[JournalRecord] = []
    seen: dict[str, int] = {}
    for lineno, fields in rows:
        if len(fields) != 3:
            raise ValueError(f"malformed registry row at line {lineno}: expected 3 fields, got {len(fields)}")
        journal_id, title, flag = fields
        if not journal_id:
            raise ValueError(f"malformed registry row at line {lineno}: empty id")
        if flag.lower() not in _BOOL_VALUES:
            raise ValueError(
                f"malformed registry row at line {lineno}: english_original must be true or false, got {flag!r}"
            )
        if journal_id in seen:
            raise ValueError(
                f"duplicate journal id {journal_id!r} at line {lineno} (first seen at line {seen[journal_id]})"
            )
        seen[journal_id] = lineno
        records.append(JournalRecord(journal_id, title, _BOOL_VALUES[flag.lower()]))
    return make_registry(records)


def ingest_edges(source: IO[str], registry: Registry, auto_register: bool = False) -> CitationMatrix:
    """Read an edge CSV (`citing_id,cited_id,count` with header) into a citation matrix.

    Counts for repeated (citing, cited) pairs are summed; diagonal
    self-citation cells are stored like any other cell. Unknown ids are
    rejected unless `auto_register` is set, in which case they are appended
    to the registry in first-seen order.
    """
    rows = _csv_rows(source)
    try:
        _, header = next(rows)
    except StopIteration:
        raise ValueError("edge file is empty (expected a header line)") from None
    _check_header(header, EDGE_HEADER, "edge")

    records = list(registry.records)
    index = dict(registry.index)

    def resolve(journal_id: str, lineno: int) -> int:
        if journal_id in index:
            return index[journal_id]
        if not auto_register:
            raise ValueError(
                f"unknown journal id {journal_id!r} at line {lineno} (pass auto_register to add unseen ids)"
            )
        index[journal_id] = len(records)
        records.append(JournalRecord(journal_id, journal_id, False))
        return index[journal_id]

    cells: dict[tuple[int, int], int] = {}
    for lineno, fields in rows:
        if len(fields) != 3:
            raise ValueError(f"malformed edge row at line {lineno}: expected 3 fields, got {len(fields)}")
        citing_id, cited_id, raw_count = fields
        if not citing_id or not cited_id:
            raise ValueError(f"malformed edge row at line {lineno}: empty journal id")
        try:
            count = int(raw_count)
        except ValueError:
            raise ValueError(f"malformed edge row at line {lineno}: count must be an integer, got {raw_count!r}") from None
        if count <= 0:
            raise ValueError(f"invalid count {count} at line {lineno}: counts must be positive")
        key = (resolve(citing_id, lineno), resolve(cited_id, lineno))
        cells[key] = cells.get(key, 0) + count

    final_registry = registry if len(records) == len(registry) else Registry(tuple(records), index)
    return CitationMatrix(registry=final_registry, cells=cells)


def export_edges(matrix: CitationMatrix, sink: IO[str]) -> None:
    """Write the matrix as an edge CSV, rows sorted by (citing_id, cited_id) for bit-exact round-trips."""
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(EDGE_HEADER)
    for citing_id, cited_id, count in matrix.sorted_edges():
        writer.writerow([citing_id, cited_id, count])


def density(matrix: CitationMatrix) -> DensityReport:
    """Fill statistics with the single-citation correction, in exact rational arithmetic."""
    n = matrix.n
    if n < 1:
        raise ValueError("density needs at least one journal")
    possible = n * n
    e = matrix.e
    singles = matrix.singles
    return DensityReport(
        n=n,
        possible=possible,
        e=e,
        singles=singles,
        density=Fraction(e, possible),
        corrected_density=Fraction(e - singles, possible),
    )


def marginals(matrix: CitationMatrix) -> Marginals:
    """Row and column totals; both vectors sum to the grand total of all counts."""
    n = matrix.n
    total_citing = np.zeros(n, dtype=np.int64)
    total_cited = np.zeros(n, dtype=np.int64)
    for (i, j), count in matrix.cells.items():
        total_citing[i] += count
        total_cited[j] += count
    return Marginals(total_citing=total_citing, total_cited=total_cited)
