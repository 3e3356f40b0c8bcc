"""Pajek network-file rendering for citation digraphs and threshold graphs.

Pajek files are index-based by construction; vertex labels carry the
journal ids so nothing downstream needs to know our internal ordering.
Lines starting with ``%`` are Pajek comments and carry provenance.
"""

from __future__ import annotations

from .corpus import CitationMatrix
from .graph import ThresholdGraph


def _vertices_block(ids: tuple[str, ...]) -> list[str]:
    lines = [f"*Vertices {len(ids)}"]
    for i, jid in enumerate(ids, start=1):
        label = jid.replace('"', "'")
        lines.append(f'{i} "{label}"')
    return lines


def citation_network(matrix: CitationMatrix, comments: tuple[str, ...] = ()) -> str:
    """The full citing→cited digraph as `*Vertices` plus weighted `*Arcs`."""
    lines = [f"% {c}" for c in comments]
    lines += _vertices_block(matrix.registry.ids)
    lines.append("*Arcs")
    for (i, j), count in sorted(matrix.cells.items()):
        lines.append(f"{i + 1} {j + 1} {count}")
    return "\n".join(lines) + "\n"


def threshold_network(graph: ThresholdGraph, comments: tuple[str, ...] = ()) -> str:
    """An undirected threshold graph as `*Vertices` plus `*Edges`."""
    index = {jid: i for i, jid in enumerate(graph.journal_ids)}
    lines = [f"% {c}" for c in comments]
    lines += _vertices_block(graph.journal_ids)
    lines.append("*Edges")
    for a, b in graph.edges:
        lines.append(f"{index[a] + 1} {index[b] + 1}")
    return "\n".join(lines) + "\n"
