"""scimap: structure mapping for aggregated journal-journal citation data.

The pipeline runs from sparse citing→cited count matrices through Pearson
correlation of citation patterns to three complementary views of the
literature's structure: bi-connected components of correlation threshold
graphs, rotated principal-component factors (system-wide or within a seed
journal's local citation environment), and two-dimensional maps.
"""

from .corpus import (
    CitationMatrix,
    DensityReport,
    JournalRecord,
    Registry,
    density,
    export_edges,
    ingest_edges,
    ingest_registry,
    make_registry,
    marginals,
)
from .correlate import CorrelationMatrix, citing_correlation, correlation_pairs
from .eigen import EigenResult, sym_eig
from .factor import FactorModel, RotationRecord, extract, loading_table, varimax
from .graph import ComponentSet, SweepReport, ThresholdGraph, biconnected_components, threshold_graph, threshold_sweep
from .local import ComplexityReport, LocalEnvironment, interfactorial_complexity, local_environment, local_factor_analysis
from .mds import DistanceMatrix, Layout, classical_mds, correlation_to_distance, factor_plot

__version__ = "0.1.0"

__all__ = [
    "CitationMatrix",
    "ComplexityReport",
    "ComponentSet",
    "CorrelationMatrix",
    "DensityReport",
    "DistanceMatrix",
    "EigenResult",
    "FactorModel",
    "JournalRecord",
    "Layout",
    "LocalEnvironment",
    "Registry",
    "RotationRecord",
    "SweepReport",
    "ThresholdGraph",
    "biconnected_components",
    "citing_correlation",
    "classical_mds",
    "correlation_pairs",
    "correlation_to_distance",
    "density",
    "export_edges",
    "extract",
    "factor_plot",
    "ingest_edges",
    "ingest_registry",
    "interfactorial_complexity",
    "loading_table",
    "local_environment",
    "local_factor_analysis",
    "make_registry",
    "marginals",
    "sym_eig",
    "threshold_graph",
    "threshold_sweep",
    "varimax",
    "__version__",
]
