"""Command-line pipeline: files in, reproducible analysis files out.

Every output file starts with a provenance block — tool version, the
resolved analysis settings, and SHA-256 digests of the input files — so a
rerun on identical inputs is byte-identical and auditable. Settings come
from built-in defaults, overridden by an optional key-value config file,
overridden by command-line flags.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .corpus import CitationMatrix, density, ingest_edges, ingest_registry
from .correlate import citing_correlation, correlation_pairs
from .factor import extract, loading_table, model_payload, table_text, varimax
from .graph import threshold_graph, threshold_sweep
from .local import interfactorial_complexity, local_environment, local_factor_analysis
from .mds import classical_mds, correlation_to_distance, factor_plot, layout_rows, svg_scatter
from .pajek import citation_network, threshold_network

DEFAULTS: dict[str, object] = {
    "registry": None,
    "edges": None,
    "out": ".",
    "auto_register": False,
    "axis": "citing-rows",
    "diagonal": "kept",
    "floor": 0.0,
    "threshold_start": 0.2,
    "step": 0.1,
    "stop": 0.9,
    "min_size": 3,
    "k": None,
    "suppress": 0.1,
    "top": None,
    "tol": 1e-7,
    "max_sweeps": 100,
    "f1": 1,
    "f2": 2,
    "seed": None,
    "fraction": 0.01,
    "complexity_floor": 0.1,
    "variant": "one-minus-r",
    "dim": 2,
    "letters": False,
    "threshold": None,
}

_FLOAT_KEYS = {"floor", "threshold_start", "step", "stop", "suppress", "tol", "fraction", "complexity_floor", "threshold"}
_INT_KEYS = {"min_size", "k", "top", "max_sweeps", "f1", "f2", "dim"}
_BOOL_KEYS = {"auto_register", "letters"}


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved settings for one command invocation."""

    command: str
    values: dict[str, object]

    def __getattr__(self, key: str):
        try:
            return self.values[key]
        except KeyError:
            raise AttributeError(key) from None

    def settings_echo(self) -> dict[str, object]:
        """Analysis knobs only — file paths stay out of provenance."""
        skip = {"registry", "edges", "out"}
        return {k: self.values[k] for k in sorted(self.values) if k not in skip}


def _parse_config_file(path: str) -> dict[str, object]:
    values: dict[str, object] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno} is not `key = value`: {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in DEFAULTS:
            raise ValueError(f"unknown config key {key!r} at line {lineno}")
        values[key] = _coerce(key, value.strip())
    return values


def _coerce(key: str, raw: str) -> object:
    if key in _BOOL_KEYS:
        lowered = raw.lower()
        if lowered in {"true", "yes", "1"}:
            return True
        if lowered in {"false", "no", "0"}:
            return False
        raise ValueError(f"config key {key!r} expects true/false, got {raw!r}")
    if key in _INT_KEYS:
        return int(raw)
    if key in _FLOAT_KEYS:
        return float(raw)
    return raw


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    values = dict(DEFAULTS)
    if getattr(args, "config", None):
        values.update(_parse_config_file(args.config))
    for key in DEFAULTS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            values[key] = flag_value
    return RunConfig(command=args.command, values=values)


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _load_matrix(cfg: RunConfig) -> CitationMatrix:
    if not cfg.registry:
        raise ValueError("a registry file is required (--registry or config key `registry`)")
    if not cfg.edges:
        raise ValueError("an edge file is required (--edges or config key `edges`)")
    with open(cfg.registry, newline="", encoding="utf-8") as fh:
        registry = ingest_registry(fh)
    with open(cfg.edges, newline="", encoding="utf-8") as fh:
        return ingest_edges(fh, registry, auto_register=bool(cfg.auto_register))


def _provenance(cfg: RunConfig) -> dict[str, object]:
    return {
        "tool": f"scimap {__version__}",
        "command": cfg.command,
        "registry_sha256": _sha256(str(cfg.registry)),
        "edges_sha256": _sha256(str(cfg.edges)),
        "settings": cfg.settings_echo(),
    }


def _comment_lines(provenance: dict[str, object]) -> list[str]:
    settings = " ".join(f"{k}={v}" for k, v in provenance["settings"].items())
    return [
        str(provenance["tool"]),
        f"command: {provenance['command']}",
        f"registry sha256: {provenance['registry_sha256']}",
        f"edges sha256: {provenance['edges_sha256']}",
        f"settings: {settings}",
    ]


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(str(cfg.out))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_text(path: Path, body: str) -> None:
    path.write_text(body, encoding="utf-8", newline="\n")


def _write_csv(path: Path, provenance: dict[str, object], header: list[str], rows: list[list[str]]) -> None:
    lines = [f"# {line}" for line in _comment_lines(provenance)]
    lines.append(",".join(header))
    lines.extend(",".join(row) for row in rows)
    _write_text(path, "\n".join(lines) + "\n")


def _write_json(path: Path, provenance: dict[str, object], payload: dict) -> None:
    _write_text(path, json.dumps({"provenance": provenance, **payload}, indent=2) + "\n")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def cmd_density(cfg: RunConfig) -> int:
    matrix = _load_matrix(cfg)
    report = density(matrix)
    payload = report.as_dict()
    payload["density_exact"] = f"{report.density.numerator}/{report.density.denominator}"
    payload["corrected_exact"] = f"{report.corrected_density.numerator}/{report.corrected_density.denominator}"
    _write_json(_out_dir(cfg) / "density.json", _provenance(cfg), payload)
    print(
        f"{report.n} journals, {report.e} of {report.possible} cells filled: "
        f"density {report.density_percent()}, corrected {report.corrected_percent()} "
        f"after dropping {report.singles} single occurrences"
    )
    return 0


def cmd_correlate(cfg: RunConfig) -> int:
    matrix = _load_matrix(cfg)
    corr = citing_correlation(matrix, axis=str(cfg.axis), diagonal_policy=str(cfg.diagonal))
    pairs = correlation_pairs(corr, floor=float(cfg.floor))
    provenance = _provenance(cfg)
    rows = [[a, b, _fmt(r)] for a, b, r in pairs]
    out = _out_dir(cfg)
    _write_csv(out / "correlations.csv", provenance, ["journal_a", "journal_b", "r"], rows)
    invalid = corr.invalid_ids()
    _write_json(
        out / "correlations.json",
        provenance,
        {
            "n": corr.n,
            "pairs_written": len(pairs),
            "floor": float(cfg.floor),
            "invalid": list(invalid),
        },
    )
    print(f"{len(pairs)} journal pairs with |r| > {_fmt(float(cfg.floor))}; {len(invalid)} journals had no citing variance")
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    matrix = _load_matrix(cfg)
    corr = citing_correlation(matrix, axis=str(cfg.axis), diagonal_policy=str(cfg.diagonal))
    report = threshold_sweep(
        corr,
        start=float(cfg.threshold_start),
        step=float(cfg.step),
        stop=float(cfg.stop),
        min_size=int(cfg.min_size),
    )
    provenance = _provenance(cfg)
    out = _out_dir(cfg)

    summary_rows = [[_fmt(t), str(c), str(j)] for t, c, j in report.summary_rows()]
    _write_csv(out / "sweep_summary.csv", provenance, ["threshold", "components", "journals_covered"], summary_rows)

    flat: list[list[str]] = []
    for cs in report.component_sets:
        for rank, comp in enumerate(cs.components, start=1):
            for jid in comp:
                flat.append([_fmt(cs.threshold), str(rank), jid])
    _write_csv(out / "components.csv", provenance, ["threshold", "component_rank", "journal_id"], flat)

    _write_json(
        out / "sweep.json",
        provenance,
        {
            "thresholds": [
                {
                    "threshold": cs.threshold,
                    "components": [list(comp) for comp in cs.components],
                    "articulation_points": list(cs.articulation_points),
                    "journals_covered": cs.coverage,
                }
                for cs in report.component_sets
            ]
        },
    )
    for t, c, j in report.summary_rows():
        print(f"r >= {_fmt(t)}: {c} components, {j} journals")
    return 0


def _fit_factors(cfg: RunConfig, corr) -> object:
    model = extract(corr, k=cfg.k if cfg.k is None else int(cfg.k))
    return varimax(model, tol=float(cfg.tol), max_sweeps=int(cfg.max_sweeps))


def _write_model(cfg: RunConfig, model, provenance: dict[str, object], prefix: str) -> None:
    out = _out_dir(cfg)
    suppress = float(cfg.suppress)
    top = None if cfg.top is None else int(cfg.top)
    rows = loading_table(model, suppress=suppress, top=top)
    csv_rows = [[row.journal_id, str(row.primary_factor), *row.cells] for row in rows]
    header = ["journal_id", "primary_factor"] + [str(f + 1) for f in range(model.k)]
    _write_csv(out / f"{prefix}_loadings.csv", provenance, header, csv_rows)
    text_lines = [f"# {line}" for line in _comment_lines(provenance)]
    text_lines.append(table_text(model, suppress=suppress, top=top).rstrip("\n"))
    _write_text(out / f"{prefix}_loadings.txt", "\n".join(text_lines) + "\n")
    _write_json(out / f"{prefix}_model.json", provenance, model_payload(model))


def cmd_factors(cfg: RunConfig) -> int:
    matrix = _load_matrix(cfg)
    corr = citing_correlation(matrix, axis=str(cfg.axis), diagonal_policy=str(cfg.diagonal))
    model = _fit_factors(cfg, corr)
    provenance = _provenance(cfg)
    _write_model(cfg, model, provenance, "factor")
    out = _out_dir(cfg)
    f1, f2 = int(cfg.f1), int(cfg.f2)
    if model.k >= max(f1, f2):
        layout = factor_plot(model, f1=f1, f2=f2)
        coord_rows = [[jid, _fmt(x), _fmt(y)] for jid, x, y in layout_rows(layout)]
        _write_csv(out / "factor_plot.csv", provenance, ["journal_id", "x", "y"], coord_rows)
        comment = "; ".join(_comment_lines(provenance))
        _write_text(out / "factor_plot.svg", svg_scatter(layout, letter_labels=bool(cfg.letters), header_comment=comment))
    rot = model.rotation
    state = f"converged in {rot.iterations} sweeps" if rot.converged else f"stopped unconverged after {rot.iterations} sweeps"
    print(
        f"{model.k} factors over {model.n} journals, explained variance "
        f"{100.0 * model.explained_variance:.1f}%, rotation {state}"
    )
    return 0


def cmd_local(cfg: RunConfig) -> int:
    if not cfg.seed:
        raise ValueError("a seed journal id is required (--seed or config key `seed`)")
    matrix = _load_matrix(cfg)
    env = local_environment(matrix, str(cfg.seed), fraction=float(cfg.fraction))
    provenance = _provenance(cfg)
    out = _out_dir(cfg)
    _write_json(
        out / "environment.json",
        provenance,
        {
            "seed": env.seed,
            "fraction": env.fraction,
            "member_count_including_seed": env.size,
            "members": [{"journal_id": s.journal_id, "side": s.side} for s in env.selections],
            "submatrix_edges": [
                {"citing_id": a, "cited_id": b, "count": c} for a, b, c in env.submatrix.sorted_edges()
            ],
        },
    )
    model = local_factor_analysis(env, k=cfg.k if cfg.k is None else int(cfg.k))
    _write_model(cfg, model, provenance, "local")
    complexity = interfactorial_complexity(model, floor=float(cfg.complexity_floor))
    _write_json(
        out / "complexity.json",
        provenance,
        {
            "floor": complexity.floor,
            "fill_ratio": complexity.fill_ratio,
            "counts": [
                {"journal_id": jid, "factors_loaded": c}
                for jid, c in zip(complexity.journal_ids, complexity.counts)
            ],
            "multi_loaders": list(complexity.multi_loaders()),
        },
    )
    print(
        f"environment of {env.seed}: {env.size} journals including seed; "
        f"{model.k} factors, fill ratio {complexity.fill_ratio:.3f} at floor {complexity.floor}"
    )
    return 0


def cmd_mds(cfg: RunConfig) -> int:
    matrix = _load_matrix(cfg)
    corr = citing_correlation(matrix, axis=str(cfg.axis), diagonal_policy=str(cfg.diagonal))
    dist = correlation_to_distance(corr, variant=str(cfg.variant))
    layout = classical_mds(dist, dim=int(cfg.dim))
    provenance = _provenance(cfg)
    out = _out_dir(cfg)
    header = ["journal_id"] + (["x", "y"] if layout.coords.shape[1] == 2 else [f"c{t + 1}" for t in range(layout.coords.shape[1])])
    rows = [
        [jid] + [_fmt(float(v)) for v in layout.coords[i]]
        for i, jid in enumerate(layout.journal_ids)
    ]
    _write_csv(out / "coordinates.csv", provenance, header, rows)
    comment = "; ".join(_comment_lines(provenance))
    _write_text(out / "map.svg", svg_scatter(layout, letter_labels=bool(cfg.letters), header_comment=comment))
    _write_json(
        out / "mds.json",
        provenance,
        {
            "variant": dist.variant,
            "dim": int(cfg.dim),
            "stress": layout.stress,
            "negative_eigenvalue_magnitudes": list(layout.negative_magnitudes),
            "journals": list(layout.journal_ids),
        },
    )
    print(f"embedded {layout.n} journals in {int(cfg.dim)}-d, stress {layout.stress:.6g}")
    return 0


def cmd_export_pajek(cfg: RunConfig) -> int:
    matrix = _load_matrix(cfg)
    provenance = _provenance(cfg)
    comments = tuple(_comment_lines(provenance))
    out = _out_dir(cfg)
    if cfg.threshold is None:
        _write_text(out / "citations.net", citation_network(matrix, comments=comments))
        print(f"wrote citation digraph: {matrix.n} vertices, {matrix.e} arcs")
    else:
        corr = citing_correlation(matrix, axis=str(cfg.axis), diagonal_policy=str(cfg.diagonal))
        graph = threshold_graph(corr, float(cfg.threshold))
        _write_text(out / "threshold.net", threshold_network(graph, comments=comments))
        print(f"wrote threshold graph at r >= {_fmt(float(cfg.threshold))}: {graph.n} vertices, {len(graph.edges)} edges")
    return 0


_COMMANDS = {
    "density": cmd_density,
    "correlate": cmd_correlate,
    "sweep": cmd_sweep,
    "factors": cmd_factors,
    "local": cmd_local,
    "mds": cmd_mds,
    "export-pajek": cmd_export_pajek,
}


def build_parser() -> argparse.ArgumentParser:
    io = argparse.ArgumentParser(add_help=False)
    io.add_argument("--registry", help="journal registry CSV (id,title,english_original)")
    io.add_argument("--edges", help="citation edge CSV (citing_id,cited_id,count)")
    io.add_argument("--out", help="output directory (default: current directory)")
    io.add_argument("--config", help="key = value settings file; flags override it")
    io.add_argument("--auto-register", action="store_const", const=True, dest="auto_register",
                    help="add edge-file journals missing from the registry")

    corr = argparse.ArgumentParser(add_help=False)
    corr.add_argument("--axis", choices=["citing-rows", "cited-columns"], help="pattern orientation (default citing-rows)")
    corr.add_argument("--diagonal", choices=["kept", "zeroed"], help="self-citation cells: kept or zeroed (default kept)")

    parser = argparse.ArgumentParser(prog="scimap", description="Map journal citation structure: correlations, components, factors, local environments, and 2-d layouts.")
    parser.add_argument("--version", action="version", version=f"scimap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("density", parents=[io], help="matrix fill statistics with the single-citation correction")

    p = sub.add_parser("correlate", parents=[io, corr], help="pairwise correlations of citation patterns")
    p.add_argument("--floor", type=float, help="write only pairs with |r| above this (default 0)")

    p = sub.add_parser("sweep", parents=[io, corr], help="bi-connected components across a threshold grid")
    p.add_argument("--threshold-start", type=float, dest="threshold_start", help="first threshold (default 0.2)")
    p.add_argument("--step", type=float, help="threshold increment (default 0.1)")
    p.add_argument("--stop", type=float, help="last threshold (default 0.9)")
    p.add_argument("--min-size", type=int, dest="min_size", help="smallest component to report (default 3)")

    p = sub.add_parser("factors", parents=[io, corr], help="principal components with varimax rotation")
    p.add_argument("--k", type=int, help="force the factor count (default: eigenvalues above 1)")
    p.add_argument("--suppress", type=float, help="blank out table loadings below this magnitude (default 0.1)")
    p.add_argument("--top", type=int, help="journals kept per factor in tables (default: all)")
    p.add_argument("--f1", type=int, help="first plotted factor, 1-based (default 1)")
    p.add_argument("--f2", type=int, help="second plotted factor, 1-based (default 2)")
    p.add_argument("--letters", action="store_const", const=True, help="letter-coded plot labels with a legend")

    p = sub.add_parser("local", parents=[io, corr], help="seed journal environment and its factor structure")
    p.add_argument("--seed", help="seed journal id")
    p.add_argument("--fraction", type=float, help="selection fraction of the seed's totals (default 0.01)")
    p.add_argument("--k", type=int, help="force the factor count")
    p.add_argument("--suppress", type=float, help="blank out table loadings below this magnitude (default 0.1)")
    p.add_argument("--top", type=int, help="journals kept per factor in tables (default: all)")

    p = sub.add_parser("mds", parents=[io, corr], help="metric multidimensional scaling map")
    p.add_argument("--variant", choices=["one-minus-r", "euclidean"], help="distance transform (default one-minus-r)")
    p.add_argument("--dim", type=int, help="embedding dimension (default 2)")
    p.add_argument("--letters", action="store_const", const=True, help="letter-coded plot labels with a legend")

    p = sub.add_parser("export-pajek", parents=[io, corr], help="write Pajek .net files")
    p.add_argument("--threshold", type=float, help="export the threshold graph at this r instead of the citation digraph")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        return _COMMANDS[args.command](cfg)
    except (ValueError, OSError) as exc:
        print(f"scimap: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
