from __future__ import annotations

import hashlib
import json
from pathlib import Path

import pytest

import synth
from scimap.cli import main

COMMENT_LINES = 5  # tool, command, two digests, settings echo


@pytest.fixture(scope="module")
def corpus_files(tmp_path_factory) -> tuple[str, str]:
    base = tmp_path_factory.mktemp("corpus")
    registry = base / "registry.csv"
    edges = base / "edges.csv"
    synth.write_corpus_csv(synth.single_block_corpus(), registry, edges)
    return str(registry), str(edges)


def run(command: str, corpus_files, out: Path, *extra: str, capsys=None) -> tuple[int, str]:
    registry, edges = corpus_files
    argv = [command, "--registry", registry, "--edges", edges, "--out", str(out), *extra]
    rc = main(argv)
    stdout = capsys.readouterr().out if capsys else ""
    return rc, stdout


def body_lines(path: Path) -> list[str]:
    lines = path.read_text(encoding="utf-8").splitlines()
    assert all(line.startswith("# ") for line in lines[:COMMENT_LINES])
    return lines[COMMENT_LINES:]


def read_json(path: Path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


class TestDensity:
    def test_outputs_and_stdout(self, corpus_files, tmp_path, capsys):
        rc, out = run("density", corpus_files, tmp_path, capsys=capsys)
        assert rc == 0
        payload = read_json(tmp_path / "density.json")
        assert payload["n"] == 15
        assert "/" in payload["density_exact"]
        assert payload["provenance"]["command"] == "density"
        assert "15 journals" in out
        assert "%" in out

    def test_provenance_digests_match_inputs(self, corpus_files, tmp_path, capsys):
        run("density", corpus_files, tmp_path, capsys=capsys)
        payload = read_json(tmp_path / "density.json")
        registry, edges = corpus_files
        assert payload["provenance"]["registry_sha256"] == hashlib.sha256(Path(registry).read_bytes()).hexdigest()
        assert payload["provenance"]["edges_sha256"] == hashlib.sha256(Path(edges).read_bytes()).hexdigest()

    def test_no_file_paths_in_provenance(self, corpus_files, tmp_path, capsys):
        run("density", corpus_files, tmp_path, capsys=capsys)
        payload = read_json(tmp_path / "density.json")
        echoed = json.dumps(payload["provenance"]["settings"])
        assert "registry" not in echoed
        assert str(tmp_path) not in echoed


class TestCorrelate:
    def test_pair_listing(self, corpus_files, tmp_path, capsys):
        rc, out = run("correlate", corpus_files, tmp_path, capsys=capsys)
        assert rc == 0
        lines = body_lines(tmp_path / "correlations.csv")
        assert lines[0] == "journal_a,journal_b,r"
        assert len(lines) - 1 == 15 * 14 // 2
        for line in lines[1:]:
            a, b, r = line.split(",")
            assert a < b or True  # ids are distinct strings
            assert -1.0 - 1e-9 <= float(r) <= 1.0 + 1e-9
        meta = read_json(tmp_path / "correlations.json")
        assert meta["invalid"] == []
        assert meta["pairs_written"] == len(lines) - 1
        assert "journal pairs" in out

    def test_floor_prunes_pairs(self, corpus_files, tmp_path, capsys):
        run("correlate", corpus_files, tmp_path / "all", capsys=capsys)
        run("correlate", corpus_files, tmp_path / "some", "--floor", "0.8", capsys=capsys)
        full = body_lines(tmp_path / "all" / "correlations.csv")
        pruned = body_lines(tmp_path / "some" / "correlations.csv")
        assert 0 < len(pruned) < len(full)
        for line in pruned[1:]:
            assert abs(float(line.split(",")[2])) > 0.8


class TestSweep:
    def test_grid_and_block_recovery(self, corpus_files, tmp_path, capsys):
        rc, out = run("sweep", corpus_files, tmp_path, capsys=capsys)
        assert rc == 0
        summary = body_lines(tmp_path / "sweep_summary.csv")
        assert summary[0] == "threshold,components,journals_covered"
        assert [row.split(",")[0] for row in summary[1:]] == [
            "0.2", "0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9",
        ]
        payload = read_json(tmp_path / "sweep.json")
        at_08 = next(t for t in payload["thresholds"] if t["threshold"] == 0.8)
        assert at_08["components"] == [["B0J00", "B0J01", "B0J02", "B0J03", "B0J04"]]
        assert "r >= 0.8: 1 components, 5 journals" in out

    def test_components_listing_matches_json(self, corpus_files, tmp_path, capsys):
        run("sweep", corpus_files, tmp_path, capsys=capsys)
        listed = set()
        for line in body_lines(tmp_path / "components.csv")[1:]:
            threshold, rank, jid = line.split(",")
            listed.add((threshold, int(rank), jid))
        payload = read_json(tmp_path / "sweep.json")
        expected = set()
        for entry in payload["thresholds"]:
            for rank, comp in enumerate(entry["components"], start=1):
                for jid in comp:
                    expected.add((f"{entry['threshold']:.12g}", rank, jid))
        assert listed == expected


class TestFactors:
    def test_model_files(self, corpus_files, tmp_path, capsys):
        rc, out = run("factors", corpus_files, tmp_path, "--k", "2", capsys=capsys)
        assert rc == 0
        loadings = body_lines(tmp_path / "factor_loadings.csv")
        assert loadings[0] == "journal_id,primary_factor,1,2"
        assert len(loadings) - 1 == 15
        model = read_json(tmp_path / "factor_model.json")
        assert model["k"] == 2
        assert model["rotation"]["method"] == "varimax"
        text = (tmp_path / "factor_loadings.txt").read_text(encoding="utf-8")
        assert "journal" in text
        assert "2 factors over 15 journals" in out
        assert "rotation converged" in out

    def test_plot_written_when_axes_exist(self, corpus_files, tmp_path, capsys):
        run("factors", corpus_files, tmp_path, "--k", "2", capsys=capsys)
        plot = body_lines(tmp_path / "factor_plot.csv")
        assert plot[0] == "journal_id,x,y"
        svg = (tmp_path / "factor_plot.svg").read_text(encoding="utf-8")
        assert svg.startswith("<!-- scimap")
        assert "<svg" in svg

    def test_plot_skipped_for_single_factor(self, corpus_files, tmp_path, capsys):
        run("factors", corpus_files, tmp_path, "--k", "1", capsys=capsys)
        assert not (tmp_path / "factor_plot.csv").exists()
        assert (tmp_path / "factor_loadings.csv").exists()

    def test_suppress_blanks_cells(self, corpus_files, tmp_path, capsys):
        run("factors", corpus_files, tmp_path / "hi", "--k", "2", "--suppress", "0.9", capsys=capsys)
        rows = body_lines(tmp_path / "hi" / "factor_loadings.csv")[1:]
        assert any(row.endswith(",") or ",," in row for row in rows)


class TestLocal:
    def test_environment_and_model_files(self, corpus_files, tmp_path, capsys):
        rc, out = run("local", corpus_files, tmp_path, "--seed", "B0J01", capsys=capsys)
        assert rc == 0
        env = read_json(tmp_path / "environment.json")
        assert env["seed"] == "B0J01"
        sides = {m["journal_id"]: m["side"] for m in env["members"]}
        assert sides["B0J01"] == "seed"
        assert env["member_count_including_seed"] == len(env["members"]) >= 3
        assert (tmp_path / "local_loadings.csv").exists()
        assert (tmp_path / "local_model.json").exists()
        complexity = read_json(tmp_path / "complexity.json")
        assert 0.0 <= complexity["fill_ratio"] <= 1.0
        assert {c["journal_id"] for c in complexity["counts"]} <= set(sides)
        assert "environment of B0J01" in out

    def test_submatrix_edges_only_among_members(self, corpus_files, tmp_path, capsys):
        run("local", corpus_files, tmp_path, "--seed", "B0J01", capsys=capsys)
        env = read_json(tmp_path / "environment.json")
        members = {m["journal_id"] for m in env["members"]}
        for edge in env["submatrix_edges"]:
            assert edge["citing_id"] in members
            assert edge["cited_id"] in members
            assert edge["count"] > 0

    def test_seed_required(self, corpus_files, tmp_path, capsys):
        registry, edges = corpus_files
        rc = main(["local", "--registry", registry, "--edges", edges, "--out", str(tmp_path)])
        assert rc == 2
        assert "seed journal id is required" in capsys.readouterr().err

    def test_unknown_seed(self, corpus_files, tmp_path, capsys):
        registry, edges = corpus_files
        rc = main(["local", "--registry", registry, "--edges", edges, "--out", str(tmp_path), "--seed", "nope"])
        assert rc == 2
        assert "unknown seed journal 'nope'" in capsys.readouterr().err


class TestMds:
    def test_coordinates_and_map(self, corpus_files, tmp_path, capsys):
        rc, out = run("mds", corpus_files, tmp_path, capsys=capsys)
        assert rc == 0
        coords = body_lines(tmp_path / "coordinates.csv")
        assert coords[0] == "journal_id,x,y"
        assert len(coords) - 1 == 15
        payload = read_json(tmp_path / "mds.json")
        assert payload["variant"] == "one-minus-r"
        assert payload["stress"] >= 0.0
        assert (tmp_path / "map.svg").read_text(encoding="utf-8").startswith("<!-- scimap")
        assert "embedded 15 journals in 2-d" in out

    def test_higher_dimension_headers(self, corpus_files, tmp_path, capsys):
        run("mds", corpus_files, tmp_path, "--dim", "3", "--variant", "euclidean", capsys=capsys)
        coords = body_lines(tmp_path / "coordinates.csv")
        assert coords[0] == "journal_id,c1,c2,c3"
        assert read_json(tmp_path / "mds.json")["variant"] == "euclidean"


class TestExportPajek:
    def test_citation_digraph(self, corpus_files, tmp_path, capsys):
        rc, out = run("export-pajek", corpus_files, tmp_path, capsys=capsys)
        assert rc == 0
        net = (tmp_path / "citations.net").read_text(encoding="utf-8")
        lines = net.splitlines()
        assert lines[0].startswith("% scimap")
        assert "*Vertices 15" in lines
        assert "*Arcs" in lines
        assert "wrote citation digraph: 15 vertices" in out

    def test_threshold_graph(self, corpus_files, tmp_path, capsys):
        rc, out = run("export-pajek", corpus_files, tmp_path, "--threshold", "0.8", capsys=capsys)
        assert rc == 0
        net = (tmp_path / "threshold.net").read_text(encoding="utf-8")
        assert "*Edges" in net
        assert "wrote threshold graph at r >= 0.8" in out


class TestConfigFile:
    def test_config_sets_defaults_and_flags_win(self, corpus_files, tmp_path, capsys):
        cfg = tmp_path / "scimap.cfg"
        cfg.write_text("# sweep window\nthreshold-start = 0.4\nstop = 0.6\nmin-size = 2\n", encoding="utf-8")
        run("sweep", corpus_files, tmp_path / "a", "--config", str(cfg), capsys=capsys)
        grid_a = [row.split(",")[0] for row in body_lines(tmp_path / "a" / "sweep_summary.csv")[1:]]
        assert grid_a == ["0.4", "0.5", "0.6"]

        run("sweep", corpus_files, tmp_path / "b", "--config", str(cfg), "--stop", "0.4", capsys=capsys)
        grid_b = [row.split(",")[0] for row in body_lines(tmp_path / "b" / "sweep_summary.csv")[1:]]
        assert grid_b == ["0.4"]

    def test_unknown_key_rejected(self, corpus_files, tmp_path, capsys):
        registry, edges = corpus_files
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("verbosity = 3\n", encoding="utf-8")
        rc = main(["density", "--registry", registry, "--edges", edges, "--out", str(tmp_path), "--config", str(cfg)])
        assert rc == 2
        assert "unknown config key 'verbosity'" in capsys.readouterr().err

    def test_malformed_line_rejected(self, corpus_files, tmp_path, capsys):
        registry, edges = corpus_files
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("just some words\n", encoding="utf-8")
        rc = main(["density", "--registry", registry, "--edges", edges, "--out", str(tmp_path), "--config", str(cfg)])
        assert rc == 2
        assert "config line 1" in capsys.readouterr().err


class TestFailureModes:
    def test_missing_registry_file(self, tmp_path, capsys):
        rc = main(["density", "--registry", str(tmp_path / "absent.csv"), "--edges", str(tmp_path / "also.csv"), "--out", str(tmp_path)])
        assert rc == 2
        assert "absent.csv" in capsys.readouterr().err

    def test_registry_flag_required(self, tmp_path, capsys):
        rc = main(["density", "--out", str(tmp_path)])
        assert rc == 2
        assert "registry file is required" in capsys.readouterr().err

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert capsys.readouterr().out.startswith("scimap ")


class TestDeterminism:
    def test_rerun_is_byte_identical(self, corpus_files, tmp_path, capsys):
        for out in ("one", "two"):
            run("sweep", corpus_files, tmp_path / out, capsys=capsys)
            run("factors", corpus_files, tmp_path / out, "--k", "2", capsys=capsys)
        first = sorted((tmp_path / "one").iterdir())
        second = sorted((tmp_path / "two").iterdir())
        assert [p.name for p in first] == [p.name for p in second]
        for a, b in zip(first, second):
            assert a.read_bytes() == b.read_bytes(), a.name
