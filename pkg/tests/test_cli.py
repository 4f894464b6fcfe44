"""Tests for the divlab command line."""

import json

import pytest
from typer.testing import CliRunner

from divergence_lab.cli.main import app, parse_seed_range
from divergence_lab.errors import ContractError
from divergence_lab.identifiability.alignment import component_subsets
from divergence_lab.scenario.loader import load_scenario, scenario_hash

runner = CliRunner()

OUTPUT_FILES = ("trace-{}.jsonl", "summary-{}.csv", "agents-{}.csv", "report-{}.json")
HEADER_KEYS = {"scenario", "scenario_hash", "seed", "steps"}


def invoke(*args: str):
    return runner.invoke(app, [str(a) for a in args])


def json_output(*args: str):
    result = invoke(*args, "--json")
    assert result.exit_code == 0, result.output
    return json.loads(result.stdout)


@pytest.fixture
def twin_file(tmp_path, toy_data):
    """Toy scenario whose two agents are identical apart from their ids."""
    toy_data["agents"][1] = dict(toy_data["agents"][0], id="b")
    path = tmp_path / "twins.json"
    path.write_text(json.dumps(toy_data), encoding="utf-8")
    return path


class TestSimulate:
    """Tests for divlab simulate."""

    def test_writes_identical_files_twice(self, toy_file, tmp_path):
        for name in ("first", "second"):
            result = invoke("simulate", "-s", toy_file, "-o", tmp_path / name)
            assert result.exit_code == 0, result.output

        for pattern in OUTPUT_FILES:
            filename = pattern.format(7)
            first = (tmp_path / "first" / filename).read_bytes()
            assert first == (tmp_path / "second" / filename).read_bytes()

    def test_flags_override_run_block(self, toy_file, tmp_path):
        result = invoke("simulate", "-s", toy_file, "--seed", 11, "-n", 5, "-o", tmp_path)

        assert result.exit_code == 0, result.output
        lines = (tmp_path / "trace-11.jsonl").read_text(encoding="utf-8").splitlines()
        assert len(lines) == 5

    def test_batch_matches_single_runs(self, toy_file, tmp_path):
        batch = invoke(
            "simulate", "-s", toy_file, "--seeds", "1..3", "-n", 10, "-o", tmp_path / "b"
        )
        assert batch.exit_code == 0, batch.output

        for seed in (1, 2, 3):
            single = invoke(
                "simulate", "-s", toy_file, "--seed", seed, "-n", 10, "-o", tmp_path / "s"
            )
            assert single.exit_code == 0, single.output
            for pattern in OUTPUT_FILES:
                filename = pattern.format(seed)
                expected = (tmp_path / "s" / filename).read_bytes()
                assert (tmp_path / "b" / filename).read_bytes() == expected

    def test_invalid_scenario_exits_2(self, tmp_path, toy_data):
        toy_data["environment"]["regimes"]["base"]["probabilities"] = {"s1": 0.58, "s2": 0.4}
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(toy_data), encoding="utf-8")

        result = invoke("simulate", "-s", bad, "-o", tmp_path / "out")

        assert result.exit_code == 2
        assert "environment.regimes.base.probabilities" in result.output
        assert not (tmp_path / "out").exists()

    def test_missing_scenario_exits_3(self, tmp_path):
        result = invoke("simulate", "-s", tmp_path / "nowhere.json", "-o", tmp_path)
        assert result.exit_code == 3

    def test_bad_seed_range_exits_2(self, toy_file, tmp_path):
        result = invoke("simulate", "-s", toy_file, "--seeds", "5..1", "-o", tmp_path)
        assert result.exit_code == 2


class TestAlign:
    """Tests for divlab align."""

    def test_full_alignment_on_shared_models(self, toy_file):
        rows = json_output("align", "-s", toy_file, "-c", "R,E,S,D")["rows"]

        assert len(rows) == 1
        assert rows[0]["components"] == "R,E,S,D"
        assert rows[0]["posterior_tv"] == 0.0
        assert rows[0]["value_gap"] == 0.0
        assert rows[0]["conclusions_differ"] is False

    def test_sweep_matches_single_invocations(self):
        rows = json_output("align", "--sweep")["rows"]

        assert [r["components"] for r in rows] == [
            ",".join(c.value for c in subset) for subset in component_subsets()
        ]
        for row in rows:
            single = json_output("align", "-c", row["components"])
            assert single["rows"] == [row]

    def test_single_component_flips_conclusion(self):
        """Test promotion's exploration setting alone moves precautionary to voluntary."""
        rows = json_output("align", "-c", "E", "--agents", "promotion,precautionary")["rows"]
        assert rows[0]["conclusion_b"] == "voluntary-governance"
        assert rows[0]["conclusions_differ"] is False

    def test_report_names_its_inputs(self, toy_file):
        """Test that the JSON carries scenario, content hash, seed and training steps."""
        result = json_output("align", "-s", toy_file, "--seed", 5, "-n", 3)
        loaded = load_scenario(toy_file)

        assert HEADER_KEYS <= set(result)
        assert result["scenario"] == "toy"
        assert result["scenario_hash"] == scenario_hash(loaded)
        assert (result["seed"], result["steps"]) == (5, 3)
        assert (result["agent_a"], result["agent_b"]) == ("a", "b")
        assert result["probe"] == list(loaded.probe_observation().symbols)

    def test_out_writes_the_printed_report(self, toy_file, tmp_path):
        printed = json_output("align", "-s", toy_file, "--sweep", "-o", tmp_path / "out")

        written = (tmp_path / "out" / "align-7.json").read_text(encoding="utf-8")
        assert json.loads(written) == printed
        assert written.endswith("}\n")

    def test_unknown_component_exits_2(self):
        assert invoke("align", "-c", "R,X").exit_code == 2

    def test_unknown_agent_exits_2(self):
        assert invoke("align", "--agents", "precautionary,nobody").exit_code == 2

    def test_table_output(self):
        result = invoke("align", "-c", "D")
        assert result.exit_code == 0, result.output
        assert "precautionary" in result.output


class TestDiscriminate:
    """Tests for divlab discriminate."""

    def test_identical_agents_observation(self, twin_file):
        result = json_output("discriminate", "-s", twin_file, "-m", "observation")

        assert result["mode"] == "observation"
        assert result["passes"] is False
        assert all(c["score"] == 0.0 for c in result["ranking"])
        assert all(c["conclusions_differ"] is False for c in result["ranking"])

    def test_identical_agents_intervention(self, twin_file):
        result = json_output("discriminate", "-s", twin_file, "-m", "intervention")

        assert result["passes"] is False
        assert {c["candidate"] for c in result["ranking"]} == {"stay", "shift"}
        assert all(c["score"] == 0.0 for c in result["ranking"])

    def test_bundled_observation_keys(self):
        result = json_output("discriminate", "--delta", "0.2")

        assert set(result) == HEADER_KEYS | {
            "agent_a",
            "agent_b",
            "horizon",
            "mode",
            "delta",
            "passes",
            "best_candidate",
            "ranking",
        }
        assert result["horizon"] is None
        assert result["delta"] == 0.2
        assert result["best_candidate"] == result["ranking"][0]["candidate"]
        scores = [c["score"] for c in result["ranking"]]
        assert scores == sorted(scores, reverse=True)

    def test_table_output(self):
        result = invoke("discriminate", "-m", "intervention", "--horizon", "2")
        assert result.exit_code == 0, result.output
        assert "Best:" in result.output

    def test_out_writes_one_file_per_mode(self, toy_file, tmp_path):
        for mode in ("observation", "intervention"):
            result = invoke("discriminate", "-s", toy_file, "-m", mode, "-o", tmp_path / "out")
            assert result.exit_code == 0, result.output
            assert "seed=7" in result.output

        observation = json.loads((tmp_path / "out" / "discriminate-observation-7.json").read_text())
        intervention = json.loads(
            (tmp_path / "out" / "discriminate-intervention-7.json").read_text()
        )
        expected_hash = scenario_hash(load_scenario(toy_file))
        for report in (observation, intervention):
            assert report["scenario_hash"] == expected_hash
            assert (report["seed"], report["steps"]) == (7, 0)
        assert observation["horizon"] is None
        assert intervention["horizon"] == 2
        assert {c["candidate"] for c in intervention["ranking"]} == {"stay", "shift"}


class TestReportAndScenarios:
    def test_report_renders_written_file(self, toy_file, tmp_path):
        assert invoke("simulate", "-s", toy_file, "-o", tmp_path).exit_code == 0

        result = invoke("report", tmp_path / "report-7.json")

        assert result.exit_code == 0, result.output
        assert "toy" in result.output
        assert "seed=7" in result.output

    def test_missing_report_exits_3(self, tmp_path):
        assert invoke("report", tmp_path / "report-0.json").exit_code == 3

    def test_scenarios_lists_bundled(self):
        result = invoke("scenarios")
        assert result.exit_code == 0
        assert "ai_regulation" in result.output


class TestSeedRange:
    def test_range(self):
        assert parse_seed_range("3..6") == [3, 4, 5, 6]
        assert parse_seed_range("2..2") == [2]

    @pytest.mark.parametrize("text", ["7", "a..b", "4..1", "-1..2"])
    def test_invalid(self, text):
        with pytest.raises(ContractError):
            parse_seed_range(text)
