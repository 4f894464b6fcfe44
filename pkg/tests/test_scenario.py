"""Tests for scenario loading, validation, runs and output files."""

import csv
import json
import logging

import pytest

from divergence_lab.config import Config, SimulationConfig
from divergence_lab.engine.pipeline import compare, total_variation
from divergence_lab.errors import ContractError, ScenarioValidationError, UnknownIdentifierError
from divergence_lab.scenario import (
    divergence_series,
    dump_scenario,
    list_bundled,
    load_bundled,
    load_scenario,
    parse_scenario,
    parse_scenario_text,
    read_report,
    report_json,
    resolve_scenario,
    scenario_hash,
    simulate,
    write_run_files,
)
from divergence_lab.scenario.report import pairwise_series
from divergence_lab.scenario.writers import (
    AGENTS_HEADER,
    SUMMARY_HEADER,
    format_number,
    to_jsonable,
)


@pytest.fixture(scope="module")
def ai_run(ai_scenario):
    """The bundled scenario simulated with its own run block."""
    return simulate(ai_scenario, ai_scenario.settings(Config()))


@pytest.fixture
def toy_run(toy_data):
    scenario = parse_scenario(toy_data)
    return simulate(scenario, scenario.settings(Config()))


def rejection(data) -> ScenarioValidationError:
    with pytest.raises(ScenarioValidationError) as exc_info:
        parse_scenario(data)
    return exc_info.value


class TestLoading:
    """Tests for loading and the bundled catalogue."""

    def test_bundled_scenario_is_clean(self, caplog):
        with caplog.at_level(logging.WARNING, logger="divergence_lab"):
            scenario = load_bundled("ai_regulation")

        assert "ai_regulation" in list_bundled()
        assert scenario.agent_ids == ["precautionary", "promotion"]
        assert not [r for r in caplog.records if r.levelno >= logging.WARNING]

    def test_load_file(self, toy_file):
        scenario = load_scenario(toy_file)
        assert scenario.name == "toy"
        assert scenario.hypothesis_ids == ["h1", "h2"]

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_scenario(tmp_path / "absent.json")

    def test_resolve(self, toy_file):
        assert resolve_scenario(str(toy_file)).name == "toy"
        assert resolve_scenario("ai_regulation").name == "ai_regulation"
        with pytest.raises(FileNotFoundError):
            resolve_scenario("no-such-scenario")

    def test_zero_probability_symbol_warns(self, toy_data, caplog):
        toy_data["environment"]["regimes"]["alt"]["probabilities"] = {"s1": 0.0, "s2": 1.0}
        with caplog.at_level(logging.WARNING, logger="divergence_lab"):
            parse_scenario(toy_data)
        assert "never emits symbol 's1'" in caplog.text


class TestValidation:
    """Tests that every rejection names its key path."""

    def test_unnormalised_regime(self, toy_data):
        toy_data["environment"]["regimes"]["base"]["probabilities"] = {"s1": 0.58, "s2": 0.4}

        error = rejection(toy_data)

        assert error.path == "environment.regimes.base.probabilities"
        assert "0.98" in error.message

    def test_undeclared_action(self, toy_data):
        toy_data["hypotheses"][0]["outcome_streams"]["jump"] = [0.0, 0.0]

        error = rejection(toy_data)

        assert error.path == "hypotheses.0.outcome_streams.jump"
        assert "jump" in str(error)

    def test_missing_action_stream(self, toy_data):
        del toy_data["hypotheses"][1]["outcome_streams"]["wait"]
        assert rejection(toy_data).path == "hypotheses.1.outcome_streams"

    def test_unequal_stream_lengths(self, toy_data):
        toy_data["hypotheses"][1]["outcome_streams"]["act"] = [0.0, 0.0, 0.0]
        assert rejection(toy_data).path == "hypotheses.1.outcome_streams.act"

    def test_duplicate_agents(self, toy_data):
        toy_data["agents"][1]["id"] = "a"
        error = rejection(toy_data)
        assert error.path == "agents"
        assert "'a'" in error.message

    def test_undeclared_emission_symbol(self, toy_data):
        toy_data["agents"][1]["model"]["emission_counts"]["h2"]["s9"] = 1.0
        assert rejection(toy_data).path == "agents.1.model.emission_counts.h2.s9"

    def test_oversized_exposure(self, toy_data):
        toy_data["agents"][0]["exposure_k"] = 4
        assert rejection(toy_data).path == "agents.0.exposure_k"

    def test_reserved_stream_label(self, toy_data):
        toy_data["agents"][0]["stream"] = "environment"
        assert rejection(toy_data).path == "agents.0.stream"

    def test_intervention_regime(self, toy_data):
        toy_data["environment"]["interventions"]["shift"]["regime"] = "gone"
        assert rejection(toy_data).path == "environment.interventions.shift.regime"

    def test_probe_symbol(self, toy_data):
        toy_data["run"]["probe"] = ["s1", "s7"]
        assert rejection(toy_data).path == "run.probe.1"

    def test_field_level_error_path(self, toy_data):
        toy_data["agents"][1]["profile"]["temperature"] = 0.0
        assert rejection(toy_data).path == "agents.1.profile.temperature"

    def test_unknown_key(self, toy_data):
        toy_data["bogus"] = 1
        assert rejection(toy_data).path == "bogus"

    def test_invalid_json(self):
        with pytest.raises(ScenarioValidationError) as exc_info:
            parse_scenario_text('{"name": "x",')
        assert exc_info.value.path == "<root>"
        assert "line 1" in exc_info.value.message

    def test_non_object_root(self):
        with pytest.raises(ScenarioValidationError) as exc_info:
            parse_scenario_text("[1, 2]")
        assert exc_info.value.path == "<root>"


class TestCanonicalForm:
    """Tests for the canonical dump and content hash."""

    def test_round_trip(self, ai_scenario):
        text = dump_scenario(ai_scenario)

        assert parse_scenario_text(text) == ai_scenario
        assert dump_scenario(parse_scenario_text(text)) == text
        assert text.endswith("\n") and "\r" not in text

    def test_hash_is_stable_and_content_bound(self, toy_data):
        first = scenario_hash(parse_scenario(toy_data))
        assert first == scenario_hash(parse_scenario(toy_data))
        assert len(first) == 64

        toy_data["agents"][0]["profile"]["gamma"] = 0.8
        assert scenario_hash(parse_scenario(toy_data)) != first

    def test_infinite_tau_survives(self, toy_data):
        toy_data["agents"][0]["profile"]["tau"] = "inf"
        scenario = parse_scenario(toy_data)

        assert scenario.agent_spec("a").profile.is_frozen
        assert '"tau": "inf"' in dump_scenario(scenario)
        assert parse_scenario_text(dump_scenario(scenario)) == scenario


class TestSettings:
    """Tests for flag > run block > config precedence."""

    def test_run_block_wins_over_config(self, toy_data):
        settings = parse_scenario(toy_data).settings(Config())
        assert (settings.steps, settings.seed, settings.delta, settings.horizon) == (20, 7, 0.01, 2)

    def test_flags_win(self, toy_data):
        settings = parse_scenario(toy_data).settings(Config(), steps=5, seed=99, horizon=1)
        assert (settings.steps, settings.seed, settings.horizon) == (5, 99, 1)
        assert settings.delta == 0.01

    def test_config_fills_gaps(self, toy_data):
        del toy_data["run"]
        config = Config(simulation=SimulationConfig(default_steps=7, default_seed=3))

        settings = parse_scenario(toy_data).settings(config)

        assert (settings.steps, settings.seed) == (7, 3)
        assert settings.delta == 0.05


class TestBundledRun:
    """Tests for the bundled regulation scenario over a full run."""

    def test_profile_orderings(self, ai_run):
        agents = {a.id: a for a in ai_run.report.agents}
        pre, pro = agents["precautionary"], agents["promotion"]

        assert pre.mean_externalization < pro.mean_externalization
        assert pre.basis.order > pro.basis.order
        assert pre.basis.abstraction > pro.basis.abstraction
        assert pre.hold_rate > pro.hold_rate
        assert pre.hold_rate >= 0.99

    def test_report_shape(self, ai_run):
        report = ai_run.report
        pair = report.pair("precautionary", "promotion")

        assert report.steps == 2000
        assert report.seed == 20240611
        assert report.probe == ["benchmark-gain"] * 3
        assert len(pair.series) == 2000
        assert pair.attribution_initial.attribution == "theta_level"
        assert pair.attribution_final.attribution == "both"
        assert {c.candidate for c in pair.intervention_design.ranking} == {
            "no-op",
            "enact-regulation",
            "deregulate",
        }
        assert len(pair.remedies) == 3


class TestPairSeries:
    """Tests for the per-step divergence series of agent pairs."""

    def test_points_follow_compare(self, toy_run):
        trace = toy_run.trace
        series = divergence_series(trace, "a", "b")

        assert series == toy_run.report.pair("a", "b").series
        assert [p.step for p in series] == list(range(1, 21))
        for point, record in zip(series, trace.steps):
            expected = compare(record.outcomes["a"], record.outcomes["b"])
            assert point.conclusions_differ == expected.conclusions_differ
            assert point.posterior_tv == expected.posterior_tv
            assert point.value_gap == expected.value_gap

    def test_either_order(self, toy_run):
        trace = toy_run.trace
        assert divergence_series(trace, "b", "a") == divergence_series(trace, "a", "b")

    def test_pairwise_keys(self, toy_run):
        assert list(pairwise_series(toy_run.trace)) == [("a", "b")]

    def test_rejects_bad_pairs(self, toy_run):
        with pytest.raises(ContractError):
            divergence_series(toy_run.trace, "a", "a")
        with pytest.raises(UnknownIdentifierError):
            divergence_series(toy_run.trace, "a", "nobody")


class TestOutputFiles:
    """Tests for trace, CSV and report files."""

    def test_series_matches_trace(self, toy_run, tmp_path):
        """Test the divergence series against a recomputation from trace.jsonl."""
        write_run_files(toy_run.trace, toy_run.report, tmp_path)
        lines = (tmp_path / "trace-7.jsonl").read_text(encoding="utf-8").splitlines()
        series = toy_run.report.pair("a", "b").series

        assert len(lines) == len(series) == 20
        for line, point in zip(lines, series):
            record = json.loads(line)
            a, b = record["agents"]["a"], record["agents"]["b"]
            assert record["step"] == point.step
            assert len(record["bundle"]) == 3
            assert len(a["exposed"]) == 2
            assert point.posterior_tv == pytest.approx(
                total_variation(a["posterior"], b["posterior"]), abs=1e-9
            )
            assert point.conclusions_differ == (a["conclusion"] != b["conclusion"])

    def test_csv_files(self, toy_run, tmp_path):
        write_run_files(toy_run.trace, toy_run.report, tmp_path)

        with (tmp_path / "summary-7.csv").open(encoding="utf-8", newline="") as f:
            summary = list(csv.reader(f))
        with (tmp_path / "agents-7.csv").open(encoding="utf-8", newline="") as f:
            agents = list(csv.reader(f))

        assert tuple(summary[0]) == SUMMARY_HEADER
        assert len(summary) == 1 + 20
        assert {row[1] for row in summary[1:]} == {"a|b"}
        assert {row[2] for row in summary[1:]} <= {"true", "false"}
        assert tuple(agents[0]) == AGENTS_HEADER
        assert [row[1] for row in agents[1:3]] == ["a", "b"]
        assert len(agents) == 1 + 40
        assert b"\r\n" not in (tmp_path / "summary-7.csv").read_bytes()

    def test_report_round_trip(self, toy_run, tmp_path):
        paths = write_run_files(toy_run.trace, toy_run.report, tmp_path)
        report_path = tmp_path / "report-7.json"

        loaded = read_report(report_path)

        assert report_path in paths
        assert loaded.seed == 7
        assert loaded.scenario_hash == toy_run.report.scenario_hash
        assert report_json(loaded) == report_path.read_text(encoding="utf-8")

    def test_rewrite_is_byte_identical(self, toy_data, tmp_path):
        scenario = parse_scenario(toy_data)
        for name in ("first", "second"):
            run = simulate(scenario, scenario.settings(Config()))
            write_run_files(run.trace, run.report, tmp_path / name)

        for filename in ("trace-7.jsonl", "summary-7.csv", "agents-7.csv", "report-7.json"):
            first = (tmp_path / "first" / filename).read_bytes()
            assert first == (tmp_path / "second" / filename).read_bytes()


class TestNumberFormatting:
    def test_format_number(self):
        assert format_number(True) == "true"
        assert format_number(3) == "3"
        assert format_number(1 / 3) == "0.333333333333"
        assert format_number(float("inf")) == "inf"

    def test_to_jsonable(self):
        data = {"x": 2 / 3, "tau": float("inf"), "gap": float("nan"), "n": (1, 2)}
        assert to_jsonable(data) == {"x": 0.666666666667, "tau": "inf", "gap": None, "n": [1, 2]}
