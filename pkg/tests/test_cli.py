"""Tests for the run configuration, the JSON report and the orbits command"""
import json
import math
import os
import sys

import numpy as np
import pytest

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.cli import SCHEMA_VERSION, VERB_CHECKS, Report, RunConfig, run, sanitize  # noqa: E402
from src.cli.main import build_parser, main  # noqa: E402
from src.config.settings import override_settings, settings  # noqa: E402
from src.linalg.scalar import ScalarMode, as_exact  # noqa: E402
from src.cli.runner import prepare  # noqa: E402
from src.linalg.serialization import matrix_to_payload  # noqa: E402
from src.utils.error_handler import (  # noqa: E402
    EXIT_INPUT_ERROR,
    EXIT_OK,
    CertificateError,
    ConfigError,
    PipelineError,
)


def minimal_report(**results):
    return Report(verb="decompose", config={"mode": "exact", "seed": 0},
                  fixture={"name": "horosphere", "n": 3}, checks=list(results), results=results)


def tilted_complement(fixture):
    """m̄ with an isotropy component added to its first element: still a complement, not Ad-invariant."""
    basis = list(fixture.m_bar.basis)
    basis[0] = basis[0] + fixture.expected_h_bar.basis[0]
    return [matrix_to_payload(x) for x in basis]


class TestRunConfig:
    def test_defaults(self):
        config = RunConfig()
        assert config.example == "horosphere"
        assert config.mode == ScalarMode.EXACT
        assert config.selected_checks("verify") == list(VERB_CHECKS["verify"])

    def test_checks_are_put_in_run_order(self):
        config = RunConfig.build(checks=["transport", "model"])
        assert config.checks == ["model", "transport"]

    @pytest.mark.parametrize("values", [
        {"example": "hyperboloid"},
        {"checks": ["everything"]},
        {"example": "horosphere", "n": 2},
        {"example": "euclidean", "n": 2, "k": 3},
        {"residual_gate": 0},
        {"unknown_key": 1},
    ])
    def test_invalid_values(self, values):
        with pytest.raises(ConfigError):
            RunConfig.build(**values)

    def test_fixture_options(self):
        assert RunConfig.build(example="euclidean", k=2).fixture_options() == {"k": 2}
        assert RunConfig.build(example="punctured_euclidean").fixture_options() == {"subgroup": "SO(n)"}
        assert RunConfig().fixture_options() == {}

    def test_tolerance_overrides_skip_unset(self):
        config = RunConfig.build(transport_gate=1e-5)
        assert config.tolerance_overrides() == {"transport_gate": 1e-5}

    def test_from_file_with_overrides(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"example": "euclidean", "n": 4, "k": 2, "seed": 7}), encoding="utf-8")
        config = RunConfig.from_file(path, seed=11, n=None)
        assert config.example == "euclidean"
        assert config.n == 4
        assert config.seed == 11

    def test_from_file_errors(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            RunConfig.from_file(tmp_path / "missing.json")
        bad = tmp_path / "bad.json"
        bad.write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigError, match="not valid JSON"):
            RunConfig.from_file(bad)
        listed = tmp_path / "list.json"
        listed.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(ConfigError, match="JSON object"):
            RunConfig.from_file(listed)


class TestSettings:
    def test_override_restores_values(self):
        before = settings.residual_gate
        with override_settings(residual_gate=1e-3) as current:
            assert current.residual_gate == 1e-3
        assert settings.residual_gate == before

    def test_override_rejects_unknown_fields(self):
        with pytest.raises(KeyError):
            with override_settings(not_a_setting=1):
                pass


class TestReport:
    def test_sanitize_non_finite_and_exact_values(self):
        data = sanitize({"a": float("inf"), "b": [np.float64("nan"), -math.inf],
                         "c": as_exact([["1/3"]]), "d": np.int64(4), "e": np.bool_(True)})
        assert data == {"a": "inf", "b": ["nan", "-inf"], "c": [["1/3"]], "d": 4, "e": True}

    def test_passed_ignores_informational_results(self):
        assert minimal_report(a=True, b=None).passed
        assert not minimal_report(a=True, b=False).passed

    def test_json_is_sorted_and_strict(self):
        report = minimal_report(a=True)
        report.sections["worst"] = {"value": float("inf")}
        text = report.to_json()
        data = json.loads(text)
        assert data["schema_version"] == SCHEMA_VERSION
        assert data["sections"]["worst"]["value"] == "inf"
        assert data["passed"] is True
        assert text.endswith("\n")
        assert list(data) == sorted(data)

    def test_claims_describe_every_result(self):
        data = minimal_report(reductive_decomposition=True, negative_control=None).to_payload()
        assert set(data["claims"]) == {"reductive_decomposition", "negative_control"}
        assert all(data["claims"].values())

    def test_atomic_write(self, tmp_path):
        target = tmp_path / "nested" / "report.json"
        minimal_report(a=False).write(target)
        assert json.loads(target.read_text(encoding="utf-8"))["passed"] is False
        assert [p.name for p in target.parent.iterdir()] == ["report.json"]

    def test_summary_table(self):
        report = minimal_report(reductive_decomposition=True, principal_orbit_forms=None)
        report.timing = {"fixture": 0.5, "decomposition": 0.25}
        text = report.summary()
        assert "horosphere (n=3)" in text
        assert "n/a" in text
        assert "overall" in text and "PASS" in text
        assert "0.75s" in text


class TestRun:
    def test_decompose_run(self):
        report = run(RunConfig.build(checks=["decomposition", "principal"]), "decompose")
        assert report.passed
        assert report.fixture["dims"] == {"g_bar": 6, "h_bar": 3, "m_bar": 3, "g": 3, "h": 1, "m": 2, "n": 1}
        section = report.sections["decomposition"]
        assert section["expected_match"] == {"h_bar": True, "m": True, "n": True}
        assert section["m_cap_h_bar_dim"] == 0
        assert report.results == {"reductive_decomposition": True, "m_plus_n_not_invariant": True,
                                  "principal_orbit_forms": True}
        assert report.timing is None

    def test_conformal_fixture_keeps_its_complement(self):
        report = run(RunConfig.build(example="punctured_euclidean", checks=["decomposition"]), "decompose")
        assert report.results["reductive_decomposition"] is True
        assert report.results["m_plus_n_not_invariant"] is None
        assert report.sections["decomposition"]["m_bar_source"].startswith("fixture")
        assert report.sections["decomposition"]["gram"]["phi_g"] is not None

    def test_same_seed_same_json(self):
        config = RunConfig.build(checks=["model", "decomposition", "kostant"], seed=4)
        assert run(config, "decompose").to_json() == run(config, "decompose").to_json()

    def test_timing_is_recorded_on_request(self):
        report = run(RunConfig.build(checks=["decomposition"], timing=True), "decompose")
        assert set(report.timing) >= {"fixture", "decomposition"}


class TestMain:
    def test_parser_knows_every_verb(self):
        parser = build_parser()
        for verb in VERB_CHECKS:
            args = parser.parse_args([verb, "--example", "horosphere"])
            assert args.verb == verb

    def test_decompose_writes_report(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(["decompose", "--example", "horosphere", "--n", "3", "--check", "decomposition",
                     "--out", str(out)])
        assert code == EXIT_OK
        data = json.loads(out.read_text(encoding="utf-8"))
        assert data["schema_version"] == SCHEMA_VERSION
        assert data["verb"] == "decompose"
        assert "overall" in capsys.readouterr().out

    def test_json_to_stdout(self, capsys):
        code = main(["decompose", "--check", "decomposition", "--json", "--mode", "float"])
        assert code == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["config"]["mode"] == "float"

    def test_export_fixture(self, tmp_path):
        path = tmp_path / "fixture.json"
        code = main(["decompose", "--example", "euclidean", "--n", "3", "--k", "2", "--check", "decomposition",
                     "--export-fixture", str(path)])
        assert code == EXIT_OK
        assert json.loads(path.read_text(encoding="utf-8"))["name"] == "euclidean"

    def test_bad_config_is_input_error(self):
        assert main(["decompose", "--example", "hyperboloid"]) == EXIT_INPUT_ERROR
        assert main(["decompose", "--example", "horosphere", "--n", "2"]) == EXIT_INPUT_ERROR

    def test_unknown_check_exits_from_parser(self):
        with pytest.raises(SystemExit) as info:
            main(["verify", "--check", "everything"])
        assert info.value.code == 2

    def test_config_file(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"example": "euclidean", "n": 3, "k": 1, "checks": ["decomposition"]}),
                        encoding="utf-8")
        assert main(["--quiet", "transport", "--config", str(path)]) == EXIT_OK

    def test_numerical_failure_is_input_error(self, monkeypatch):
        import src.cli.runner as runner

        def singular(*args, **kwargs):
            raise np.linalg.LinAlgError("Singular matrix")

        monkeypatch.setattr(runner, "induced_orbit_decomposition", singular)
        with pytest.raises(PipelineError, match="LinAlgError"):
            run(RunConfig.build(checks=["decomposition"]), "decompose")
        assert main(["decompose", "--check", "decomposition"]) == EXIT_INPUT_ERROR


class TestSuppliedComplement:
    def test_fixture_complement_is_accepted(self, horosphere):
        payload = [matrix_to_payload(x) for x in horosphere.m_bar.basis]
        ctx = prepare(RunConfig.build(m_bar=payload))
        assert ctx.m_bar_source.startswith("config")
        assert ctx.decomposition.certificates.passed

    def test_tilted_complement_fails_invariance(self, horosphere):
        with pytest.raises(CertificateError, match="h_bar_m_bar"):
            prepare(RunConfig.build(m_bar=tilted_complement(horosphere)))

    def test_overlapping_complement_fails_direct_sum(self, horosphere):
        payload = [matrix_to_payload(x) for x in horosphere.expected_h_bar.basis]
        with pytest.raises(CertificateError, match="direct sum"):
            prepare(RunConfig.build(m_bar=payload))

    def test_empty_complement_is_config_error(self):
        with pytest.raises(ConfigError):
            RunConfig.build(m_bar=[])

    def test_corrupted_config_file_exits_with_input_error(self, tmp_path, horosphere):
        path = tmp_path / "tilted.json"
        path.write_text(json.dumps({"example": "horosphere", "n": 3, "m_bar": tilted_complement(horosphere)}),
                        encoding="utf-8")
        assert main(["decompose", "--config", str(path)]) == EXIT_INPUT_ERROR
