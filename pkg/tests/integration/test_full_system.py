"""
Full pipeline runs: fixture -> decomposition -> every check -> JSON report
"""
import json
import os
import sys

import pytest

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

from src.cli import RunConfig, run  # noqa: E402
from src.cli.main import main  # noqa: E402
from src.utils.error_handler import EXIT_OK  # noqa: E402


@pytest.mark.integration
@pytest.mark.slow
class TestFullSystem:
    def test_horosphere_report(self, tmp_path):
        out = tmp_path / "horosphere.json"
        code = main(["report", "--example", "horosphere", "--n", "3", "--out", str(out), "--timing"])
        assert code == EXIT_OK
        data = json.loads(out.read_text(encoding="utf-8"))
        assert data["passed"] is True
        assert data["results"] == {
            "model_invariants": True, "kostant_operators": True, "psi_invariant_inner_product": True,
            "reductive_decomposition": True, "m_plus_n_not_invariant": True, "principal_orbit_forms": True,
            "ambient_canonical": True, "tangent_bundle_parallel": True, "difference_identity": True,
            "negative_control": True, "homogeneous_structure": True, "transport_pushforward": True,
        }
        assert set(data["claims"]) == set(data["results"])
        parallel = data["sections"]["parallel"]
        assert parallel["residuals"]["difference_identity"]["value"] < 1e-8
        assert parallel["negative_control"]["value"] > 1e-2
        assert data["timing"]["parallel"] > 0

    def test_sphere_connections(self):
        report = run(RunConfig.build(example="punctured_euclidean", n=3,
                                     checks=["decomposition", "parallel", "structure", "transport"]), "verify")
        assert report.results == {"reductive_decomposition": True, "m_plus_n_not_invariant": None,
                                  "tangent_bundle_parallel": True, "difference_identity": True,
                                  "transport_pushforward": True, "negative_control": None,
                                  "homogeneous_structure": True}
        assert report.passed

    def test_flat_report_in_float_mode(self):
        report = run(RunConfig.build(example="euclidean", n=3, k=2, mode="float"), "report")
        assert report.passed, report.results
        assert report.fixture["dims"]["h_bar"] == 0

    def test_higher_dimensional_horosphere(self):
        report = run(RunConfig.build(example="horosphere", n=4, checks=["decomposition", "principal"]), "decompose")
        assert report.passed
        assert report.fixture["dims"] == {"g_bar": 10, "h_bar": 6, "m_bar": 4, "g": 6, "h": 3, "m": 3, "n": 1}

    @pytest.mark.parametrize("n", [4, 5])
    def test_higher_dimensional_spheres(self, n):
        report = run(RunConfig.build(example="punctured_euclidean", n=n, checks=["decomposition", "principal"]),
                     "decompose")
        assert report.passed, report.results
        assert report.results["principal_orbit_forms"] is True
        basis = report.sections["decomposition"]["bases"]["n"]
        assert len(basis) == 1
        entries = basis[0]["entries"]
        assert entries[n][n] == "1"
        assert all(v == "0" for i, row in enumerate(entries) for j, v in enumerate(row) if (i, j) != (n, n))

    def test_horosphere_principal_forms_in_higher_dimension(self):
        report = run(RunConfig.build(example="horosphere", n=5, checks=["principal"]), "decompose")
        assert report.results == {"principal_orbit_forms": True}
        assert report.sections["principal"]["phi_vs_phi_bar"] == 0
