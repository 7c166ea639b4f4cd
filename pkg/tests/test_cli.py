import json

import pytest

from shellswitch.cli import EXIT_INFEASIBLE, EXIT_INPUT, EXIT_INVALID, EXIT_OK, main

ONE_SHELL = {
    "patches": [
        {"mass": 0.0, "r_min": 0.0, "r_max": 6.00057},
        {"mass": 3.0, "r_min": 6.00057, "r_max": None},
    ],
    "r_i": 12.0,
}

SEARCH = {
    "m": 1.9999, "M": 3.0, "R2": 4.0, "r_i": 12.0,
    "p": 9, "q": 10, "R1_min": 9.8, "R1_max": 10.4, "grid": 25,
}

PAULI = {
    "A": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]],
    "B": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
    "psi": [[1, 0], [0, 0]],
}


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


class TestValidate:
    def test_valid_config(self, tmp_path, capsys):
        cfg = write(tmp_path, "st.json", ONE_SHELL)
        assert main(["validate", "--config", cfg]) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["lapses"][0] == pytest.approx(102.603, abs=5e-4)
        assert report["shells"][0]["junction_gap"] <= 1e-12

    def test_shell_inside_horizon_exits_2(self, tmp_path, capsys):
        bad = {"patches": [
            {"mass": 0.0, "r_min": 0.0, "r_max": 5.0},
            {"mass": 3.0, "r_min": 5.0, "r_max": None},
        ]}
        cfg = write(tmp_path, "bad.json", bad)
        assert main(["validate", "--config", cfg]) == EXIT_INVALID
        assert "INVALID" in capsys.readouterr().err

    def test_truncated_json_exits_1(self, tmp_path, capsys):
        path = tmp_path / "trunc.json"
        path.write_text('{"patches": [{"mass": 0.0,')
        assert main(["validate", "--config", str(path)]) == EXIT_INPUT
        assert "INPUT ERROR" in capsys.readouterr().err

    def test_missing_file_exits_1(self, capsys):
        assert main(["validate", "--config", "/nonexistent.json"]) == EXIT_INPUT

    def test_missing_key_exits_1(self, tmp_path, capsys):
        cfg = write(tmp_path, "empty.json", {"nope": 1})
        assert main(["validate", "--config", cfg]) in (EXIT_INPUT, EXIT_INVALID)


class TestPeriodStress:
    def test_period_output(self, tmp_path, capsys):
        cfg = write(tmp_path, "st.json", ONE_SHELL)
        assert main(["period", "--config", cfg]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["dt_global"] > doc["dtau"] > 0
        assert len(doc["legs"]) == 2

    def test_stress_report(self, tmp_path, capsys):
        cfg = write(tmp_path, "st.json", ONE_SHELL)
        assert main(["stress", "--config", cfg]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert "6.00057" in doc
        assert doc["6.00057"]["rho"] > 0


class TestSearch:
    def test_search_writes_solution_and_curve(self, tmp_path):
        cfg = write(tmp_path, "search.json", SEARCH)
        out = tmp_path / "sol.json"
        assert main(["search", "--config", cfg, "--out", str(out)]) == EXIT_OK
        sol = json.loads(out.read_text())
        assert sol["R1"] == pytest.approx(10.072, abs=1e-2)
        curve = (tmp_path / "sol_curve.csv").read_text().splitlines()
        assert curve[0] == "R1,f,ratio"
        assert len(curve) == 26

    def test_unattainable_ratio_exits_3(self, tmp_path, capsys):
        cfg = write(tmp_path, "search.json", dict(SEARCH, p=1, q=2))
        assert main(["search", "--config", cfg]) == EXIT_INFEASIBLE
        assert "INFEASIBLE" in capsys.readouterr().err

    def test_ratio_override_flag(self, tmp_path):
        cfg = write(tmp_path, "search.json", dict(SEARCH, p=1, q=2))
        out = tmp_path / "sol.json"
        code = main(["search", "--config", cfg, "--ratio", "9/10",
                     "--out", str(out)])
        assert code == EXIT_OK

    def test_byte_identical_across_runs_and_jobs(self, tmp_path):
        cfg = write(tmp_path, "search.json", SEARCH)
        outputs = []
        for tag, jobs in (("a", "1"), ("b", "1"), ("c", "3")):
            out = tmp_path / f"sol_{tag}.json"
            assert main(["search", "--config", cfg, "--out", str(out),
                         "--jobs", jobs]) == EXIT_OK
            outputs.append(
                out.read_bytes()
                + (tmp_path / f"sol_{tag}_curve.csv").read_bytes()
            )
        assert outputs[0] == outputs[1] == outputs[2]


@pytest.fixture(scope="module")
def traced(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("trace")
    cfg = write(tmp, "search.json", SEARCH)
    outdir = tmp / "run1"
    code = main(["trace", "--config", cfg, "--out", str(outdir),
                 "--samples", "64"])
    return code, tmp, cfg, outdir


class TestTrace:
    def test_outputs_exist(self, traced):
        code, _, _, outdir = traced
        assert code == EXIT_OK
        for name in ("gamma1.csv", "gamma2.csv", "farside_gamma1.csv",
                     "farside_gamma2.csv", "meeting.json"):
            assert (outdir / name).exists()

    def test_meeting_values(self, traced):
        _, _, _, outdir = traced
        doc = json.loads((outdir / "meeting.json").read_text())
        assert doc["meeting"]["r_t"] == pytest.approx(11.9382, abs=1e-3)
        assert doc["meeting"]["t_A1"] < doc["meeting"]["t_A2"]

    def test_csv_shape(self, traced):
        _, _, _, outdir = traced
        lines = (outdir / "gamma1.csv").read_text().splitlines()
        assert lines[0] == "t_global,r,tau"
        assert len(lines) == 65

    def test_trace_deterministic_across_jobs(self, traced):
        _, tmp, cfg, outdir = traced
        outdir2 = tmp / "run2"
        assert main(["trace", "--config", cfg, "--out", str(outdir2),
                     "--samples", "64", "--jobs", "2"]) == EXIT_OK
        for name in ("gamma1.csv", "gamma2.csv", "farside_gamma1.csv",
                     "farside_gamma2.csv", "meeting.json"):
            assert (outdir / name).read_bytes() == (outdir2 / name).read_bytes()

    def test_bad_sample_count(self, traced):
        _, tmp, cfg, _ = traced
        assert main(["trace", "--config", cfg, "--samples", "0"]) == EXIT_INPUT


class TestLightray:
    def test_exterior_crossing(self, tmp_path, capsys):
        doc = dict(ONE_SHELL, r_a=7.0, r_b=12.0)
        cfg = write(tmp_path, "ray.json", doc)
        assert main(["lightray", "--config", cfg]) == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert out["dt_global"] > 5.0  # longer than the flat-space gap


class TestSwitch:
    def test_pauli_probabilities(self, tmp_path, capsys):
        cfg = write(tmp_path, "sw.json", PAULI)
        assert main(["switch", "--config", cfg]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["measurement"]["plus"]["probability"] == 0.0
        assert doc["measurement"]["minus"]["probability"] == pytest.approx(1.0)
        assert doc["branch_orders"] == {"M1": ["A", "B"], "M2": ["B", "A"]}

    def test_broken_switch_orders(self, tmp_path, capsys):
        doc = dict(
            PAULI,
            C=[[[0, 0], [1, 0]], [[1, 0], [0, 0]]],
            D=[[[0, 0], [0, -1]], [[0, 1], [0, 0]]],
        )
        cfg = write(tmp_path, "sw.json", doc)
        assert main(["switch", "--config", cfg]) == EXIT_OK
        out = json.loads(capsys.readouterr().out)
        assert out["branch_orders"] == {"M1": ["B", "C"], "M2": ["D", "B"]}

    def test_non_unitary_operator_rejected(self, tmp_path, capsys):
        doc = dict(PAULI, A=[[[2, 0], [0, 0]], [[0, 0], [1, 0]]])
        cfg = write(tmp_path, "sw.json", doc)
        assert main(["switch", "--config", cfg]) == EXIT_INVALID
