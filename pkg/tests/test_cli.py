import csv
import json

import numpy as np
import pytest
from click.testing import CliRunner

from stepfreeze.cli import _exit_code, main
from stepfreeze.nullmodel import HopfParams, simulate_cartesian


@pytest.fixture(scope="module")
def case(tmp_path_factory):
    """A record with a freezing transition plus its annotation file."""
    root = tmp_path_factory.mktemp("cli")
    params = HopfParams(beta=-0.85, omega=0.88, sigma=0.05, dt_sim=1e-3,
                        seed=1)
    path = simulate_cartesian(params, T=12.0)
    esc = int(np.argmax(path.radius() < 0.5))
    force = path.y1[::10]
    data = root / "rec.csv"
    with open(data, "w") as fh:
        fh.write("t,force\n")
        for i, f in enumerate(force):
            fh.write(f"{i * 0.01:.4f},{f:.10g}\n")
    events = root / "events.json"
    events.write_text(json.dumps([
        {"subject": "s1", "dataset": "d1", "t_start": 0,
         "t_end": esc // 10 + 300, "label": "ev1"},
        {"subject": "s1", "dataset": "d1", "t_start": 0,
         "t_end": 2, "label": "short"},
    ]))
    return data, events


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


class TestExitCode:
    def test_levels(self):
        assert _exit_code(["ok", "ok"]) == 0
        assert _exit_code(["ok", "WindowTooShort"]) == 2
        assert _exit_code(["WindowTooShort"]) == 3


class TestAnalyze:
    def test_partial_failure_and_outputs(self, case, tmp_path):
        data, events = case
        res = run("analyze", "--data", data, "--events", events,
                  "--p", 0.1, "--q", 5, "--out", tmp_path)
        assert res.exit_code == 2
        good = json.loads((tmp_path / "s1_d1_ev1.json").read_text())
        assert good["status"] == "ok"
        assert good["schema_version"] == 1
        assert good["escape"]["met_F_seconds"] > 0
        bad = json.loads((tmp_path / "s1_d1_short.json").read_text())
        assert bad["status"] == "WindowTooShort"

    def test_label_filter_all_ok(self, case, tmp_path):
        data, events = case
        res = run("analyze", "--data", data, "--events", events,
                  "--dataset", "d1", "--out", tmp_path)
        assert res.exit_code == 2  # both events are dataset d1

    def test_total_failure(self, case, tmp_path):
        data, events = case
        # only the too-short event is addressable by a fresh events file
        short = tmp_path / "short.json"
        short.write_text(json.dumps([
            {"subject": "s1", "dataset": "d1", "t_start": 0, "t_end": 2}]))
        res = run("analyze", "--data", data, "--events", short,
                  "--out", tmp_path)
        assert res.exit_code == 3

    def test_csv_format(self, case, tmp_path):
        data, events = case
        res = run("analyze", "--data", data, "--events", events,
                  "--format", "csv", "--out", tmp_path)
        assert res.exit_code == 2
        with open(tmp_path / "s1_d1_ev1.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert rows[0]["status"] == "ok"
        assert float(rows[0]["met_F_seconds"]) > 0

    def test_dataset_keyed_data_entry(self, case, tmp_path):
        data, events = case
        res = run("analyze", "--data", f"d1={data}", "--events", events,
                  "--out", tmp_path)
        assert res.exit_code == 2

    def test_missing_data_entry_errors(self, case, tmp_path):
        _, events = case
        res = run("analyze", "--data", "other=/nonexistent.csv",
                  "--events", events, "--out", tmp_path)
        assert res.exit_code == 1
        assert "no --data entry" in res.output


class TestSweep:
    def test_sweep_writes_cells(self, case, tmp_path):
        data, events = case
        res = run("sweep", "--data", data, "--events", events,
                  "--subject", "s1", "--p", 0.1, "--p", 0.2,
                  "--q", 5, "--out", tmp_path)
        assert res.exit_code in (0, 2)
        cells = json.loads((tmp_path / "sweep_s1_d1_ev1.json").read_text())
        assert len(cells) == 2
        assert {c["grid"]["p"] for c in cells} == {0.1, 0.2}

    def test_interval_variants(self, case, tmp_path):
        data, events = case
        res = run("sweep", "--data", data, "--events", events,
                  "--subject", "s1", "--p", 0.1, "--q", 5,
                  "--interval", "0:889", "--interval", "100:889",
                  "--out", tmp_path)
        assert res.exit_code in (0, 2)
        cells = json.loads((tmp_path / "sweep_s1_d1_ev1.json").read_text())
        starts = {c["event"]["t_start"] for c in cells}
        assert starts == {0, 100}


class TestMergeAndCohort:
    def test_merge_poisoned_by_short_event(self, case, tmp_path):
        data, events = case
        res = run("merge", "--data", data, "--events", events,
                  "--out", tmp_path)
        assert res.exit_code == 3

    def test_merge_single_good_event(self, case, tmp_path):
        data, events = case
        good = tmp_path / "good.json"
        payload = json.loads(events.read_text())
        good.write_text(json.dumps(
            [ev for ev in payload if ev.get("label") == "ev1"]))
        res = run("merge", "--data", data, "--events", good,
                  "--out", tmp_path)
        assert res.exit_code == 0
        merged = json.loads((tmp_path / "merged_s1.json").read_text())
        assert merged["status"] == "ok"

    def test_cohort_from_analysis_records(self, case, tmp_path):
        data, events = case
        run("analyze", "--data", data, "--events", events, "--out", tmp_path)
        res = run("cohort", "--in", tmp_path / "s1_d1_ev1.json",
                  "--in", tmp_path / "s1_d1_short.json", "--out", tmp_path)
        assert res.exit_code == 2
        summary = json.loads((tmp_path / "cohort.json").read_text())
        assert summary["subjects"]["s1"]["n_events"] == 1
        assert len(summary["rows"]) == 2

    def test_cohort_all_failed(self, case, tmp_path):
        data, events = case
        run("analyze", "--data", data, "--events", events, "--out", tmp_path)
        res = run("cohort", "--in", tmp_path / "s1_d1_short.json",
                  "--out", tmp_path)
        assert res.exit_code == 3


class TestSimulateAndSurrogate:
    def test_simulate_writes_loadable_csv(self, tmp_path):
        res = run("simulate", "--beta", -0.5, "--t", 2.0, "--seed", 3,
                  "--out", tmp_path)
        assert res.exit_code == 0
        with open(tmp_path / "simulated.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 201
        assert set(rows[0]) == {"t", "force"}

    def test_simulate_polar_flag(self, tmp_path):
        res = run("simulate", "--beta", -0.5, "--t", 1.0, "--polar",
                  "--out", tmp_path)
        assert res.exit_code == 0

    def test_surrogate_walk(self, case, tmp_path):
        data, events = case
        res = run("surrogate", "--data", data, "--events", events,
                  "--subject", "s1", "--steps", 50, "--seed", 7,
                  "--out", tmp_path)
        assert res.exit_code == 0
        with open(tmp_path / "surrogate.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 51
        assert all(int(r["box"]) >= 1 for r in rows)

    def test_surrogate_seed_reproducible(self, case, tmp_path):
        data, events = case
        run("surrogate", "--data", data, "--events", events,
            "--steps", 30, "--seed", 9, "--out", tmp_path / "a")
        run("surrogate", "--data", data, "--events", events,
            "--steps", 30, "--seed", 9, "--out", tmp_path / "b")
        assert (tmp_path / "a/surrogate.csv").read_text() == \
            (tmp_path / "b/surrogate.csv").read_text()
