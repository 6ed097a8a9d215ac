import json

import numpy as np
import pytest

from stepfreeze.io import load_annotations, load_timeseries


class TestLoadTimeseries:
    def test_two_column_infers_dt(self, tmp_path):
        f = tmp_path / "a.csv"
        f.write_text("t,force\n0.0,1.0\n0.01,2.0\n0.02,3.0\n")
        ts = load_timeseries(f, subject_id="s", dataset_id="d")
        assert ts.dt == pytest.approx(0.01)
        np.testing.assert_allclose(ts.samples, [1.0, 2.0, 3.0])
        assert (ts.subject_id, ts.dataset_id) == ("s", "d")

    def test_single_column_requires_dt(self, tmp_path):
        f = tmp_path / "b.csv"
        f.write_text("force\n1.0\n2.0\n")
        with pytest.raises(ValueError, match="requires dt"):
            load_timeseries(f)
        ts = load_timeseries(f, dt=0.02)
        assert ts.dt == 0.02

    def test_unknown_header_rejected(self, tmp_path):
        f = tmp_path / "c.csv"
        f.write_text("time,value\n0,1\n")
        with pytest.raises(ValueError, match="header"):
            load_timeseries(f)

    def test_blank_lines_skipped(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("t,force\n0.0,1.0\n\n0.01,2.0\n")
        assert load_timeseries(f).samples.size == 2


class TestLoadAnnotations:
    def test_valid_events(self, tmp_path):
        f = tmp_path / "e.json"
        f.write_text(json.dumps([
            {"subject": "s", "dataset": "d", "t_start": 0, "t_end": 10}]))
        assert load_annotations(f)[0]["t_end"] == 10

    def test_missing_key_rejected(self, tmp_path):
        f = tmp_path / "e.json"
        f.write_text(json.dumps([{"subject": "s", "t_start": 0, "t_end": 1}]))
        with pytest.raises(ValueError, match="dataset"):
            load_annotations(f)

    def test_inverted_interval_rejected(self, tmp_path):
        f = tmp_path / "e.json"
        f.write_text(json.dumps([
            {"subject": "s", "dataset": "d", "t_start": 5, "t_end": 5}]))
        with pytest.raises(ValueError, match="t_end"):
            load_annotations(f)

    def test_non_list_rejected(self, tmp_path):
        f = tmp_path / "e.json"
        f.write_text(json.dumps({"subject": "s"}))
        with pytest.raises(ValueError, match="list"):
            load_annotations(f)
