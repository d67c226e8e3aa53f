import math

import numpy as np
import pytest

from uurel.experiments import (
    C_SPLIT,
    TRIAL_HEADER,
    ExperimentConfig,
    mub_conjectured_vector,
    mub_majorization_rate,
    pair_trial,
    run_figure3,
    run_mub,
    run_verify,
)
from uurel.io import read_csv
from uurel.majorization import DEFAULT_MEASURES
from uurel.multi import example1_ensemble


class TestConfig:
    @pytest.mark.parametrize("kw", [{"trials": 0}, {"dim": 1}])
    def test_invariants(self, kw):
        with pytest.raises(ValueError):
            ExperimentConfig(**kw)

    def test_unknown_experiment(self):
        with pytest.raises(ValueError):
            run_verify(ExperimentConfig("nope", trials=1))

    def test_file_needs_ensemble(self):
        with pytest.raises(ValueError):
            run_verify(ExperimentConfig("file", trials=1))


class TestVerify:
    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_pair(self, d):
        s = run_verify(ExperimentConfig("pair", dim=d, trials=200, seed=1))
        assert s.ok
        assert s.worst_margin >= -1e-9

    def test_example1(self):
        s = run_verify(ExperimentConfig("example1", dim=4, trials=200, seed=2))
        assert s.ok

    def test_file_experiment(self):
        s = run_verify(ExperimentConfig("file", dim=4, trials=50, seed=2), example1_ensemble())
        assert s.ok and s.trials == 50

    def test_triple(self):
        assert run_verify(ExperimentConfig("triple", dim=3, trials=100, seed=3)).ok

    def test_record_holds_measure_gaps(self):
        rec = pair_trial(0, 0, 3, DEFAULT_MEASURES)
        assert set(rec.dominance) == {m.label for m in DEFAULT_MEASURES}
        assert rec.h_joint >= rec.h_bound - 1e-9


class TestDeterminism:
    def test_same_seed_same_bytes(self, tmp_path):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for p in paths:
            run_verify(ExperimentConfig("pair", dim=3, trials=1, seed=9, out=str(p)))
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_workers_do_not_change_output(self, tmp_path):
        serial, parallel = tmp_path / "s.csv", tmp_path / "p.csv"
        run_verify(ExperimentConfig("pair", dim=3, trials=40, seed=4, out=str(serial)))
        run_verify(ExperimentConfig("pair", dim=3, trials=40, seed=4, out=str(parallel), workers=2))
        assert serial.read_bytes() == parallel.read_bytes()

    def test_csv_layout(self, tmp_path):
        p = tmp_path / "t.csv"
        run_verify(ExperimentConfig("pair", dim=2, trials=5, seed=0, out=str(p)))
        header, rows = read_csv(p)
        assert tuple(header) == TRIAL_HEADER
        assert [int(r[0]) for r in rows] == list(range(5))


class TestFigure3:
    def test_rows(self, tmp_path):
        p = tmp_path / "f3.csv"
        s = run_figure3(ExperimentConfig("figure3", dim=6, trials=300, seed=0, out=str(p)))
        _, rows = read_csv(p)
        c = np.array([float(r[1]) for r in rows])
        h_joint = np.array([float(r[2]) for r in rows])
        h_bound = np.array([float(r[3]) for r in rows])
        assert np.all(h_joint >= h_bound - 1e-9)
        assert c.min() >= 1 / math.sqrt(6) - 1e-12 and c.max() <= 1 + 1e-12
        assert s.high_c + s.low_c == s.trials
        assert s.high_c == int(np.sum(c > C_SPLIT))
        assert 0 <= s.fraction(s.above_mu, s.trials) <= 1

    def test_empty_split_fraction_is_nan(self):
        s = run_figure3(ExperimentConfig("figure3", dim=2, trials=3, seed=0))
        assert math.isnan(s.fraction(1, 0))


class TestMub:
    def test_conjectured_vector(self):
        vec = mub_conjectured_vector(2)
        np.testing.assert_allclose(vec.raw, [0.7285533905932737, 1 - 0.7285533905932737, 0, 0], atol=1e-15)

    def test_rows(self):
        rows = run_mub([2, 3], [1, 2, 3], trials=20, seed=0)
        by = {(r.d, r.k): r for r in rows}
        assert (2, 3) not in by
        r21 = by[(2, 1)]
        assert r21.conjectured == pytest.approx(0.7285533905932737)
        assert r21.exact == pytest.approx(r21.conjectured, abs=1e-15)
        assert r21.oracle == pytest.approx(r21.conjectured, abs=1e-3)
        r33 = by[(3, 3)]
        assert r33.omega_tilde == r33.conjectured == r33.oracle == 1.0
        assert 0.0 <= r21.mub_rate <= 1.0

    def test_budget_note_inline(self):
        rows = run_mub([4], [3], trials=0, seed=0, budget=5, with_oracle=False)
        assert math.isnan(rows[0].omega_tilde)
        assert "budget" in rows[0].oracle_note

    def test_oracle_limit_note_inline(self):
        rows = run_mub([6], [1], trials=0, seed=0)
        assert rows[0].oracle is None
        assert "limited" in rows[0].oracle_note

    def test_rate_is_reproducible(self):
        assert mub_majorization_rate(3, 50, 1) == mub_majorization_rate(3, 50, 1)
