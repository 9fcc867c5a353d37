import csv
import io
import math

import numpy as np
import pytest

import pirs


def test_alphabet_and_quantization():
    a = pirs.PhaseAlphabet(2)
    assert a.levels == 4
    assert pirs.quantize_phase(math.pi / 3, 2) == 1
    assert pirs.quantize_phase(math.pi / 2, 1) == 0  # tie goes to the smaller phase
    with pytest.raises(ValueError):
        pirs.PhaseAlphabet(0)


def test_training_design():
    d = pirs.design_basis_matrix(8, 1)
    assert d["full_rank"]
    assert d["normalized_mse"] == pytest.approx(1.0, abs=1e-12)
    t = d["matrix"]
    assert np.allclose(t.conj().T @ t, 8 * np.eye(8))
    assert pirs.normalized_training_mse(pirs.naive_matrix(6)) == pytest.approx(1.3125)


def test_partitions():
    seq = pirs.matrix_sequence(4, "symmetric")
    assert seq[3].tolist() == [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, -1, -1], [1, -1, -1, 1]]
    assert pirs.partition_sequence(4, "asymmetric")[1] == [[0, 1, 2], [3]]


def test_beamforming_oracle():
    rng = np.random.default_rng(0)
    g = rng.normal(size=4) + 1j * rng.normal(size=4)
    R = 0.1 * np.eye(4, dtype=complex)
    phases, best = pirs.exhaustive_optimum(g, R, 1.0, 1.0, 1)
    _, refined, _ = pirs.successive_refinement(np.zeros(4, dtype=np.int32), g, R, 1.0, 1.0, 1)
    assert refined <= best * (1 + 1e-12)


def test_frame_runs():
    c = pirs.FrameConfig()
    c.N, c.M, c.irs_shape, c.draws = 16, 4, (4, 4), 20
    res = pirs.run_frame(c, trial=3)
    assert [r["block"] for r in res] == [1, 2, 3, 4]
    assert res[0]["init"] == "sdr"
    c.M = 3
    assert any("divisible" in v for v in c.violations())


def test_experiment_csv():
    text = pirs.run_experiment("mse-vs-M", trials=2, seed=4, config_text="sweep.bits = 1\nsweep.M = 4, 8")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert set(rows[0]) == {"experiment", "grid", "block", "metric", "mean", "stderr", "trials", "seed"}
    assert text == pirs.run_experiment("mse-vs-M", trials=2, seed=4, threads=2, config_text="sweep.bits = 1\nsweep.M = 4, 8")
    with pytest.raises(ValueError):
        pirs.run_experiment("nope")
