import math

import numpy as np
import pytest

import saedge


def test_segment_and_resting():
    tiles = saedge.segment([float(i) for i in range(10)], 4)
    assert [origin for origin, _ in tiles] == [0, 4]
    assert tiles[1][1] == [4.0, 5.0, 6.0, 7.0]
    assert saedge.detect_resting([0.0, 0.001, -0.002], 0.0, 0.01)
    assert not saedge.detect_resting([0.0, 0.5], 0.0, 0.01)


def test_normalize_and_mse():
    assert saedge.normalize([0.0, 5.0, 10.0], 0.0, 10.0) == [0.0, 0.5, 1.0]
    assert saedge.mse([0.0, 0.0], [2.0, 2.0]) == 4.0
    with pytest.raises(ValueError):
        saedge.mse([1.0], [1.0, 2.0])


def test_correlation_matrix():
    names, m = saedge.correlation_matrix([("a", [1.0, 2.0, 3.0]), ("b", [1.0, 2.0, 4.0])])
    assert names == ["a", "b"]
    assert isinstance(m, np.ndarray)
    assert m[0, 0] == 1.0
    assert m[0, 1] == pytest.approx(0.98198, abs=1e-5)
    assert m[0, 1] == m[1, 0]


def test_default_spec():
    spec = saedge.default_spec(500)
    assert spec.encoder_dims == [300, 200, 120, 70]
    assert spec.final_decoder_hidden == 50
    with pytest.raises(saedge.DataError):
        saedge.default_spec(40)


def test_thresholds():
    t = saedge.fit_thresholds([float(i) for i in range(1, 10001)], 99.95)
    assert (t.green, t.red) == (9995.0, 10000.0)
    assert saedge.classify(9995.0, t) == "green"
    assert saedge.classify(9996.0, t) == "amber"
    assert saedge.classify(10001.0, t) == "red"
    assert saedge.classify(saedge.RESTING_SENTINEL, t) == "resting"


def test_generate_is_deterministic():
    a = saedge.generate(saedge.fault_scenario(3, 30.0))
    b = saedge.generate(saedge.fault_scenario(3, 30.0))
    assert a == b
    assert len(a) == 3000
    assert saedge.fault_scenario(3, 30.0).fault_window == (9.0, 27.0)
    assert saedge.healthy_scenario(3, 30.0).fault_window is None


@pytest.fixture(scope="module")
def trained():
    healthy = [saedge.generate(saedge.healthy_scenario(seed, 60.0)) for seed in (1, 2)]
    return saedge.train_model(healthy, window_size=250, epochs=3, seed=5)


def test_train_save_load(trained, tmp_path):
    model, stages, errors = trained
    assert len(stages) == 3
    assert model.training_windows == len(errors) == 48
    assert model.thresholds.green <= model.thresholds.red
    path = tmp_path / "model.json"
    model.save(path)
    back = saedge.Model.load(path)
    assert back.to_json() == model.to_json()
    window = saedge.generate(saedge.healthy_scenario(9, 2.5))
    assert back.reconstruction_error(window) == model.reconstruction_error(window)


def test_detector_stream(trained):
    model, _, _ = trained
    samples = saedge.generate(saedge.fault_scenario(4, 60.0))
    det = saedge.Detector(model, t_pre_min=0.05, t_post_min=0.05)
    windows, segments = [], []
    for x in samples:
        w, seg = det.push(x)
        if w is not None:
            windows.append(w)
        if seg is not None:
            segments.append(seg)
    tail = det.finish()
    if tail is not None:
        segments.append(tail)
    assert det.samples_seen == len(samples)
    assert len(windows) == len(samples) // 250
    batch = model.window_errors(samples)
    assert [w["error"] for w in windows] == batch
    for seg in segments:
        assert seg["samples"] == samples[seg["start_index"]:seg["end_index"]]
    spans = [(s["start_index"], s["end_index"]) for s in segments]
    frac = saedge.bandwidth_fraction(len(samples), spans)
    assert 0.0 <= frac <= 1.0
    with pytest.raises(ValueError):
        det.push(math.nan)
