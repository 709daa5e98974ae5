from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gqldpc.sim import (CSV_HEADER, CodeRef, SweepConfig, biawgn_capacity, chunk_seed, read_csv,
                        records_csv, run_sweep, shannon_reference, wilson_interval, write_csv)


@pytest.fixture(scope="module")
def w35_ref(w35):
    h, _, p, _ = w35
    return CodeRef(h, p, "W(3,5)")


def test_shannon_reference_values():
    assert shannon_reference(1e-4) == pytest.approx(10 * math.log10(math.log(2)), abs=0.01)
    assert shannon_reference(1e-4) == pytest.approx(-1.59, abs=0.01)
    assert shannon_reference(0.5) == pytest.approx(0.19, abs=0.05)
    vals = [shannon_reference(r) for r in (0.1, 0.25, 0.5, 0.75, 0.9)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        shannon_reference(1.0)


def test_capacity_shape():
    assert biawgn_capacity(20.0, 0.5) == pytest.approx(1.0, abs=1e-6)
    caps = [biawgn_capacity(x, 0.5) for x in (-2, 0, 2, 4)]
    assert all(0 < a < b < 1 for a, b in zip(caps, caps[1:]))


def test_capacity_against_monte_carlo():
    rng = np.random.default_rng(0)
    sigma2 = 1.0 / (2 * 0.5 * 10 ** 0.1)
    mu = 2 / sigma2
    ell = rng.normal(mu, math.sqrt(2 * mu), 2_000_000)
    mc = 1 - np.mean(np.logaddexp(0, -ell)) / math.log(2)
    assert biawgn_capacity(1.0, 0.5) == pytest.approx(mc, abs=2e-3)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10_000), st.data())
def test_wilson_interval(trials, data):
    errors = data.draw(st.integers(0, trials))
    lo, hi = wilson_interval(errors, trials)
    assert 0.0 <= lo <= errors / trials <= hi <= 1.0
    assert hi - lo < 1.0


def test_wilson_examples():
    lo, hi = wilson_interval(100, 1000)
    assert lo == pytest.approx(0.0829, abs=1e-4) and hi == pytest.approx(0.1202, abs=1e-4)
    assert wilson_interval(0, 0) == (0.0, 1.0)


def test_chunk_seed_streams_differ():
    a = np.random.default_rng(chunk_seed(1, 0, 0)).integers(0, 2**63, 4)
    b = np.random.default_rng(chunk_seed(1, 0, 1)).integers(0, 2**63, 4)
    c = np.random.default_rng(chunk_seed(1, 1, 0)).integers(0, 2**63, 4)
    assert len({a.tobytes(), b.tobytes(), c.tobytes()}) == 3


def test_config_validation(w35_ref):
    for bad in [dict(ebn0_db=()), dict(ebn0_db=(2.0, 2.0)), dict(ebn0_db=(3, 2)),
                dict(ebn0_db=(1,), target_frame_errors=0), dict(ebn0_db=(1,), max_frames=0),
                dict(ebn0_db=(1,), workers=0), dict(ebn0_db=(1,), max_iters=0)]:
        with pytest.raises(ValueError):
            SweepConfig(w35_ref, **bad)


def test_max_frames_one(w35_ref):
    recs = run_sweep(SweepConfig(w35_ref, (1.0, 2.0), max_frames=1))
    assert [r.frames for r in recs] == [1, 1]


def test_stops_exactly_at_target(w35_ref):
    cfg = SweepConfig(w35_ref, (1.0, 2.0, 3.0), target_frame_errors=20, chunk_frames=64)
    recs = run_sweep(cfg)
    for r in recs:
        assert r.frame_errors == 20
        assert r.fer == r.frame_errors / r.frames
        assert r.ber <= r.fer
        assert 1.0 <= r.avg_iterations <= 25.0
        lo, hi = r.fer_ci
        assert lo <= r.fer <= hi
    assert recs[0].frames < recs[-1].frames


def test_determinism_and_worker_invariance(w35_ref):
    cfg = dict(ebn0_db=(1.5, 2.5), target_frame_errors=15, chunk_frames=50, seed=3)
    a = run_sweep(SweepConfig(w35_ref, **cfg))
    b = run_sweep(SweepConfig(w35_ref, **cfg))
    c = run_sweep(SweepConfig(w35_ref, workers=2, **cfg))
    key = lambda rs: [(r.frames, r.bit_errors, r.frame_errors, r.avg_iterations) for r in rs]
    assert key(a) == key(b) == key(c)
    rate = w35_ref.rate
    assert records_csv(a, rate) == records_csv(c, rate)
    d = run_sweep(SweepConfig(w35_ref, **{**cfg, "seed": 4}))
    assert key(d) != key(a)


def test_all_zero_shortcut(w35_ref):
    recs = run_sweep(SweepConfig(w35_ref, (2.0,), target_frame_errors=10, all_zero=True))
    assert recs[0].frame_errors == 10


def test_csv_round_trip(tmp_path, w35_ref):
    recs = run_sweep(SweepConfig(w35_ref, (1.0, 2.0), target_frame_errors=5))
    path = write_csv(tmp_path / "s.csv", recs, w35_ref.rate)
    text = path.read_text()
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    assert CSV_HEADER[:8] == ("ebn0_db", "frames", "bit_errors", "frame_errors", "ber", "fer",
                              "avg_iters", "wall_s")
    rows = read_csv(path)
    assert [int(r["frames"]) for r in rows] == [r.frames for r in recs]
    assert all(float(r["wall_s"]) == 0.0 for r in rows)
    assert float(rows[0]["shannon_db"]) == pytest.approx(shannon_reference(w35_ref.rate), abs=1e-4)
    path2 = write_csv(tmp_path / "t.csv", recs, w35_ref.rate)
    assert path2.read_bytes() == path.read_bytes()
    timed = records_csv(recs, w35_ref.rate, timing=True)
    assert timed.splitlines()[0] == text.splitlines()[0]
