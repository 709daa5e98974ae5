from __future__ import annotations

import numpy as np
import pytest

from gqldpc.codec import CLAMP, SpaDecoder, awgn_llr, noise_variance, spa_decode
from gqldpc.codegen import encode_native


def test_noise_variance():
    assert noise_variance(0.0, 0.5) == pytest.approx(1.0)
    assert noise_variance(10.0, 0.5) == pytest.approx(0.1)
    assert noise_variance(3.0, 0.25) == pytest.approx(2 / 10**0.3)


def test_empirical_noise_variance():
    rate, snr = 0.5, 1.0
    llr = awgn_llr(np.zeros(10**6, dtype=np.uint8), snr, rate, 11)
    s2 = noise_variance(snr, rate)
    y = llr * s2 / 2
    assert np.var(y - 1.0) == pytest.approx(s2, rel=0.01)
    assert np.mean(y) == pytest.approx(1.0, abs=0.01)


def test_noiseless_limit_and_seeding():
    cw = np.random.default_rng(0).integers(0, 2, 500, dtype=np.uint8)
    llr = awgn_llr(cw, 80.0, 0.5, 1)
    assert np.array_equal((llr < 0).astype(np.uint8), cw)
    assert np.array_equal(awgn_llr(cw, 2.0, 0.5, 5), awgn_llr(cw, 2.0, 0.5, 5))
    assert np.array_equal(awgn_llr(cw, 2.0, 0.5, np.random.SeedSequence(5)),
                          awgn_llr(cw, 2.0, 0.5, np.random.default_rng(np.random.SeedSequence(5))))


def _codeword(p, seed):
    return encode_native(p, np.random.default_rng(seed).integers(0, 2, p.k, dtype=np.uint8))


def test_zero_noise_converges_immediately(q53):
    _, m, p, _ = q53
    cw = _codeword(p, 1)
    res = spa_decode(m, 10.0 * (1 - 2.0 * cw), 25)
    assert res.converged and res.iterations_used <= 1
    assert np.array_equal(res.bits, cw)


def test_all_single_flips_corrected(q53):
    _, m, p, _ = q53
    cw = _codeword(p, 2)
    n = m.n_cols
    llr = np.tile(8.0 * (1 - 2.0 * cw), (n, 1))
    llr[np.arange(n), np.arange(n)] *= -1
    bits, conv, iters = SpaDecoder(m).decode_batch(llr, 5)
    assert conv.all() and iters.max() <= 5
    assert np.array_equal(bits, np.tile(cw, (n, 1)))


def test_most_double_flips_corrected(q53):
    _, m, p, _ = q53
    n = m.n_cols
    rng = np.random.default_rng(4)
    pairs = np.array([rng.choice(n, 2, replace=False) for _ in range(2000)])
    llr = np.full((len(pairs), n), 8.0)
    llr[np.arange(len(pairs))[:, None], pairs] *= -1
    bits, conv, _ = SpaDecoder(m).decode_batch(llr, 25)
    ok = conv & ~bits.any(axis=1)
    assert ok.mean() >= 0.99


def test_erasure_does_not_converge(q53):
    _, m, _, _ = q53
    res = spa_decode(m, np.zeros(m.n_cols), 25)
    assert not res.converged and res.iterations_used == 25


def test_converged_means_codeword(q53):
    _, m, p, rep = q53
    rate = p.k / m.n_cols
    dec = SpaDecoder(m)
    rng = np.random.default_rng(8)
    cws = encode_native(p, rng.integers(0, 2, (400, p.k), dtype=np.uint8))
    llr = awgn_llr(cws, 2.0, rate, rng)
    bits, conv, iters = dec.decode_batch(llr, 25)
    assert conv.any() and not conv.all()
    assert not m.syndrome(bits[conv]).any()
    assert m.syndrome(bits[~conv]).any(axis=1).all()
    b2, c2, i2 = dec.decode_batch(llr, 25)
    assert np.array_equal(bits, b2) and np.array_equal(conv, c2) and np.array_equal(iters, i2)


def test_clamping_keeps_large_inputs_finite(w35):
    _, m, _, _ = w35
    llr = np.full(m.n_cols, 1e6)
    llr[:3] = -1e6
    res = spa_decode(m, llr, 10)
    assert res.bits.dtype == np.uint8
    assert CLAMP == 30.0


def test_sign_symmetry(q53):
    """Decoding the received word of codeword c equals decoding the
    all-zero transmission with the same noise, then adding c."""
    _, m, p, _ = q53
    rate = p.k / m.n_cols
    dec = SpaDecoder(m)
    rng = np.random.default_rng(12)
    zero_llr = awgn_llr(np.zeros((100, m.n_cols), dtype=np.uint8), 2.5, rate, rng)
    cws = encode_native(p, rng.integers(0, 2, (100, p.k), dtype=np.uint8))
    flipped = zero_llr * (1.0 - 2.0 * cws)
    b0, c0, i0 = dec.decode_batch(zero_llr, 25)
    b1, c1, i1 = dec.decode_batch(flipped, 25)
    assert np.array_equal(b1, b0 ^ cws)
    assert np.array_equal(c0, c1) and np.array_equal(i0, i1)


def test_more_iterations_correct_a_superset(w35):
    _, m, p, _ = w35
    rate = p.k / m.n_cols
    dec = SpaDecoder(m)
    llr = awgn_llr(np.zeros((1000, m.n_cols), dtype=np.uint8), 2.0, rate, 21)
    ok = {}
    for t in (3, 10, 25, 50):
        bits, conv, _ = dec.decode_batch(llr, t)
        ok[t] = conv & ~bits.any(axis=1)
    assert np.all(ok[3] <= ok[10]) and np.all(ok[10] <= ok[25]) and np.all(ok[25] <= ok[50])
    assert ok[50].sum() > ok[3].sum()


def test_bad_shapes(q53):
    _, m, _, _ = q53
    with pytest.raises(ValueError):
        SpaDecoder(m).decode_batch(np.zeros((2, m.n_cols + 1)), 5)
    with pytest.raises(ValueError):
        spa_decode(m, np.zeros(m.n_cols), 0)
