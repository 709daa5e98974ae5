from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gqldpc.codegen import (CYCLIC, SYSTEMATIC, EmptyCode, LengthMismatch, NoUnitPivot,
                            PrepMatrix, derive_generator, encode, encode_matrix, encode_native,
                            sraa_parity, verify_orthogonality)
from gqldpc.geom import LINES_AS_ROWS, POINTS_AS_ROWS
from gqldpc.qc import QcBlockMatrix, SparseBinaryMatrix, expand, gf2_rank
from gqldpc.spaces import pg_point_hyperplane

from conftest import code

SMALL_CODES = [("elliptic", 2, POINTS_AS_ROWS), ("elliptic", 3, POINTS_AS_ROWS),
               ("elliptic", 3, LINES_AS_ROWS), ("symplectic", 3, LINES_AS_ROWS),
               ("symplectic", 5, LINES_AS_ROWS), ("symplectic", 5, POINTS_AS_ROWS),
               ("hermitian", 2, POINTS_AS_ROWS), ("hermitian", 2, LINES_AS_ROWS)]


def dense_syndrome(m, cw):
    return (m.to_dense().astype(np.int64) @ np.atleast_2d(cw).T.astype(np.int64)) % 2


def test_q53_generator(q53):
    h, m, p, rep = q53
    assert (p.kb, p.cb, p.b) == (5, 4, 28)
    assert rep.dim_Cprime == 140 and rep.dim_C == 161 and rep.rank == 91
    G = p.generator()
    assert G.shape == (140, 252)
    # G = (P | id)
    assert np.array_equal(G[:, 112:], np.eye(140, dtype=np.uint8))
    native = p.to_native(G)
    assert not dense_syndrome(m, native).any()
    assert verify_orthogonality(h, p)


def test_w35_generator(w35):
    h, m, p, rep = w35
    assert (p.kb, p.cb) == (2, 4)
    assert rep.dim_Cprime == 52 and p.n == 156


def test_h49_full_code_implementable():
    h, m, p, rep = code("hermitian", 3, POINTS_AS_ROWS)
    assert rep.dim_Cprime == rep.dim_C == 4941
    assert (p.kb, p.cb) == (81, 31)
    assert verify_orthogonality(h, p)


@pytest.mark.parametrize("family,q,orientation", SMALL_CODES)
def test_rank_nullity_and_orthogonality(family, q, orientation):
    h, m, p, rep = code(family, q, orientation)
    assert rep.rank + rep.dim_C == m.n_cols
    assert gf2_rank(m) == rep.rank
    assert 0 < rep.dim_Cprime <= rep.dim_C
    assert 0 < rep.rate_Cprime <= rep.rate_C < 1
    assert rep.dim_Cprime == p.k
    if p.form == SYSTEMATIC:
        assert rep.dim_Cprime == p.kb * p.b
        assert sorted(p.layout) == list(range(h.cols))
    assert verify_orthogonality(h, p)
    # the generator rows are independent
    assert gf2_rank(SparseBinaryMatrix.from_dense(p.generator())) == p.k


def test_cyclic_form_for_small_dual():
    h, m, p, rep = code("elliptic", 3, LINES_AS_ROWS)
    assert p.form == CYCLIC and rep.form == CYCLIC
    assert rep.dim_Cprime == rep.dim_C == 21
    assert p.k < p.b
    cw = encode(p, np.ones(p.k, dtype=np.uint8))
    assert not dense_syndrome(m, cw).any()
    with pytest.raises(NoUnitPivot):
        derive_generator(h, allow_cyclic=False)


def test_flipped_bit_breaks_orthogonality(q53):
    h, m, p, _ = q53
    rows = p.rows.copy()
    rows[0, 0, 0] ^= 1
    bad = PrepMatrix(p.b, p.kb, p.cb, rows, p.layout)
    assert not verify_orthogonality(h, bad)


@pytest.mark.parametrize("family,q,orientation", SMALL_CODES)
def test_encode_trivial_cases(family, q, orientation):
    h, m, p, _ = code(family, q, orientation)
    assert not encode(p, np.zeros(p.k, dtype=np.uint8)).any()
    G = p.generator()
    for i in (0, p.k // 2, p.k - 1):
        e = np.zeros(p.k, dtype=np.uint8)
        e[i] = 1
        assert np.array_equal(encode(p, e), G[i])


@pytest.mark.parametrize("family,q,orientation", SMALL_CODES)
def test_random_messages_are_codewords(family, q, orientation):
    h, m, p, _ = code(family, q, orientation)
    rng = np.random.default_rng(7)
    msgs = rng.integers(0, 2, (1000, p.k), dtype=np.uint8)
    cw = encode_native(p, msgs)
    assert cw.shape == (1000, m.n_cols)
    assert not m.syndrome(cw).any()
    assert not dense_syndrome(m, cw[:50]).any()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL_CODES), st.integers(1, 130), st.integers(0, 2**32 - 1))
def test_sraa_matches_matrix_route(params, frames, seed):
    h, m, p, _ = code(*params)
    msgs = np.random.default_rng(seed).integers(0, 2, (frames, p.k), dtype=np.uint8)
    assert np.array_equal(encode(p, msgs), encode_matrix(p, msgs))
    assert np.array_equal(encode(p, msgs[0]), encode_matrix(p, msgs[0]))


def test_sraa_matches_dense_product(q53):
    _, _, p, _ = q53
    msgs = np.random.default_rng(3).integers(0, 2, (65, p.k), dtype=np.uint8)
    G = p.generator().astype(np.int64)
    assert np.array_equal(encode(p, msgs), (msgs.astype(np.int64) @ G) % 2)
    assert sraa_parity(p, msgs).shape == (65, p.cb * p.b)


def test_length_mismatch(q53):
    _, _, p, _ = q53
    with pytest.raises(LengthMismatch):
        encode(p, np.zeros(p.k + 1, dtype=np.uint8))
    with pytest.raises(LengthMismatch):
        encode_matrix(p, np.zeros(3, dtype=np.uint8))


def test_empty_and_full_rank():
    with pytest.raises(EmptyCode):
        derive_generator(QcBlockMatrix(5, 2, 2))
    with pytest.raises(EmptyCode):
        derive_generator(QcBlockMatrix(7, 1, 1, {(0, 0): (0,)}))


def test_cyclic_code_from_circulant():
    # the Fano circulant has rank 4, so its null space is the cyclic [7,3] code
    h = pg_point_hyperplane(3, 2).hrep
    p, rep = derive_generator(h)
    assert rep.dim_C == 3 and p.form == CYCLIC
    assert verify_orthogonality(h, p)
    words = encode_native(p, np.array([[a, b, c] for a in (0, 1) for b in (0, 1) for c in (0, 1)],
                                      dtype=np.uint8))
    assert len({w.tobytes() for w in words}) == 8
    assert not expand(h).syndrome(words).any()


def test_deterministic(q53):
    h, _, p, _ = q53
    p2, _ = derive_generator(h)
    assert p2 == p
