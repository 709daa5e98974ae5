from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gqldpc.ff import (ZERO, FieldTooLarge, GaloisField, NotPrime, OrderDoesNotDivide,
                       build_field, field_for, find_gamma, root_of_unity)
from gqldpc.geom import symplectic_form

SMALL = [(2, 1, 4), (2, 1, 6), (3, 1, 2), (3, 1, 6), (5, 1, 2), (7, 1, 3), (2, 2, 3), (3, 2, 2)]


def digits(code: int, p: int, n: int) -> list[int]:
    return [(code // p**i) % p for i in range(n)]


def undigits(d, p: int) -> int:
    return sum(int(c) * p**i for i, c in enumerate(d))


def oracle_mul(F: GaloisField, x: int, y: int) -> int:
    """Schoolbook product of digit codes modulo the field polynomial."""
    p, n = F.p, F.n
    a, b = digits(x, p, n), digits(y, p, n)
    prod = [0] * (2 * n - 1)
    for i in range(n):
        for j in range(n):
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % p
    mod = list(F.modulus)
    for d in range(2 * n - 2, n - 1, -1):
        c = prod[d]
        if c:
            for j in range(n + 1):
                prod[d - n + j] = (prod[d - n + j] - c * mod[j]) % p
    return undigits(prod[:n], p)


def oracle_add(F: GaloisField, x: int, y: int) -> int:
    p, n = F.p, F.n
    return undigits([(u + v) % p for u, v in zip(digits(x, p, n), digits(y, p, n))], p)


def test_order_arithmetic():
    F = build_field(3, 1, 6)
    assert F.order == 729 and F.n1 == 728
    a = 26
    order = next(d for d in range(1, 729) if F.pow(a, d) == 0)
    assert order == 28
    assert build_field(2, 1, 10).n1 % 11 == 0


def test_exp_table_is_a_permutation():
    for p, h, k in SMALL:
        F = build_field(p, h, k)
        assert sorted(F.exp.tolist()) == list(range(1, F.order))


@pytest.mark.parametrize("params", SMALL)
def test_mul_add_match_polynomial_oracle(params):
    F = build_field(*params)
    rng = np.random.default_rng(1)
    logs = np.concatenate([[ZERO], rng.integers(0, F.n1, 60)])
    for x in logs.tolist():
        for y in logs[:20].tolist():
            cx, cy = F.to_code(x), F.to_code(y)
            assert F.to_code(F.mul(x, y)) == oracle_mul(F, cx, cy)
            assert F.to_code(F.add(x, y)) == oracle_add(F, cx, cy)


def test_trivial_identities():
    F = build_field(3, 1, 6)
    assert F.mul(3, 725) == 0
    x = F.nonzero()
    assert np.all(F.add(x, F.neg(x)) == ZERO)
    assert F.add(ZERO, 5) == 5
    assert F.frobenius(1, 1) == 3


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 727))
def test_inverse(x):
    F = build_field(3, 1, 6)
    assert F.mul(x, F.inv(x)) == 0
    assert F.div(x, x) == 0


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(SMALL), st.integers(-1, 10**6), st.integers(0, 20))
def test_frobenius_is_identity_at_k(params, x, j):
    F = build_field(*params)
    x = x % F.n1 if x >= 0 else ZERO
    assert F.frobenius(x, 0) == x
    assert F.frobenius(x, F.k) == x
    assert F.frobenius(F.frobenius(x, j), F.k - j % F.k) == x


@pytest.mark.parametrize("params", [(3, 1, 6), (2, 1, 8), (5, 1, 4), (2, 2, 3)])
def test_frobenius_is_additive_exhaustive(params):
    F = build_field(*params)
    x = np.concatenate([[ZERO], F.nonzero()])
    X, Y = np.meshgrid(x, x, indexing="ij")
    lhs = F.frobenius(F.add(X, Y), 1)
    rhs = F.add(F.frobenius(X, 1), F.frobenius(Y, 1))
    assert np.array_equal(lhs, rhs)


def test_roots_of_unity():
    F = build_field(3, 1, 6)
    assert root_of_unity(F, 28).alpha == 26
    assert root_of_unity(F, 1).alpha == 0
    G = build_field(2, 1, 10)
    a = root_of_unity(G, 11).alpha
    assert G.pow(a, 11) == 0 and a != 0
    for F, b in [(F, 28), (F, 91), (G, 33), (G, 341)]:
        a = root_of_unity(F, b).alpha
        powers = [F.pow(a, i) for i in range(b)]
        assert len(set(powers)) == b
    with pytest.raises(OrderDoesNotDivide):
        root_of_unity(F, 27)


def test_find_gamma():
    assert find_gamma(field_for(2, 4)) == 0
    F = field_for(5, 4)
    g = find_gamma(F)
    assert g == 13
    assert F.pow(g, 25) == F.neg(g)
    with pytest.raises(ValueError):
        find_gamma(field_for(5, 2))


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_symplectic_form_lies_in_subfield(q):
    F = field_for(q, 4)
    rng = np.random.default_rng(q)
    x = rng.integers(0, F.n1, 300)
    y = rng.integers(0, F.n1, 300)
    phi = symplectic_form(F, q, x, y)
    assert np.array_equal(F.pow(phi, q), phi)


def test_build_determinism_and_errors():
    a, b = GaloisField(3, 1, 6), GaloisField(3, 1, 6)
    assert a.modulus == b.modulus
    assert np.array_equal(a.exp, b.exp) and np.array_equal(a.zech, b.zech)
    assert build_field(3, 1, 6) is build_field(3, 1, 6)
    with pytest.raises(NotPrime):
        GaloisField(4)
    with pytest.raises(NotPrime):
        field_for(6, 2)
    with pytest.raises(FieldTooLarge):
        GaloisField(2, 1, 25)


def test_field_element_wrapper():
    F = build_field(3, 1, 6)
    w = F.w
    assert (w**3) * (w**725) == F.element(0)
    assert not (w - w)
    assert w.frobenius(1) == w**3
    assert (w / w) == F.element(0)
    assert w.inv() * w == F.element(0)
    assert repr(w - w) == "0"
