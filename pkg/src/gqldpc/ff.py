"""Finite fields F_{p^n} in discrete-log form.

Elements are stored as their logarithm to a fixed primitive element ``w``;
the zero element is the sentinel ``ZERO = -1``.  Multiplication is exponent
addition and addition goes through a Zech-logarithm table, so every
operation also works elementwise on numpy integer arrays of logs.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np
from sympy import factorint, isprime

ZERO = -1
MAX_ORDER = 1 << 24


class NotPrime(ValueError):
    pass


class FieldTooLarge(ValueError):
    pass


class OrderDoesNotDivide(ValueError):
    pass


class DivideByZero(ZeroDivisionError):
    pass


def _poly_mulmod(a, b, low, p):
    """Multiply coefficient lists a, b (low degree first) modulo the monic
    polynomial x^n + sum(low[j] x^j)."""
    n = len(low)
    out = [0] * (2 * n - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    for d in range(2 * n - 2, n - 1, -1):
        top = out[d]
        if top:
            out[d] = 0
            for j in range(n):
                out[d - n + j] = (out[d - n + j] - top * low[j]) % p
    return out[:n]


def _poly_powmod(base, e, low, p):
    n = len(low)
    result = [1] + [0] * (n - 1)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, low, p)
        base = _poly_mulmod(base, base, low, p)
        e >>= 1
    return result


def _is_primitive(low, p):
    n = len(low)
    if low[0] == 0:
        return False
    # the norm of x, (-1)^n c_0, must generate F_p^*
    norm = (-low[0]) % p if n % 2 else low[0]
    if p > 2 and any(pow(norm, (p - 1) // r, p) == 1 for r in factorint(p - 1)):
        return False
    if any(sum(c * pow(a, j, p) for j, c in enumerate(low)) % p == (-pow(a, n, p)) % p
           for a in range(p) if n > 1):
        return False
    order = p**n - 1
    one = [1] + [0] * (n - 1)
    x = [0, 1] + [0] * (n - 2) if n > 1 else [(-low[0]) % p]
    if _poly_powmod(x, order, low, p) != one:
        return False
    return all(_poly_powmod(x, order // r, low, p) != one for r in factorint(order))


def smallest_primitive_polynomial(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically smallest primitive polynomial of degree n over F_p.

    Returned as the n low-order coefficients (constant term first); the
    polynomial is monic.  Candidates are ordered by comparing the constant
    term first.
    """
    for low in itertools.product(range(p), repeat=n):
        if _is_primitive(list(low), p):
            return tuple(low)
    raise AssertionError("no primitive polynomial found")  # pragma: no cover


@dataclass(frozen=True, eq=False)
class FieldElement:
    """A single element of a :class:`GaloisField` (log form, ``ZERO`` = -1)."""

    field: GaloisField
    log: int

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.log, _log(other)))

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.log, _log(other)))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.log, _log(other)))

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.log, _log(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.log))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.log, e))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.log == other.log
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.log))

    def __bool__(self):
        return self.log != ZERO

    def inv(self):
        return FieldElement(self.field, self.field.inv(self.log))

    def frobenius(self, j: int = 1):
        return FieldElement(self.field, self.field.frobenius(self.log, j))

    def __repr__(self):
        return "0" if self.log == ZERO else f"w^{self.log}"


def _log(x):
    return x.log if isinstance(x, FieldElement) else x


class GaloisField:
    """The field F_{q^k} with q = p^h, realised over its prime field.

    The modulus is the lexicographically smallest primitive polynomial of
    degree h*k, so two builds with the same (p, h, k) are identical.
    """

    def __init__(self, p: int, h: int = 1, k: int = 1):
        if not isprime(p):
            raise NotPrime(f"{p} is not prime")
        if h < 1 or k < 1:
            raise ValueError("h and k must be positive")
        self.p, self.h, self.k = p, h, k
        self.n = h * k
        self.q = p**h
        self.order = p**self.n
        if self.order > MAX_ORDER:
            raise FieldTooLarge(f"field of order {self.order} exceeds {MAX_ORDER}")
        self.n1 = self.order - 1
        self.modulus = smallest_primitive_polynomial(p, self.n) + (1,)
        self.exp = self._antilog_table()
        log = np.full(self.order, ZERO, dtype=np.int64)
        log[self.exp] = np.arange(self.n1, dtype=np.int64)
        self.log_table = log
        # zech[d] = log(1 + w^d)
        d0 = self.exp % p
        plus_one = np.where(d0 == p - 1, self.exp - (p - 1), self.exp + 1)
        self.zech = log[plus_one]
        self.minus_one = 0 if p == 2 else self.n1 // 2
        self.one = 0

    def _antilog_table(self) -> np.ndarray:
        p, n = self.p, self.n
        low = list(self.modulus[:-1])
        weights = p ** np.arange(n, dtype=np.int64)

        def mulx(d):
            top = d[-1]
            out = [0] + d[:-1]
            return [(out[j] - top * low[j]) % p for j in range(n)]

        block = min(self.n1, 4096)
        digits = np.zeros((block, n), dtype=np.int64)
        cur = [1] + [0] * (n - 1)
        for i in range(block):
            digits[i] = cur
            cur = mulx(cur)
        # multiplication by w^block as an n x n matrix over F_p
        step = np.zeros((n, n), dtype=np.int64)
        row = cur
        for j in range(n):
            step[j] = row
            row = mulx(row)
        codes = np.empty(self.n1, dtype=np.int64)
        pos = 0
        while pos < self.n1:
            take = min(block, self.n1 - pos)
            codes[pos:pos + take] = digits[:take] @ weights
            pos += take
            digits = (digits @ step) % p
        return codes

    # -- scalar/vector arithmetic on logs ---------------------------------
    def mul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        out = np.where((a == ZERO) | (b == ZERO), ZERO, (a + b) % self.n1)
        return out if out.ndim else int(out)

    def pow(self, a, e: int):
        a = np.asarray(a)
        if e == 0:
            out = np.zeros_like(a)
        else:
            if e < 0 and np.any(a == ZERO):
                raise DivideByZero("zero to a negative power")
            out = np.where(a == ZERO, ZERO, (a * (e % self.n1)) % self.n1)
        return out if out.ndim else int(out)

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == ZERO):
            raise DivideByZero("inverse of zero")
        out = (-a) % self.n1
        return out if out.ndim else int(out)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def neg(self, a):
        return self.mul(a, self.minus_one)

    def add(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        a_, b_ = np.broadcast_arrays(a, b)
        d = (b_ - a_) % self.n1
        z = self.zech[d]
        s = np.where(z == ZERO, ZERO, (a_ + z) % self.n1)
        out = np.where(a_ == ZERO, b_, np.where(b_ == ZERO, a_, s))
        return out if out.ndim else int(out)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def frobenius(self, a, j: int = 1):
        """x -> x^(q^j)."""
        return self.pow(a, pow(self.q, j % self.k, self.n1) if self.n1 > 1 else 1)

    def trace(self, a):
        """Relative trace to F_q: sum of x^(q^j), j < k."""
        acc = self.frobenius(a, 0)
        for j in range(1, self.k):
            acc = self.add(acc, self.frobenius(a, j))
        return acc

    # -- conveniences ----------------------------------------------------
    def element(self, log: int) -> FieldElement:
        return FieldElement(self, int(log))

    @property
    def w(self) -> FieldElement:
        return FieldElement(self, 1 % self.n1)

    def from_code(self, code: int) -> int:
        """Log of the element whose base-p digit code is ``code``."""
        return int(self.log_table[code])

    def to_code(self, log):
        log = np.asarray(log)
        out = np.where(log == ZERO, 0, self.exp[np.where(log == ZERO, 0, log)])
        return out if out.ndim else int(out)

    def nonzero(self) -> np.ndarray:
        return np.arange(self.n1, dtype=np.int64)

    def subfield(self, order: int) -> np.ndarray:
        """Logs of the nonzero elements of the subfield of the given order."""
        if self.n1 % (order - 1):
            raise OrderDoesNotDivide(f"no subfield of order {order}")
        return np.arange(order - 1, dtype=np.int64) * (self.n1 // (order - 1))

    def __repr__(self):
        return f"GaloisField(p={self.p}, h={self.h}, k={self.k})"


@functools.lru_cache(maxsize=None)
def build_field(p: int, h: int = 1, k: int = 1) -> GaloisField:
    """Cached field constructor; fields are immutable once built."""
    return GaloisField(p, h, k)


def field_for(q: int, k: int) -> GaloisField:
    """F_{q^k} for a prime power q."""
    f = factorint(q)
    if len(f) != 1:
        raise NotPrime(f"{q} is not a prime power")
    (p, h), = f.items()
    return build_field(p, h, k)


@dataclass(frozen=True)
class UnityRoot:
    alpha: int
    order: int


def root_of_unity(field: GaloisField, b: int) -> UnityRoot:
    """alpha = w^((q^k - 1)/b), a primitive b-th root of unity."""
    if b < 1 or field.n1 % b:
        raise OrderDoesNotDivide(f"{b} does not divide {field.n1}")
    alpha = (field.n1 // b) % field.n1
    for d in factorint(b):
        if field.pow(alpha, b // d) == field.one:
            raise AssertionError("alpha is not primitive")  # pragma: no cover
    return UnityRoot(alpha, b)


def find_gamma(field: GaloisField) -> int:
    """Canonical gamma in F_{q^4} with gamma^(q^2) = -gamma."""
    if field.k != 4:
        raise ValueError("gamma lives in a degree-4 extension")
    q = field.q
    gamma = field.one if q % 2 == 0 else (q * q + 1) // 2
    assert field.pow(gamma, q * q) == field.neg(gamma)
    return gamma
