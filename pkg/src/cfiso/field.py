"""Finite field arithmetic on canonical integer indices.

Elements of GF(p^e) are represented as plain ints in range(q).  For prime
fields the index is the residue itself; for extension fields the index is
the base-p digit encoding of the coefficient vector of the residue
polynomial, constant digit first (index = c0 + c1*p + ... + c_{e-1}*p^(e-1)).

A FieldSpec owns the operation tables (precomputed for q <= 256) and exposes
scalar operations plus a small vectorized backend used by the numpy-based
analysis paths.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

__all__ = [
    "FieldSpec",
    "make_field",
    "DEFAULT_MODULI",
]

_TABLE_LIMIT = 256


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# polynomial helpers over GF(p), coefficients as int tuples, constant first.
# Local to this module: `algebra` builds on `field`, not the other way round.


def _ptrim(c: tuple[int, ...]) -> tuple[int, ...]:
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return c[:i]


def _pmulmod(a: tuple[int, ...], b: tuple[int, ...], mod: tuple[int, ...], p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            res[i + j] = (res[i + j] + ai * bj) % p
    # reduce by monic mod
    d = len(mod) - 1
    for k in range(len(res) - 1, d - 1, -1):
        c = res[k]
        if c:
            res[k] = 0
            for j in range(d):
                res[k - d + j] = (res[k - d + j] - c * mod[j]) % p
    return _ptrim(tuple(res))


def _ppowmod(a: tuple[int, ...], n: int, mod: tuple[int, ...], p: int) -> tuple[int, ...]:
    result: tuple[int, ...] = (1,)
    base = a
    while n:
        if n & 1:
            result = _pmulmod(result, base, mod, p)
        base = _pmulmod(base, base, mod, p)
        n >>= 1
    return result


def _irreducible(mod: tuple[int, ...], p: int) -> bool:
    """Rabin test: x^(p^e) == x mod (mod), and x^(p^(e/r)) - x coprime for prime r | e."""
    e = len(mod) - 1
    x = (0, 1)
    xq = _ppowmod(x, p ** e, mod, p)
    if _ptrim(tuple((a - b) % p for a, b in zip(xq + (0,) * 2, x + (0,) * len(xq)))) != ():
        return False
    # distinct-degree part: for each prime r dividing e, gcd(x^(p^(e/r)) - x, mod) == 1
    rs = []
    m = e
    f = 2
    while f * f <= m:
        if m % f == 0:
            rs.append(f)
            while m % f == 0:
                m //= f
        f += 1
    if m > 1:
        rs.append(m)
    for r in rs:
        xq = _ppowmod(x, p ** (e // r), mod, p)
        diff = list(xq) + [0, 0]
        diff[1] = (diff[1] - 1) % p
        g = _pgcd(_ptrim(tuple(diff)), mod, p)
        if len(g) - 1 != 0:
            return False
    return True


def _pgcd(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = tuple((c * inv) % p for c in a)
    return a


def _pmod(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    inv = pow(lb, p - 2, p)
    while len(a) - 1 >= db and a:
        c = (a[-1] * inv) % p
        if c:
            off = len(a) - 1 - db
            for j in range(db + 1):
                a[off + j] = (a[off + j] - c * b[j]) % p
        a.pop()
        while a and a[-1] == 0 and len(a) - 1 >= db:
            a.pop()
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


# Named default moduli (coefficients constant-first, monic).
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),        # x^2 + x + 1, GF(4)
    (2, 3): (1, 1, 0, 1),     # x^3 + x + 1, GF(8)
    (3, 2): (1, 0, 1),        # x^2 + 1, GF(9)
    (2, 4): (1, 1, 0, 0, 1),  # x^4 + x + 1, GF(16)
}


def _default_modulus(p: int, e: int) -> tuple[int, ...]:
    if (p, e) in DEFAULT_MODULI:
        return DEFAULT_MODULI[(p, e)]
    # deterministic search: smallest monic polynomial in index order
    for idx in range(p ** e):
        coeffs = []
        n = idx
        for _ in range(e):
            coeffs.append(n % p)
            n //= p
        cand = tuple(coeffs) + (1,)
        if _irreducible(cand, p):
            return cand
    raise ValueError(f"no irreducible modulus found for p={p}, e={e}")


class FieldSpec:
    """GF(p^e) with elements as canonical indices 0..q-1.

    Scalar operations take and return plain ints.  `add`/`sub`/`mul`/`div`
    are total except division by zero, which raises ZeroDivisionError.
    """

    def __init__(self, p: int, e: int = 1, modulus: Sequence[int] | None = None):
        if not _is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if e < 1:
            raise ValueError(f"extension degree must be >= 1, got {e}")
        self.p = p
        self.e = e
        self.q = p ** e
        if e == 1:
            if modulus is not None:
                raise ValueError("modulus only applies to extension fields")
            self.modulus: tuple[int, ...] | None = None
        else:
            mod = tuple(int(c) % p for c in modulus) if modulus is not None else _default_modulus(p, e)
            if len(mod) != e + 1:
                raise ValueError(f"modulus must have degree {e}, got degree {len(mod) - 1}")
            if mod[-1] != 1:
                raise ValueError("modulus must be monic")
            if not _irreducible(mod, p):
                raise ValueError(f"modulus {mod} is reducible over GF({p})")
            self.modulus = mod
        self._build_tables()

    # -- construction of tables ---------------------------------------------

    def _build_tables(self) -> None:
        p, e, q = self.p, self.e, self.q
        if q > _TABLE_LIMIT:
            if e > 1:
                raise ValueError(f"extension fields with q > {_TABLE_LIMIT} are not supported")
            self.add_table = self.sub_table = self.mul_table = self.div_table = None
            self.neg_table = self.inv_table = None
            return
        idx = np.arange(q, dtype=np.int64)
        if e == 1:
            add = (idx[:, None] + idx[None, :]) % q
            sub = (idx[:, None] - idx[None, :]) % q
            mul = (idx[:, None] * idx[None, :]) % q
            inv = np.zeros(q, dtype=np.int64)
            for a in range(1, q):
                inv[a] = pow(a, q - 2, q)
        else:
            digs = [(idx // p ** k) % p for k in range(e)]
            add = sum((((digs[k][:, None] + digs[k][None, :]) % p) * p ** k for k in range(e)))
            sub = sum((((digs[k][:, None] - digs[k][None, :]) % p) * p ** k for k in range(e)))
            mul = np.zeros((q, q), dtype=np.int64)
            vecs = [self._index_to_coeffs(a) for a in range(q)]
            for a in range(q):
                for b in range(a, q):
                    prod = _pmulmod(vecs[a], vecs[b], self.modulus, p)
                    v = self._coeffs_to_index(prod)
                    mul[a, b] = v
                    mul[b, a] = v
            inv = np.zeros(q, dtype=np.int64)
            for a in range(1, q):
                # a^(q-2) = a^(-1) in the multiplicative group
                acc = _ppowmod(vecs[a], q - 2, self.modulus, p)
                inv[a] = self._coeffs_to_index(acc)
        neg = sub[0]
        div = mul[:, inv]  # div[a, b] = a * inv(b); column b=0 is garbage, guarded in div()
        self.add_table = add.astype(np.uint8)
        self.sub_table = sub.astype(np.uint8)
        self.mul_table = mul.astype(np.uint8)
        self.div_table = div.astype(np.uint8)
        self.neg_table = neg.astype(np.uint8)
        self.inv_table = inv.astype(np.uint8)

    # -- element codecs ------------------------------------------------------

    def _index_to_coeffs(self, a: int) -> tuple[int, ...]:
        coeffs = []
        while a:
            coeffs.append(a % self.p)
            a //= self.p
        return tuple(coeffs)

    def _coeffs_to_index(self, coeffs: Sequence[int]) -> int:
        v = 0
        for c in reversed(tuple(coeffs)):
            v = v * self.p + c
        return v

    def element_coeffs(self, a: int) -> tuple[int, ...]:
        """Coefficient vector (constant first, length e) of element index a."""
        self._check(a)
        c = self._index_to_coeffs(a)
        return c + (0,) * (self.e - len(c))

    def element_from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.e:
            raise ValueError(f"coefficient vector longer than extension degree {self.e}")
        return self._coeffs_to_index([c % self.p for c in coeffs])

    def _check(self, a: int) -> None:
        if not 0 <= a < self.q:
            raise ValueError(f"element index {a} out of range for GF({self.q})")

    # -- scalar arithmetic ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.add_table is not None:
            return int(self.add_table[a, b])
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        if self.sub_table is not None:
            return int(self.sub_table[a, b])
        return (a - b) % self.q

    def mul(self, a: int, b: int) -> int:
        if self.mul_table is not None:
            return int(self.mul_table[a, b])
        return (a * b) % self.q

    def neg(self, a: int) -> int:
        if self.neg_table is not None:
            return int(self.neg_table[a])
        return (-a) % self.q

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.q})")
        if self.inv_table is not None:
            return int(self.inv_table[a])
        return pow(a, self.q - 2, self.q)

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.q})")
        if self.div_table is not None:
            return int(self.div_table[a, b])
        return (a * pow(b, self.q - 2, self.q)) % self.q

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    @property
    def minus_one(self) -> int:
        return self.neg(1)

    def elements(self) -> range:
        return range(self.q)

    # -- vectorized backend (uint8/int64 arrays of indices) -------------------

    def vec_add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (a + b) % self.p
        return self.add_table[a, b]

    def vec_scale(self, s: int, a: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (int(s) * a) % self.p
        return self.mul_table[s, a]

    def vec_dot(self, a: np.ndarray, b: np.ndarray) -> int:
        """Field-valued inner product of two index arrays of equal length."""
        if len(a) == 0:
            return 0
        if self.e == 1:
            return int(np.dot(a.astype(np.int64), b.astype(np.int64)) % self.p)
        prods = self.mul_table[a, b].astype(np.int64)
        if self.p == 2:
            return int(np.bitwise_xor.reduce(prods))
        v = 0
        for k in range(self.e):
            v += int(((prods // self.p ** k) % self.p).sum() % self.p) * self.p ** k
        return v

    # -- misc -----------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.e == other.e
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.modulus))

    def __repr__(self) -> str:
        if self.e == 1:
            return f"GF({self.q})"
        return f"GF({self.q})={self.p}^{self.e}, mod={self.modulus}"


@lru_cache(maxsize=None)
def _cached_field(p: int, e: int, modulus: tuple[int, ...] | None) -> FieldSpec:
    return FieldSpec(p, e, modulus)


def make_field(q: int | None = None, *, p: int | None = None, e: int | None = None,
               modulus: Sequence[int] | None = None) -> FieldSpec:
    """Build (or fetch a cached) GF(q) by order, or by characteristic and degree.

    `make_field(8)` factors the order; `make_field(p=2, e=3)` is equivalent.
    A non-default modulus can be passed as a coefficient sequence, constant
    term first, monic of degree e.
    """
    if q is not None:
        if p is not None or e is not None:
            raise ValueError("pass either q or (p, e), not both")
        if q < 2:
            raise ValueError(f"field order must be >= 2, got {q}")
        # factor q = p^e
        base = None
        for f in range(2, q + 1):
            if f * f > q:
                base = q
                break
            if q % f == 0:
                base = f
                break
        n, ee = q, 0
        while n % base == 0 and n > 1:
            n //= base
            ee += 1
        if n != 1:
            raise ValueError(f"{q} is not a prime power")
        p, e = base, ee
    else:
        if p is None:
            raise ValueError("pass q or p")
        e = 1 if e is None else e
    mod = tuple(int(c) for c in modulus) if modulus is not None else None
    return _cached_field(p, e, mod)
