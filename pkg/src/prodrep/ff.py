"""Finite fields F_{p^m} with integer-encoded elements.

An element is stored as the integer ``c_0 + c_1 p + ... + c_{m-1} p^{m-1}``
where ``(c_0, ..., c_{m-1})`` are its coordinates in the power basis of the
field modulus.  For ``m == 1`` this is just the residue mod ``p``.

Multiplication, inversion and discrete logs go through exp/log tables when
``q`` is at most ``table_limit`` (default ``2**20``); larger fields fall back
to polynomial arithmetic and baby-step/giant-step logs.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import isqrt

import numpy as np
import sympy

from .errors import NonPrime, NotADivisor, SizeCapExceeded, ZeroElement

DEFAULT_SIZE_CAP = 2**20
TABLE_LIMIT = 2**20
MAX_Q = 2**32


@dataclass(frozen=True)
class FieldSpec:
    p: int
    m: int

    @property
    def q(self) -> int:
        return self.p**self.m

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        return cls(int(obj["p"]), int(obj["m"]))


# -- polynomial helpers over the prime field (coefficient lists, low degree first)


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a: list[int], f: list[int], p: int) -> list[int]:
    a = [c % p for c in a]
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] * inv_lead % p
        if c:
            for j in range(df + 1):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % p
    return _trim(a[:df] if len(a) > df else a)


def _fp_mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _fp_mod(out, f, p)


def _fp_powmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _fp_mod(list(a), f, p)
    while e:
        if e & 1:
            result = _fp_mulmod(result, base, f, p)
        e >>= 1
        if e:
            base = _fp_mulmod(base, base, f, p)
    return result


def _fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim([c % p for c in a]), _trim([c % p for c in b])
    while b:
        a, b = b, _fp_mod(a, b, p)
    return a


def is_irreducible_fp(f: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    m = len(f) - 1
    if m <= 0:
        return False
    if m == 1:
        return True
    x = [0, 1]
    # x^(p^m) == x mod f
    h = x
    powers = {}
    for i in range(1, m + 1):
        h = _fp_powmod(h, p, f, p)
        powers[i] = h
    if _trim([(a - b) % p for a, b in itertools.zip_longest(powers[m], x, fillvalue=0)]):
        return False
    for r in sympy.primefactors(m):
        diff = _trim([(a - b) % p for a, b in itertools.zip_longest(powers[m // r], x, fillvalue=0)])
        g = _fp_gcd(f, diff, p)
        if len(g) > 1:
            return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree m over F_p.

    Candidates are ordered by the tuple (c_0, c_1, ..., c_{m-1}).
    """
    if m == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=m):
        if low[0] == 0:
            continue
        f = list(low) + [1]
        if is_irreducible_fp(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # unreachable


class Field:
    """The finite field F_q, q = p^m, with a fixed generator of F_q*."""

    def __init__(
        self,
        p: int,
        m: int = 1,
        *,
        generator: int | None = None,
        size_cap: int = DEFAULT_SIZE_CAP,
        table_limit: int = TABLE_LIMIT,
    ):
        if p < 2 or not sympy.isprime(p):
            raise NonPrime(p)
        if m < 1:
            raise ValueError(f"exponent must be positive, got {m}")
        q = p**m
        if q > min(size_cap, MAX_Q):
            raise SizeCapExceeded(q)
        self.spec = FieldSpec(p, m)
        self.p, self.m, self.q = p, m, q
        self.modulus = smallest_irreducible(p, m)
        self._place = np.array([p**i for i in range(m)], dtype=np.int64)
        self._order_primes = sorted(sympy.primefactors(q - 1)) if q > 2 else []
        self._exp: np.ndarray | None = None
        self._log: np.ndarray | None = None
        self._bsgs: tuple[int, dict[int, int], int] | None = None

        if generator is None:
            generator = self._find_generator()
        elif not self.is_generator(generator):
            raise ValueError(f"{generator} does not generate F_{q}*")
        self.generator = int(generator)
        if q <= table_limit:
            self._build_tables()

    # -- encoding

    def coords(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            a, c = divmod(a, self.p)
            out.append(c)
        return tuple(out)

    def from_coords(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.m:
            raise ValueError("too many coordinates")
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs))

    def element(self, value) -> int:
        """Accept an int (prime-field residue or encoding) or a coordinate sequence."""
        if isinstance(value, (list, tuple)):
            return self.from_coords(value)
        value = int(value)
        if self.m == 1:
            return value % self.p
        if not 0 <= value < self.q:
            raise ValueError(f"encoding {value} out of range for F_{self.q}")
        return value

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    def __repr__(self) -> str:
        return f"Field(p={self.p}, m={self.m}, modulus={self.modulus}, g={self.generator})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Field)
            and self.spec == other.spec
            and self.modulus == other.modulus
            and self.generator == other.generator
        )

    def __hash__(self) -> int:
        return hash((self.spec, self.modulus, self.generator))

    # -- scalar arithmetic

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        p = self.p
        out, place = 0, 1
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            out += ((x + y) % p) * place
            place *= p
        return out

    def neg(self, a: int) -> int:
        if self.m == 1:
            return -a % self.p
        return self.from_coords(-c for c in self.coords(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _poly_mul(self, a: int, b: int) -> int:
        f = list(self.modulus)
        return self.from_coords(_fp_mulmod(list(self.coords(a)), list(self.coords(b)), f, self.p))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.m == 1:
            return a * b % self.p
        if self._log is not None:
            return int(self._exp[(self._log[a] + self._log[b]) % (self.q - 1)])
        return self._poly_mul(a, b)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 1 if e == 0 else 0
        if self.m == 1:
            return pow(a, e, self.p)
        if self._log is not None:
            return int(self._exp[(int(self._log[a]) * e) % (self.q - 1)])
        f = list(self.modulus)
        return self.from_coords(_fp_powmod(list(self.coords(a)), e, f, self.p))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroElement("0 has no inverse")
        if self.m == 1:
            return pow(a, -1, self.p)
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # -- vectorised arithmetic (numpy int64 arrays of encodings)

    def _digits(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._place) % self.p

    def _encode(self, digits: np.ndarray) -> np.ndarray:
        return (digits % self.p) @ self._place

    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a + b) % self.p
        return self._encode(self._digits(a) + self._digits(b))

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.m == 1:
            return -a % self.p
        return self._encode(-self._digits(a))

    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        if self.m == 1:
            if self.p >= 2**31:
                return (a.astype(object) * b % self.p).astype(np.int64)
            return a * b % self.p
        if self._log is None:
            return self._vmul_poly(a, b)
        zero = (a == 0) | (b == 0)
        out = self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return np.where(zero, 0, out)

    def _vmul_poly(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        m, p = self.m, self.p
        da, db = self._digits(a), self._digits(b)
        conv = np.zeros(a.shape + (2 * m - 1,), dtype=np.int64)
        for i in range(m):
            conv[..., i : i + m] += da[..., i : i + 1] * db
            conv %= p
        low = np.array(self.modulus[:m], dtype=np.int64)
        for i in range(2 * m - 2, m - 1, -1):
            c = conv[..., i : i + 1]
            conv[..., i - m : i] = (conv[..., i - m : i] - c * low) % p
        return self._encode(conv[..., :m])

    # -- generator, tables, logs

    def is_generator(self, g: int) -> bool:
        if not 0 < g < self.q:
            return False
        return all(self.pow(g, (self.q - 1) // r) != 1 for r in self._order_primes)

    def _find_generator(self) -> int:
        for g in range(1, self.q):
            if self.is_generator(g):
                return g
        raise AssertionError("F_q* is cyclic; a generator must exist")  # unreachable

    def _build_tables(self) -> None:
        n = self.q - 1
        exp = np.ones(1, dtype=np.int64)
        while len(exp) < n:
            step = self.pow(self.generator, len(exp))
            exp = np.concatenate([exp, self.vmul(exp, step)])
        exp = exp[:n]
        log = np.full(self.q, -1, dtype=np.int64)
        log[exp] = np.arange(n, dtype=np.int64)
        if np.any(log[1:] < 0):
            raise AssertionError("generator does not have full order")
        self._exp, self._log = exp, log

    @property
    def has_tables(self) -> bool:
        return self._log is not None

    @property
    def exp_table(self) -> np.ndarray:
        if self._exp is None:
            raise SizeCapExceeded(self.q)
        return self._exp

    @property
    def log_table(self) -> np.ndarray:
        """log_table[a] = dlog(a) for a != 0, and -1 at a == 0."""
        if self._log is None:
            raise SizeCapExceeded(self.q)
        return self._log

    def gen_pow(self, i: int) -> int:
        i %= self.q - 1
        if self._exp is not None:
            return int(self._exp[i])
        return self.pow(self.generator, i)

    def dlog(self, a: int) -> int:
        if a == 0:
            raise ZeroElement("dlog of 0")
        if self._log is not None:
            return int(self._log[a])
        return self._dlog_bsgs(a)

    def _dlog_bsgs(self, a: int) -> int:
        n = self.q - 1
        if self._bsgs is None:
            step = isqrt(n - 1) + 1 if n > 1 else 1
            baby, cur = {}, 1
            for j in range(step):
                baby.setdefault(cur, j)
                cur = self.mul(cur, self.generator)
            giant = self.inv(self.pow(self.generator, step))
            self._bsgs = (step, baby, giant)
        step, baby, giant = self._bsgs
        gamma = a
        for i in range(step + 1):
            j = baby.get(gamma)
            if j is not None:
                return (i * step + j) % n
            gamma = self.mul(gamma, giant)
        raise AssertionError("baby-step/giant-step failed")  # unreachable

    def coset_index(self, a: int, n: int) -> int:
        """Index i with a in g^i H, H the subgroup of index n."""
        if n <= 0 or (self.q - 1) % n:
            raise NotADivisor(f"{n} does not divide {self.q - 1}")
        return self.dlog(a) % n

    def with_generator(self, g: int) -> "Field":
        """Same field and modulus, different generator."""
        return Field(self.p, self.m, generator=g, size_cap=max(self.q, DEFAULT_SIZE_CAP))

    def order(self, a: int) -> int:
        if a == 0:
            raise ZeroElement("0 has no multiplicative order")
        n = self.q - 1
        for r in self._order_primes:
            while n % r == 0 and self.pow(a, n // r) == 1:
                n //= r
        return n


def build_field(p: int, m: int = 1, **kwargs) -> Field:
    return Field(p, m, **kwargs)


def find_generator(field: Field) -> int:
    return field.generator


def dlog(field: Field, a: int) -> int:
    return field.dlog(a)


def coset_index(field: Field, a: int, n: int) -> int:
    return field.coset_index(a, n)
