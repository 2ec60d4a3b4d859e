"""Univariate polynomials over a finite field, with factorization.

Coefficients are field-element encodings, lowest degree first, trailing zeros
stripped.  ``factor`` is the textbook pipeline: squarefree decomposition,
distinct-degree splitting, then Cantor-Zassenhaus equal-degree splitting with
a seeded generator (trace splitting in characteristic 2).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import reduce
from math import gcd

import numpy as np

from .errors import ConstantPolynomial, ZeroPolynomial
from .ff import Field


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs=()):
        c = [field.element(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.coeffs = tuple(c)

    @classmethod
    def x(cls, field: Field) -> "Poly":
        return cls(field, (0, 1))

    @classmethod
    def const(cls, field: Field, c: int) -> "Poly":
        return cls(field, (c,))

    @classmethod
    def monomial(cls, field: Field, coeff: int, deg: int) -> "Poly":
        return cls(field, (0,) * deg + (coeff,))

    # -- basic properties

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def is_monic(self) -> bool:
        return self.lead == 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r} over F_{self.field.q})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            cs = str(c) if self.field.m == 1 else "(" + ":".join(map(str, self.field.coords(c))) + ")"
            if i == 0:
                terms.append(cs)
            else:
                mon = "x" if i == 1 else f"x^{i}"
                terms.append(mon if c == 1 else f"{cs}*{mon}")
        return " + ".join(terms)

    # -- arithmetic

    def _new(self, coeffs) -> "Poly":
        out = Poly.__new__(Poly)
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        out.field, out.coeffs = self.field, tuple(c)
        return out

    def __add__(self, other: "Poly") -> "Poly":
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return self._new([F.add(x, b[i]) if i < len(b) else x for i, x in enumerate(a)])

    def __neg__(self) -> "Poly":
        return self._new([self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        F = self.field
        if not isinstance(other, Poly):
            c = F.element(other)
            return self._new([F.mul(c, x) for x in self.coeffs])
        if self.is_zero() or other.is_zero():
            return self._new(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x == 0:
                continue
            for j, y in enumerate(other.coeffs):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        result, base = self._new((1,)), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        db = other.degree
        inv_lead = F.inv(other.lead)
        quot = [0] * max(len(rem) - db, 0)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            c = F.mul(c, inv_lead)
            quot[i - db] = c
            for j, y in enumerate(other.coeffs):
                rem[i - db + j] = F.sub(rem[i - db + j], F.mul(c, y))
        return self._new(quot), self._new(rem[:db] if db > 0 else [])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            raise ZeroPolynomial("cannot normalize the zero polynomial")
        return self * self.field.inv(self.lead)

    def derivative(self) -> "Poly":
        F = self.field
        return self._new([F.mul(F.element(i % F.p), c) for i, c in enumerate(self.coeffs)][1:])

    def powmod(self, e: int, mod: "Poly") -> "Poly":
        result, base = self._new((1,)), self % mod
        while e:
            if e & 1:
                result = (result * base) % mod
            e >>= 1
            if e:
                base = (base * base) % mod
        return result

    def __call__(self, x: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def evaluate_all(self, xs=None) -> np.ndarray:
        """Vectorised Horner evaluation; defaults to every element of the field."""
        F = self.field
        xs = np.arange(F.q, dtype=np.int64) if xs is None else np.asarray(xs, dtype=np.int64)
        acc = np.zeros_like(xs)
        for c in reversed(self.coeffs):
            acc = F.vadd(F.vmul(acc, xs), c)
        return acc


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def pth_root(f: Poly) -> Poly:
    """Inverse of Frobenius on a polynomial whose derivative vanishes."""
    F = f.field
    p = F.p
    root = F.q // p  # a -> a^(q/p) inverts a -> a^p
    return f._new([F.pow(c, root) for c in f.coeffs[::p]])


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Pairs (P, i) with P squarefree monic, pairwise coprime, and f = lead * prod P^i."""
    if f.is_zero():
        raise ZeroPolynomial("zero polynomial")
    f = f.monic()
    out: list[tuple[Poly, int]] = []
    if f.degree == 0:
        return out
    p = f.field.p
    c = poly_gcd(f, f.derivative()) if not f.derivative().is_zero() else f
    w = f // c
    i = 1
    while not w.is_one() and w.degree > 0:
        y = poly_gcd(w, c)
        fac = w // y
        if fac.degree > 0:
            out.append((fac.monic(), i))
        w, c = y, c // y
        i += 1
    if c.degree > 0:
        for g, j in squarefree_decomposition(pth_root(c)):
            out.append((g, j * p))
    return out


def _distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    F = f.field
    x = Poly.x(F)
    out = []
    h = x
    d = 0
    while f.degree >= 2 * (d + 1):
        d += 1
        h = h.powmod(F.q, f)
        g = poly_gcd(f, h - x)
        if g.degree > 0:
            out.append((g, d))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f.monic(), f.degree))
    return out


def _random_poly(F: Field, deg: int, rng: random.Random) -> Poly:
    return Poly(F, [rng.randrange(F.q) for _ in range(deg + 1)])


def _equal_degree(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    if f.degree == d:
        return [f.monic()]
    F = f.field
    while True:
        a = _random_poly(F, f.degree - 1, rng)
        if a.degree <= 0:
            continue
        if F.p == 2:
            # absolute trace to F_2 of a, computed mod f
            t, cur = a, a
            for _ in range(F.m * d - 1):
                cur = (cur * cur) % f
                t = t + cur
            b = t
        else:
            b = a.powmod((F.q**d - 1) // 2, f) - Poly.const(F, 1)
        g = poly_gcd(f, b)
        if 0 < g.degree < f.degree:
            return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


def _sort_key(P: Poly):
    return (P.degree, P.coeffs)


@dataclass(frozen=True)
class Factorization:
    unit: int
    factors: tuple[tuple[Poly, int], ...]

    def expand(self, field: Field) -> Poly:
        out = Poly.const(field, self.unit)
        for P, e in self.factors:
            out = out * P**e
        return out

    @property
    def multiplicities(self) -> list[int]:
        return [e for _, e in self.factors]


def factor(h: Poly, seed: int = 0) -> Factorization:
    if h.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    rng = random.Random(seed)
    mult: dict[Poly, int] = {}
    for P, i in squarefree_decomposition(h):
        for g, d in _distinct_degree(P):
            for irr in _equal_degree(g, d, rng):
                mult[irr] = mult.get(irr, 0) + i
    factors = tuple(sorted(mult.items(), key=lambda t: _sort_key(t[0])))
    return Factorization(h.lead, factors)


def is_irreducible(f: Poly) -> bool:
    if f.degree < 1:
        return False
    fac = factor(f)
    return len(fac.factors) == 1 and fac.factors[0][1] == 1


@dataclass(frozen=True)
class PowerPart:
    C: int
    f: Poly
    ell: int


def power_part(h: Poly) -> PowerPart:
    """Write h = C * f^ell with f monic and ell as large as possible."""
    if h.degree < 1:
        raise ConstantPolynomial(f"h must be non-constant, got degree {h.degree}")
    sfd = squarefree_decomposition(h)
    ell = reduce(gcd, (i for _, i in sfd))
    f = Poly.const(h.field, 1)
    for P, i in sfd:
        f = f * P ** (i // ell)
    C = h.lead
    if (f**ell) * C != h:
        raise AssertionError("power part does not reconstruct h")
    return PowerPart(C, f, ell)


def value_set(h: Poly) -> frozenset[int]:
    if h.is_zero():
        return frozenset({0})
    return frozenset(int(v) for v in np.unique(h.evaluate_all()))


def is_dth_power_multiple(f: Poly, d: int) -> bool:
    """True iff f = c * u^d for a unit c and a polynomial u."""
    if f.is_zero():
        raise ZeroPolynomial("zero polynomial")
    if d < 2:
        raise ValueError("d must be at least 2")
    return all(i % d == 0 for _, i in squarefree_decomposition(f))


def radical_root_count(f: Poly) -> int:
    """Number of distinct roots of f in its splitting field."""
    if f.is_zero():
        raise ZeroPolynomial("zero polynomial")
    if f.degree < 1:
        raise ConstantPolynomial("constant polynomial has no roots")
    return sum(P.degree for P, _ in squarefree_decomposition(f))


# -- text format: "c0,c1,...,cd"; extension-field coefficients as colon-joined coordinates


def parse_poly(field: Field, text: str) -> Poly:
    text = text.strip()
    if not text:
        return Poly(field, ())
    coeffs = []
    for tok in text.split(","):
        tok = tok.strip()
        if ":" in tok:
            coeffs.append(field.from_coords(int(c) for c in tok.split(":")))
        else:
            coeffs.append(field.element(int(tok)))
    return Poly(field, coeffs)


def format_poly(f: Poly) -> str:
    F = f.field
    if F.m == 1:
        return ",".join(str(c) for c in f.coeffs)
    return ",".join(":".join(str(d) for d in F.coords(c)) for c in f.coeffs)
