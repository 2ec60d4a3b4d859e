"""k-fold sumsets in Z_n and the invariant m(k, n; s).

m(k, n; s) is the largest |B| over B in Z_n with s outside
kB = {b_1 + ... + b_k : b_i in B}; summands may repeat.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from . import bits
from .errors import Degenerate, NotAUnit, NotCoprime, SizeCapExceeded

CERTIFY_CAP = 28


@dataclass(frozen=True)
class ZnSubset:
    n: int
    mask: int = 0

    @classmethod
    def of(cls, elems, n: int) -> "ZnSubset":
        return cls(n, bits.to_mask(elems, n))

    @classmethod
    def full(cls, n: int) -> "ZnSubset":
        return cls(n, bits.full_mask(n))

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(bits.iter_bits(self.mask))

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> (x % self.n) & 1)

    def __iter__(self):
        return iter(self.elements)

    def __add__(self, other: "ZnSubset") -> "ZnSubset":
        return ZnSubset(self.n, bits.sumset(self.mask, other.mask, self.n))

    def translate(self, t: int) -> "ZnSubset":
        return ZnSubset(self.n, bits.rotate(self.mask, t, self.n))

    def scale(self, lam: int) -> "ZnSubset":
        return ZnSubset.of((lam * x for x in self.elements), self.n)

    def __repr__(self) -> str:
        return f"ZnSubset(n={self.n}, {set(self.elements) or '{}'})"


def k_fold_sumset(B: ZnSubset, k: int) -> ZnSubset:
    """kB by square-and-add on the sumset semiring."""
    if k < 1:
        raise ValueError("k must be positive")
    n = B.n
    result = None
    base = B.mask
    while k:
        if k & 1:
            result = base if result is None else bits.sumset(result, base, n)
        k >>= 1
        if k:
            base = bits.sumset(base, base, n)
    return ZnSubset(n, result)


def _floor_term(num: int, k: int) -> int:
    return num // k + 1


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def m_bounds(k: int, n: int) -> tuple[int, int]:
    """Lower and upper bounds for m(k, n; s), valid for every s."""
    lower = max(_floor_term(d - 1 - gcd(d, k), k) * (n // d) for d in divisors(n))
    upper = max(_floor_term(d - 2, k) * (n // d) for d in divisors(n))
    return lower, upper


def m_formula_coprime(k: int, n: int) -> int:
    if gcd(k, n) != 1:
        raise NotCoprime(f"gcd({k}, {n}) = {gcd(k, n)}")
    return max(_floor_term(d - 2, k) * (n // d) for d in divisors(n))


def zero_rule(k: int, n: int, s: int) -> bool:
    """True exactly when m(k, n; s) = 0."""
    return k % n == 0 and s % n == 0


def unit_scale(k: int, n: int, s: int, lam: int) -> int:
    if gcd(lam, n) != 1:
        raise NotAUnit(f"{lam} is not a unit mod {n}")
    return lam * s % n


def translate_reduce(k: int, n: int, s: int) -> tuple[int, int]:
    """(0, t) with k t = -s, so B avoids s in kB iff B + t avoids 0."""
    if gcd(k, n) != 1:
        raise NotCoprime(f"gcd({k}, {n}) = {gcd(k, n)}")
    if n == 1:
        return 0, 0
    t = -pow(k, -1, n) * s % n
    return 0, t


def interval_construction(k: int, n: int, s: int, d: int) -> ZnSubset:
    """Preimage of an interval of Z_d avoiding s in the k-fold sumset."""
    if d <= 0 or n % d:
        raise ValueError(f"{d} does not divide {n}")
    r = gcd(d, k)
    t = _floor_term(d - 1 - r, k)
    if t <= 0:
        raise Degenerate(f"interval length {t} at d = {d}")
    span = k * (t - 1)
    ps = s % d
    forbidden = {(ps - i) % d for i in range(span + 1)}
    y = next(v for v in range(0, d, r) if v not in forbidden)
    # solve k a = y in Z_d: (k/r) a = y/r mod d/r
    dr = d // r
    a = (y // r) * pow(k // r, -1, dr) % dr if dr > 1 else 0
    T = [(a + i) % d for i in range(t)]
    B = ZnSubset.of((x for x in range(n) if x % d in T), n)
    if s in k_fold_sumset(B, k):
        raise AssertionError(f"interval construction failed for k={k} n={n} s={s} d={d}")
    return B


def best_interval_construction(k: int, n: int, s: int) -> ZnSubset:
    best = ZnSubset(n, 0)
    for d in divisors(n):
        try:
            B = interval_construction(k, n, s, d)
        except Degenerate:
            continue
        if len(B) > len(best):
            best = B
    return best


# -- exact search


def canonical_target(k: int, n: int, s: int) -> tuple[int, int, int]:
    """Smallest s' = lam*s + k*t over units lam and shifts t, with (lam, t)."""
    best = (s % n, 1, 0)
    for lam in range(1, n + 1):
        if gcd(lam, n) != 1:
            continue
        for t in range(n):
            v = (lam * s + k * t) % n
            if v < best[0]:
                best = (v, lam, t)
    return best


class _Searcher:
    """DFS over subsets in increasing order, keeping the j-fold sumsets."""

    def __init__(self, k: int, n: int, s: int):
        self.k, self.n, self.s = k, n, s % n
        # preimage[i][r] = mask of c with i*c = r (mod n)
        self.preimage = [[0] * n for _ in range(k + 1)]
        for i in range(k + 1):
            for c in range(n):
                self.preimage[i][i * c % n] |= 1 << c
        self.nodes = 0

    def allowed(self, sums: list[int]) -> int:
        """Elements c that can join B without putting s in kB."""
        k, n, s = self.k, self.n, self.s
        forbid = 0
        for i in range(1, k + 1):
            pre = self.preimage[i]
            for x in bits.iter_bits(sums[k - i]):
                forbid |= pre[(s - x) % n]
        return bits.full_mask(n) & ~forbid

    def extend(self, sums: list[int], c: int) -> list[int]:
        k, n = self.k, self.n
        out = [1]
        for j in range(1, k):
            acc = 0
            for i in range(j + 1):
                acc |= bits.rotate(sums[j - i], i * c, n)
            out.append(acc)
        return out

    def find(self, target: int, first_limit: int) -> tuple[int, ...] | None:
        """Lexicographically smallest B with |B| = target avoiding s, or None.

        Only the smallest element is restricted to [0, first_limit).
        """
        if target == 0:
            return ()
        k, n = self.k, self.n
        chosen: list[int] = []

        def dfs(sums: list[int], cand: int) -> bool:
            need = target - len(chosen)
            if need == 0:
                return True
            while cand:
                if cand.bit_count() < need:
                    return False
                c = (cand & -cand).bit_length() - 1
                cand ^= 1 << c
                self.nodes += 1
                new = self.extend(sums, c)
                chosen.append(c)
                if dfs(new, self.allowed(new) & cand if need > 1 else cand):
                    return True
                chosen.pop()
            return False

        sums0 = [1] + [0] * (k - 1)
        root = self.allowed(sums0) & ((1 << first_limit) - 1)
        for c in bits.iter_bits(root):
            if n - c < target:
                break
            self.nodes += 1
            new = self.extend(sums0, c)
            rest = bits.full_mask(n) & ~((1 << (c + 1)) - 1)
            chosen.append(c)
            if dfs(new, self.allowed(new) & rest if target > 1 else rest):
                return tuple(chosen)
            chosen.pop()
        return None


@dataclass(frozen=True)
class MRecord:
    k: int
    n: int
    s: int
    value: int
    witness: ZnSubset
    method: str  # "search", "formula", "zero-rule" or "bounds-only"
    lower: int
    upper: int

    def to_row(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "s": self.s,
            "lower": self.lower,
            "value": self.value,
            "upper": self.upper,
            "method": self.method,
            "witness": " ".join(map(str, self.witness.elements)),
        }


@lru_cache(maxsize=None)
def _search_canonical(k: int, n: int, s: int) -> tuple[int, tuple[int, ...], int]:
    lower, upper = m_bounds(k, n)
    searcher = _Searcher(k, n, s)
    # translating B by t with k t = 0 fixes s, so min(B) < n / gcd(k, n) suffices
    first_limit = n // gcd(k, n)
    value, witness = None, None
    for target in range(min(upper, n), -1, -1):
        witness = searcher.find(target, first_limit)
        if witness is not None:
            value = target
            break
    # certify maximality by search rather than by trusting the upper bound
    while value < n:
        bigger = searcher.find(value + 1, first_limit)
        if bigger is None:
            break
        value, witness = value + 1, bigger
    return value, witness, searcher.nodes


def m_exact(k: int, n: int, s: int, cap: int = CERTIFY_CAP) -> MRecord:
    """Certified m(k, n; s) by exhaustive pruned search, with a witness."""
    if k < 2 or n < 1:
        raise ValueError("need k >= 2 and n >= 1")
    if n > cap:
        raise SizeCapExceeded(f"n = {n} exceeds certification cap {cap}")
    s %= n
    lower, upper = m_bounds(k, n)
    rep, lam, t = canonical_target(k, n, s)
    value, wit, _ = _search_canonical(k, n, rep)
    # B' avoids lam*s + k*t  =>  lam^{-1}(B' - t) avoids s
    lam_inv = pow(lam, -1, n) if n > 1 else 0
    witness = ZnSubset.of(((x - t) * lam_inv for x in wit), n)
    if len(witness) != value or s in k_fold_sumset(witness, k):
        raise AssertionError(f"bad witness for m({k},{n};{s})")
    return MRecord(k, n, s, value, witness, "search", lower, upper)


def m_record(k: int, n: int, s: int, cap: int = CERTIFY_CAP) -> MRecord:
    """m_exact within the cap; beyond it the exact rules or just the bounds."""
    if n <= cap:
        return m_exact(k, n, s, cap)
    s %= n
    lower, upper = m_bounds(k, n)
    if zero_rule(k, n, s):
        return MRecord(k, n, s, 0, ZnSubset(n, 0), "zero-rule", lower, upper)
    witness = best_interval_construction(k, n, s)
    if gcd(k, n) == 1:
        value = m_formula_coprime(k, n)
        if len(witness) != value:
            raise AssertionError("coprime construction does not reach the formula")
        return MRecord(k, n, s, value, witness, "formula", lower, upper)
    return MRecord(k, n, s, len(witness), witness, "bounds-only", lower, upper)


def brute_force_sumset(B, k: int, n: int) -> set[int]:
    """All sums of k elements of B (with repetition), by enumeration."""
    from itertools import product

    return {sum(t) % n for t in product(list(B), repeat=k)}
