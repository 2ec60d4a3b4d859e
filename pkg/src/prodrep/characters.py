"""Multiplicative characters of F_q* and the character-sum machinery.

The character with index j sends g^t to exp(2 pi i j t / (q-1)) and is
extended by chi(0) = 0.  Character values are carried as exponent residues
mod q-1 and only turned into complex numbers when summed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd

import numpy as np

from . import bits
from .errors import HypothesisViolated, ZeroElement
from .ff import Field
from .poly import Poly, radical_root_count, squarefree_decomposition, value_set

WEIL_TOL = 1e-6


@dataclass(frozen=True)
class Character:
    field: Field
    j: int

    @property
    def order(self) -> int:
        n = self.field.q - 1
        return n // gcd(self.j % n, n) if n > 1 else 1

    @property
    def is_trivial(self) -> bool:
        return self.j % (self.field.q - 1) == 0

    def exponent(self, a: int) -> int | None:
        """chi(a) = exp(2 pi i * exponent / (q-1)); None at a = 0."""
        if a == 0:
            return None
        return self.j * self.field.dlog(a) % (self.field.q - 1)

    def __call__(self, a: int) -> complex:
        e = self.exponent(a)
        if e is None:
            return 0j
        return complex(np.exp(2j * np.pi * e / (self.field.q - 1)))


def characters(field: Field) -> list[Character]:
    return [Character(field, j) for j in range(field.q - 1)]


def _unit_root_sum(counts: np.ndarray) -> complex:
    """sum_r counts[r] * exp(2 pi i r / N)."""
    N = len(counts)
    r = np.arange(N)
    return complex(np.sum(counts * np.exp(2j * np.pi * r / N)))


@dataclass(frozen=True)
class SumResult:
    value: complex
    magnitude: float
    bound: float


def char_sum(chi: Character, f: Poly, a: int) -> SumResult:
    """sum over x in F_q of chi(a f(x)), by direct evaluation at every x."""
    F = chi.field
    if a == 0:
        raise ZeroElement("the scalar a must be nonzero")
    vals = F.vmul(f.evaluate_all(), a)
    logs = F.log_table[vals[vals != 0]]
    N = F.q - 1
    counts = np.bincount(chi.j * logs % N, minlength=N)
    value = _unit_root_sum(counts)
    bound = (radical_root_count(f) - 1) * math.sqrt(F.q)
    return SumResult(value, abs(value), bound)


@dataclass
class WeilReport:
    q: int
    f: Poly
    checked: int = 0
    max_ratio: float = 0.0
    skipped: list[tuple[int, int]] = dc_field(default_factory=list)
    violations: list[dict] = dc_field(default_factory=list)
    records: list[dict] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def weil_verify(field: Field, f: Poly) -> WeilReport:
    """Check the Weil bound for every nontrivial character and every scalar a.

    Characters whose order d makes f a constant multiple of a d-th power are
    skipped and listed in ``skipped`` as (j, d).
    """
    F = field
    N = F.q - 1
    mults = [i for _, i in squarefree_decomposition(f)]
    roots = radical_root_count(f)
    bound = (roots - 1) * math.sqrt(F.q)
    report = WeilReport(F.q, f)

    vals = f.evaluate_all()
    hist = np.bincount(F.log_table[vals[vals != 0]], minlength=N)
    # base[j] = sum_t hist[t] e(j t / N); then S(j, a) = base[j] * e(j log a / N)
    base = np.fft.ifft(hist) * N
    t = np.arange(N)
    phase = np.exp(2j * np.pi * np.outer(t, t) / N)  # rows: j, cols: log a
    S = base[:, None] * phase
    mags = np.abs(S)

    for j in range(1, N):
        d = N // gcd(j, N)
        if all(e % d == 0 for e in mults):
            report.skipped.append((j, d))
            continue
        row = mags[j]
        worst = int(np.argmax(row))
        report.checked += N
        if bound > 0:
            report.max_ratio = max(report.max_ratio, float(row.max()) / bound)
        ok = bool(row.max() <= bound + WEIL_TOL)
        rec = {
            "char_index": j,
            "a": F.gen_pow(worst),
            "magnitude": float(row[worst]),
            "bound": bound,
            "pass": ok,
        }
        report.records.append(rec)
        if not ok:
            report.violations.append(rec)
    return report


def count_representations(field: Field, A, B, f: Poly) -> int:
    """N = #{(a, b, x) in A x B x F_q : a b = f(x)}."""
    F = field
    N = F.q - 1
    la = np.zeros(N, dtype=np.int64)
    lb = np.zeros(N, dtype=np.int64)
    for a in A:
        la[F.dlog(a)] = 1
    for b in B:
        lb[F.dlog(b)] = 1
    # pair_count[t] = #{(a, b): log a + log b = t}
    conv = np.convolve(la, lb)
    pair_count = conv[:N].copy()
    pair_count[: len(conv) - N] += conv[N:]
    vals = f.evaluate_all()
    hist = np.bincount(F.log_table[vals[vals != 0]], minlength=N)
    return int(hist @ pair_count)


def c_m(q: int, m: int) -> Fraction:
    """(m-1)(q-1)/(q-m), exact."""
    return Fraction((m - 1) * (q - 1), q - m)


def representation_threshold(q: int, m: int) -> Fraction:
    return q * Fraction(q - 1, q - m) ** 2 * (m - 1) ** 2


def distinct_product_threshold_met(size: int, q: int, m: int, k: int) -> bool:
    """size >= 8 C_m sqrt(q) + 2k + 2, decided in exact arithmetic."""
    slack = size - 2 * k - 2
    return slack >= 0 and slack * slack >= 64 * c_m(q, m) ** 2 * q


def distinct_product_min_size(q: int, m: int, k: int) -> int:
    """Smallest integer size meeting the distinct-product threshold."""
    lo = 2 * k + 2
    hi = lo + 8 * math.ceil(c_m(q, m) * (math.isqrt(q) + 1)) + 1
    while lo < hi:
        mid = (lo + hi) // 2
        if distinct_product_threshold_met(mid, q, m, k):
            hi = mid
        else:
            lo = mid + 1
    return lo


def power_multiple_for_some_divisor(f: Poly) -> bool:
    """True iff f = c u^d for some d > 1 dividing q-1."""
    g = 0
    for _, i in squarefree_decomposition(f):
        g = gcd(g, i)
    return gcd(g, f.field.q - 1) > 1


@dataclass(frozen=True)
class RepresentationReport:
    size_product: int
    threshold: Fraction
    above_threshold: bool
    N: int

    @property
    def implication_holds(self) -> bool:
        return (not self.above_threshold) or self.N > 0


def gyarmati_threshold_check(field: Field, f: Poly, A, B) -> RepresentationReport:
    """Count N(A, B) and confirm N > 0 whenever |A||B| exceeds the threshold.

    The threshold is q ((q-1)/(q-m))^2 (m-1)^2 with m = deg f.
    """
    q, m = field.q, f.degree
    if not 1 < m < q:
        raise HypothesisViolated(f"degree {m} outside 1 < m < {q}")
    if power_multiple_for_some_divisor(f):
        raise HypothesisViolated("f is a constant multiple of a d-th power with d | q-1")
    A, B = list(A), list(B)
    thr = representation_threshold(q, m)
    prod = len(A) * len(B)
    rep = RepresentationReport(prod, thr, prod > thr, count_representations(field, A, B, f))
    if not rep.implication_holds:
        raise AssertionError(f"representation count is 0 above threshold: {rep}")
    return rep


@dataclass
class WitnessResult:
    status: str  # "found", "none" or "inconclusive"
    elements: tuple[int, ...] = ()
    x0: int | None = None
    guaranteed: bool = False
    work: int = 0

    @property
    def found(self) -> bool:
        return self.status == "found"


def find_distinct_product_witness(
    field: Field, f: Poly, sets, cap: int = 10**8
) -> WitnessResult:
    """Distinct a_i in A_i whose product lies in f(F_q).

    ``guaranteed`` records whether every |A_i| meets the distinct-product size
    threshold; for small q it never does and the search result is all we get.
    """
    F = field
    N = F.q - 1
    sets = [sorted(set(int(a) for a in A)) for A in sets]
    k = len(sets)
    m = f.degree
    guaranteed = 1 <= m < F.q and not power_multiple_for_some_divisor(f) and all(
        distinct_product_threshold_met(len(A), F.q, m, k) for A in sets
    )

    vals = f.evaluate_all()
    first_x: dict[int, int] = {}
    for x, v in enumerate(vals.tolist()):
        if v and v not in first_x:
            first_x[v] = x
    target = bits.to_mask((F.dlog(v) for v in first_x), N)
    masks = [bits.to_mask((F.dlog(a) for a in A), N) for A in sets]
    # reach[i]: sums of one element from each of A_i..A_{k-1}, repetition ignored
    reach = [0] * (k + 1)
    reach[k] = 1
    for i in range(k - 1, -1, -1):
        reach[i] = bits.sumset(reach[i + 1], masks[i], N)

    work = 0
    chosen: list[int] = []

    def dfs(i: int, partial: int, used: int):
        nonlocal work
        # need t in target with t - partial in reach[i]
        if not (bits.rotate(target, -partial, N) & reach[i]):
            return None
        if i == k - 1:
            hit = bits.rotate(target, -partial, N) & masks[i] & ~used
            if hit:
                return (hit & -hit).bit_length() - 1
            return None
        for la in bits.iter_bits(masks[i] & ~used):
            work += 1
            if work > cap:
                raise _Inconclusive
            chosen.append(la)
            last = dfs(i + 1, (partial + la) % N, used | (1 << la))
            if last is not None:
                return last
            chosen.pop()
        return None

    try:
        last = dfs(0, 0, 0) if k else None
    except _Inconclusive:
        return WitnessResult("inconclusive", guaranteed=guaranteed, work=work)
    if last is None:
        if guaranteed:
            raise AssertionError("no witness although every set meets the size threshold")
        return WitnessResult("none", guaranteed=guaranteed, work=work)
    logs = chosen + [last]
    elems = tuple(F.gen_pow(t) for t in logs)
    prod = 1
    for e in elems:
        prod = F.mul(prod, e)
    return WitnessResult("found", elems, first_x[prod], guaranteed, work)


class _Inconclusive(Exception):
    pass


def value_logs(field: Field, h: Poly) -> int:
    """Bit-mask over Z_{q-1} of dlogs of the nonzero values of h."""
    return bits.to_mask((field.dlog(v) for v in value_set(h) if v), field.q - 1)


def count_k_representations(field: Field, sets, f: Poly) -> int:
    """#{(a_1, ..., a_k, x) : a_i in A_i, a_1 ... a_k = f(x)}, by cyclic convolution of dlogs."""
    F = field
    N = F.q - 1
    acc = np.zeros(N, dtype=np.int64)
    acc[0] = 1
    for A in sets:
        ind = np.zeros(N, dtype=np.int64)
        for a in A:
            ind[F.dlog(a)] = 1
        nxt = np.zeros(N, dtype=np.int64)
        for t in np.flatnonzero(ind):
            nxt += np.roll(acc, int(t))
        acc = nxt
    vals = f.evaluate_all()
    hist = np.bincount(F.log_table[vals[vals != 0]], minlength=N)
    return int(hist @ acc)


@dataclass(frozen=True)
class KSetProbe:
    sizes: tuple[int, ...]
    size_product: int
    N: int

    @property
    def empty(self) -> bool:
        return self.N == 0


def kset_probe(field: Field, f: Poly, sets) -> KSetProbe:
    """Report N for k sets; nothing is asserted, large products with N = 0 are data."""
    sets = [sorted(set(int(a) for a in A)) for A in sets]
    prod = 1
    for A in sets:
        prod *= len(A)
    return KSetProbe(tuple(len(A) for A in sets), prod, count_k_representations(field, sets, f))
