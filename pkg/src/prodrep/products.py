"""Product-representation sets: the star property, exact F_k(q; h), constructions.

Everything runs in discrete-log space: a subset A of F_q* is a bit-mask over
Z_{q-1}, a product of k elements is a sum of dlogs, and the forbidden targets
are the dlogs of the nonzero values of h.  Zero values of h never matter,
since a product of units is a unit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd

from . import bits
from .characters import c_m
from .errors import (
    ConstantPolynomial,
    EmptyConstruction,
    NoValidB0,
    PrecondViolated,
    SizeCapExceeded,
)
from .ff import Field
from .poly import Poly, PowerPart, power_part, value_set
from .sumsets import MRecord, ZnSubset, k_fold_sumset, m_record

STRUCTURE_CAP = 20


def exact_cap(k: int) -> int:
    return 64 if k == 2 else 32


@dataclass(frozen=True)
class CandidateSet:
    """A subset of F_q*, stored as a bit-mask over dlog indices."""

    N: int  # q - 1
    mask: int = 0

    @classmethod
    def from_elements(cls, field: Field, elems) -> "CandidateSet":
        out = 0
        for a in elems:
            out |= 1 << field.dlog(int(a))
        return cls(field.q - 1, out)

    @classmethod
    def from_dlogs(cls, N: int, logs) -> "CandidateSet":
        return cls(N, bits.to_mask(logs, N))

    @property
    def dlogs(self) -> tuple[int, ...]:
        return tuple(bits.iter_bits(self.mask))

    def elements(self, field: Field) -> list[int]:
        return [field.gen_pow(t) for t in self.dlogs]

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, t: int) -> bool:
        return bool(self.mask >> t & 1)

    def without(self, t: int) -> "CandidateSet":
        return CandidateSet(self.N, self.mask & ~(1 << t))

    def coset_counts(self, n: int) -> list[int]:
        counts = [0] * n
        for t in self.dlogs:
            counts[t % n] += 1
        return counts


@dataclass
class Instance:
    field: Field
    h: Poly
    k: int
    power: PowerPart
    n: int
    s: int

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def ell(self) -> int:
        return self.power.ell

    @property
    def C(self) -> int:
        return self.power.C

    @property
    def f(self) -> Poly:
        return self.power.f

    @cached_property
    def targets(self) -> int:
        """Mask of dlogs of the nonzero values of h."""
        return bits.to_mask((self.field.dlog(v) for v in value_set(self.h) if v), self.q - 1)

    @cached_property
    def m_record(self) -> MRecord:
        return m_record(self.k, self.n, self.s)

    @property
    def m_value(self) -> int:
        return self.m_record.value

    @property
    def main_term(self) -> Fraction:
        return Fraction(self.m_value * self.q, self.n)

    def coset(self, i: int) -> CandidateSet:
        N = self.q - 1
        return CandidateSet.from_dlogs(N, range(i % self.n, N, self.n))

    def fingerprint(self) -> dict:
        return {
            "p": self.field.p,
            "m": self.field.m,
            "modulus": list(self.field.modulus),
            "h": list(self.h.coeffs),
            "k": self.k,
        }


def build_instance(field: Field, h: Poly, k: int) -> Instance:
    if h.degree < 1:
        raise ConstantPolynomial("h must be non-constant")
    if k < 2:
        raise ValueError("k must be at least 2")
    pp = power_part(h)
    n = gcd(pp.ell, field.q - 1)
    s = field.coset_index(pp.C, n)
    return Instance(field, h, k, pp, n, s)


def star_check(instance: Instance, A: CandidateSet) -> bool:
    """No k distinct elements of A multiply to a value of h."""
    k, N = instance.k, instance.q - 1
    if len(A) < k:
        return True
    # reach[j]: dlog sums of j distinct elements seen so far
    reach = [1] + [0] * k
    for t in A.dlogs:
        for j in range(k, 0, -1):
            if reach[j - 1]:
                reach[j] |= bits.rotate(reach[j - 1], t, N)
        if reach[k] & instance.targets:
            return False
    return True


# -- exact search


class _ForbiddenSetSearch:
    """Largest subset of Z_N with no k distinct elements summing into targets.

    Depth-first in increasing element order with strict-improvement pruning,
    so the first maximum reached is the lexicographically smallest one.
    """

    def __init__(self, N: int, k: int, targets: int, floor: int = 0):
        self.N, self.k, self.targets = N, k, targets
        self.best: tuple[int, ...] = ()
        self.best_size = floor - 1  # sets of size `floor` are still accepted
        self.nodes = 0
        if k == 2:
            self.conflict = [0] * N
            for a in range(N):
                for b in range(N):
                    if a != b and targets >> ((a + b) % N) & 1:
                        self.conflict[a] |= 1 << b

    def _clique_cover(self, P: int) -> int:
        """Greedy partition of P into pairwise-conflicting classes (k = 2 bound)."""
        classes = 0
        conflict = self.conflict
        while P:
            classes += 1
            Q = P
            while Q:
                v = (Q & -Q).bit_length() - 1
                P &= ~(1 << v)
                Q &= conflict[v] & ~(1 << v)
        return classes

    def run(self) -> tuple[int, ...]:
        chosen: list[int] = []
        full = bits.full_mask(self.N)
        if self.k == 2:
            self._dfs2(chosen, full)
        else:
            self._dfsk(chosen, [1] + [0] * (self.k - 1), full)
        return self.best

    def _record(self, chosen: list[int]) -> None:
        if len(chosen) > self.best_size:
            self.best_size = len(chosen)
            self.best = tuple(chosen)

    def _dfs2(self, chosen: list[int], P: int) -> None:
        self.nodes += 1
        self._record(chosen)
        if not P or len(chosen) + self._clique_cover(P) <= self.best_size:
            return
        while P:
            if len(chosen) + P.bit_count() <= self.best_size:
                return
            c = (P & -P).bit_length() - 1
            P &= ~(1 << c)
            chosen.append(c)
            self._dfs2(chosen, P & ~self.conflict[c])
            chosen.pop()
            if len(chosen) + self._clique_cover(P) <= self.best_size:
                return

    def _dfsk(self, chosen: list[int], reach: list[int], P: int) -> None:
        """reach[j]: sums of j distinct chosen elements, j < k."""
        self.nodes += 1
        self._record(chosen)
        N, k, targets = self.N, self.k, self.targets
        # drop candidates that would complete a forbidden k-set
        last = reach[k - 1]
        if last:
            keep = 0
            for c in bits.iter_bits(P):
                if not bits.rotate(last, c, N) & targets:
                    keep |= 1 << c
            P = keep
        while P:
            if len(chosen) + P.bit_count() <= self.best_size:
                return
            c = (P & -P).bit_length() - 1
            P &= ~(1 << c)
            new = [1] + [reach[j] | bits.rotate(reach[j - 1], c, N) for j in range(1, k)]
            chosen.append(c)
            self._dfsk(chosen, new, P)
            chosen.pop()


@dataclass
class FkResult:
    value: int | None
    lower: int
    upper: int
    witness: CandidateSet
    main_term: Fraction
    mode: str  # "exact", "bracket" or "construction"
    nodes: int = 0

    @property
    def defect(self) -> Fraction | None:
        return None if self.value is None else self.value - self.main_term


def greedy_star_set(instance: Instance) -> CandidateSet:
    """Add elements in increasing dlog order whenever the star property survives."""
    N, k = instance.q - 1, instance.k
    reach = [1] + [0] * k
    chosen = 0
    for t in range(N):
        new = [reach[0]] + [reach[j] | bits.rotate(reach[j - 1], t, N) for j in range(1, k + 1)]
        if not new[k] & instance.targets:
            reach, chosen = new, chosen | (1 << t)
    return CandidateSet(N, chosen)


def counting_upper_bound(instance: Instance) -> int:
    """|A| <= sum over cosets, with large cosets capped at (q-1)/n and small ones below M sqrt(q)."""
    q, n, k = instance.q, instance.n, instance.k
    m = instance.f.degree
    if not 1 <= m < q:
        return q - 1
    M = 8 * c_m(q, m) + 2 * k + 2
    # largest integer strictly below M sqrt(q)
    small = _ceil_mul_sqrt(M, q) - 1
    coset = (q - 1) // n
    best = max(b * coset + (n - b) * min(small, coset) for b in range(instance.m_value + 1))
    return min(q - 1, best)


def _ceil_mul_sqrt(M: Fraction, q: int) -> int:
    """ceil(M * sqrt(q)) for rational M >= 0."""
    target = M * M * q
    x = math.isqrt(math.floor(target))
    while x * x < target:
        x += 1
    while x > 0 and (x - 1) ** 2 >= target:
        x -= 1
    return x


def exact_Fk(instance: Instance, cap: int | None = None) -> FkResult:
    """F_k(q; h) by exhaustive search, or a bracket beyond the search cap."""
    q, k = instance.q, instance.k
    cap = exact_cap(k) if cap is None else cap
    construction = coset_construction(instance) if instance.m_value > 0 else CandidateSet(q - 1)
    greedy = greedy_star_set(instance)
    start = construction if len(construction) >= len(greedy) else greedy
    if q > cap:
        return FkResult(
            None, len(start), counting_upper_bound(instance), start, instance.main_term, "bracket"
        )
    search = _ForbiddenSetSearch(q - 1, k, instance.targets, floor=len(start))
    best = search.run()
    witness = CandidateSet.from_dlogs(q - 1, best) if best else start
    if not star_check(instance, witness):
        raise AssertionError("search returned a set without the star property")
    value = len(witness)
    return FkResult(value, value, value, witness, instance.main_term, "exact", search.nodes)


def coset_construction(instance: Instance) -> CandidateSet:
    """Union of the cosets g^i H, i in a maximal s-avoiding B_0."""
    rec = instance.m_record
    if rec.value == 0:
        raise EmptyConstruction("m(k, n; s) = 0")
    out = CandidateSet(instance.q - 1)
    for i in rec.witness.elements:
        out = CandidateSet(out.N, out.mask | instance.coset(i).mask)
    expected = rec.value * (instance.q - 1) // instance.n
    if len(out) != expected or not star_check(instance, out):
        raise AssertionError("coset construction failed verification")
    return out


@dataclass(frozen=True)
class LargeCosetReport:
    indices: ZnSubset
    status: str  # "asserted", "reported" or "vacuous"
    claim_holds: bool


def certified_threshold_met(instance: Instance, threshold) -> bool:
    """threshold >= M sqrt(q), with M = 8 C_m + 2k + 2."""
    q, m = instance.q, instance.f.degree
    if not 1 <= m < q:
        return False
    M = 8 * c_m(q, m) + 2 * instance.k + 2
    thr = Fraction(threshold)
    return thr >= 0 and thr * thr >= M * M * q


def large_coset_indices(instance: Instance, A: CandidateSet, threshold) -> LargeCosetReport:
    n = instance.n
    counts = A.coset_counts(n)
    B = ZnSubset.of((i for i in range(n) if counts[i] >= threshold), n)
    holds = len(B) == 0 or instance.s not in k_fold_sumset(B, instance.k)
    if Fraction(threshold) > Fraction(instance.q - 1, n):
        status = "vacuous"
    elif certified_threshold_met(instance, threshold):
        status = "asserted"
        if not holds:
            raise AssertionError(f"s in kB for large-coset indices {B}")
    else:
        status = "reported"
    return LargeCosetReport(B, status, holds)


def structure_distance(instance: Instance, A: CandidateSet, cap: int = STRUCTURE_CAP):
    """Closest valid coset union to A: returns (B_0, |A symmetric-difference union|)."""
    n, k, s = instance.n, instance.k, instance.s
    m = instance.m_value
    if m == 0:
        raise NoValidB0("m(k, n; s) = 0: no coset union to compare with")
    if n > cap:
        raise SizeCapExceeded(f"n = {n} exceeds {cap}")
    counts = A.coset_counts(n)
    coset = (instance.q - 1) // n
    best = None
    for B0 in combinations(range(n), m):
        Z = ZnSubset.of(B0, n)
        if s in k_fold_sumset(Z, k):
            continue
        dist = len(A) + m * coset - 2 * sum(counts[i] for i in B0)
        if best is None or dist < best[1]:
            best = (Z, dist)
    if best is None:
        raise NoValidB0(f"no B_0 of size {m} avoids {s}")
    return best


# -- special constructions


def _affine_minus_one(field: Field, alpha: int, deg: int) -> Poly:
    return Poly(field, [field.neg(1)] + [0] * (deg - 1) + [alpha])


def _geometric_progression(field: Field, u: int, t: int) -> list[int]:
    out, cur = [], 1
    for _ in range(t):
        out.append(cur)
        cur = field.mul(cur, u)
    return out


@dataclass
class SpecialConstruction:
    instance: Instance
    A: CandidateSet
    t: int
    u: int
    alpha: int
    checks: dict = dc_field(default_factory=dict)


def remark3_construction(p: int, k: int) -> SpecialConstruction:
    """Geometric progression in F_p* avoiding alpha x^2 - 1 over F_{p^2}."""
    if p == 2:
        raise PrecondViolated("p must be odd")
    F = Field(p, 2)
    alpha = next(a for a in F.units() if F.dlog(a) % 2 == 1)
    h = _affine_minus_one(F, alpha, 2)
    inst = build_instance(F, h, k)
    u = Field(p).generator  # F_p sits inside F_{p^2} as the constant encodings
    t = (p - 1) // (2 * k) + 1
    elems = _geometric_progression(F, u, t)
    A = CandidateSet.from_elements(F, elems)
    sum_bound = Fraction(k * (t - 1)) - Fraction(k * (k - 1), 2)
    checks = {
        "size": len(A) == t,
        "sum_bound": sum_bound < Fraction(p - 1, 2),
        "prime_field_in_squares": all(F.dlog(c) % 2 == 0 for c in range(1, p)),
        "star": star_check(inst, A),
    }
    if not all(checks.values()):
        raise AssertionError(f"remark-3 construction failed: {checks}")
    return SpecialConstruction(inst, A, t, u, alpha, checks)


def remark4_construction(p: int, m: int, k: int) -> SpecialConstruction:
    """Geometric progression in F_p* avoiding alpha x^m - 1 over F_{p^m}."""
    if m < 3:
        raise PrecondViolated("m must be at least 3")
    if p % m != 1:
        raise PrecondViolated(f"p = {p} is not 1 mod {m}")
    F = Field(p, m)
    alpha = next(a for a in F.units() if F.dlog(a) % m != 0)
    h = _affine_minus_one(F, alpha, m)
    inst = build_instance(F, h, k)
    u = Field(p).generator
    t = (p - 1) // (2 * k) + 1
    A = CandidateSet.from_elements(F, _geometric_progression(F, u, t))
    checks = {
        "size": len(A) == t,
        "prime_field_in_mth_powers": all(F.dlog(c) % m == 0 for c in range(1, p)),
        "star": star_check(inst, A),
    }
    if not all(checks.values()):
        raise AssertionError(f"remark-4 construction failed: {checks}")
    return SpecialConstruction(inst, A, t, u, alpha, checks)


@dataclass
class InvarianceReport:
    main_terms: set
    m_values: set
    s_values: set
    generators: int
    representatives: int

    @property
    def passed(self) -> bool:
        return len(self.main_terms) == 1 and len(self.m_values) == 1


def generator_invariance_check(instance: Instance) -> InvarianceReport:
    """Rebuild the instance under every generator and several representatives of h = C f^ell."""
    F, h, k = instance.field, instance.h, instance.k
    N = F.q - 1
    main_terms, m_values, s_values = set(), set(), set()
    gens = 0
    for u in range(1, N + 1):
        if gcd(u, N) != 1:
            continue
        G = F.with_generator(F.gen_pow(u))
        inst = build_instance(G, Poly(G, h.coeffs), k)
        main_terms.add(inst.main_term)
        m_values.add(inst.m_value)
        s_values.add(inst.s)
        gens += 1
    # h = (C c^{-ell}) (c f)^ell for any unit c
    reps = 0
    for c in F.units():
        C2 = F.mul(instance.C, F.pow(F.inv(c), instance.ell))
        f2 = instance.f * c
        if (f2**instance.ell) * C2 != h:
            raise AssertionError("alternative representative does not reconstruct h")
        s2 = F.coset_index(C2, instance.n)
        rec = m_record(k, instance.n, s2)
        main_terms.add(Fraction(rec.value * F.q, instance.n))
        m_values.add(rec.value)
        reps += 1
    return InvarianceReport(main_terms, m_values, s_values, gens, reps)
