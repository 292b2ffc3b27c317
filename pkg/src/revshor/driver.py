"""Classical outer loop: pre-checks, base selection, factor extraction."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .shor import ShorParams
from .simulate import PeriodRunRecord, sample_period


@dataclass(frozen=True)
class Precheck:
    status: str  # "ok", "factor" or "prime"
    factor: int | None = None


def smallest_prime_factor(N: int) -> int:
    if N % 2 == 0:
        return 2
    d = 3
    while d * d <= N:
        if N % d == 0:
            return d
        d += 2
    return N


def precheck(N: int) -> Precheck:
    """Catch inputs period finding cannot or need not handle."""
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    if N % 2 == 0:
        return Precheck("factor", 2)
    p = smallest_prime_factor(N)
    if p == N:
        return Precheck("prime")
    q = N
    while q % p == 0:
        q //= p
    if q == 1:
        return Precheck("factor", p)
    return Precheck("ok")


def choose_base(N: int, rng: np.random.Generator) -> tuple[int, int]:
    """Uniform A in [2, N-1] and gcd(A, N); a gcd above 1 is already a factor."""
    A = int(rng.integers(2, N))
    return A, gcd(A, N)


def derive_factors(N: int, A: int, r: int) -> tuple[int, int] | None:
    if r < 1 or pow(A, r, N) != 1:
        raise ValueError(f"r={r} is not a period of {A} mod {N}")
    if r % 2:
        return None
    h = pow(A, r // 2, N)
    if h == N - 1:
        return None
    for g in (gcd(h - 1, N), gcd(h + 1, N)):
        if 1 < g < N:
            return _pair(N, g)
    return None


def _pair(N: int, p: int) -> tuple[int, int]:
    return tuple(sorted((p, N // p)))


@dataclass
class FactorResult:
    N: int
    seed: int
    factors: tuple[int, int] | None = None
    attempts: int = 0
    records: list[PeriodRunRecord] = field(default_factory=list)
    A: int | None = None
    r: int | None = None
    method: str = "none"

    @property
    def success(self) -> bool:
        return self.factors is not None

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "A": self.A,
            "r": self.r,
            "factors": list(self.factors) if self.factors else [],
            "attempts": self.attempts,
            "seed": self.seed,
            "method": self.method,
            "records": [rec.as_dict() for rec in self.records],
        }


def factor(N: int, attempts: int = 25, seed: int = 0, exp_bits: int | None = None) -> FactorResult:
    """Find a nontrivial factor pair of N; fully determined by ``seed``."""
    res = FactorResult(N, seed)
    pre = precheck(N)
    if pre.status == "factor":
        res.factors, res.method = _pair(N, pre.factor), "precheck"
        return res
    if pre.status == "prime":
        res.method = "prime"
        return res
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        res.attempts += 1
        A, g = choose_base(N, rng)
        res.A = A
        if g > 1:
            res.factors, res.method = _pair(N, g), "gcd"
            return res
        rec = sample_period(ShorParams(N, A), int(rng.integers(2**32)), exp_bits)
        res.records.append(rec)
        if rec.r is None:
            continue
        res.r = rec.r
        pair = derive_factors(N, A, rec.r)
        if pair:
            res.factors, res.method = pair, "period"
            return res
    return res


def exact_success_rate(N: int, exp_bits: int | None = None) -> float:
    """Exact probability that one attempt of ``factor`` succeeds.

    Averages over the uniform base choice: a shared factor succeeds outright,
    otherwise each measurement outcome is weighted by its exact probability.
    """
    from .simulate import continued_fraction, outcome_distribution

    pre = precheck(N)
    if pre.status != "ok":
        return float(pre.status == "factor")
    total = 0.0
    for A in range(2, N):
        if gcd(A, N) > 1:
            total += 1.0
            continue
        probs = outcome_distribution(ShorParams(N, A), exp_bits)
        M = probs.size
        for m in np.nonzero(probs > 1e-15)[0]:
            r = continued_fraction(int(m), M, N, A)
            if r is not None and derive_factors(N, A, r):
                total += probs[m]
    return total / (N - 2)
