"""Exact counting and probability for subspaces and random matrices over F_q."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _check_q(q: int) -> None:
    if q < 2:
        raise ValueError(f"field size must be at least 2, got {q}")


def gaussian_coeff(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n; 0 when k is outside [0, n].

    Each partial product of (q^(n-i) - 1) / (q^(i+1) - 1) is itself a
    Gaussian coefficient, so every division is exact.
    """
    _check_q(q)
    if k < 0 or k > n:
        return 0
    k = min(k, n - k)
    value = 1
    for i in range(k):
        value, rem = divmod(value * (q ** (n - i) - 1), q ** (i + 1) - 1)
        assert rem == 0
    return value


def subspace_count(n: int, q: int) -> int:
    """Total number of subspaces of F_q^n."""
    return sum(gaussian_coeff(n, k, q) for k in range(n + 1))


@dataclass(frozen=True)
class RankDistribution:
    m: int
    n: int
    q: int
    probabilities: tuple[Fraction, ...]

    def __getitem__(self, r: int) -> Fraction:
        if 0 <= r < len(self.probabilities):
            return self.probabilities[r]
        return Fraction(0)

    @property
    def max_rank(self) -> int:
        return min(self.m, self.n)

    def expectation(self) -> Fraction:
        return sum((r * p for r, p in enumerate(self.probabilities)), Fraction(0))

    def full_rank(self) -> Fraction:
        return self[self.max_rank]


def rank_pmf(m: int, n: int, q: int) -> RankDistribution:
    """Exact rank distribution of a uniform m x n matrix over F_q.

        Pr(rank = r) = q^-((n-r)(m-r)) * prod_{i<r} (1-q^(i-n))(1-q^(i-m)) / (1-q^(i-r))

    The formula is stated for m <= n; other shapes use rank(M) = rank(M^T).
    """
    _check_q(q)
    if m < 0 or n < 0:
        raise ValueError("matrix dimensions must be non-negative")
    a, b = min(m, n), max(m, n)
    Q = Fraction(q)
    probs = []
    for r in range(a + 1):
        p = Q ** (-(b - r) * (a - r))
        for i in range(r):
            p *= (1 - Q ** (i - b)) * (1 - Q ** (i - a)) / (1 - Q ** (i - r))
        probs.append(p)
    return RankDistribution(m, n, q, tuple(probs))


def full_rank_probability(m: int, n: int, q: int) -> Fraction:
    """prod_{i<m} (1 - q^(i-n)) for m <= n: each new row avoids the span so far."""
    _check_q(q)
    a, b = min(m, n), max(m, n)
    Q = Fraction(q)
    p = Fraction(1)
    for i in range(a):
        p *= 1 - Q ** (i - b)
    return p


@dataclass(frozen=True)
class ExpectedDims:
    dim1: Fraction
    dim2: Fraction
    union: Fraction
    intersection: Fraction


def expected_dims(m1: int, m2: int, n: int, q: int) -> ExpectedDims:
    """Expected dimensions for V1, V2 spanned by m1 and m2 uniform vectors of F_q^n.

    The sum V1 + V2 is the row space of the stacked (m1+m2) x n matrix, and
    the intersection follows from dim V1 + dim V2 = dim(V1 + V2) + dim(V1 & V2)
    by linearity of expectation.
    """
    e1 = rank_pmf(m1, n, q).expectation()
    e2 = rank_pmf(m2, n, q).expectation()
    eu = rank_pmf(m1 + m2, n, q).expectation()
    return ExpectedDims(e1, e2, eu, e1 + e2 - eu)


def count_containing_spaces(n: int, inner_dim: int, outer_dim: int, q: int) -> int:
    """Number of outer_dim-dimensional subspaces of F_q^n containing a fixed inner_dim one."""
    if not 0 <= inner_dim <= outer_dim <= n:
        raise ValueError(f"need 0 <= inner_dim <= outer_dim <= n, got {inner_dim}, {outer_dim}, {n}")
    return gaussian_coeff(n - inner_dim, outer_dim - inner_dim, q)


def _ceil(num: int, n: int, den: int) -> int:
    return -(-num * n // den)


@dataclass(frozen=True)
class CountingBound:
    label: str
    count: int
    q: int
    exponent: Fraction

    @property
    def holds(self) -> bool:
        """count >= q^exponent, compared exactly as count^den >= q^num."""
        num, den = self.exponent.numerator, self.exponent.denominator
        return self.count ** den >= self.q ** num


def policy_counting_bounds(n: int, q: int) -> list[CountingBound]:
    """The two subspace counts that size the pairing's search space at ambient dimension n.

    * ceil(3n/4)-spaces containing a fixed ceil(n/2)-space, against q^(n^2/16);
    * all ceil(3n/4)-spaces, against q^(3n^2/16).
    """
    half, three_q = _ceil(1, n, 2), _ceil(3, n, 4)
    return [
        CountingBound(f"[{three_q}-spaces containing a {half}-space]", count_containing_spaces(n, half, three_q, q),
                      q, Fraction(n * n, 16)),
        CountingBound(f"[{three_q}-spaces of F_q^{n}]", gaussian_coeff(n, three_q, q), q, Fraction(3 * n * n, 16)),
    ]
