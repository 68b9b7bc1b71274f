"""Monte Carlo checks of rank and dimension statistics."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from ..ibe import IBEError, ParamPolicy, encrypt_traced, extract, public_floor, setup
from ..kernels import rank_batch
from ..rng import SeededRng
from .combinatorics import rank_pmf

_BATCH = 20_000


def sample_ranks(m: int, n: int, q: int, trials: int, rng: SeededRng) -> np.ndarray:
    """Ranks of ``trials`` uniform m x n matrices, drawn in batches."""
    out = []
    left = trials
    while left > 0:
        b = min(left, _BATCH)
        A = rng.field_elements(b * m * n, q).reshape(b, m, n)
        out.append(rank_batch(A, q))
        left -= b
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


@dataclass
class RankMCReport:
    m: int
    n: int
    q: int
    trials: int
    counts: list[int]
    exact: list[float]
    chi2: float | None = None
    dof: int | None = None
    p_value: float | None = None

    @property
    def empirical(self) -> list[float]:
        if self.trials == 0:
            return [0.0] * len(self.counts)
        return [c / self.trials for c in self.counts]

    def sigma(self, r: int) -> float:
        if self.trials == 0:
            return 0.0
        p = self.exact[r]
        return math.sqrt(p * (1 - p) / self.trials)

    def z_scores(self) -> list[float]:
        out = []
        for r, (e, p) in enumerate(zip(self.empirical, self.exact)):
            s = self.sigma(r)
            out.append(0.0 if s == 0 and e == p else (math.inf if s == 0 else (e - p) / s))
        return out

    def within(self, k: float = 3.0) -> bool:
        """Every rank's empirical frequency is within k standard errors of the exact value."""
        return self.trials > 0 and all(abs(z) <= k for z in self.z_scores())

    def rows(self) -> list[tuple]:
        return [(r, self.counts[r], self.empirical[r], self.exact[r], z)
                for r, z in enumerate(self.z_scores())]


def _chi_square(counts: list[int], exact: list[float], trials: int):
    # pool low-expectation ranks (they sit at the low end) into one cell
    exp = [p * trials for p in exact]
    obs_cells, exp_cells = [], []
    acc_o = acc_e = 0.0
    for o, e in zip(counts, exp):
        acc_o += o
        acc_e += e
        if acc_e >= 5:
            obs_cells.append(acc_o)
            exp_cells.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 and exp_cells:
        obs_cells[-1] += acc_o
        exp_cells[-1] += acc_e
    if len(exp_cells) < 2:
        return None, None, None
    chi2 = sum((o - e) ** 2 / e for o, e in zip(obs_cells, exp_cells))
    dof = len(exp_cells) - 1
    return chi2, dof, float(stats.chi2.sf(chi2, dof))


def monte_carlo_rank(m: int, n: int, q: int, trials: int, seed: int) -> RankMCReport:
    """Empirical rank frequencies against the exact distribution."""
    exact = [float(p) for p in rank_pmf(m, n, q).probabilities]
    if trials <= 0:
        return RankMCReport(m, n, q, 0, [0] * len(exact), exact)
    ranks = sample_ranks(m, n, q, trials, SeededRng(seed))
    counts = np.bincount(ranks, minlength=len(exact)).tolist()
    chi2, dof, pv = _chi_square(counts, exact, trials)
    return RankMCReport(m, n, q, trials, counts, exact, chi2, dof, pv)


@dataclass(frozen=True)
class TrendPoint:
    n: int
    m: int
    full_rank_freq: float
    exact: float


def full_rank_trend(ns, m_of_n, q: int, trials: int, seed: int) -> list[TrendPoint]:
    """Full-rank frequency as n grows with m = m_of_n(n)."""
    root = SeededRng(seed)
    points = []
    for i, n in enumerate(ns):
        m = m_of_n(n)
        ranks = sample_ranks(m, n, q, trials, root.child(i))
        freq = float(np.mean(ranks == min(m, n))) if trials else 0.0
        points.append(TrendPoint(n, m, freq, float(rank_pmf(m, n, q).full_rank())))
    return points


def _ceil(num: int, n: int, den: int) -> int:
    return -(-num * n // den)


@dataclass
class DimStats:
    policy: ParamPolicy
    trials: int
    qr: Counter = field(default_factory=Counter)
    p_pub: Counter = field(default_factory=Counter)
    join: Counter = field(default_factory=Counter)
    pairing: Counter = field(default_factory=Counter)
    key_at_public_floor: int = 0
    resampled: int = 0
    failures: Counter = field(default_factory=Counter)

    @property
    def completed(self) -> int:
        return sum(self.pairing.values())

    def predicted(self) -> dict[str, int]:
        """Dimensions expected when every random span has full rank."""
        n = self.policy.n
        return {"qr": _ceil(3, n, 8), "p_pub": _ceil(3, n, 8), "join": _ceil(3, n, 4), "pairing": _ceil(1, n, 16)}

    def frequency(self, name: str) -> float:
        """Fraction of all trials in which quantity ``name`` took its predicted dimension."""
        if self.trials == 0:
            return 0.0
        return getattr(self, name)[self.predicted()[name]] / self.trials


def protocol_dim_stats(policy: ParamPolicy, trials: int, seed: int) -> DimStats:
    """Run setup/extract/encrypt and histogram the dimensions along the pairing chain."""
    root = SeededRng(seed)
    st = DimStats(policy, trials)
    L = policy.lattice
    for t in range(trials):
        rng = root.child(t)
        try:
            pub, msk = setup(policy, rng)
            ident = rng.bytes(16)
            extract(pub, msk, ident)
            tr = encrypt_traced(pub, ident, bytes(policy.message_bytes), rng)
        except IBEError as exc:
            st.failures[type(exc).__name__] += 1
            continue
        qr = L.meet(tr.Q_ID, tr.r)
        st.qr[qr.dim] += 1
        st.p_pub[pub.P_pub.dim] += 1
        st.join[L.join(qr, pub.P_pub).dim] += 1
        st.pairing[tr.K.dim] += 1
        st.key_at_public_floor += tr.K == public_floor(pub, tr.Q_ID)
        st.resampled += tr.attempts > 1
    return st
