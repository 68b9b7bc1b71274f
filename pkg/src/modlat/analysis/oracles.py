"""Exhaustive-search attacks for toy parameters.

Both oracles walk the interval [d, top] of the subspace lattice, so their
cost is a sum of Gaussian coefficients; they refuse to start when that sum
exceeds the enumeration budget.
"""
from __future__ import annotations

import os

from ..ibe import PublicParams
from ..lattice import Subspace, SubspaceLattice, iter_interval
from ..pairing import PairingContext, pair
from .combinatorics import gaussian_coeff

DEFAULT_BUDGET = 10**6
BUDGET_ENV = "MODLAT_ENUM_BUDGET"


class BudgetExceededError(RuntimeError):
    def __init__(self, count: int, budget: int):
        super().__init__(f"enumeration needs {count} elements, budget is {budget}")
        self.count = count
        self.budget = budget


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


def interval_size(lo: Subspace, hi: Subspace, dims=None) -> int:
    """Number of subspaces between lo and hi (of the given dimensions, if any)."""
    c = hi.dim - lo.dim
    wanted = range(c + 1) if dims is None else [k - lo.dim for k in dims if lo.dim <= k <= hi.dim]
    return sum(gaussian_coeff(c, j, lo.q) for j in wanted)


def _require_subspace(ctx: PairingContext) -> SubspaceLattice:
    if not isinstance(ctx.lattice, SubspaceLattice):
        raise TypeError("brute-force oracles need a subspace lattice")
    return ctx.lattice


def action_preimages(ctx: PairingContext, x: Subspace, y: Subspace, budget: int | None = None) -> set[Subspace]:
    """All a in [d, top] with a * x == y: the ambiguity of recovering a from (x, a x)."""
    L = _require_subspace(ctx)
    budget = default_budget() if budget is None else budget
    size = interval_size(ctx.d, L.top)
    if size > budget:
        raise BudgetExceededError(size, budget)
    if not L.leq(y, x):
        return set()
    return {a for a in iter_interval(L, ctx.d, L.top) if L.meet(a, x) == y}


def ephemeral_dims(pub: PublicParams) -> list[int]:
    """Dimensions an honest encryptor's r can take under the policy."""
    p = pub.policy
    if p.name == "geometry5":
        return [4]
    if p.name == "general":
        return [p.n - 2, p.n - 1]
    return list(range(pub.d.dim, p.n))


def brute_force_bdh(pub: PublicParams, Q_ID: Subspace, U: Subspace, budget: int | None = None) -> set[Subspace]:
    """Every session key consistent with the public view (Q_ID, P, P_pub, U).

    Walks all r in [d, top] of an admissible dimension, keeps those an honest
    encryptor could have used and that reproduce U = r * P, and collects
    e_d(Q_ID * r, P_pub). The true key is always among them.
    """
    L = pub.policy.lattice
    budget = default_budget() if budget is None else budget
    dims = ephemeral_dims(pub)
    size = interval_size(pub.d, L.top, dims)
    if size > budget:
        raise BudgetExceededError(size, budget)
    keys = set()
    for r in iter_interval(L, pub.d, L.top, dims):
        if L.meet(r, pub.P) != U or L.leq(pub.P, r) or L.leq(Q_ID, r):
            continue
        K = pair(pub.ctx, L.meet(Q_ID, r), pub.P_pub)
        if K == L.bottom or K == pub.d:
            continue
        keys.add(K)
    return keys
