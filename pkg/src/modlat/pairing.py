"""The lattice pairing e_d(x, y) = d * (x + y) and its checks.

The acting semigroup is the interval [d, top], acting on elements by meet.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Callable

from .lattice import Lattice
from .rng import SeededRng


class ActionPreconditionError(ValueError):
    """An acting element is not in the interval [d, top]."""


@dataclass(frozen=True)
class PairingContext:
    lattice: Lattice
    d: Any

    def __post_init__(self):
        L = self.lattice
        if not L.contains(self.d):
            raise ValueError("d is not an element of the lattice")
        if self.d == L.bottom or self.d == L.top:
            raise ValueError("pairing target d must satisfy bottom < d < top")

    def acts(self, a) -> bool:
        """True iff ``a`` lies in the acting interval [d, top]."""
        return self.lattice.leq(self.d, a)

    def act(self, a, x):
        if not self.acts(a):
            raise ActionPreconditionError("acting element must contain d")
        return self.lattice.meet(a, x)


def pair(ctx: PairingContext, x, y):
    L = ctx.lattice
    return L.meet(ctx.d, L.join(x, y))


def leak_value(ctx: PairingContext, x, y):
    """d*x + d*y: what the pairing collapses to when the lattice is distributive."""
    L = ctx.lattice
    return L.join(L.meet(ctx.d, x), L.meet(ctx.d, y))


def check_bilinear(ctx: PairingContext, x1, x2, a, b=None) -> bool:
    """Check e(a x1, x2) == e(x1, a x2).

    With a second acting element ``b`` also check the chain
    e(a x1, b x2) == e(x1, ab x2) == e(b x1, a x2).
    """
    L = ctx.lattice
    for act in (a,) if b is None else (a, b):
        if not ctx.acts(act):
            raise ActionPreconditionError("acting element must lie in [d, top]")
    ok = pair(ctx, L.meet(a, x1), x2) == pair(ctx, x1, L.meet(a, x2))
    if b is not None:
        left = pair(ctx, L.meet(a, x1), L.meet(b, x2))
        mid = pair(ctx, x1, L.meet(L.meet(a, b), x2))
        right = pair(ctx, L.meet(b, x1), L.meet(a, x2))
        ok = ok and left == mid == right
    return ok


@dataclass
class NondegeneracyReport:
    samples: int
    distinct_values: int
    at_bottom: int
    at_d: int
    equal_to_leak: int
    value_counts: Counter = field(repr=False)

    @property
    def collapsed(self) -> bool:
        """All sampled values sit at the bottom, or all at d."""
        return self.samples > 0 and (self.at_bottom == self.samples or self.at_d == self.samples)

    @property
    def distributive_degenerate(self) -> bool:
        """Every sampled value equals the public leak d*x + d*y."""
        return self.samples > 0 and self.equal_to_leak == self.samples

    def summary(self) -> str:
        flags = [name for name, on in (("collapsed", self.collapsed),
                                       ("distributive-degenerate", self.distributive_degenerate)) if on]
        return (f"samples={self.samples} distinct={self.distinct_values} bottom={self.at_bottom} "
                f"d={self.at_d} leak-equal={self.equal_to_leak} flags={','.join(flags) or 'none'}")


def check_nondegenerate(ctx: PairingContext, sample_size: int, rng: SeededRng,
                        sampler: Callable[[SeededRng], Any] | None = None) -> NondegeneracyReport:
    """Empirical distribution of pairing values over random pairs."""
    L = ctx.lattice
    draw = sampler or L.random_element
    counts: Counter = Counter()
    leak_equal = 0
    for _ in range(sample_size):
        x, y = draw(rng), draw(rng)
        v = pair(ctx, x, y)
        counts[v] += 1
        leak_equal += v == leak_value(ctx, x, y)
    return NondegeneracyReport(
        samples=sample_size,
        distinct_values=len(counts),
        at_bottom=counts.get(L.bottom, 0),
        at_d=counts.get(ctx.d, 0),
        equal_to_leak=leak_equal,
        value_counts=counts,
    )
