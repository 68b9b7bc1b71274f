import pytest
from hypothesis import given
from hypothesis import strategies as st

from modlat.lattice import BooleanLattice, SubspaceLattice, n5_lattice, random_extension, random_subspace
from modlat.pairing import (ActionPreconditionError, PairingContext, check_bilinear, check_nondegenerate, leak_value,
                            pair)
from modlat.rng import SeededRng


@st.composite
def instances(draw):
    q, n = draw(st.sampled_from([2, 3, 5])), draw(st.sampled_from([4, 6, 8]))
    L = SubspaceLattice(q, n)
    rng = SeededRng(draw(st.integers(0, 2**64 - 1)))
    d = random_subspace(draw(st.integers(1, n - 1)), L, rng, exact=True)
    a = random_extension(L, d, draw(st.integers(0, n)), rng)
    b = random_extension(L, d, draw(st.integers(0, n)), rng)
    x1 = random_subspace(draw(st.integers(0, n)), L, rng)
    x2 = random_subspace(draw(st.integers(0, n)), L, rng)
    return PairingContext(L, d), a, b, x1, x2


@given(instances())
def test_bilinear_chain(case):
    ctx, a, b, x1, x2 = case
    assert check_bilinear(ctx, x1, x2, a, b)


@given(instances())
def test_pairing_value_lies_below_d_and_above_leak(case):
    ctx, _, _, x, y = case
    L = ctx.lattice
    v = pair(ctx, x, y)
    assert L.leq(v, ctx.d)
    assert L.leq(leak_value(ctx, x, y), v)


@given(instances())
def test_symmetry(case):
    ctx, _, _, x, y = case
    assert pair(ctx, x, y) == pair(ctx, y, x)


def test_action_precondition(e):
    L = SubspaceLattice(2, 4)
    ctx = PairingContext(L, L.span([e(4, 1)]))
    outside = L.span([e(4, 2)])
    with pytest.raises(ActionPreconditionError):
        ctx.act(outside, L.top)
    with pytest.raises(ActionPreconditionError):
        check_bilinear(ctx, L.top, L.top, outside)
    with pytest.raises(ActionPreconditionError):
        check_bilinear(ctx, L.top, L.top, L.top, outside)
    assert ctx.act(L.top, outside) == outside


def test_context_rejects_trivial_d():
    L = SubspaceLattice(2, 3)
    with pytest.raises(ValueError):
        PairingContext(L, L.bottom)
    with pytest.raises(ValueError):
        PairingContext(L, L.top)
    with pytest.raises(ValueError):
        PairingContext(L, SubspaceLattice(2, 4).span([[1, 0, 0, 0]]))


def test_known_pairing_value(e):
    # d = <e1, e2>, x = <e1 + e3>, y = <e3>: x + y = <e1, e3>, meet with d is <e1>
    L = SubspaceLattice(3, 4)
    ctx = PairingContext(L, L.span([e(4, 1), e(4, 2)]))
    x, y = L.span([e(4, 1, 3)]), L.span([e(4, 3)])
    assert pair(ctx, x, y) == L.span([e(4, 1)])
    assert leak_value(ctx, x, y) == L.bottom


def test_boolean_pair_equals_leak():
    B = BooleanLattice(5)
    ctx = PairingContext(B, frozenset({0, 1, 2}))
    report = check_nondegenerate(ctx, 500, SeededRng(1))
    assert report.distributive_degenerate
    assert "distributive-degenerate" in report.summary()


def test_subspace_pairing_not_degenerate():
    L = SubspaceLattice(2, 4)
    ctx = PairingContext(L, L.span([[1, 0, 0, 0], [0, 1, 0, 0]]))
    report = check_nondegenerate(ctx, 500, SeededRng(2))
    assert not report.distributive_degenerate and not report.collapsed
    assert report.distinct_values > 1
    assert sum(report.value_counts.values()) == 500


def test_collapsed_detection():
    L = SubspaceLattice(2, 4)
    ctx = PairingContext(L, L.span([[1, 0, 0, 0]]))
    report = check_nondegenerate(ctx, 50, SeededRng(3), sampler=lambda rng: L.bottom)
    assert report.collapsed and report.at_bottom == 50


def test_n5_breaks_bilinearity():
    # without modularity the action is not balanced: with d = c,
    # e(c*a, b) = c*(a + b) = c while e(a, c*b) = c*(a + 0) = a
    N = n5_lattice()
    ctx = PairingContext(N, "c")
    assert pair(ctx, N.meet("c", "a"), "b") == "c"
    assert pair(ctx, "a", N.meet("c", "b")) == "a"
    assert not check_bilinear(ctx, "a", "b", "c")
