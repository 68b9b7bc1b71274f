import hashlib

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modlat.rng import SeededRng


def test_keystream_matches_definition():
    # recompute the first block straight from hashlib
    key = hashlib.sha256(b"modlat-rng/v1" + (42).to_bytes(8, "big")).digest()
    block0 = hashlib.shake_256(key + (0).to_bytes(8, "big")).digest(4096)
    block1 = hashlib.shake_256(key + (1).to_bytes(8, "big")).digest(4096)
    rng = SeededRng(42)
    assert rng.bytes(100) == block0[:100]
    assert rng.bytes(4096) == block0[100:] + block1[:100]


def test_child_and_parts_definitions():
    key = hashlib.sha256(b"modlat-rng/v1" + (7).to_bytes(8, "big")).digest()
    child_key_material = hashlib.sha256(key + (3).to_bytes(8, "big")).digest()
    assert SeededRng(7).child(3).bytes(32) == SeededRng(child_key_material).bytes(32)
    parts = hashlib.sha256(b"\x00\x00\x00\x02ab\x00\x00\x00\x01c").digest()
    assert SeededRng.from_parts(b"ab", b"c").bytes(16) == SeededRng(parts).bytes(16)
    assert SeededRng.from_parts(b"ab", b"c").bytes(16) != SeededRng.from_parts(b"a", b"bc").bytes(16)


def test_field_elements_rejection_rule():
    q = 101
    limit = (1 << 32) - ((1 << 32) % q)
    words = np.frombuffer(SeededRng(9).bytes(4 * 200), dtype=">u4").astype(np.int64)
    expect = (words[words < limit] % q)[:50]
    assert SeededRng(9).field_elements(50, q).tolist() == expect.tolist()


def test_child_does_not_advance_parent():
    a, b = SeededRng(1), SeededRng(1)
    a.child(5).bytes(10)
    assert a.bytes(8) == b.bytes(8)


def test_bad_seed():
    with pytest.raises(ValueError):
        SeededRng(-1)
    with pytest.raises(ValueError):
        SeededRng(1 << 64)


@given(st.integers(1, 200), st.integers(0, 2**64 - 1))
def test_random_bits_padding(nbits, seed):
    out = SeededRng(seed).random_bits(nbits)
    assert len(out) == (nbits + 7) // 8
    if nbits % 8:
        assert out[-1] & (0xFF >> (nbits % 8)) == 0


@given(st.integers(-5, 5), st.integers(0, 10), st.integers(0, 2**32))
def test_randint_closed_range(lo, width, seed):
    rng = SeededRng(seed)
    assert all(lo <= rng.randint(lo, lo + width) <= lo + width for _ in range(20))


def test_big_randbelow_in_range():
    rng = SeededRng(0)
    k = 10**30 + 7
    assert all(0 <= rng.randbelow(k) < k for _ in range(50))


def test_field_elements_roughly_uniform():
    x = SeededRng(11).field_elements(70000, 7)
    counts = np.bincount(x, minlength=7)
    assert np.all(np.abs(counts - 10000) < 5 * np.sqrt(10000 * 6 / 7))
