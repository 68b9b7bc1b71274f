"""Boneh-Franklin style identity-based encryption over the subspace lattice.

A trusted authority picks d, P and a secret s with d <= s; the public key
is P_pub = P * s. An identity hashes to a subspace Q_ID and its private
key is s * Q_ID. Encryption draws an ephemeral r >= d and masks the message
with a hash of e_d(Q_ID * r, P_pub); the receiver recomputes the same value
as e_d(S_ID, r * P).

Three dimension policies are supported:

``geometry5``
    n = 5; d a line, P and Q_ID planes, s and r hyperplanes.
``vector16ths``
    d spans ceil(5n/16) random vectors, P and Q_ID ceil(n/2), and s, r are
    d plus ceil(9n/16) random vectors. Spans of random vectors are taken as
    drawn, so their dimensions are only full with high probability.
``general``
    d of dimension floor(n/2), P of dimension floor(n/2)+1 .. n-3,
    Q_ID of dimension floor(n/2)+1 .. n-2, s and r of dimension n-1 or n-2.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property

from .gf import FieldSpec
from .lattice import Subspace, SubspaceLattice, random_extension, random_subspace
from .pairing import PairingContext, pair
from .rng import SeededRng
from .serial import subspace_to_bytes

POLICIES = ("geometry5", "vector16ths", "general")
FORMAT_VERSION = 1
RETRY_BUDGET = 64


class IBEError(Exception):
    """Base class for protocol failures."""


class SetupError(IBEError):
    pass


class H1Error(IBEError):
    pass


class ExtractionError(IBEError):
    pass


class IssuanceBoundError(ExtractionError):
    pass


class EncryptionError(IBEError):
    pass


class MessageLengthError(IBEError, ValueError):
    pass


class ParameterMismatchError(IBEError):
    pass


def _ceil_frac(num: int, n: int, den: int) -> int:
    return -(-num * n // den)


@dataclass(frozen=True)
class ParamPolicy:
    name: str
    n: int
    q: int
    message_bits: int = 128
    issuance_bound: int | None = None

    def __post_init__(self):
        if self.name not in POLICIES:
            raise ValueError(f"unknown policy {self.name!r}; expected one of {POLICIES}")
        FieldSpec(self.q)  # primality gate
        if self.name == "geometry5" and self.n != 5:
            raise ValueError("geometry5 requires n = 5")
        if self.name == "vector16ths" and self.n < 16:
            raise ValueError("vector16ths requires n >= 16")
        if self.name == "general" and self.n < 8:
            raise ValueError("general policy requires n >= 8")
        if self.message_bits < 0:
            raise ValueError("message_bits must be non-negative")
        if self.issuance_bound is None:
            object.__setattr__(self, "issuance_bound", self.q)
        if self.issuance_bound < 0:
            raise ValueError("issuance_bound must be non-negative")

    @cached_property
    def field(self) -> FieldSpec:
        return FieldSpec(self.q)

    @cached_property
    def lattice(self) -> SubspaceLattice:
        return SubspaceLattice(self.field, self.n)

    @property
    def message_bytes(self) -> int:
        return (self.message_bits + 7) // 8

    # -- dimension rules ------------------------------------------------

    def sample_d(self, rng: SeededRng) -> Subspace:
        L, n = self.lattice, self.n
        if self.name == "geometry5":
            return random_subspace(2, L, rng, exact=True)
        if self.name == "vector16ths":
            return random_subspace(_ceil_frac(5, n, 16), L, rng)
        return random_subspace(n // 2, L, rng, exact=True)

    def sample_P(self, rng: SeededRng) -> Subspace:
        L, n = self.lattice, self.n
        if self.name == "geometry5":
            return random_subspace(3, L, rng, exact=True)
        if self.name == "vector16ths":
            return random_subspace(_ceil_frac(1, n, 2), L, rng)
        return random_subspace(rng.randint(n // 2 + 1, n - 3), L, rng, exact=True)

    def sample_above_d(self, d: Subspace, rng: SeededRng) -> Subspace:
        """A secret element of [d, top]: the master key s or an ephemeral r."""
        L, n = self.lattice, self.n
        if self.name == "geometry5":
            return random_extension(L, d, 4 - d.dim, rng, target_dim=4)
        if self.name == "vector16ths":
            return random_extension(L, d, _ceil_frac(9, n, 16), rng)
        target = n - 1 - rng.randbelow(2)
        return random_extension(L, d, target - d.dim, rng, target_dim=target)

    def sample_identity_space(self, rng: SeededRng) -> tuple[Subspace, int]:
        """One raw H1 draw: (span of the drawn vectors, the dimension it should have)."""
        L, n = self.lattice, self.n
        if self.name == "geometry5":
            target = 3
        elif self.name == "vector16ths":
            target = _ceil_frac(1, n, 2)
        else:
            target = rng.randint(n // 2 + 1, n - 2)
        return random_subspace(target, L, rng), target


@dataclass(frozen=True)
class PublicParams:
    policy: ParamPolicy
    d: Subspace
    P: Subspace
    P_pub: Subspace
    version: int = FORMAT_VERSION

    @cached_property
    def ctx(self) -> PairingContext:
        return PairingContext(self.policy.lattice, self.d)

    @cached_property
    def digest(self) -> bytes:
        """SHA-256 binding every public value; ciphertext headers carry its hex form."""
        p = self.policy
        h = hashlib.sha256(b"modlat-params/v%d\n" % self.version)
        h.update(f"policy={p.name} q={p.q} n={p.n} msgbits={p.message_bits} "
                 f"bound={p.issuance_bound}\n".encode())
        for x in (self.d, self.P, self.P_pub):
            h.update(subspace_to_bytes(x))
        return h.digest()

    @property
    def header(self) -> str:
        return self.digest.hex()


@dataclass
class MasterKey:
    s: Subspace
    issued: int = 0


@dataclass(frozen=True)
class PrivateKey:
    id: bytes
    S_ID: Subspace


@dataclass(frozen=True)
class Ciphertext:
    U: Subspace
    V: bytes
    bits: int
    header: str


@dataclass(frozen=True)
class EncryptionTrace:
    """Encrypt together with its secrets. For tests and analysis only."""

    ciphertext: Ciphertext
    r: Subspace
    K: Subspace
    Q_ID: Subspace
    attempts: int


def setup(policy: ParamPolicy, rng: SeededRng) -> tuple[PublicParams, MasterKey]:
    L = policy.lattice
    for _ in range(RETRY_BUDGET):
        d = policy.sample_d(rng)
        if d == L.bottom or d == L.top:
            continue
        P = policy.sample_P(rng)
        if L.leq(d, P):
            continue
        s = policy.sample_above_d(d, rng)
        if s == L.top or L.leq(P, s):
            continue
        pub = PublicParams(policy, d, P, L.meet(P, s))
        return pub, MasterKey(s)
    raise SetupError(f"no admissible (d, P, s) for {policy.name} n={policy.n} q={policy.q} "
                     f"after {RETRY_BUDGET} attempts")


def public_floor(pub: PublicParams, Q: Subspace) -> Subspace:
    """d*Q + d*P, a public lower bound on every session key for identity space Q.

    Since d <= r and d <= s, e_d(Q*r, P*s) >= d*Q + d*P always; a key equal to
    this bound is computable without any secret.
    """
    L = pub.policy.lattice
    return L.join(L.meet(pub.d, Q), L.meet(pub.d, pub.P))


def h1(pub: PublicParams, identity: bytes) -> Subspace:
    """Hash an identity to its public subspace Q_ID; computable from ``pub`` alone."""
    L = pub.policy.lattice
    for counter in range(RETRY_BUDGET):
        rng = SeededRng.from_parts(b"modlat-h1/v1", pub.digest, bytes(identity), counter.to_bytes(4, "big"))
        Q, target = pub.policy.sample_identity_space(rng)
        if Q.dim != target or L.leq(pub.d, Q) or Q == pub.P:
            continue
        # every session key for Q lies between public_floor(Q) and d; P_pub <= Q pins
        # it to d*Q and a floor equal to d pins it to d, whatever r is
        if L.leq(pub.P_pub, Q) or public_floor(pub, Q) == pub.d:
            continue
        return Q
    raise H1Error(f"identity {identity!r} did not hash to an admissible subspace in {RETRY_BUDGET} attempts")


def h2(k: Subspace, out_bits: int) -> bytes:
    """SHA-256 in counter mode over the canonical serialization, truncated to ``out_bits``."""
    data = subspace_to_bytes(k)
    nbytes = (out_bits + 7) // 8
    out = bytearray()
    counter = 0
    while len(out) < nbytes:
        out += hashlib.sha256(data + counter.to_bytes(4, "big")).digest()
        counter += 1
    out = out[:nbytes]
    if out_bits % 8:
        out[-1] &= (0xFF << (8 - out_bits % 8)) & 0xFF
    return bytes(out)


def _xor(a: bytes, b: bytes) -> bytes:
    return bytes(x ^ y for x, y in zip(a, b))


def check_message(policy: ParamPolicy, message: bytes) -> None:
    if len(message) != policy.message_bytes:
        raise MessageLengthError(f"message must be {policy.message_bits} bits "
                                 f"({policy.message_bytes} bytes), got {len(message)} bytes")
    if policy.message_bits % 8 and message[-1] & (0xFF >> (policy.message_bits % 8)):
        raise MessageLengthError(f"message has bits set beyond bit {policy.message_bits}")


def extract(pub: PublicParams, msk: MasterKey, identity: bytes) -> PrivateKey:
    policy = pub.policy
    L = policy.lattice
    if msk.issued >= policy.issuance_bound:
        raise IssuanceBoundError(f"issuance bound {policy.issuance_bound} reached")
    Q = h1(pub, identity)
    if L.leq(Q, msk.s):
        raise ExtractionError("Q_ID <= s: identity subspace lies inside the master key")
    S = L.meet(msk.s, Q)
    if S == L.bottom:
        raise ExtractionError("S_ID = s * Q_ID is the zero subspace")
    msk.issued += 1
    return PrivateKey(bytes(identity), S)


def encrypt_traced(pub: PublicParams, identity: bytes, message: bytes, rng: SeededRng) -> EncryptionTrace:
    policy = pub.policy
    L = policy.lattice
    check_message(policy, message)
    Q = h1(pub, identity)
    for attempt in range(1, RETRY_BUDGET + 1):
        r = policy.sample_above_d(pub.d, rng)
        if L.leq(pub.P, r) or L.leq(Q, r):
            continue
        K = pair(pub.ctx, L.meet(Q, r), pub.P_pub)
        if K == L.bottom or K == pub.d:
            continue
        U = L.meet(r, pub.P)
        V = _xor(message, h2(K, policy.message_bits))
        return EncryptionTrace(Ciphertext(U, V, policy.message_bits, pub.header), r, K, Q, attempt)
    raise EncryptionError(f"no admissible ephemeral r in {RETRY_BUDGET} attempts")


def encrypt(pub: PublicParams, identity: bytes, message: bytes, rng: SeededRng) -> Ciphertext:
    return encrypt_traced(pub, identity, message, rng).ciphertext


def session_key(pub: PublicParams, key: PrivateKey, c: Ciphertext) -> Subspace:
    """The pairing value e_d(S_ID, U) that unmasks ``c``."""
    return pair(pub.ctx, key.S_ID, c.U)


def decrypt(pub: PublicParams, key: PrivateKey, c: Ciphertext) -> bytes:
    if c.header != pub.header:
        raise ParameterMismatchError("ciphertext was produced under different public parameters")
    if c.bits != pub.policy.message_bits or len(c.V) != pub.policy.message_bytes:
        raise ParameterMismatchError(f"ciphertext carries {c.bits} bits, parameters expect "
                                     f"{pub.policy.message_bits}")
    if not pub.policy.lattice.contains(c.U) or not pub.policy.lattice.contains(key.S_ID):
        raise ParameterMismatchError("key or ciphertext lives in a different lattice")
    return _xor(c.V, h2(session_key(pub, key, c), c.bits))
