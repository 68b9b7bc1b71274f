"""IND-ID-CPA game between a challenger running the IBE scheme and an adversary.

Each round: setup; phase 1 (key-extraction queries); the adversary submits
(M0, M1, ID); the challenger encrypts M_b for a uniform bit b; phase 2; the
adversary guesses b. The advantage is |Pr[guess = b] - 1/2|.

Decryption queries go through the same oracle object but are capped by
``q_c``, which is 0 for the CPA game.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from ..ibe import (Ciphertext, IBEError, MasterKey, ParamPolicy, PrivateKey, PublicParams, check_message,
                   decrypt, encrypt, extract, h1, h2, setup)
from ..pairing import pair
from ..rng import SeededRng
from .oracles import brute_force_bdh


class ProtocolViolation(RuntimeError):
    """The adversary broke the rules of the game."""


class Oracles:
    """Challenger-side query interface handed to the adversary."""

    def __init__(self, pub: PublicParams, msk: MasterKey, q_id: int, q_c: int):
        self._pub = pub
        self._msk = msk
        self.q_id = q_id
        self.q_c = q_c
        self.extracted: set[bytes] = set()
        self.decryptions = 0
        self.challenge_id: bytes | None = None
        self.challenge: Ciphertext | None = None

    def extract(self, identity: bytes) -> PrivateKey:
        identity = bytes(identity)
        if identity == self.challenge_id:
            raise ProtocolViolation("private key requested for the challenge identity")
        if len(self.extracted) >= self.q_id and identity not in self.extracted:
            raise ProtocolViolation(f"more than q_ID = {self.q_id} key-extraction queries")
        self.extracted.add(identity)
        return extract(self._pub, self._msk, identity)

    def decrypt(self, identity: bytes, c: Ciphertext) -> bytes:
        identity = bytes(identity)
        if self.decryptions >= self.q_c:
            raise ProtocolViolation(f"more than q_C = {self.q_c} decryption queries")
        if identity == self.challenge_id and c == self.challenge:
            raise ProtocolViolation("decryption of the challenge ciphertext requested")
        self.decryptions += 1
        return decrypt(self._pub, extract(self._pub, self._msk, identity), c)


class Adversary:
    """Base strategy; subclasses override ``choose`` and ``guess``."""

    def __init__(self, rng: SeededRng):
        self.rng = rng

    def receive_master_key(self, msk: MasterKey) -> None:
        """Out-of-band leak used only by test adversaries."""

    def choose(self, pub: PublicParams, oracles: Oracles) -> tuple[bytes, bytes, bytes]:
        bits = pub.policy.message_bits
        m0 = bytes(pub.policy.message_bytes)
        m1 = bytearray([0xFF] * pub.policy.message_bytes)
        if bits % 8:
            m1[-1] = (0xFF << (8 - bits % 8)) & 0xFF
        return m0, bytes(m1), self.rng.bytes(16)

    def guess(self, pub: PublicParams, challenge: Ciphertext, oracles: Oracles) -> int:
        raise NotImplementedError


class CoinFlipAdversary(Adversary):
    def guess(self, pub, challenge, oracles):
        return self.rng.bit()


class OmniscientAdversary(Adversary):
    """Holds the master key and decrypts the challenge itself."""

    msk: MasterKey | None = None

    def receive_master_key(self, msk):
        self.msk = msk

    def choose(self, pub, oracles):
        m0, m1, ident = super().choose(pub, oracles)
        self._m0, self._id = m0, ident
        return m0, m1, ident

    def guess(self, pub, challenge, oracles):
        L = pub.policy.lattice
        S = L.meet(self.msk.s, h1(pub, self._id))
        m = bytes(a ^ b for a, b in zip(challenge.V, h2(pair(pub.ctx, S, challenge.U), challenge.bits)))
        return 0 if m == self._m0 else 1


class BruteForceBDHAdversary(Adversary):
    """Enumerates every session key consistent with the challenge and tests both messages."""

    budget: int | None = None

    def choose(self, pub, oracles):
        m0, m1, ident = super().choose(pub, oracles)
        self._m, self._id = (m0, m1), ident
        return m0, m1, ident

    def guess(self, pub, challenge, oracles):
        votes = [0, 0]
        for K in brute_force_bdh(pub, h1(pub, self._id), challenge.U, self.budget):
            m = bytes(a ^ b for a, b in zip(challenge.V, h2(K, challenge.bits)))
            for b in (0, 1):
                votes[b] += m == self._m[b]
        if votes[0] != votes[1]:
            return 0 if votes[0] > votes[1] else 1
        return self.rng.bit()


@dataclass(frozen=True)
class GameConfig:
    policy: ParamPolicy
    trials: int
    adversary: Callable[[SeededRng], Adversary]
    q_id: int = 0
    q_c: int = 0
    leak_master_key: bool = False


@dataclass(frozen=True)
class GameResult:
    trials: int
    wins: int
    voided: int
    advantage: float
    ci_low: float
    ci_high: float

    @property
    def win_rate(self) -> float:
        return self.wins / self.trials if self.trials else 0.5


def _wilson(wins: int, n: int, z: float) -> tuple[float, float]:
    if n == 0:
        return 0.0, 1.0
    p = wins / n
    centre = (p + z * z / (2 * n)) / (1 + z * z / n)
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / (1 + z * z / n)
    return max(0.0, centre - half), min(1.0, centre + half)


def run_cpa_game(config: GameConfig, seed: int, z: float = 1.96) -> GameResult:
    """Play ``config.trials`` independent rounds and estimate the advantage.

    A round whose challenge cannot be formed (the scheme refuses to encrypt
    for the chosen identity) is voided and does not count.
    """
    root = SeededRng(seed)
    wins = voided = played = 0
    for t in range(config.trials):
        rng = root.child(t)
        pub, msk = setup(config.policy, rng.child(0))
        adv = config.adversary(rng.child(1))
        if config.leak_master_key:
            adv.receive_master_key(msk)
        oracles = Oracles(pub, msk, config.q_id, config.q_c)
        m0, m1, ident = adv.choose(pub, oracles)
        ident = bytes(ident)
        for m in (m0, m1):
            check_message(pub.policy, m)
        if ident in oracles.extracted:
            raise ProtocolViolation("challenge identity was already extracted in phase 1")
        b = rng.child(2).bit()
        try:
            challenge = encrypt(pub, ident, (m0, m1)[b], rng.child(3))
        except IBEError:
            voided += 1
            continue
        oracles.challenge_id, oracles.challenge = ident, challenge
        wins += adv.guess(pub, challenge, oracles) == b
        played += 1
    lo, hi = _wilson(wins, played, z)
    adv_lo = 0.0 if lo <= 0.5 <= hi else min(abs(lo - 0.5), abs(hi - 0.5))
    adv_hi = max(abs(lo - 0.5), abs(hi - 0.5))
    rate = wins / played if played else 0.5
    return GameResult(played, wins, voided, abs(rate - 0.5), adv_lo, adv_hi)

