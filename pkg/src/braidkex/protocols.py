"""Ko-Lee and Anshel-Anshel-Goldfeld key exchange over braid groups.

Private keys are always SubgroupWords, i.e. recorded as words in the public
subgroup generators, never only as plain braid words.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

from .braid import (
    BraidContext,
    BraidError,
    NormalForm,
    Word,
    canonical_bytes,
    commutator,
    conjugate,
    invert,
    multiply,
    to_normal_form,
)
from .subgroups import (
    SubgroupSpec,
    SubgroupWord,
    commute_elementwise,
    evaluate_at,
    subgroup_word_eval,
)

Side = Literal["alice", "bob"]


class ProtocolError(ValueError):
    pass


def _check_side(side: str) -> None:
    if side not in ("alice", "bob"):
        raise ProtocolError(f"side must be 'alice' or 'bob', got {side!r}")


@dataclass(frozen=True)
class SharedKey:
    element: NormalForm
    key_bytes: bytes

    def __post_init__(self) -> None:
        if self.key_bytes != canonical_bytes(self.element):
            raise ProtocolError("key bytes do not serialize the key element")

    @classmethod
    def from_word(cls, ctx: BraidContext, w: Word) -> "SharedKey":
        nf = to_normal_form(ctx, w)
        return cls(nf, canonical_bytes(nf))

    def hex(self) -> str:
        return self.key_bytes.hex()

    def material(self, digest: Optional[str] = None) -> bytes:
        """Key material: raw canonical bytes, or their ``hashlib`` digest if named."""
        if digest is None:
            return self.key_bytes
        return hashlib.new(digest, self.key_bytes).digest()


# -- Ko-Lee -------------------------------------------------------------------


@dataclass(frozen=True)
class KoLeePublic:
    ctx: BraidContext
    w: Word
    A: SubgroupSpec
    B: SubgroupSpec

    def __post_init__(self) -> None:
        self.ctx.check(self.w)
        if self.A.ctx != self.ctx or self.B.ctx != self.ctx:
            raise ProtocolError("subgroups and base word live in different braid groups")
        if not commute_elementwise(self.A, self.B):
            raise ProtocolError("Ko-Lee subgroups A and B must commute elementwise")

    def subgroup(self, side: str) -> SubgroupSpec:
        _check_side(side)
        return self.A if side == "alice" else self.B


@dataclass(frozen=True)
class KoLeeTranscript:
    public: KoLeePublic
    msg_alice: Word
    msg_bob: Word


def kolee_message(pub: KoLeePublic, priv: SubgroupWord, side: Side) -> Word:
    """g⁻¹ w g for the private element g of the given side."""
    g = subgroup_word_eval(pub.subgroup(side), priv)
    return conjugate(pub.w, g)


def kolee_key(pub: KoLeePublic, priv: SubgroupWord, side: Side, peer_msg: Word) -> SharedKey:
    pub.ctx.check(peer_msg)
    g = subgroup_word_eval(pub.subgroup(side), priv)
    return SharedKey.from_word(pub.ctx, conjugate(peer_msg, g))


def run_kolee(pub: KoLeePublic, a: SubgroupWord, b: SubgroupWord) -> tuple[KoLeeTranscript, SharedKey, SharedKey]:
    msg_a = kolee_message(pub, a, "alice")
    msg_b = kolee_message(pub, b, "bob")
    t = KoLeeTranscript(pub, msg_a, msg_b)
    return t, kolee_key(pub, a, "alice", msg_b), kolee_key(pub, b, "bob", msg_a)


# -- Anshel-Anshel-Goldfeld ---------------------------------------------------


@dataclass(frozen=True)
class AagPublic:
    ctx: BraidContext
    a_tuple: SubgroupSpec
    b_tuple: SubgroupSpec

    def __post_init__(self) -> None:
        if self.a_tuple.ctx != self.ctx or self.b_tuple.ctx != self.ctx:
            raise ProtocolError("public tuples live in different braid groups")

    def own(self, side: str) -> SubgroupSpec:
        _check_side(side)
        return self.a_tuple if side == "alice" else self.b_tuple

    def other(self, side: str) -> SubgroupSpec:
        _check_side(side)
        return self.b_tuple if side == "alice" else self.a_tuple


@dataclass(frozen=True)
class AagTranscript:
    public: AagPublic
    b_conj: tuple[Word, ...]
    a_conj: tuple[Word, ...]

    def __post_init__(self) -> None:
        if len(self.b_conj) != len(self.public.b_tuple) or len(self.a_conj) != len(self.public.a_tuple):
            raise ProtocolError("conjugated tuples do not match the public tuple sizes")


def aag_commit(pub: AagPublic, priv: SubgroupWord, side: Side) -> tuple[Word, ...]:
    """Alice sends (b_j^x)_j, Bob sends (a_i^y)_i."""
    g = subgroup_word_eval(pub.own(side), priv)
    return tuple(conjugate(h, g) for h in pub.other(side).generators)


def aag_key_alice(pub: AagPublic, x: SubgroupWord, a_conj: Sequence[Word]) -> SharedKey:
    if len(a_conj) != len(pub.a_tuple):
        raise ProtocolError(f"expected {len(pub.a_tuple)} conjugates, got {len(a_conj)}")
    for w in a_conj:
        pub.ctx.check(w)
    x_plain = subgroup_word_eval(pub.a_tuple, x)
    x_y = evaluate_at(a_conj, x)
    return SharedKey.from_word(pub.ctx, multiply(invert(x_plain), x_y))


def aag_key_bob(pub: AagPublic, y: SubgroupWord, b_conj: Sequence[Word]) -> SharedKey:
    if len(b_conj) != len(pub.b_tuple):
        raise ProtocolError(f"expected {len(pub.b_tuple)} conjugates, got {len(b_conj)}")
    for w in b_conj:
        pub.ctx.check(w)
    y_plain = subgroup_word_eval(pub.b_tuple, y)
    y_x = evaluate_at(b_conj, y)
    return SharedKey.from_word(pub.ctx, invert(multiply(invert(y_plain), y_x)))


def run_aag(pub: AagPublic, x: SubgroupWord, y: SubgroupWord) -> tuple[AagTranscript, SharedKey, SharedKey]:
    b_conj = aag_commit(pub, x, "alice")
    a_conj = aag_commit(pub, y, "bob")
    t = AagTranscript(pub, b_conj, a_conj)
    return t, aag_key_alice(pub, x, a_conj), aag_key_bob(pub, y, b_conj)


def aag_expected_key(pub: AagPublic, x: SubgroupWord, y: SubgroupWord) -> SharedKey:
    """Commutator of the evaluated privates, computed directly."""
    x_plain = subgroup_word_eval(pub.a_tuple, x)
    y_plain = subgroup_word_eval(pub.b_tuple, y)
    return SharedKey.from_word(pub.ctx, commutator(x_plain, y_plain))


# -- one party as a state machine --------------------------------------------


class Party:
    """One side of either protocol.

    ``commit()`` produces the outgoing message, ``receive()`` consumes the
    peer's message and fixes the key.  Not thread-safe; use one per session.
    """

    def __init__(self, public: KoLeePublic | AagPublic, private: SubgroupWord, side: Side) -> None:
        _check_side(side)
        self.public = public
        self.private = private
        self.side = side
        self.state = "init"
        self.outgoing: Optional[tuple[Word, ...]] = None
        self.key: Optional[SharedKey] = None

    @property
    def protocol(self) -> str:
        return "kolee" if isinstance(self.public, KoLeePublic) else "aag"

    def commit(self) -> tuple[Word, ...]:
        if self.state != "init":
            raise ProtocolError(f"commit() called in state {self.state}")
        if isinstance(self.public, KoLeePublic):
            self.outgoing = (kolee_message(self.public, self.private, self.side),)
        else:
            self.outgoing = aag_commit(self.public, self.private, self.side)
        self.state = "committed"
        return self.outgoing

    def receive(self, words: Sequence[Word]) -> SharedKey:
        if self.state != "committed":
            raise ProtocolError(f"receive() called in state {self.state}")
        if isinstance(self.public, KoLeePublic):
            if len(words) != 1:
                raise ProtocolError("Ko-Lee peer message must be a single word")
            self.key = kolee_key(self.public, self.private, self.side, words[0])
        elif self.side == "alice":
            self.key = aag_key_alice(self.public, self.private, words)
        else:
            self.key = aag_key_bob(self.public, self.private, words)
        self.state = "done"
        return self.key
