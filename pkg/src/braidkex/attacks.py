"""Adversary tooling against the two protocols.

Against Ko-Lee the adversary never solves a conjugacy problem: any x', y' in
A with x'·w·y' equal to Alice's message give the key as x'·(Bob's message)·y'.

Against AAG a conjugator that reproduces the public conjugates is not enough.
Forged candidates x' = c_b·x and y' = c_a·y (c_b centralizing the b-tuple,
c_a centralizing the a-tuple) pass every public check, and their commutator
equals the key exactly when c_a and c_b commute.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Generic, Optional, Sequence, TypeVar

from .braid import (
    BraidContext,
    Word,
    canonical_bytes,
    commutator,
    commutes,
    conjugate,
    equals,
    invert,
    multiply,
    to_normal_form,
)
from .protocols import (
    AagPublic,
    AagTranscript,
    KoLeeTranscript,
    SharedKey,
    run_aag,
)
from .subgroups import (
    SubgroupSpec,
    SubgroupWord,
    bounded_membership_search,
    parabolic_subgroup_word,
    shortlex_ball,
    subgroup_word_eval,
)

T = TypeVar("T")


class AttackError(ValueError):
    pass


@dataclass(frozen=True)
class SearchBudget:
    max_depth: int = 4
    max_states: int = 200_000
    time_limit_ms: int = 60_000

    def __post_init__(self) -> None:
        if self.max_depth <= 0 or self.max_states <= 0 or self.time_limit_ms <= 0:
            raise AttackError("search budget fields must be positive")

    def to_json(self) -> dict:
        return {"max_depth": self.max_depth, "max_states": self.max_states, "time_limit_ms": self.time_limit_ms}

    @classmethod
    def from_json(cls, obj: dict) -> "SearchBudget":
        return cls(**{k: int(v) for k, v in obj.items() if k in ("max_depth", "max_states", "time_limit_ms")})


@dataclass
class SearchOutcome(Generic[T]):
    """Result of a bounded search.

    ``exhausted`` names the limit that ended an unsuccessful search: "depth"
    (the whole ball was searched), "states" or "time".  An unsuccessful search
    never claims that no solution exists.
    """

    solution: Optional[T]
    states_explored: int
    elapsed_ms: int
    exhausted: Optional[str] = None

    @property
    def found(self) -> bool:
        return self.solution is not None


def _bounded_search(
    spec: SubgroupSpec,
    budget: SearchBudget,
    accept: Callable[[SubgroupWord, Word], Optional[T]],
) -> SearchOutcome[T]:
    start = time.monotonic()
    deadline = start + budget.time_limit_ms / 1000.0
    states = 0
    elapsed = lambda: int((time.monotonic() - start) * 1000)  # noqa: E731
    for entry in shortlex_ball(spec, budget.max_depth):
        if states >= budget.max_states:
            return SearchOutcome(None, states, elapsed(), "states")
        if time.monotonic() > deadline:
            return SearchOutcome(None, states, elapsed(), "time")
        states += 1
        sol = accept(entry.word, entry.plain)
        if sol is not None:
            return SearchOutcome(sol, states, elapsed())
    return SearchOutcome(None, states, elapsed(), "depth")


# -- decomposition attack on Ko-Lee ------------------------------------------


@dataclass(frozen=True)
class DecompositionSolution:
    A: SubgroupSpec
    x_prime: SubgroupWord
    y_prime: SubgroupWord

    @property
    def x_plain(self) -> Word:
        return subgroup_word_eval(self.A, self.x_prime)

    @property
    def y_plain(self) -> Word:
        return subgroup_word_eval(self.A, self.y_prime)

    def holds(self, w: Word, h: Word) -> bool:
        return equals(self.A.ctx, multiply(self.x_plain, w, self.y_plain), h)


def _membership_certifier(A: SubgroupSpec, depth: int) -> Callable[[Word], Optional[SubgroupWord]]:
    if A.parabolic_range() is not None:
        return lambda g: parabolic_subgroup_word(A, g)
    return lambda g: bounded_membership_search(g, A, depth)


def solve_decomposition_bruteforce(
    w: Word, h: Word, A: SubgroupSpec, budget: SearchBudget = SearchBudget()
) -> SearchOutcome[DecompositionSolution]:
    """Find x', y' in A with x'·w·y' = h.

    Only x' is enumerated (shortlex over A); y' = w⁻¹x'⁻¹h is then determined
    and accepted when it lies in A.  Membership is exact for standard
    parabolics and a bounded search of the same depth otherwise.
    """
    ctx = A.ctx
    ctx.check(w)
    ctx.check(h)
    certify = _membership_certifier(A, budget.max_depth)
    w_inv = invert(w)

    def accept(x_word: SubgroupWord, x_plain: Word) -> Optional[DecompositionSolution]:
        y_plain = multiply(w_inv, invert(x_plain), h)
        y_word = certify(y_plain)
        if y_word is None:
            return None
        return DecompositionSolution(A, x_word, y_word)

    return _bounded_search(A, budget, accept)


def kolee_recover_key(t: KoLeeTranscript, sol: DecompositionSolution) -> SharedKey:
    """x'·(b⁻¹wb)·y', which is the shared key whenever x', y' lie in A."""
    pub = t.public
    if not sol.holds(pub.w, t.msg_alice):
        raise AttackError("decomposition does not reproduce Alice's message")
    return SharedKey.from_word(pub.ctx, multiply(sol.x_plain, t.msg_bob, sol.y_plain))


# -- conjugacy search ---------------------------------------------------------


def solve_simultaneous_csp(
    gs: Sequence[Word], hs: Sequence[Word], alphabet: SubgroupSpec, budget: SearchBudget = SearchBudget()
) -> SearchOutcome[SubgroupWord]:
    """Shortlex-least x over ``alphabet`` with g_i^x = h_i for every i."""
    if len(gs) != len(hs):
        raise AttackError("need as many targets as sources")
    ctx = alphabet.ctx
    targets = [canonical_bytes(to_normal_form(ctx, h)) for h in hs]
    gs = [ctx.check(g) for g in gs]

    def accept(x_word: SubgroupWord, x_plain: Word) -> Optional[SubgroupWord]:
        for g, target in zip(gs, targets):
            if canonical_bytes(to_normal_form(ctx, conjugate(g, x_plain))) != target:
                return None
        return x_word

    return _bounded_search(alphabet, budget, accept)


def solve_csp_bruteforce(
    g: Word, h: Word, alphabet: SubgroupSpec, budget: SearchBudget = SearchBudget()
) -> SearchOutcome[SubgroupWord]:
    """Shortlex-least x over ``alphabet`` with x⁻¹gx = h.

    With all Artin generators as the alphabet this is the plain conjugacy
    search problem; with a subgroup it is the restricted variant, whose
    solutions lie in the subgroup by construction.
    """
    return solve_simultaneous_csp([g], [h], alphabet, budget)


# -- AAG: conjugacy is not enough ---------------------------------------------


def verify_aag_conjugacy(t: AagTranscript, candidate: Word, side: str) -> bool:
    """Does ``candidate`` reproduce the conjugates sent by ``side``?"""
    pub = t.public
    ctx = pub.ctx
    if side == "alice":
        sources, observed = pub.b_tuple.generators, t.b_conj
    elif side == "bob":
        sources, observed = pub.a_tuple.generators, t.a_conj
    else:
        raise AttackError(f"side must be 'alice' or 'bob', got {side!r}")
    return all(equals(ctx, conjugate(s, candidate), o) for s, o in zip(sources, observed))


def aag_adversary_key(t: AagTranscript, x_prime: Word, y_prime: Word) -> SharedKey:
    """The adversary's guess x'⁻¹y'⁻¹x'y'.  Not necessarily the real key."""
    if not verify_aag_conjugacy(t, x_prime, "alice"):
        raise AttackError("x' does not reproduce Alice's conjugates")
    if not verify_aag_conjugacy(t, y_prime, "bob"):
        raise AttackError("y' does not reproduce Bob's conjugates")
    return SharedKey.from_word(t.public.ctx, commutator(x_prime, y_prime))


def centralizes(ctx: BraidContext, c: Word, spec: SubgroupSpec) -> bool:
    return all(commutes(ctx, c, g) for g in spec.generators)


@dataclass(frozen=True)
class CentralizerScenario:
    public: AagPublic
    x: SubgroupWord
    y: SubgroupWord
    c_a: Word
    c_b: Word
    transcript: AagTranscript = field(repr=False)
    honest_key: SharedKey = field(repr=False)
    x_prime: Word = field(repr=False)
    y_prime: Word = field(repr=False)
    predicted_success: bool = False

    def adversary_key(self) -> SharedKey:
        return aag_adversary_key(self.transcript, self.x_prime, self.y_prime)

    def key_matches(self) -> bool:
        return self.adversary_key().key_bytes == self.honest_key.key_bytes


def build_centralizer_scenario(
    pub: AagPublic, x: SubgroupWord, y: SubgroupWord, c_a: Word, c_b: Word
) -> CentralizerScenario:
    """Honest run plus forged conjugators x' = c_b·x, y' = c_a·y.

    c_b must centralize the b-tuple and c_a the a-tuple.  The predicted
    outcome is success iff c_a·c_b = c_b·c_a.
    """
    ctx = pub.ctx
    ctx.check(c_a)
    ctx.check(c_b)
    if not centralizes(ctx, c_b, pub.b_tuple):
        raise AttackError("c_b does not commute with every b_j")
    if not centralizes(ctx, c_a, pub.a_tuple):
        raise AttackError("c_a does not commute with every a_i")
    t, key_a, key_b = run_aag(pub, x, y)
    if key_a.key_bytes != key_b.key_bytes:
        raise AttackError("honest AAG run disagrees")
    x_prime = multiply(c_b, subgroup_word_eval(pub.a_tuple, x))
    y_prime = multiply(c_a, subgroup_word_eval(pub.b_tuple, y))
    return CentralizerScenario(
        public=pub,
        x=x,
        y=y,
        c_a=c_a,
        c_b=c_b,
        transcript=t,
        honest_key=key_a,
        x_prime=x_prime,
        y_prime=y_prime,
        predicted_success=commutes(ctx, c_a, c_b),
    )
