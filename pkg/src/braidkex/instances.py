"""Seeded random protocol instances.

Every instance is a pure function of its seed; sub-seeds come from
:func:`braidkex.rng.derive_seed`.  Private keys evaluating to the identity are
rejected and redrawn.
"""

from __future__ import annotations

from typing import Optional

from .attacks import CentralizerScenario, build_centralizer_scenario
from .braid import BraidContext, Word, delta_letters, is_identity, random_entries, random_word
from .protocols import AagPublic, KoLeePublic
from .rng import SplitMix64, derive_seed
from .subgroups import SubgroupSpec, SubgroupWord, standard_split, subgroup_word_eval

_MAX_REDRAWS = 1000


def random_subgroup_word(spec: SubgroupSpec, length: int, seed: int, *, allow_identity: bool = False) -> SubgroupWord:
    for attempt in range(_MAX_REDRAWS):
        draws = random_entries(len(spec), length, derive_seed(seed, attempt))
        sw = SubgroupWord(tuple((i + 1, s) for i, s in draws))
        if allow_identity or length == 0 or not is_identity(spec.ctx, subgroup_word_eval(spec, sw)):
            return sw
    raise RuntimeError("could not draw a non-identity private key")


def random_kolee_instance(
    seed: int,
    n: Optional[int] = None,
    split: Optional[int] = None,
    w_len: int = 8,
    max_priv_len: int = 12,
) -> tuple[KoLeePublic, SubgroupWord, SubgroupWord]:
    rng = SplitMix64(derive_seed(seed, 0))
    if n is None:
        n = rng.between(4, 8)
    if split is None:
        split = rng.between(2, n - 2)
    ctx = BraidContext(n)
    A, B = standard_split(n, split)
    w = Word(())
    for attempt in range(_MAX_REDRAWS):
        w = random_word(ctx, ctx.generators(), w_len, derive_seed(seed, 1, attempt))
        if w:
            break
    pub = KoLeePublic(ctx, w, A, B)
    a = random_subgroup_word(A, rng.between(1, max_priv_len), derive_seed(seed, 2))
    b = random_subgroup_word(B, rng.between(1, max_priv_len), derive_seed(seed, 3))
    return pub, a, b


def _random_tuple(ctx: BraidContext, size: int, seed: int, max_gen_len: int) -> SubgroupSpec:
    rng = SplitMix64(seed)
    gens = []
    for j in range(size):
        g = Word(())
        for attempt in range(_MAX_REDRAWS):
            g = random_word(ctx, ctx.generators(), rng.between(1, max_gen_len), derive_seed(seed, j, attempt))
            if g:
                break
        gens.append(g)
    return SubgroupSpec(ctx, tuple(gens))


def random_aag_instance(
    seed: int,
    n: Optional[int] = None,
    max_priv_len: int = 8,
    max_gen_len: int = 3,
) -> tuple[AagPublic, SubgroupWord, SubgroupWord]:
    rng = SplitMix64(derive_seed(seed, 0))
    if n is None:
        n = rng.between(3, 6)
    ctx = BraidContext(n)
    a_tuple = _random_tuple(ctx, rng.between(2, 3), derive_seed(seed, 1), max_gen_len)
    b_tuple = _random_tuple(ctx, rng.between(2, 3), derive_seed(seed, 2), max_gen_len)
    pub = AagPublic(ctx, a_tuple, b_tuple)
    x = random_subgroup_word(a_tuple, rng.between(1, max_priv_len), derive_seed(seed, 3))
    y = random_subgroup_word(b_tuple, rng.between(1, max_priv_len), derive_seed(seed, 4))
    return pub, x, y


def centralizer_alphabet(n: int, indices: list[int]) -> list[Word]:
    """Words known to commute with every σ_i, i in ``indices``: the Artin
    generators not adjacent to any of them, and Δ²."""
    letters = [j for j in range(1, n) if all(abs(j - i) != 1 for i in indices)]
    full_twist = Word(delta_letters(n) * 2)
    return [Word((j,)) for j in letters] + [full_twist]


def random_centralizer_scenario(seed: int) -> CentralizerScenario:
    """AAG instance over Artin-generator tuples with random forged centralizers."""
    rng = SplitMix64(derive_seed(seed, 0))
    n = rng.between(4, 6)
    ctx = BraidContext(n)

    def pick(count: int) -> list[int]:
        pool = list(range(1, n))
        out = []
        for _ in range(count):
            out.append(pool.pop(rng.below(len(pool))))
        return sorted(out)

    a_idx = pick(rng.between(1, 2))
    b_idx = pick(rng.between(1, 2))
    pub = AagPublic(ctx, SubgroupSpec.artin(ctx, a_idx), SubgroupSpec.artin(ctx, b_idx))
    x = random_subgroup_word(pub.a_tuple, rng.between(1, 4), derive_seed(seed, 1))
    y = random_subgroup_word(pub.b_tuple, rng.between(1, 4), derive_seed(seed, 2))
    c_a = random_word(ctx, centralizer_alphabet(n, a_idx), rng.between(1, 3), derive_seed(seed, 3))
    c_b = random_word(ctx, centralizer_alphabet(n, b_idx), rng.between(1, 3), derive_seed(seed, 4))
    return build_centralizer_scenario(pub, x, y, c_a, c_b)
