"""Finitely generated subgroups of B_n and words over their generators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .braid import (
    BraidContext,
    BraidError,
    NormalForm,
    Word,
    canonical_bytes,
    commutes,
    conjugate,
    identity_perm,
    invert,
    left_fraction,
    multiply,
    nf_multiply,
    nf_to_word,
    to_normal_form,
)


@dataclass(frozen=True)
class SubgroupSpec:
    ctx: BraidContext
    generators: tuple[Word, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        gens = tuple(self.generators)
        if not gens:
            raise BraidError("a subgroup needs at least one generator")
        for g in gens:
            self.ctx.check(g)
        labels = tuple(self.labels) or tuple(f"g{i}" for i in range(1, len(gens) + 1))
        if len(labels) != len(gens):
            raise BraidError("one label per generator is required")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.generators)

    @classmethod
    def artin(cls, ctx: BraidContext, indices: Sequence[int]) -> "SubgroupSpec":
        """Subgroup generated by the listed Artin generators, in that order."""
        return cls(ctx, tuple(Word((i,)) for i in indices), tuple(f"s{i}" for i in indices))

    def conjugated(self, y: Word) -> "SubgroupSpec":
        """S^y: every generator replaced by its conjugate by ``y``."""
        return SubgroupSpec(self.ctx, tuple(conjugate(g, y) for g in self.generators), self.labels)

    def parabolic_range(self) -> Optional["GeneratorRange"]:
        """The range [lo, hi] if the generators are exactly σ_lo, ..., σ_hi in order."""
        idx = []
        for g in self.generators:
            if len(g) != 1 or g.letters[0] < 0:
                return None
            idx.append(g.letters[0])
        if idx != list(range(idx[0], idx[0] + len(idx))):
            return None
        return GeneratorRange(idx[0], idx[-1])

    def to_json(self) -> dict:
        return {
            "n": self.ctx.n,
            "generators": [list(g.letters) for g in self.generators],
            "labels": list(self.labels),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SubgroupSpec":
        try:
            ctx = BraidContext(int(obj["n"]))
            gens = tuple(Word(tuple(int(x) for x in g)) for g in obj["generators"])
            labels = tuple(str(s) for s in obj.get("labels", ()))
        except (KeyError, TypeError, ValueError) as exc:
            raise BraidError(f"malformed subgroup spec: {exc}") from exc
        if any(0 in g.letters for g in gens):
            raise BraidError("zero is not a letter")
        return cls(ctx, gens, labels)


Entry = tuple[int, int]


@dataclass(frozen=True)
class SubgroupWord:
    """A word over the generators of some SubgroupSpec: (1-based index, ±1) pairs."""

    entries: tuple[Entry, ...] = ()

    def __post_init__(self) -> None:
        entries = tuple((int(i), int(s)) for i, s in self.entries)
        for i, s in entries:
            if i < 1 or s not in (1, -1):
                raise BraidError(f"bad subgroup word entry {(i, s)}")
        object.__setattr__(self, "entries", entries)

    def __len__(self) -> int:
        return len(self.entries)

    def inverse(self) -> "SubgroupWord":
        return SubgroupWord(tuple((i, -s) for i, s in reversed(self.entries)))

    def check(self, spec: SubgroupSpec) -> "SubgroupWord":
        for i, _ in self.entries:
            if i > len(spec):
                raise BraidError(f"generator index {i} out of range for a {len(spec)}-generator subgroup")
        return self

    def to_json(self) -> list:
        return [[i, s] for i, s in self.entries]

    @classmethod
    def from_json(cls, obj) -> "SubgroupWord":
        try:
            return cls(tuple((int(i), int(s)) for i, s in obj))
        except (TypeError, ValueError) as exc:
            raise BraidError(f"malformed subgroup word: {exc}") from exc


def subgroup_word_eval(spec: SubgroupSpec, sw: SubgroupWord) -> Word:
    sw.check(spec)
    gens = spec.generators
    return multiply(*(gens[i - 1] if s > 0 else invert(gens[i - 1]) for i, s in sw.entries))


def evaluate_at(images: Sequence[Word], sw: SubgroupWord) -> Word:
    """Evaluate ``sw`` with generator i replaced by ``images[i-1]``."""
    for i, _ in sw.entries:
        if i > len(images):
            raise BraidError(f"generator index {i} out of range for {len(images)} images")
    return multiply(*(images[i - 1] if s > 0 else invert(images[i - 1]) for i, s in sw.entries))


@dataclass(frozen=True)
class GeneratorRange:
    lo: int
    hi: int

    def check(self, ctx: BraidContext) -> "GeneratorRange":
        if not 1 <= self.lo <= self.hi <= ctx.n - 1:
            raise BraidError(f"range [{self.lo}, {self.hi}] invalid for B_{ctx.n}")
        return self


def standard_split(n: int, l: int) -> tuple[SubgroupSpec, SubgroupSpec]:
    """A = <σ1 … σ_{l-1}>, B = <σ_{l+1} … σ_{n-1}>: left and right strands."""
    if n < 4 or not 2 <= l <= n - 2:
        raise BraidError(f"standard split needs n >= 4 and 2 <= l <= n-2, got n={n}, l={l}")
    ctx = BraidContext(n)
    return SubgroupSpec.artin(ctx, range(1, l)), SubgroupSpec.artin(ctx, range(l + 1, n))


def commute_elementwise(A: SubgroupSpec, B: SubgroupSpec) -> bool:
    if A.ctx != B.ctx:
        raise BraidError("subgroups live in different braid groups")
    return all(commutes(A.ctx, a, b) for a in A.generators for b in B.generators)


def _inside(nf: NormalForm, r: GeneratorRange) -> bool:
    if nf.delta_power:
        return False
    for f in nf.raw_factors:
        for j, v in enumerate(f, start=1):
            if v != j and not r.lo <= j <= r.hi + 1:
                return False
    return True


def parabolic_expression(ctx: BraidContext, g: Word, r: GeneratorRange) -> Optional[Word]:
    """A word in σ_lo … σ_hi equal to ``g``, or None if g is outside that parabolic.

    g = p⁻¹q with p, q positive and coprime; this fraction is unique, so g lies
    in the parabolic exactly when every simple factor of p and q only moves
    strands lo … hi+1.
    """
    r.check(ctx)
    nf = to_normal_form(ctx, g)
    if r.lo == 1 and r.hi == ctx.n - 1:
        return nf_to_word(nf)
    p, q = left_fraction(nf)
    if not (_inside(p, r) and _inside(q, r)):
        return None
    return multiply(invert(nf_to_word(p)), nf_to_word(q))


def parabolic_membership(ctx: BraidContext, g: Word, r: GeneratorRange) -> bool:
    return parabolic_expression(ctx, g, r) is not None


def parabolic_subgroup_word(spec: SubgroupSpec, g: Word) -> Optional[SubgroupWord]:
    """Exact expression of g over a parabolic spec (see ``parabolic_range``)."""
    r = spec.parabolic_range()
    if r is None:
        raise BraidError("subgroup is not a standard parabolic")
    w = parabolic_expression(spec.ctx, g, r)
    if w is None:
        return None
    return SubgroupWord(tuple((abs(x) - r.lo + 1, 1 if x > 0 else -1) for x in w.letters))


def permutation_of(ctx: BraidContext, g: Word) -> tuple[int, ...]:
    """Image of g under B_n -> S_n."""
    p = list(identity_perm(ctx.n))
    for x in g.letters:
        i = abs(x)
        p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


@dataclass
class BallEntry:
    word: SubgroupWord
    plain: Word
    nf: NormalForm
    key: bytes = field(repr=False)


def shortlex_ball(spec: SubgroupSpec, max_depth: int) -> Iterator[BallEntry]:
    """Distinct elements of the ball of radius ``max_depth`` in the subgroup,
    each with its shortlex-least expression, in shortlex order.

    Entries are ordered by generator index, positive before negative.  Words
    equal as group elements to an earlier one are dropped, keyed by their
    canonical bytes; the prefix of a shortlex-least word is shortlex-least, so
    extending only survivors loses nothing.
    """
    ctx = spec.ctx
    letters = [(i, s) for i in range(1, len(spec) + 1) for s in (1, -1)]
    images = {(i, s): spec.generators[i - 1] if s > 0 else invert(spec.generators[i - 1]) for i, s in letters}
    root_nf = NormalForm(ctx.n)
    root = BallEntry(SubgroupWord(), Word(), root_nf, canonical_bytes(root_nf))
    seen = {root.key}
    yield root
    frontier = [root]
    for _ in range(max_depth):
        nxt = []
        for e in frontier:
            for ent in letters:
                nf = nf_multiply(e.nf, images[ent])
                key = canonical_bytes(nf)
                if key in seen:
                    continue
                seen.add(key)
                child = BallEntry(SubgroupWord(e.word.entries + (ent,)), multiply(e.plain, images[ent]), nf, key)
                yield child
                nxt.append(child)
        if not nxt:
            return
        frontier = nxt


def bounded_membership_search(g: Word, spec: SubgroupSpec, depth: int) -> Optional[SubgroupWord]:
    """Shortlex-least expression of g using at most ``depth`` entries.

    None only means nothing was found within ``depth``; it says nothing about
    membership.
    """
    if depth < 0:
        raise BraidError("depth must be >= 0")
    target = canonical_bytes(to_normal_form(spec.ctx, g))
    for e in shortlex_ball(spec, depth):
        if e.key == target:
            return e.word
    return None
