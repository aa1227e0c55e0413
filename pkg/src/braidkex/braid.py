"""
Exact arithmetic in the braid group B_n.

Elements are handled as words in the Artin generators: a word is a tuple of
nonzero signed integers, ``k`` standing for σ_k and ``-k`` for σ_k^{-1}.
Words carry no strand count; operations that need one take a
:class:`BraidContext` and validate the letters against it.

Two independent solutions of the word problem live here:

* the Garside left normal form Δ^p x_1 ... x_m, where each x_i is a
  permutation braid stored as the image table of its permutation, and
* Dehornoy handle reduction, which is used as a cross-check of the first.

Permutation conventions.  The permutation of a positive word
σ_{i1} ... σ_{ik} is the composite s_{i1} ∘ ... ∘ s_{ik} of transpositions.
An image table ``perm`` stores π(j) at position ``j - 1`` (values 1-indexed).
The starting set of π is {i : π⁻¹(i) > π⁻¹(i+1)} and its finishing set is
{i : π(i) > π(i+1)}; a pair (a, b) is left-weighted when the finishing set
of a contains the starting set of b.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple, Sequence

from .rng import SplitMix64

Perm = tuple[int, ...]


class BraidError(ValueError):
    """Invalid braid input (bad letter, bad context, bad serialization)."""


class BudgetExhausted(RuntimeError):
    """A bounded procedure ran out of its step budget."""


@dataclass(frozen=True)
class BraidContext:
    """The ambient group B_n."""

    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 2:
            raise BraidError(f"strand count must be an integer >= 2, got {self.n!r}")

    @property
    def rank(self) -> int:
        return self.n - 1

    def check(self, w: "Word") -> "Word":
        for x in w.letters:
            if x == 0 or abs(x) > self.n - 1:
                raise BraidError(f"letter {x} out of range for B_{self.n}")
        return w

    def generators(self) -> list["Word"]:
        return [Word((i,)) for i in range(1, self.n)]

    def delta(self) -> "Word":
        return Word(delta_letters(self.n))


class Letter(NamedTuple):
    index: int
    sign: int


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.letters, tuple):
            object.__setattr__(self, "letters", tuple(self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __str__(self) -> str:
        return " ".join(str(x) for x in self.letters)

    def __repr__(self) -> str:
        return f"Word({list(self.letters)})"

    def as_letters(self) -> list[Letter]:
        return [Letter(abs(x), 1 if x > 0 else -1) for x in self.letters]

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse the whitespace-separated signed integer text format."""
        try:
            letters = tuple(int(tok) for tok in text.split())
        except ValueError as exc:
            raise BraidError(f"cannot parse word {text!r}") from exc
        if 0 in letters:
            raise BraidError("zero is not a letter")
        return cls(letters)


IDENTITY = Word(())


def make_word(n: int, entries: Sequence[int]) -> Word:
    """Build a word from signed integers, checked against B_n. Not reduced."""
    ctx = BraidContext(n)
    for x in entries:
        if x == 0:
            raise BraidError("zero entry is not a generator")
    return ctx.check(Word(tuple(int(x) for x in entries)))


def _free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def free_reduce(w: Word) -> Word:
    return Word(_free_reduce(w.letters))


def multiply(*words: Word) -> Word:
    """Freely reduced concatenation of any number of words."""
    return Word(_free_reduce(x for w in words for x in w.letters))


def invert(w: Word) -> Word:
    return Word(_free_reduce(-x for x in reversed(w.letters)))


def conjugate(g: Word, x: Word) -> Word:
    """g^x = x⁻¹ g x."""
    return multiply(invert(x), g, x)


def commutator(x: Word, y: Word) -> Word:
    """[x, y] = x⁻¹ y⁻¹ x y."""
    return multiply(invert(x), invert(y), x, y)


def power(w: Word, k: int) -> Word:
    if k < 0:
        return power(invert(w), -k)
    return multiply(*([w] * k))


# -- permutation braids -------------------------------------------------------


@lru_cache(maxsize=None)
def identity_perm(n: int) -> Perm:
    return tuple(range(1, n + 1))


@lru_cache(maxsize=None)
def delta_perm(n: int) -> Perm:
    return tuple(range(n, 0, -1))


def _inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for j, v in enumerate(p):
        inv[v - 1] = j + 1
    return tuple(inv)


def _compose(p: Perm, q: Perm) -> Perm:
    """p ∘ q (apply q first)."""
    return tuple(p[v - 1] for v in q)


def _rmul_gen(p: Perm, i: int) -> Perm:
    """p ∘ s_i: swap positions i, i+1."""
    lst = list(p)
    lst[i - 1], lst[i] = lst[i], lst[i - 1]
    return tuple(lst)


def _lmul_gen(p: Perm, i: int) -> Perm:
    """s_i ∘ p: swap the values i and i+1."""
    return tuple(i + 1 if v == i else i if v == i + 1 else v for v in p)


@lru_cache(maxsize=None)
def finishing_set(p: Perm) -> frozenset[int]:
    return frozenset(i for i in range(1, len(p)) if p[i - 1] > p[i])


@lru_cache(maxsize=None)
def starting_set(p: Perm) -> frozenset[int]:
    return finishing_set(_inverse(p))


@lru_cache(maxsize=None)
def tau(p: Perm) -> Perm:
    """Conjugation by Δ on permutation braids; sends σ_i to σ_{n-i}."""
    n = len(p)
    return tuple(n + 1 - p[n - 1 - j] for j in range(n))


@lru_cache(maxsize=None)
def _gen_perm(n: int, i: int) -> Perm:
    return _rmul_gen(identity_perm(n), i)


@lru_cache(maxsize=None)
def _co_gen_perm(n: int, i: int) -> Perm:
    """Permutation of the simple braid Δσ_i⁻¹."""
    return _compose(delta_perm(n), _gen_perm(n, i))


@lru_cache(maxsize=None)
def perm_letters(p: Perm) -> tuple[int, ...]:
    """A reduced positive word for the permutation braid of ``p``.

    The smallest starting letter is peeled off at each step, which yields
    the lexicographically first reduced word; for Δ this is
    (σ1)(σ2σ1)...(σ_{n-1}...σ1).
    """
    out = []
    cur = p
    while True:
        s = starting_set(cur)
        if not s:
            return tuple(out)
        i = min(s)
        out.append(i)
        cur = _lmul_gen(cur, i)


@lru_cache(maxsize=None)
def delta_letters(n: int) -> tuple[int, ...]:
    return perm_letters(delta_perm(n))


@lru_cache(maxsize=None)
def left_weight(a: Perm, b: Perm) -> tuple[Perm, Perm]:
    """Move letters from the front of ``b`` to the back of ``a`` until the
    pair is left-weighted.  The product a·b is unchanged."""
    while True:
        extra = starting_set(b) - finishing_set(a)
        if not extra:
            return a, b
        i = min(extra)
        a = _rmul_gen(a, i)
        b = _lmul_gen(b, i)


@lru_cache(maxsize=None)
def meet(a: Perm, b: Perm) -> Perm:
    """Greatest common left divisor of two permutation braids."""
    s = identity_perm(len(a))
    while True:
        common = starting_set(a) & starting_set(b)
        if not common:
            return s
        i = min(common)
        a = _lmul_gen(a, i)
        b = _lmul_gen(b, i)
        s = _rmul_gen(s, i)


@dataclass(frozen=True)
class PermutationBraid:
    perm: Perm

    def __post_init__(self) -> None:
        if sorted(self.perm) != list(range(1, len(self.perm) + 1)):
            raise BraidError(f"{self.perm} is not a permutation")

    @property
    def n(self) -> int:
        return len(self.perm)

    def starting_set(self) -> frozenset[int]:
        return starting_set(self.perm)

    def finishing_set(self) -> frozenset[int]:
        return finishing_set(self.perm)

    def is_identity(self) -> bool:
        return self.perm == identity_perm(self.n)

    def is_delta(self) -> bool:
        return self.perm == delta_perm(self.n)

    def word(self) -> Word:
        return Word(perm_letters(self.perm))


# -- left normal form ---------------------------------------------------------


@dataclass(frozen=True)
class NormalForm:
    """Δ^delta_power · factors[0] ··· factors[-1], left-weighted."""

    n: int
    delta_power: int = 0
    factors: tuple[PermutationBraid, ...] = ()

    def __post_init__(self) -> None:
        ident, delta = identity_perm(self.n), delta_perm(self.n)
        prev = None
        for f in self.factors:
            if f.n != self.n:
                raise BraidError("factor has the wrong strand count")
            if f.perm in (ident, delta):
                raise BraidError("identity or Δ factor in a normal form")
            if prev is not None and not starting_set(f.perm) <= finishing_set(prev):
                raise BraidError("factors are not left-weighted")
            prev = f.perm

    @property
    def raw_factors(self) -> tuple[Perm, ...]:
        return tuple(f.perm for f in self.factors)

    @property
    def canonical_length(self) -> int:
        return len(self.factors)

    def is_identity(self) -> bool:
        return self.delta_power == 0 and not self.factors

    def __str__(self) -> str:
        fs = ", ".join("[" + " ".join(map(str, f.perm)) + "]" for f in self.factors)
        return f"Δ^{self.delta_power} · ({fs})"


def _append_simple(n: int, d: int, factors: list[Perm], f: Perm) -> int:
    """Right-multiply a normal form (d, factors) in place by simple ``f``.
    Returns the new Δ power."""
    if f == identity_perm(n):
        return d
    factors.append(f)
    j = len(factors) - 1
    while j > 0:
        a, b = left_weight(factors[j - 1], factors[j])
        if a == factors[j - 1]:
            break
        factors[j - 1], factors[j] = a, b
        j -= 1
    ident, delta = identity_perm(n), delta_perm(n)
    while factors and factors[-1] == ident:
        factors.pop()
    lead = 0
    while lead < len(factors) and factors[lead] == delta:
        lead += 1
    if lead:
        del factors[:lead]
    return d + lead


def _append_letter(n: int, d: int, factors: list[Perm], x: int) -> int:
    if x > 0:
        return _append_simple(n, d, factors, _gen_perm(n, x))
    # X σ_i⁻¹ = X Δ⁻¹ (Δσ_i⁻¹) = Δ⁻¹ τ(X) (Δσ_i⁻¹)
    factors[:] = [tau(f) for f in factors]
    return _append_simple(n, d - 1, factors, _co_gen_perm(n, -x))


def _normalize(n: int, d: int, simples: Iterable[Perm]) -> tuple[int, list[Perm]]:
    factors: list[Perm] = []
    for f in simples:
        d = _append_simple(n, d, factors, f)
    return d, factors


def _finish(n: int, d: int, factors: Sequence[Perm]) -> NormalForm:
    return NormalForm(n, d, tuple(PermutationBraid(f) for f in factors))


@lru_cache(maxsize=200_000)
def _nf_cached(n: int, letters: tuple[int, ...]) -> NormalForm:
    d, factors = 0, []
    for x in letters:
        d = _append_letter(n, d, factors, x)
    return _finish(n, d, factors)


def to_normal_form(ctx: BraidContext, w: Word) -> NormalForm:
    ctx.check(w)
    return _nf_cached(ctx.n, _free_reduce(w.letters))


def nf_multiply(nf: NormalForm, w: Word) -> NormalForm:
    """Normal form of nf · w, computed letter by letter."""
    n = nf.n
    d, factors = nf.delta_power, list(nf.raw_factors)
    for x in w.letters:
        if x == 0 or abs(x) >= n:
            raise BraidError(f"letter {x} out of range for B_{n}")
        d = _append_letter(n, d, factors, x)
    return _finish(n, d, factors)


def nf_to_word(nf: NormalForm) -> Word:
    """Δ^p expanded as (σ1)(σ2σ1)...(σ_{n-1}...σ1), factors by their
    lexicographically first reduced words."""
    dw = delta_letters(nf.n)
    if nf.delta_power >= 0:
        head = dw * nf.delta_power
    else:
        head = tuple(-x for x in reversed(dw)) * (-nf.delta_power)
    body = tuple(x for f in nf.factors for x in perm_letters(f.perm))
    return Word(_free_reduce(head + body))


def equals(ctx: BraidContext, u: Word, v: Word) -> bool:
    return to_normal_form(ctx, u) == to_normal_form(ctx, v)


def is_identity(ctx: BraidContext, w: Word) -> bool:
    return to_normal_form(ctx, w).is_identity()


def commutes(ctx: BraidContext, u: Word, v: Word) -> bool:
    return equals(ctx, multiply(u, v), multiply(v, u))


# -- positive elements and left fractions ------------------------------------


def _first_simple(n: int, d: int, factors: Sequence[Perm]) -> Perm:
    if d > 0:
        return delta_perm(n)
    return factors[0] if factors else identity_perm(n)


def _strip_prefix(n: int, d: int, factors: Sequence[Perm], s: Perm) -> tuple[int, list[Perm]]:
    """s⁻¹ · (Δ^d x_1...x_m) for positive input and s a left divisor of its
    first simple factor."""
    if d > 0:
        # s⁻¹Δ^d X = s* Δ^{d-1} X = Δ^{d-1} τ^{d-1}(s*) X, where s·s* = Δ
        rest = _compose(_inverse(s), delta_perm(n))
        if (d - 1) % 2:
            rest = tau(rest)
        return _normalize(n, d - 1, [rest, *factors])
    head = _compose(_inverse(s), factors[0])
    return _normalize(n, 0, [head, *factors[1:]])


def left_fraction(nf: NormalForm) -> tuple[NormalForm, NormalForm]:
    """Return positive (p, q) with element = p⁻¹ q and gcd(p, q) = 1."""
    n = nf.n
    if nf.delta_power >= 0:
        return NormalForm(n), nf
    pd, pf = -nf.delta_power, []
    qd, qf = 0, list(nf.raw_factors)
    ident = identity_perm(n)
    while True:
        s = meet(_first_simple(n, pd, pf), _first_simple(n, qd, qf))
        if s == ident:
            return _finish(n, pd, pf), _finish(n, qd, qf)
        pd, pf = _strip_prefix(n, pd, pf, s)
        qd, qf = _strip_prefix(n, qd, qf, s)


# -- serialization ------------------------------------------------------------

_MAGIC = b"BNF1"
_HEADER = struct.Struct(">4sHiH")


def canonical_bytes(nf: NormalForm) -> bytes:
    """``BNF1`` | n:u16 | delta_power:i32 | factor count:u16 | n image bytes per factor."""
    parts = [_HEADER.pack(_MAGIC, nf.n, nf.delta_power, len(nf.factors))]
    parts.extend(bytes(f.perm) for f in nf.factors)
    return b"".join(parts)


def nf_from_bytes(data: bytes) -> NormalForm:
    if len(data) < _HEADER.size:
        raise BraidError("truncated normal form header")
    magic, n, p, m = _HEADER.unpack_from(data)
    if magic != _MAGIC:
        raise BraidError("bad normal form magic")
    if n < 2:
        raise BraidError("strand count must be >= 2")
    if len(data) != _HEADER.size + m * n:
        raise BraidError("normal form body has the wrong length")
    body = data[_HEADER.size:]
    factors = tuple(PermutationBraid(tuple(body[k * n:(k + 1) * n])) for k in range(m))
    return NormalForm(n, p, factors)


# -- handle reduction ---------------------------------------------------------

DEFAULT_HANDLE_BUDGET = 1_000_000


def handle_reduce(ctx: BraidContext, w: Word, max_steps: int = DEFAULT_HANDLE_BUDGET) -> Word:
    """Dehornoy handle reduction.

    A σ_k-handle is a factor σ_k^e v σ_k^{-e} in which v only has letters of
    index > k.  The handle whose right end comes first is reduced each time;
    it contains no smaller handle, so the reduction sequence terminates.  The
    result is handle-free, and it is empty exactly when ``w`` is trivial.
    """
    ctx.check(w)
    word = list(w.letters)
    steps = 0
    j = 0
    while j < len(word):
        x = word[j]
        k = abs(x)
        t = j - 1
        while t >= 0 and abs(word[t]) > k:
            t -= 1
        if t < 0 or word[t] != -x:
            j += 1
            continue
        steps += 1
        if steps > max_steps:
            raise BudgetExhausted(f"handle reduction exceeded {max_steps} steps")
        e = 1 if word[t] > 0 else -1
        up = k + 1
        middle: list[int] = []
        for y in word[t + 1:j]:
            if abs(y) == up:
                # σ_k^e σ_{k+1}^d σ_k^-e = σ_{k+1}^-e σ_k^d σ_{k+1}^e
                d = 1 if y > 0 else -1
                if middle and middle[-1] == e * up:
                    middle.pop()
                else:
                    middle.append(-e * up)
                middle.extend((d * k, e * up))
            else:
                middle.append(y)
        word[t:j + 1] = middle
        j = t
    return Word(tuple(word))


def is_trivial_by_handles(ctx: BraidContext, w: Word) -> bool:
    return not handle_reduce(ctx, w)


# -- random words -------------------------------------------------------------


def random_entries(alphabet_size: int, length: int, seed: int) -> list[tuple[int, int]]:
    """``length`` draws of (alphabet index, sign); each draw takes one 64-bit
    output r and uses r mod 2k, even values meaning the positive letter."""
    if alphabet_size <= 0:
        raise BraidError("alphabet must be nonempty")
    if length < 0:
        raise BraidError("length must be >= 0")
    rng = SplitMix64(seed)
    out = []
    for _ in range(length):
        r = rng.below(2 * alphabet_size)
        out.append((r // 2, -1 if r % 2 else 1))
    return out


def random_word(ctx: BraidContext, alphabet: Sequence[Word], length: int, seed: int) -> Word:
    """Seeded product of ``length`` alphabet words or their inverses, freely reduced."""
    draws = random_entries(len(alphabet), length, seed)
    for a in alphabet:
        ctx.check(a)
    return multiply(*(alphabet[i] if s > 0 else invert(alphabet[i]) for i, s in draws))
