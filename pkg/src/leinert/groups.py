"""Words over direct products of finitely generated free groups.

The ambient group is F_{s_1} x ... x F_{s_m}.  A *letter* is a generator of
one factor raised to +1 or -1; a *string* is a tuple of letters kept verbatim,
with no cancellation applied.  Evaluating a string means free-reducing it
factor by factor; a string is *bad* when it is reduced as written yet
evaluates to the identity.  Everything downstream (census, samplers, walk
tables) goes through the classifiers in this module.

Strings come in two flavours:

* valid: even length, exponents alternating -1, +1, -1, ... starting at -1,
  adjacent letters on distinct generators;
* reduced: adjacent letters either sit on distinct generators or carry equal
  exponents (no immediate x x^{-1} pair).

Every valid string is reduced, and every contiguous substring of a reduced
string is reduced, so minimality of bad strings is well defined.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterator


class MalformedWordError(ValueError):
    """A letter or string violates the signature it claims to live in."""


@dataclass(frozen=True, order=True)
class GroupSignature:
    """The tuple of free ranks (s_1, ..., s_m) of the direct factors."""

    factors: tuple[int, ...]

    def __post_init__(self):
        if not self.factors:
            raise MalformedWordError("signature needs at least one factor")
        if any(s < 1 for s in self.factors):
            raise MalformedWordError(f"factor ranks must be positive: {self.factors!r}")

    @property
    def num_factors(self) -> int:
        return len(self.factors)

    @property
    def total_generators(self) -> int:
        return sum(self.factors)

    def bases(self) -> Iterator[tuple[int, int]]:
        """All (factor, generator) pairs in canonical order."""
        for i, rank in enumerate(self.factors):
            for j in range(rank):
                yield (i, j)

    def __str__(self):
        return "x".join(f"F{rank}" for rank in self.factors)


@dataclass(frozen=True, order=True)
class Letter:
    """One generator occurrence: factor index, generator index, exponent."""

    factor: int
    gen: int
    exp: int

    def __post_init__(self):
        if self.exp not in (-1, 1):
            raise MalformedWordError(f"exponent must be +1 or -1, got {self.exp!r}")

    @property
    def base(self) -> tuple[int, int]:
        return (self.factor, self.gen)

    def inverse(self) -> "Letter":
        return Letter(self.factor, self.gen, -self.exp)


@dataclass(frozen=True)
class Word:
    """A string of letters over a fixed signature, kept unreduced.

    Use normal_form to get the group element the string evaluates to.
    """

    signature: GroupSignature
    letters: tuple[Letter, ...]

    def __post_init__(self):
        for ell in self.letters:
            if not 0 <= ell.factor < self.signature.num_factors:
                raise MalformedWordError(
                    f"letter factor {ell.factor} outside signature {self.signature}"
                )
            if not 0 <= ell.gen < self.signature.factors[ell.factor]:
                raise MalformedWordError(
                    f"generator {ell.gen} outside factor {ell.factor} of {self.signature}"
                )

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        if self.signature != other.signature:
            raise MalformedWordError("cannot concatenate words over different signatures")
        return Word(self.signature, self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(self.signature, tuple(ell.inverse() for ell in reversed(self.letters)))

    def conjugate(self) -> "Word":
        """Flip every exponent in place.

        This is induced by the automorphism sending each generator to its
        inverse, so it preserves reducedness and evaluation to the identity;
        it does not preserve validity (the alternation phase flips).
        """
        return Word(self.signature, tuple(ell.inverse() for ell in self.letters))


@dataclass(frozen=True)
class NormalForm:
    """Freely reduced per-factor words: the group element itself.

    Each factor word is a tuple of nonzero ints, generator j stored as
    +-(j + 1) with the sign carrying the exponent.
    """

    signature: GroupSignature
    factor_words: tuple[tuple[int, ...], ...]

    @property
    def is_identity(self) -> bool:
        return all(not w for w in self.factor_words)

    def __len__(self):
        return sum(len(w) for w in self.factor_words)


def normal_form(word: Word) -> NormalForm:
    """Evaluate a string by pushing letters through per-factor stacks.

    Only adjacent inverse pairs cancel; equal letters stack up rather than
    merging, so the stacks are exactly the freely reduced factor words.
    """
    stacks: list[list[int]] = [[] for _ in word.signature.factors]
    for ell in word.letters:
        stack = stacks[ell.factor]
        signed = ell.exp * (ell.gen + 1)
        if stack and stack[-1] == -signed:
            stack.pop()
        else:
            stack.append(signed)
    return NormalForm(word.signature, tuple(tuple(s) for s in stacks))


def is_valid_string(word: Word) -> bool:
    """Even length, exponents forced -1, +1, -1, ..., adjacent bases distinct."""
    n = len(word.letters)
    if n == 0 or n % 2:
        return False
    for k, ell in enumerate(word.letters):
        if ell.exp != (-1 if k % 2 == 0 else 1):
            return False
    return all(a.base != b.base for a, b in zip(word.letters, word.letters[1:]))


def is_reduced_string(word: Word) -> bool:
    """No adjacent pair forms an immediate cancellation x^e x^{-e}."""
    return all(
        a.base != b.base or a.exp == b.exp
        for a, b in zip(word.letters, word.letters[1:])
    )


class StringKind(Enum):
    VALID = "valid"
    REDUCED = "reduced"
    NEITHER = "neither"


def classify_string(word: Word) -> StringKind:
    if is_valid_string(word):
        return StringKind.VALID
    if is_reduced_string(word):
        return StringKind.REDUCED
    return StringKind.NEITHER


def is_bad(word: Word) -> bool:
    """Nonempty, reduced as written, yet evaluating to the identity.

    Valid strings are always reduced, so this covers both string models.
    """
    return bool(word.letters) and is_reduced_string(word) and normal_form(word).is_identity


def substrings(word: Word, proper: bool = False) -> Iterator[Word]:
    """All contiguous nonempty substrings, n(n+1)/2 of them.

    With proper=True the full string itself is skipped.
    """
    n = len(word.letters)
    for start in range(n):
        for stop in range(start + 1, n + 1):
            if proper and stop - start == n:
                continue
            yield Word(word.signature, word.letters[start:stop])


def is_kernel(word: Word) -> bool:
    """Bad with no proper contiguous bad substring: a minimal obstruction."""
    if not is_bad(word):
        return False
    return not any(is_bad(sub) for sub in substrings(word, proper=True))


def cyclic_rotations(word: Word) -> list[Word]:
    """All rotations of the string, the original first."""
    n = len(word.letters)
    if n == 0:
        return [word]
    return [Word(word.signature, word.letters[k:] + word.letters[:k]) for k in range(n)]


def exponent_sums(word: Word) -> tuple[tuple[int, ...], ...]:
    """Net exponent of every generator: the image in the abelianization."""
    sums = [[0] * rank for rank in word.signature.factors]
    for ell in word.letters:
        sums[ell.factor][ell.gen] += ell.exp
    return tuple(tuple(row) for row in sums)


# text form: f<i>g<j> is generator j of factor i (1-based), trailing ' inverts
_LETTER_RE = re.compile(r"f(\d+)g(\d+)(')?")


def word_from_text(signature: GroupSignature, text: str) -> Word:
    """Parse a whitespace-separated string of letters like "f1g2' f2g1"."""
    letters = []
    for token in text.split():
        m = _LETTER_RE.fullmatch(token)
        if not m:
            raise MalformedWordError(f"cannot parse letter {token!r}")
        factor, gen = int(m.group(1)) - 1, int(m.group(2)) - 1
        letters.append(Letter(factor, gen, -1 if m.group(3) else 1))
    return Word(signature, tuple(letters))


def word_to_text(word: Word) -> str:
    return " ".join(
        f"f{ell.factor + 1}g{ell.gen + 1}" + ("'" if ell.exp < 0 else "")
        for ell in word.letters
    )


def parse_signature(text: str) -> GroupSignature:
    """Read a group name like F2xF2 or F1xF1xF1; Zk is shorthand for F1 x k."""
    text = text.strip()
    m = re.fullmatch(r"[zZ](\d+)", text)
    if m:
        return GroupSignature((1,) * int(m.group(1)))
    ranks = []
    for part in re.split(r"[xX*]", text):
        m = re.fullmatch(r"[fF](\d+)", part.strip())
        if not m:
            raise MalformedWordError(f"cannot parse group name {text!r}")
        ranks.append(int(m.group(1)))
    return GroupSignature(tuple(ranks))
