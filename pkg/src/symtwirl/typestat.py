"""Types (empirical distributions) of words in [d]^n and their type classes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .limits import SizeLimitError

MAX_TYPE_ENUMERATION = 10**6


@dataclass(frozen=True, order=True)
class TypeDistribution:
    """An n-type over d letters, stored as letter counts."""

    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        object.__setattr__(self, "counts", counts)
        if not counts:
            raise ValueError("a type needs at least one letter")
        if any(c < 0 for c in counts):
            raise ValueError(f"negative count in {counts}")
        if sum(counts) < 1:
            raise ValueError("a type needs n >= 1")

    @property
    def n(self) -> int:
        return sum(self.counts)

    @property
    def d(self) -> int:
        return len(self.counts)

    @property
    def probabilities(self) -> tuple[float, ...]:
        return tuple(c / self.n for c in self.counts)

    def entropy(self) -> float:
        """Shannon entropy of counts/n in bits."""
        n = self.n
        return 0.0 - sum(c / n * math.log2(c / n) for c in self.counts if c)

    @classmethod
    def of_word(cls, word: Sequence[int], d: int) -> "TypeDistribution":
        counts = [0] * d
        for letter in word:
            counts[letter - 1] += 1
        return cls(tuple(counts))

    def to_json(self) -> list[int]:
        return list(self.counts)


def _compositions(n: int, d: int) -> Iterator[tuple[int, ...]]:
    if d == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, d - 1):
            yield (first,) + rest


def count_types(n: int, d: int) -> int:
    return math.comb(n + d - 1, d - 1)


def enumerate_types(n: int, d: int) -> list[TypeDistribution]:
    """All n-types over d letters, reverse-lexicographic in the counts ((n,0,..) first)."""
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    if count_types(n, d) > MAX_TYPE_ENUMERATION:
        raise SizeLimitError(f"{count_types(n, d)} types exceed the enumeration limit")
    return [TypeDistribution(c) for c in _compositions(n, d)]


def type_class_size(mu: TypeDistribution) -> int:
    size = math.factorial(mu.n)
    for c in mu.counts:
        size //= math.factorial(c)
    return size


def type_class(mu: TypeDistribution, d: int | None = None) -> Iterator[tuple[int, ...]]:
    """Words with letter counts ``mu.counts``, in lexicographic order."""
    if d is not None and d != mu.d:
        raise ValueError(f"type has {mu.d} letters, alphabet has {d}")
    if type_class_size(mu) > MAX_TYPE_ENUMERATION:
        raise SizeLimitError("type class too large to enumerate")
    remaining = list(mu.counts)
    word: list[int] = []

    def rec():
        if len(word) == mu.n:
            yield tuple(word)
            return
        for letter in range(1, mu.d + 1):
            if remaining[letter - 1]:
                remaining[letter - 1] -= 1
                word.append(letter)
                yield from rec()
                word.pop()
                remaining[letter - 1] += 1

    return rec()


def representative(mu: TypeDistribution) -> tuple[int, ...]:
    """The lexicographically first word of the type class."""
    return tuple(letter for letter, c in enumerate(mu.counts, start=1) for _ in range(c))


def max_entropy_type(n: int, d: int) -> TypeDistribution:
    """Balanced type; earlier letters take the leftover counts."""
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    q, r = divmod(n, d)
    return TypeDistribution(tuple(q + 1 if i < r else q for i in range(d)))


def type_count_bound(n: int, d: int) -> int:
    """(n+1)^d, the cap on the number of n-types."""
    return (n + 1) ** d


def max_entropy_floor(n: int, d: int) -> float:
    """log2 d - d log2(n+1) / n, guaranteed for the max-entropy type."""
    return math.log2(d) - d * math.log2(n + 1) / n


def exp2_n_entropy(mu: TypeDistribution) -> Fraction:
    """2^{n H(mu)} exactly: n^n / prod c^c."""
    value = Fraction(mu.n**mu.n)
    for c in mu.counts:
        value /= c**c
    return value


def type_class_sandwich(mu: TypeDistribution) -> tuple[Fraction, int, Fraction]:
    """``(lower, |T|, upper)`` with lower = (n+1)^-d 2^{nH} and upper = 2^{nH}, exact."""
    upper = exp2_n_entropy(mu)
    return upper / (mu.n + 1) ** mu.d, type_class_size(mu), upper
