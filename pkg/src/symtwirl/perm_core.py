"""Permutations of n letters and their action on (C^d)^{(x) n}.

Letters and index values are one-based. A permutation acts on index tuples by
``(pi . x)_i = x_{pi(i)}``, the tensor-factor permutation
``U^pi (x_1 (x) ... (x) x_n) = x_{pi(1)} (x) ... (x) x_{pi(n)}``.

With this convention the action composes contravariantly::

    act_on_tuple(sigma, act_on_tuple(pi, x)) == act_on_tuple(compose(pi, sigma), x)

so ``U^sigma U^pi = U^{pi sigma}``. Twirls sum over the whole group, so nothing
downstream depends on the order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .limits import DimensionError, SizeLimitError, check_dim, current_limits


@dataclass(frozen=True, order=True)
class Permutation:
    """Element of S_n in one-line notation: ``images[i-1] = pi(i)``."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        object.__setattr__(self, "images", images)
        if not images:
            raise ValueError("permutation must have n >= 1 letters")
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{list(images)} is not a bijection of 1..{len(images)}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __len__(self) -> int:
        return len(self.images)

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images, start=1))

    def to_json(self) -> list[int]:
        return list(self.images)

    @classmethod
    def from_json(cls, data: Sequence[int]) -> "Permutation":
        return cls(tuple(data))


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    limit = current_limits().max_perm_n
    if n > limit:
        raise SizeLimitError(f"n = {n} exceeds max_perm_n = {limit}")


@lru_cache(maxsize=16)
def _all_perms(n: int) -> tuple[Permutation, ...]:
    return tuple(Permutation(p) for p in itertools.permutations(range(1, n + 1)))


def enumerate_permutations(n: int) -> list[Permutation]:
    """All n! permutations, lexicographic by image list."""
    _check_n(n)
    return list(_all_perms(n))


def compose(outer: Permutation, inner: Permutation) -> Permutation:
    """``result(i) = outer(inner(i))``."""
    if outer.n != inner.n:
        raise DimensionError(f"cannot compose S_{outer.n} with S_{inner.n}")
    return Permutation(tuple(outer.images[j - 1] for j in inner.images))


def inverse(pi: Permutation) -> Permutation:
    inv = [0] * pi.n
    for i, v in enumerate(pi.images, start=1):
        inv[v - 1] = i
    return Permutation(tuple(inv))


def adjacent_transpositions(n: int) -> list[Permutation]:
    gens = []
    for k in range(1, n):
        images = list(range(1, n + 1))
        images[k - 1], images[k] = images[k], images[k - 1]
        gens.append(Permutation(tuple(images)))
    return gens


def act_on_tuple(pi: Permutation, x: Sequence) -> tuple:
    """Return ``y`` with ``y[i] = x[pi(i)]``. Works for any entry type."""
    if len(x) != pi.n:
        raise DimensionError(f"tuple of length {len(x)} vs permutation on {pi.n} letters")
    return tuple(x[j - 1] for j in pi.images)


def encode_tuple(x: Sequence[int], d: int) -> int:
    """Mixed-radix index of a tuple over 1..d; the first entry is most significant."""
    value = 0
    for v in x:
        if not 1 <= v <= d:
            raise ValueError(f"entry {v} outside 1..{d}")
        value = value * d + (v - 1)
    return value


def decode_index(value: int, d: int, n: int) -> tuple[int, ...]:
    if not 0 <= value < d**n:
        raise ValueError(f"index {value} outside 0..{d**n - 1}")
    digits = []
    for _ in range(n):
        value, r = divmod(value, d)
        digits.append(r + 1)
    return tuple(reversed(digits))


def all_tuples(d: int, n: int) -> Iterable[tuple[int, ...]]:
    """[d]^n in basis-index order."""
    return itertools.product(range(1, d + 1), repeat=n)


@lru_cache(maxsize=64)
def _tuple_table(d: int, n: int) -> np.ndarray:
    # row k holds the zero-based digits of basis index k
    return np.array(list(itertools.product(range(d), repeat=n)), dtype=np.int64).reshape(d**n, n)


def basis_permutation(pi: Permutation, d: int) -> np.ndarray:
    """Index map ``idx`` with ``U^pi e_k = e_{idx[k]}``."""
    check_dim(d, pi.n)
    table = _tuple_table(d, pi.n)
    moved = table[:, [j - 1 for j in pi.images]]
    weights = d ** np.arange(pi.n - 1, -1, -1, dtype=np.int64)
    return moved @ weights


def permutation_matrix(pi: Permutation, d: int):
    """The 0/1 matrix of U^pi as an :class:`~symtwirl.exact_operator.ExactOperator`."""
    from .exact_operator import ExactOperator

    idx = basis_permutation(pi, d)
    dim = len(idx)
    re = np.zeros((dim, dim), dtype=np.int64)
    re[idx, np.arange(dim)] = 1
    return ExactOperator.from_integers(re)
