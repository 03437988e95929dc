"""Uniform and weighted symmetric twirls on (C^d)^{(x) n}."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .exact_operator import ExactOperator, conjugate_by_permutation, local_n
from .limits import ContractError, DimensionError, check_dim
from .perm_core import Permutation, _tuple_table, enumerate_permutations, encode_tuple
from .typestat import TypeDistribution, type_class


@dataclass(frozen=True)
class Distribution:
    """Probability distribution on S_n with exact positive rational weights.

    Permutations outside ``weights`` carry probability zero.
    """

    n: int
    weights: Mapping[Permutation, Fraction] = field(hash=False)

    def __post_init__(self):
        clean = {}
        for pi, w in self.weights.items():
            if pi.n != self.n:
                raise DimensionError(f"{pi} is not in S_{self.n}")
            w = Fraction(w)
            if w <= 0:
                raise ContractError(f"weight of {pi} must be positive, got {w}")
            clean[pi] = w
        if not clean:
            raise ContractError("distribution has empty support")
        total = sum(clean.values(), Fraction(0))
        if total != 1:
            raise ContractError(f"weights sum to {total}, not 1")
        object.__setattr__(self, "weights", dict(sorted(clean.items())))

    @classmethod
    def uniform(cls, n: int) -> "Distribution":
        perms = enumerate_permutations(n)
        w = Fraction(1, len(perms))
        return cls(n, {pi: w for pi in perms})

    @classmethod
    def point_mass(cls, pi: Permutation) -> "Distribution":
        return cls(pi.n, {pi: Fraction(1)})

    @property
    def support(self) -> list[Permutation]:
        return list(self.weights)

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, pi: Permutation) -> Fraction:
        return self.weights.get(pi, Fraction(0))

    def probabilities(self) -> list[float]:
        return [float(w) for w in self.weights.values()]

    def is_uniform(self) -> bool:
        return len(self.weights) == math.factorial(self.n) and len(set(self.weights.values())) == 1


def _naive_twirl(A: ExactOperator, d: int, n: int) -> ExactOperator:
    perms = enumerate_permutations(n)
    total = A
    for pi in perms[1:]:
        total = total + conjugate_by_permutation(pi, A, d)
    return total.scale(Fraction(1, len(perms)))


def _orbit_keys(d: int, n: int) -> np.ndarray:
    """Label each index pair (w, z) by the multiset of its zipped letters."""
    table = _tuple_table(d, n)
    dim = d**n
    pair_letters = (table[:, None, :] * d + table[None, :, :]).reshape(dim * dim, n)
    sorted_letters = np.sort(pair_letters, axis=1)
    _, labels = np.unique(sorted_letters, axis=0, return_inverse=True)
    return labels.reshape(dim, dim)


def _orbit_twirl(A: ExactOperator, d: int, n: int) -> ExactOperator:
    # the twirled entry at (w, z) is the mean of A over the diagonal S_n orbit of (w, z),
    # and that orbit is every pair sharing the multiset of zipped letters
    labels = _orbit_keys(d, n)
    sums_re: dict[int, Fraction] = defaultdict(Fraction)
    sums_im: dict[int, Fraction] = defaultdict(Fraction)
    sizes: dict[int, int] = defaultdict(int)
    for (i, j), lab in np.ndenumerate(labels):
        sums_re[lab] += A.re[i, j]
        sums_im[lab] += A.im[i, j]
        sizes[lab] += 1
    mean_re = {lab: sums_re[lab] / sizes[lab] for lab in sizes}
    mean_im = {lab: sums_im[lab] / sizes[lab] for lab in sizes}
    re = np.empty(labels.shape, dtype=object)
    im = np.empty(labels.shape, dtype=object)
    for (i, j), lab in np.ndenumerate(labels):
        re[i, j] = mean_re[lab]
        im[i, j] = mean_im[lab]
    return ExactOperator(re, im)


def uniform_twirl(A: ExactOperator, d: int, n: int | None = None, method: str = "auto") -> ExactOperator:
    """Average of ``U^pi A U^pi^dagger`` over all of S_n, in exact arithmetic.

    ``method`` is ``"naive"`` (sum over n! conjugations), ``"orbit"`` (average
    over diagonal-action orbits of index pairs) or ``"auto"``, which uses the
    naive sum up to n = 4 and the orbit path beyond.
    """
    if n is None:
        n = local_n(A.dim, d)
    if A.dim != check_dim(d, n):
        raise DimensionError(f"operator of dimension {A.dim} is not on (C^{d})^(x){n}")
    if method == "auto":
        method = "naive" if n <= 4 else "orbit"
    if method == "naive":
        return _naive_twirl(A, d, n)
    if method == "orbit":
        return _orbit_twirl(A, d, n)
    raise ValueError(f"unknown method {method!r}")


def weighted_twirl(q: Distribution, A: ExactOperator, d: int) -> ExactOperator:
    """``sum_pi q(pi) U^pi A U^pi^dagger``."""
    if A.dim != check_dim(d, q.n):
        raise DimensionError(f"operator of dimension {A.dim} is not on (C^{d})^(x){q.n}")
    total = None
    for pi, w in q.weights.items():
        term = conjugate_by_permutation(pi, A, d).scale(w)
        total = term if total is None else total + term
    return total


def type_projector(mu: TypeDistribution, d: int, n: int | None = None) -> ExactOperator:
    """Diagonal projector onto span{e_x : x in the type class of mu}."""
    if mu.d != d:
        raise ContractError(f"type over {mu.d} letters used with d={d}")
    if n is not None and mu.n != n:
        raise ContractError(f"{mu.n}-type used with n={n}")
    dim = check_dim(d, mu.n)
    diag = [0] * dim
    for word in type_class(mu):
        diag[encode_tuple(word, d)] = 1
    return ExactOperator.diagonal(diag)


def basis_projector(word, d: int) -> ExactOperator:
    """``|e_x><e_x|`` for a one-based word x."""
    dim = check_dim(d, len(word))
    k = encode_tuple(word, d)
    return ExactOperator.matrix_unit(dim, k, k)
