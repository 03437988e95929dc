"""Weighted symmetric designs: constraint system, exact verifiers, Caratheodory reduction.

A distribution q on S_n reproduces the uniform twirl iff, for all index tuples
w, x, y, z in [d]^n,

    sum_pi q(pi) [pi.x = w][pi.y = z] = (1/n!) #{pi : pi.x = w, pi.y = z}.

Zipping ``s = zip(x, y)`` and ``t = zip(w, z)`` turns the pair of conditions into
the single condition ``pi.s = t`` on words over d^2 pair-letters. The condition
is unchanged by renaming letters, so it suffices to take s in first-occurrence
canonical form (a restricted growth string with at most min(d^2, n) letters)
and t in the S_n-orbit of s. Each (pattern, image) pair is one row of a 0/1
matrix whose columns are the permutations.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .exact_operator import ExactOperator, fraction_string
from .limits import ContractError, DimensionError, SizeLimitError, check_dim, current_limits
from .linalg import Echelon, SparseRow, solve_unique
from .perm_core import Permutation, act_on_tuple, all_tuples, encode_tuple, enumerate_permutations
from .twirl import Distribution, uniform_twirl, weighted_twirl

ALPHABET = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class WeightedDesign(Distribution):
    """Distribution on S_n paired with the local dimension d it was checked at.

    ``verified`` is set only by the exact verifier or the reducer.
    """

    d: int = 0
    verified: bool = field(default=False, compare=False)

    def __post_init__(self):
        super().__post_init__()
        if self.d < 1:
            raise ValueError("design needs a local dimension d >= 1")

    @classmethod
    def from_distribution(cls, q: Distribution, d: int, verified: bool = False) -> "WeightedDesign":
        return cls(q.n, dict(q.weights), d, verified)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "weights": [{"perm": pi.to_json(), "w": fraction_string(w)} for pi, w in self.weights.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "WeightedDesign":
        try:
            d, n = int(data["d"]), int(data["n"])
            weights = {}
            for entry in data["weights"]:
                pi = Permutation.from_json(entry["perm"])
                if pi in weights:
                    raise ContractError(f"duplicate permutation {pi}")
                weights[pi] = Fraction(entry["w"])
        except (KeyError, TypeError) as exc:
            raise ContractError(f"malformed design file: {exc!r}") from exc
        return cls(n, weights, d)


def dumps_design(design: WeightedDesign) -> str:
    return json.dumps(design.to_json(), indent=2) + "\n"


def write_design(design: WeightedDesign, path: str | Path) -> None:
    Path(path).write_text(dumps_design(design), encoding="utf-8")


def read_design(path: str | Path) -> WeightedDesign:
    """Read a design file. The result is unverified."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ContractError(f"{path}: not valid JSON ({exc})") from exc
    return WeightedDesign.from_json(data)


# patterns --------------------------------------------------------------------------


def restricted_growth_strings(n: int, max_letters: int) -> Iterator[tuple[int, ...]]:
    """Words over 0..k-1 where each letter first appears after all smaller ones."""

    def rec(prefix: list[int], used: int):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for letter in range(min(used + 1, max_letters)):
            prefix.append(letter)
            yield from rec(prefix, max(used, letter + 1))
            prefix.pop()

    yield from rec([], 0)


def canonical_form(word: Sequence) -> tuple[int, ...]:
    """Relabel letters by order of first occurrence."""
    seen: dict = {}
    return tuple(seen.setdefault(v, len(seen)) for v in word)


def pattern_string(word: Sequence[int]) -> str:
    return "".join(ALPHABET[v] for v in word)


def zip_tuples(x: Sequence[int], y: Sequence[int], d: int) -> tuple[int, ...]:
    """Pair-letter word of (x, y): letter (x_i - 1) * d + (y_i - 1)."""
    return tuple((a - 1) * d + (b - 1) for a, b in zip(x, y))


@dataclass(frozen=True)
class Row:
    pattern: tuple[int, ...]
    image: tuple[int, ...]
    columns: tuple[int, ...]
    target: Fraction

    def label(self) -> str:
        return f"{pattern_string(self.pattern)}->{pattern_string(self.image)}"


@dataclass
class ConstraintSystem:
    """Compressed design condition ``A w = p`` with one column per permutation."""

    d: int
    n: int
    perms: list[Permutation]
    patterns: list[tuple[int, ...]]
    rows: list[Row]
    _matrix: np.ndarray | None = field(default=None, repr=False)

    @property
    def ncols(self) -> int:
        return len(self.perms)

    @property
    def pattern_strings(self) -> list[str]:
        return [pattern_string(p) for p in self.patterns]

    @property
    def target(self) -> list[Fraction]:
        return [r.target for r in self.rows]

    @property
    def matrix(self) -> np.ndarray:
        """Dense 0/1 integer matrix, rows x n!."""
        if self._matrix is None:
            m = np.zeros((len(self.rows), self.ncols), dtype=np.int8)
            for i, r in enumerate(self.rows):
                m[i, list(r.columns)] = 1
            self._matrix = m
        return self._matrix

    def column_index(self, pi: Permutation) -> int:
        return self._index[pi]

    def __post_init__(self):
        self._index = {pi: j for j, pi in enumerate(self.perms)}

    def weight_vector(self, q: Distribution) -> list[Fraction]:
        if q.n != self.n:
            raise DimensionError(f"distribution on S_{q.n} vs system for S_{self.n}")
        w = [Fraction(0)] * self.ncols
        for pi, v in q.weights.items():
            w[self._index[pi]] = v
        return w

    def rows_by_strength(self) -> list[Row]:
        """Rows of patterns with the most letters first; these imply the coarser ones."""
        return sorted(self.rows, key=lambda r: -len(set(r.pattern)))


def build_constraint_system(d: int, n: int) -> ConstraintSystem:
    if d < 1 or n < 1:
        raise ValueError("d and n must be positive")
    limit = current_limits().max_system_n
    if n > limit:
        raise SizeLimitError(f"n = {n} exceeds max_system_n = {limit}")
    perms = enumerate_permutations(n)
    perm_arr = np.array([pi.images for pi in perms], dtype=np.int64) - 1
    fact = len(perms)
    patterns = list(restricted_growth_strings(n, min(d * d, n)))
    rows: list[Row] = []
    for s in patterns:
        images = np.asarray(s, dtype=np.int64)[perm_arr]
        uniq, labels = np.unique(images, axis=0, return_inverse=True)
        labels = labels.reshape(-1)
        order = np.argsort(labels, kind="stable")
        bounds = np.searchsorted(labels[order], np.arange(len(uniq) + 1))
        for k, t in enumerate(uniq):
            cols = tuple(int(c) for c in order[bounds[k] : bounds[k + 1]])
            rows.append(Row(s, tuple(int(v) for v in t), cols, Fraction(len(cols), fact)))
    return ConstraintSystem(d, n, perms, patterns, rows)


# exact verification ----------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    violated: Row | None = None
    value: Fraction | None = None

    def __bool__(self) -> bool:
        return self.accepted

    def describe(self) -> str:
        if self.accepted:
            return "design verified"
        r = self.violated
        return (
            f"violated pattern {pattern_string(r.pattern)!r} at image {pattern_string(r.image)!r}: "
            f"mass {self.value} != {r.target}"
        )


def verify_design(candidate: Distribution, sys: ConstraintSystem) -> Verdict:
    """Accept iff ``A w = p`` holds exactly; otherwise report the first violated row."""
    w = sys.weight_vector(candidate)
    for r in sys.rows:
        mass = sum((w[c] for c in r.columns), Fraction(0))
        if mass != r.target:
            return Verdict(False, r, mass)
    return Verdict(True)


def certify(candidate: Distribution, sys: ConstraintSystem) -> WeightedDesign:
    verdict = verify_design(candidate, sys)
    if not verdict:
        raise ContractError(f"not a design at d={sys.d}: {verdict.describe()}")
    return WeightedDesign.from_distribution(candidate, sys.d, verified=True)


def random_rational_matrix(dim: int, rng: np.random.Generator, max_num: int = 9, max_den: int = 7) -> ExactOperator:
    num_re = rng.integers(-max_num, max_num + 1, size=(dim, dim))
    num_im = rng.integers(-max_num, max_num + 1, size=(dim, dim))
    den_re = rng.integers(1, max_den + 1, size=(dim, dim))
    den_im = rng.integers(1, max_den + 1, size=(dim, dim))
    re = [[Fraction(int(a), int(b)) for a, b in zip(ra, rb)] for ra, rb in zip(num_re, den_re)]
    im = [[Fraction(int(a), int(b)) for a, b in zip(ra, rb)] for ra, rb in zip(num_im, den_im)]
    return ExactOperator.from_rows(re, im)


def verify_design_operational(
    candidate: Distribution, d: int, trials: int = 10, seed: int = 0, matrix_units: bool | None = None
) -> bool:
    """Compare the weighted and uniform twirls directly on test operators.

    Uses ``trials`` random rational matrices, plus every matrix unit when
    d**n <= 16 (or when ``matrix_units`` is forced on).
    """
    dim = check_dim(d, candidate.n)
    rng = np.random.default_rng(seed)
    tests: list[ExactOperator] = [random_rational_matrix(dim, rng) for _ in range(trials)]
    if matrix_units is None:
        matrix_units = dim <= 16
    if matrix_units:
        tests.extend(ExactOperator.matrix_unit(dim, i, j) for i in range(dim) for j in range(dim))
    for A in tests:
        if weighted_twirl(candidate, A, d) != uniform_twirl(A, d, candidate.n):
            return False
    return True


# raw feature vectors (oracle for tiny instances) ------------------------------------


def _check_raw(d: int, n: int) -> None:
    if d ** (4 * n) > 4096:
        raise SizeLimitError(f"raw feature vectors limited to d^(4n) <= 4096, got d={d}, n={n}")


def raw_feature_vector(pi: Permutation, d: int) -> dict[tuple, int]:
    """Nonzero coordinates (w, x, y, z) of the uncompressed feature vector.

    Coordinate (w, x, y, z) is <e_w|U^pi|e_x> <e_y|U^pi^dagger|e_z>, which is 1
    iff pi.x = w and pi.y = z.
    """
    _check_raw(d, pi.n)
    words = list(all_tuples(d, pi.n))
    return {(act_on_tuple(pi, x), x, y, act_on_tuple(pi, y)): 1 for x in words for y in words}


def raw_design_check(candidate: Distribution, d: int) -> bool:
    """Direct check of the uncompressed condition over all (w, x, y, z)."""
    n = candidate.n
    _check_raw(d, n)
    perms = enumerate_permutations(n)
    mean: Counter = Counter()
    for pi in perms:
        for key in raw_feature_vector(pi, d):
            mean[key] += Fraction(1, len(perms))
    mix: Counter = Counter()
    for pi, w in candidate.weights.items():
        for key in raw_feature_vector(pi, d):
            mix[key] += w
    return +mean == +mix


# Caratheodory support reduction ----------------------------------------------------


def _augmented_rows(sys: ConstraintSystem, active: list[int]) -> Iterator[SparseRow]:
    local = {c: k for k, c in enumerate(active)}
    yield {k: Fraction(1) for k in range(len(active))}
    for r in sys.rows_by_strength():
        row = {local[c]: Fraction(1) for c in r.columns if c in local}
        if row:
            yield row


def active_echelon(sys: ConstraintSystem, active: Sequence[int] | None = None) -> Echelon:
    """Echelon form of the active columns of ``A`` stacked on the all-ones row."""
    active = list(range(sys.ncols)) if active is None else list(active)
    return Echelon(len(active)).extend(_augmented_rows(sys, active))


def augmented_rank(sys: ConstraintSystem) -> int:
    return active_echelon(sys).rank


def is_uniform_forced(sys: ConstraintSystem) -> bool:
    """True iff the uniform distribution is the only solution of the design condition."""
    return augmented_rank(sys) == sys.ncols


def caratheodory_reduce(start: Distribution | None, sys: ConstraintSystem) -> WeightedDesign:
    """Shrink the support of a design along exact kernel directions.

    Each step moves the weights along the first kernel vector of the active
    columns (stacked with the normalization row) until a weight reaches zero,
    then drops every zeroed permutation, lexicographically largest first. The
    loop stops when the active columns are independent, so the support never
    exceeds their rank.
    """
    if start is None:
        start = Distribution.uniform(sys.n)
    verdict = verify_design(start, sys)
    if not verdict:
        raise ContractError(f"start distribution is not a design: {verdict.describe()}")

    weights = sys.weight_vector(start)
    active = [c for c in range(sys.ncols) if weights[c] > 0]
    ech = active_echelon(sys, active)
    # kernel vectors keyed by global column index
    kernel = [{active[k]: v for k, v in vec.items()} for vec in ech.nullspace()]

    while kernel:
        direction = kernel[0]
        steps = [(weights[c] / -v, c) for c, v in direction.items() if v < 0]
        t = min(s for s, _ in steps)
        for c, v in direction.items():
            weights[c] += t * v
        zeroed = sorted((c for c in direction if weights[c] == 0), key=lambda c: sys.perms[c], reverse=True)
        for c in zeroed:
            pivot = next((vec for vec in kernel if vec.get(c)), None)
            if pivot is not None:
                kernel.remove(pivot)
                for vec in kernel:
                    factor = vec.get(c)
                    if factor:
                        ratio = factor / pivot[c]
                        for k, v in pivot.items():
                            new = vec.get(k, 0) - ratio * v
                            if new:
                                vec[k] = new
                            else:
                                vec.pop(k, None)
            for vec in kernel:
                vec.pop(c, None)
            active.remove(c)

    design = Distribution(sys.n, {sys.perms[c]: weights[c] for c in active})
    return certify(design, sys)


# exhaustive minimum support --------------------------------------------------------


@dataclass(frozen=True)
class SearchResult:
    status: str  # "found" or "unknown"
    design: WeightedDesign | None
    explored: int

    def __bool__(self) -> bool:
        return self.status == "found"


def _solve_on(sys: ConstraintSystem, subset: Sequence[int]) -> list[Fraction] | None:
    local = {c: k for k, c in enumerate(subset)}
    rows = [{k: Fraction(1) for k in range(len(subset))}]
    rhs = [Fraction(1)]
    for r in sys.rows:
        rows.append({local[c]: Fraction(1) for c in r.columns if c in local})
        rhs.append(r.target)
    return solve_unique(rows, rhs, len(subset))


def minimal_support_exhaustive(sys: ConstraintSystem, budget: int = 200_000) -> SearchResult:
    """Smallest-support design by exhaustive subset search.

    A minimum-support design has independent active columns (otherwise it could
    be reduced further), so each candidate support is tested by solving its
    square system exactly and checking positivity. Supports that miss a row
    entirely are pruned. If ``budget`` subsets are explored without an answer
    the result is ``"unknown"``.
    """
    if sys.n > current_limits().max_exhaustive_n:
        raise SizeLimitError(f"exhaustive search limited to n <= {current_limits().max_exhaustive_n}")
    N = sys.ncols
    row_cols = [set(r.columns) for r in sys.rows]
    explored = 0

    for k in range(1, N + 1):
        chosen: list[int] = []

        def feasible_prefix(next_col: int) -> bool:
            # every row must still be hittable by chosen columns or columns >= next_col
            picked = set(chosen)
            return all(cols & picked or max(cols) >= next_col for cols in row_cols)

        def dfs(next_col: int):
            nonlocal explored
            if len(chosen) == k:
                explored += 1
                if explored > budget:
                    raise _BudgetExhausted
                if all(cols & set(chosen) for cols in row_cols):
                    sol = _solve_on(sys, chosen)
                    if sol is not None and all(v > 0 for v in sol):
                        return dict(zip(chosen, sol))
                return None
            for c in range(next_col, N - (k - len(chosen)) + 1):
                chosen.append(c)
                if feasible_prefix(c + 1):
                    found = dfs(c + 1)
                    if found:
                        return found
                chosen.pop()
            return None

        try:
            found = dfs(0)
        except _BudgetExhausted:
            return SearchResult("unknown", None, explored)
        if found:
            q = Distribution(sys.n, {sys.perms[c]: w for c, w in found.items()})
            return SearchResult("found", certify(q, sys), explored)
    return SearchResult("unknown", None, explored)


class _BudgetExhausted(Exception):
    pass
