"""Dense operators over exact complex rationals, plus the float spectral layer.

Exact operators store real and imaginary parts as two object arrays of
:class:`fractions.Fraction`. Spectral quantities (trace norm, entropy) only exist
for plain complex ``numpy`` arrays, checked to a 1e-10 tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .limits import ContractError, DimensionError, SizeLimitError, current_limits
from .perm_core import Permutation, basis_permutation

FLOAT_TOL = 1e-10


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"refusing to convert {type(value).__name__} to an exact rational")


def fraction_string(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class ExactScalar:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _frac(self.re))
        object.__setattr__(self, "im", _frac(self.im))

    def to_json(self) -> dict:
        return {"re": fraction_string(self.re), "im": fraction_string(self.im)}

    @classmethod
    def from_json(cls, data: dict) -> "ExactScalar":
        return cls(Fraction(data["re"]), Fraction(data["im"]))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))


def _object_array(rows) -> np.ndarray:
    arr = np.asarray(rows, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for k, v in np.ndenumerate(arr):
        out[k] = _frac(v)
    return out


class ExactOperator:
    """Square matrix over Q[i].

    Values are treated as immutable; every operation returns a new operator.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: np.ndarray, im: np.ndarray | None = None):
        if re.ndim != 2 or re.shape[0] != re.shape[1]:
            raise DimensionError(f"operator must be square, got shape {re.shape}")
        if im is None:
            im = np.full(re.shape, Fraction(0), dtype=object)
        if im.shape != re.shape:
            raise DimensionError("real and imaginary parts differ in shape")
        self.re = re
        self.im = im

    # construction -----------------------------------------------------------

    @classmethod
    def from_rows(cls, re_rows: Sequence[Sequence], im_rows: Sequence[Sequence] | None = None) -> "ExactOperator":
        re = _object_array(re_rows)
        im = None if im_rows is None else _object_array(im_rows)
        return cls(re, im)

    @classmethod
    def from_integers(cls, re: np.ndarray) -> "ExactOperator":
        return cls(_object_array(re.tolist()))

    @classmethod
    def zeros(cls, dim: int) -> "ExactOperator":
        _check_size(dim)
        return cls(np.full((dim, dim), Fraction(0), dtype=object))

    @classmethod
    def identity(cls, dim: int) -> "ExactOperator":
        op = cls.zeros(dim)
        for i in range(dim):
            op.re[i, i] = Fraction(1)
        return op

    @classmethod
    def matrix_unit(cls, dim: int, i: int, j: int) -> "ExactOperator":
        """``|e_i><e_j|`` with zero-based basis indices."""
        op = cls.zeros(dim)
        op.re[i, j] = Fraction(1)
        return op

    @classmethod
    def diagonal(cls, values: Sequence) -> "ExactOperator":
        op = cls.zeros(len(values))
        for i, v in enumerate(values):
            op.re[i, i] = _frac(v)
        return op

    @classmethod
    def from_float(cls, arr: np.ndarray, max_denominator: int = 10**6) -> "ExactOperator":
        """Nearest rationals with bounded denominators."""
        arr = np.asarray(arr, dtype=complex)
        re = np.empty(arr.shape, dtype=object)
        im = np.empty(arr.shape, dtype=object)
        for k, v in np.ndenumerate(arr):
            re[k] = Fraction(float(v.real)).limit_denominator(max_denominator)
            im[k] = Fraction(float(v.imag)).limit_denominator(max_denominator)
        return cls(re, im)

    # basic queries -------------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.re.shape[0]

    def __getitem__(self, key: tuple[int, int]) -> ExactScalar:
        return ExactScalar(self.re[key], self.im[key])

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactOperator):
            return NotImplemented
        return self.dim == other.dim and bool(np.all(self.re == other.re)) and bool(np.all(self.im == other.im))

    __hash__ = None

    def __repr__(self) -> str:
        return f"ExactOperator(dim={self.dim})"

    def is_real(self) -> bool:
        return not np.any(self.im != 0)

    def is_hermitian(self) -> bool:
        return bool(np.all(self.re == self.re.T)) and bool(np.all(self.im == -self.im.T))

    def trace(self) -> ExactScalar:
        return ExactScalar(sum(np.diagonal(self.re), Fraction(0)), sum(np.diagonal(self.im), Fraction(0)))

    def is_diagonal(self) -> bool:
        off = ~np.eye(self.dim, dtype=bool)
        return not np.any(self.re[off] != 0) and not np.any(self.im[off] != 0)

    # arithmetic -----------------------------------------------------------------

    def _check_same(self, other: "ExactOperator") -> None:
        if self.dim != other.dim:
            raise DimensionError(f"dimension {self.dim} vs {other.dim}")

    def __add__(self, other: "ExactOperator") -> "ExactOperator":
        self._check_same(other)
        return ExactOperator(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ExactOperator") -> "ExactOperator":
        self._check_same(other)
        return ExactOperator(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ExactOperator":
        return ExactOperator(-self.re, -self.im)

    def scale(self, factor) -> "ExactOperator":
        """Multiply by a rational or by an :class:`ExactScalar`."""
        if isinstance(factor, ExactScalar):
            a, b = factor.re, factor.im
            return ExactOperator(self.re * a - self.im * b, self.re * b + self.im * a)
        factor = _frac(factor)
        return ExactOperator(self.re * factor, self.im * factor)

    def __matmul__(self, other: "ExactOperator") -> "ExactOperator":
        self._check_same(other)
        re = self.re.dot(other.re) - self.im.dot(other.im)
        im = self.re.dot(other.im) + self.im.dot(other.re)
        return ExactOperator(re, im)

    def dagger(self) -> "ExactOperator":
        return ExactOperator(self.re.T.copy(), (-self.im).T.copy())

    def relabel(self, idx: np.ndarray) -> "ExactOperator":
        """``result[idx[x], idx[w]] = self[x, w]`` for a basis bijection ``idx``."""
        inv = np.argsort(idx)
        sel = np.ix_(inv, inv)
        return ExactOperator(self.re[sel], self.im[sel])

    def to_float(self) -> np.ndarray:
        re = np.array([[float(v) for v in row] for row in self.re], dtype=float).reshape(self.re.shape)
        im = np.array([[float(v) for v in row] for row in self.im], dtype=float).reshape(self.im.shape)
        return re + 1j * im

    def to_json(self) -> list[list[dict]]:
        return [[self[i, j].to_json() for j in range(self.dim)] for i in range(self.dim)]

    @classmethod
    def from_json(cls, rows: list[list[dict]]) -> "ExactOperator":
        re = _object_array([[Fraction(e["re"]) for e in row] for row in rows])
        im = _object_array([[Fraction(e["im"]) for e in row] for row in rows])
        return cls(re, im)


def _check_size(dim: int) -> None:
    limit = current_limits().max_dim
    if dim > limit:
        raise SizeLimitError(f"dimension {dim} exceeds max_dim = {limit}")


def local_n(dim: int, d: int) -> int:
    """Number of tensor factors n with d**n == dim."""
    n, size = 0, 1
    while size < dim:
        size *= d
        n += 1
    if size != dim or n == 0:
        raise DimensionError(f"dimension {dim} is not a positive power of d={d}")
    return n


def conjugate_by_permutation(pi: Permutation, A: ExactOperator, d: int) -> ExactOperator:
    """``U^pi A U^pi^dagger`` by basis relabeling; no matrix products."""
    if A.dim != d**pi.n:
        raise DimensionError(f"operator of dimension {A.dim} is not on (C^{d})^(x){pi.n}")
    return A.relabel(basis_permutation(pi, d))


# float layer ---------------------------------------------------------------------


def _hermitian_or_raise(A: np.ndarray, what: str) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"{what}: expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ContractError(f"{what}: non-finite entries")
    if A.size and np.max(np.abs(A - A.conj().T)) > FLOAT_TOL:
        raise ContractError(f"{what}: matrix is not Hermitian")
    return A


def trace_norm(A: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    A = _hermitian_or_raise(A, "trace_norm")
    return float(np.sum(np.abs(np.linalg.eigvalsh(A))))


def check_density_matrix(rho: np.ndarray, what: str = "state") -> np.ndarray:
    rho = _hermitian_or_raise(rho, what)
    if abs(np.trace(rho) - 1) > FLOAT_TOL:
        raise ContractError(f"{what}: trace {np.trace(rho).real:.3g} is not 1")
    evals = np.linalg.eigvalsh(rho)
    if evals.size and evals.min() < -FLOAT_TOL:
        raise ContractError(f"{what}: negative eigenvalue {evals.min():.3g}")
    return rho


def entropy_of_spectrum(evals) -> float:
    evals = np.asarray(evals, dtype=float)
    evals = evals[evals > 0]
    return float(-np.sum(evals * np.log2(evals))) + 0.0


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Entropy in bits."""
    rho = check_density_matrix(rho)
    return max(entropy_of_spectrum(np.linalg.eigvalsh(rho)), 0.0)


def maximally_entangled_state(D: int) -> np.ndarray:
    """Projector onto ``(1/sqrt D) sum_x e_x (x) e_x`` on C^D (x) C^D."""
    if D < 1:
        raise ValueError("D must be positive")
    _check_size(D * D)
    phi = np.zeros(D * D, dtype=complex)
    phi[np.arange(D) * (D + 1)] = 1 / np.sqrt(D)
    return np.outer(phi, phi.conj())


def partial_trace(rho: np.ndarray, dims: tuple[int, int], keep: int) -> np.ndarray:
    """Trace out one factor of a bipartite operator; ``keep`` is 0 or 1."""
    a, b = dims
    t = np.asarray(rho).reshape(a, b, a, b)
    if keep == 0:
        return np.einsum("ijkj->ik", t)
    return np.einsum("ijil->jl", t)
