"""The symmetric subspace and purifications of permutation-invariant states."""

from __future__ import annotations

import math

import numpy as np

from .exact_operator import ExactOperator, check_density_matrix, conjugate_by_permutation, local_n
from .limits import ContractError, DimensionError, check_dim
from .perm_core import adjacent_transpositions, basis_permutation, encode_tuple, enumerate_permutations
from .typestat import enumerate_types, type_class, type_class_size

TOL = 1e-9


def sym_basis(d: int, n: int) -> np.ndarray:
    """Occupation-number basis of sym^(n)(C^d) as the columns of a dim x k array."""
    dim = check_dim(d, n)
    types = enumerate_types(n, d)
    basis = np.zeros((dim, len(types)))
    for k, mu in enumerate(types):
        for word in type_class(mu):
            basis[encode_tuple(word, d), k] = 1.0
        basis[:, k] /= math.sqrt(type_class_size(mu))
    return basis


def sym_projector(d: int, n: int) -> np.ndarray:
    B = sym_basis(d, n)
    return B @ B.T


def permutation_average(d: int, n: int) -> np.ndarray:
    """(1/n!) sum_pi U^pi in floating point."""
    dim = check_dim(d, n)
    perms = enumerate_permutations(n)
    total = np.zeros((dim, dim))
    cols = np.arange(dim)
    for pi in perms:
        total[basis_permutation(pi, d), cols] += 1.0
    return total / len(perms)


def is_permutation_invariant(rho: ExactOperator, d: int, exhaustive: bool = False) -> bool:
    """Exact check that U^pi rho U^pi^dagger == rho for every pi.

    Adjacent transpositions generate S_n, so they suffice unless ``exhaustive``.
    """
    n = local_n(rho.dim, d)
    perms = enumerate_permutations(n) if exhaustive else adjacent_transpositions(n)
    return all(conjugate_by_permutation(pi, rho, d) == rho for pi in perms)


def _as_float_state(rho, d: int) -> tuple[np.ndarray, int]:
    if isinstance(rho, ExactOperator):
        if not is_permutation_invariant(rho, d):
            raise ContractError("state is not permutation invariant")
        n = local_n(rho.dim, d)
        return check_density_matrix(rho.to_float()), n
    rho = check_density_matrix(np.asarray(rho, dtype=complex))
    n = local_n(rho.shape[0], d)
    for pi in adjacent_transpositions(n):
        idx = np.argsort(basis_permutation(pi, d))
        if np.max(np.abs(rho[np.ix_(idx, idx)] - rho)) > TOL:
            raise ContractError("state is not permutation invariant")
    return rho, n


def doubled_purification(evals: np.ndarray, evecs: np.ndarray) -> np.ndarray:
    """sum_i sqrt(lambda_i) v_i (x) conj(v_i); zero eigenvalues contribute nothing."""
    weights = np.sqrt(np.clip(evals, 0.0, None))
    return np.einsum("i,ai,bi->ab", weights, evecs, evecs.conj()).reshape(-1)


def purification_in_doubled_sym(rho, d: int, evecs: np.ndarray | None = None) -> tuple[bool, np.ndarray]:
    """Purify a permutation-invariant state and test invariance under U^pi (x) U^pi.

    Returns the verdict and the witness vector on H^(x)n (x) H^(x)n. ``evecs``
    may supply an alternative orthonormal eigenbasis of ``rho``.
    """
    rho, n = _as_float_state(rho, d)
    if evecs is None:
        evals, evecs = np.linalg.eigh(rho)
    else:
        evecs = np.asarray(evecs, dtype=complex)
        evals = np.real(np.einsum("ai,ab,bi->i", evecs.conj(), rho, evecs))
        if np.max(np.abs(evecs @ np.diag(evals) @ evecs.conj().T - rho)) > TOL:
            raise ContractError("supplied vectors do not diagonalize the state")
    psi = doubled_purification(evals, evecs)
    dim = rho.shape[0]
    for pi in enumerate_permutations(n):
        idx = basis_permutation(pi, d)
        joint = (idx[:, None] * dim + idx[None, :]).reshape(-1)
        moved = np.empty_like(psi)
        moved[joint] = psi
        if np.max(np.abs(moved - psi)) > TOL:
            return False, psi
    return True, psi
