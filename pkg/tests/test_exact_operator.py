import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import P, random_density
from symtwirl.design import random_rational_matrix
from symtwirl.exact_operator import (
    ExactOperator,
    ExactScalar,
    conjugate_by_permutation,
    maximally_entangled_state,
    partial_trace,
    trace_norm,
    von_neumann_entropy,
)
from symtwirl.limits import ContractError, DimensionError
from symtwirl.perm_core import compose, enumerate_permutations, permutation_matrix


def unit(d, n, word):
    from symtwirl.perm_core import encode_tuple

    k = encode_tuple(word, d)
    return ExactOperator.matrix_unit(d**n, k, k)


def test_conjugation_examples(rng):
    A = random_rational_matrix(8, rng)
    assert conjugate_by_permutation(P(1, 2, 3), A, 2) == A
    assert conjugate_by_permutation(P(2, 1), unit(2, 2, (1, 2)), 2) == unit(2, 2, (2, 1))
    for pi in enumerate_permutations(3):
        assert conjugate_by_permutation(pi, A, 2).trace() == A.trace()


def test_conjugation_matches_matrix_product(rng):
    A = random_rational_matrix(8, rng)
    for pi in enumerate_permutations(3):
        U = permutation_matrix(pi, 2)
        assert conjugate_by_permutation(pi, A, 2) == U @ A @ U.dagger()


def test_conjugation_composes_with_perm_convention(rng):
    A = random_rational_matrix(8, rng)
    for sigma, pi in itertools.product(enumerate_permutations(3), repeat=2):
        twice = conjugate_by_permutation(sigma, conjugate_by_permutation(pi, A, 2), 2)
        assert twice == conjugate_by_permutation(compose(pi, sigma), A, 2)


def test_conjugation_preserves_hermiticity(rng):
    A = random_rational_matrix(8, rng)
    H = A + A.dagger()
    assert H.is_hermitian()
    assert conjugate_by_permutation(P(3, 1, 2), H, 2).is_hermitian()


def test_conjugation_dimension_mismatch(rng):
    with pytest.raises(DimensionError):
        conjugate_by_permutation(P(1, 2, 3), random_rational_matrix(4, rng), 2)


def test_ring_operations(rng):
    A, B, C = (random_rational_matrix(4, rng) for _ in range(3))
    assert (A @ B) @ C == A @ (B @ C)
    assert A @ (B + C) == A @ B + A @ C
    assert (A - A) == ExactOperator.zeros(4)
    i = ExactScalar(0, 1)
    assert A.scale(i).scale(i) == -A


def test_float_roundtrip(rng):
    A = random_rational_matrix(5, rng, max_num=1000, max_den=999)
    back = ExactOperator.from_float(A.to_float())
    assert back == A
    assert np.max(np.abs(back.to_float() - A.to_float())) < 1e-12


def test_scalar_json():
    s = ExactScalar(Fraction(-3, 6), Fraction(2))
    assert s.to_json() == {"re": "-1/2", "im": "2/1"}
    assert ExactScalar.from_json(s.to_json()) == s


def test_operator_json(rng):
    A = random_rational_matrix(3, rng)
    assert ExactOperator.from_json(A.to_json()) == A


def test_trace_norm_examples(rng):
    assert trace_norm(np.zeros((3, 3))) == 0
    assert trace_norm(random_density(5, rng)) == pytest.approx(1, abs=1e-10)
    assert trace_norm(np.diag([0.5, -0.5])) == pytest.approx(1, abs=1e-12)
    with pytest.raises(ContractError):
        trace_norm(np.array([[0, 1], [0, 0]]))


def test_entropy_examples(rng):
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    v /= np.linalg.norm(v)
    assert von_neumann_entropy(np.outer(v, v.conj())) == pytest.approx(0, abs=1e-9)
    assert von_neumann_entropy(np.eye(6) / 6) == pytest.approx(math.log2(6), abs=1e-12)
    assert von_neumann_entropy(np.diag([0.5, 0.25, 0.25])) == pytest.approx(1.5, abs=1e-12)
    with pytest.raises(ContractError):
        von_neumann_entropy(np.diag([0.5, 0.25]))
    with pytest.raises(ContractError):
        von_neumann_entropy(np.diag([1.5, -0.5]))


def test_maximally_entangled_state():
    assert np.allclose(maximally_entangled_state(1), [[1]])
    bell = maximally_entangled_state(2)
    assert np.trace(bell).real == pytest.approx(1)
    assert np.trace(bell @ bell).real == pytest.approx(1)
    assert np.allclose(bell[np.ix_([0, 3], [0, 3])], 0.5)
    phi = maximally_entangled_state(4)
    for keep in (0, 1):
        assert np.allclose(partial_trace(phi, (4, 4), keep), np.eye(4) / 4, atol=1e-12)
