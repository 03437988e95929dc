import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import P
from symtwirl.limits import DimensionError, SizeLimitError, size_limits
from symtwirl.perm_core import (
    Permutation,
    act_on_tuple,
    all_tuples,
    basis_permutation,
    compose,
    decode_index,
    encode_tuple,
    enumerate_permutations,
    inverse,
    permutation_matrix,
)

perms = st.integers(1, 6).flatmap(lambda n: st.permutations(range(1, n + 1)).map(lambda p: Permutation(tuple(p))))


def same_n_pair(k=2):
    return st.integers(1, 6).flatmap(
        lambda n: st.tuples(*[st.permutations(range(1, n + 1)).map(lambda p: Permutation(tuple(p)))] * k)
    )


def test_enumerate_small():
    assert enumerate_permutations(1) == [P(1)]
    s3 = enumerate_permutations(3)
    assert len(s3) == 6
    assert s3[0] == P(1, 2, 3) and s3[-1] == P(3, 2, 1)
    assert s3 == sorted(s3)
    s5 = enumerate_permutations(5)
    assert len(s5) == 120 and len(set(s5)) == 120


def test_enumerate_size_limit():
    with pytest.raises(SizeLimitError):
        enumerate_permutations(9)
    with size_limits(max_perm_n=3):
        with pytest.raises(SizeLimitError):
            enumerate_permutations(4)


def test_invalid_permutation():
    with pytest.raises(ValueError):
        P(1, 1, 2)
    with pytest.raises(ValueError):
        P(0, 1)


def test_compose_examples():
    assert compose(P(1, 2, 3), P(3, 1, 2)) == P(3, 1, 2)
    assert compose(P(2, 1, 3), P(2, 1, 3)) == P(1, 2, 3)
    # hand table: outer(inner(1)) = outer(2) = 3, outer(inner(2)) = outer(3) = 1, outer(inner(3)) = outer(1) = 2
    assert compose(P(2, 3, 1), P(2, 3, 1)) == P(3, 1, 2)
    with pytest.raises(DimensionError):
        compose(P(1, 2), P(1, 2, 3))


def test_inverse_examples():
    assert inverse(P(1, 2, 3)) == P(1, 2, 3)
    assert inverse(P(2, 1, 3)) == P(2, 1, 3)
    # pi(1)=2, pi(2)=3, pi(3)=1 solved for the preimages
    assert inverse(P(2, 3, 1)) == P(3, 1, 2)


def test_act_on_tuple_examples():
    assert act_on_tuple(P(1, 2, 3), (1, 2, 2)) == (1, 2, 2)
    assert act_on_tuple(P(2, 1, 3), ("a", "b", "c")) == ("b", "a", "c")
    assert act_on_tuple(P(2, 3, 1), (1, 1, 2)) == (1, 2, 1)
    with pytest.raises(DimensionError):
        act_on_tuple(P(1, 2), (1, 2, 3))


@given(same_n_pair(3))
def test_group_laws(triple):
    a, b, c = triple
    ident = Permutation.identity(a.n)
    assert compose(a, compose(b, c)) == compose(compose(a, b), c)
    assert compose(ident, a) == a == compose(a, ident)
    assert compose(a, inverse(a)) == ident == compose(inverse(a), a)


@given(same_n_pair(2), st.data())
def test_action_is_contravariant(pair, data):
    sigma, pi = pair
    x = data.draw(st.tuples(*[st.integers(1, 3)] * pi.n))
    assert act_on_tuple(sigma, act_on_tuple(pi, x)) == act_on_tuple(compose(pi, sigma), x)
    assert sorted(act_on_tuple(pi, x)) == sorted(x)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_action_is_bijection_on_words(n):
    words = set(all_tuples(2, n))
    for pi in enumerate_permutations(n):
        assert {act_on_tuple(pi, x) for x in words} == words


def test_encoding_roundtrip():
    for d, n in [(2, 3), (3, 2), (1, 4)]:
        for k, x in enumerate(all_tuples(d, n)):
            assert encode_tuple(x, d) == k
            assert decode_index(k, d, n) == x
    assert encode_tuple((2, 1, 1), 2) == 4  # first entry most significant


def test_permutation_matrix_examples(rng):
    assert permutation_matrix(P(1, 2), 2) == permutation_matrix(P(1, 2), 2).identity(4)
    swap = permutation_matrix(P(2, 1), 2).to_float().real
    expected = np.zeros((4, 4))
    # (1,1)->0, (1,2)->1, (2,1)->2, (2,2)->3
    for a, b in [(0, 0), (1, 2), (2, 1), (3, 3)]:
        expected[b, a] = 1
    assert np.array_equal(swap, expected)
    pi = Permutation(tuple(rng.permutation(4) + 1))
    m = permutation_matrix(pi, 2).to_float().real
    assert np.array_equal(m.sum(axis=0), np.ones(16))
    assert np.array_equal(m.sum(axis=1), np.ones(16))


@pytest.mark.parametrize("n", [2, 3])
def test_matrix_entries_follow_action(n):
    d = 2
    for pi in enumerate_permutations(n):
        m = permutation_matrix(pi, d).to_float().real
        for x in all_tuples(d, n):
            for y in all_tuples(d, n):
                assert m[encode_tuple(y, d), encode_tuple(x, d)] == float(act_on_tuple(pi, x) == y)


def test_inverse_matrix_is_transpose():
    for pi in enumerate_permutations(3):
        m = permutation_matrix(pi, 2).to_float().real
        assert np.array_equal(permutation_matrix(inverse(pi), 2).to_float().real, m.T)


def test_matrices_compose_contravariantly():
    for sigma, pi in itertools.product(enumerate_permutations(3), repeat=2):
        ms = permutation_matrix(sigma, 2).to_float().real
        mp = permutation_matrix(pi, 2).to_float().real
        assert np.array_equal(ms @ mp, permutation_matrix(compose(pi, sigma), 2).to_float().real)


def test_basis_permutation_size_limit():
    with pytest.raises(SizeLimitError):
        basis_permutation(Permutation.identity(13), 2)


def test_json_roundtrip():
    pi = P(2, 1, 3)
    assert pi.to_json() == [2, 1, 3]
    assert Permutation.from_json([2, 1, 3]) == pi
