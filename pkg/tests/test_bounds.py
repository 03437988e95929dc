import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import P, random_density
from symtwirl.bounds import (
    almost_convexity_gap,
    audenaert_f,
    binary_entropy,
    bounds_report,
    channel_entropy_rate_lower,
    entropy_rate_lower,
    entropy_rate_lower_approx,
    entropy_rate_upper,
    shannon_entropy,
    support_lower_bound,
    support_upper_bound,
    sym_dimension,
)
from symtwirl.design import WeightedDesign, build_constraint_system, caratheodory_reduce, certify
from symtwirl.limits import ContractError, NotVerifiedError
from symtwirl.twirl import Distribution


def test_shannon_entropy_examples():
    assert shannon_entropy(Distribution.point_mass(P(2, 1))) == 0
    assert shannon_entropy(Distribution.uniform(5)) == pytest.approx(math.log2(120))
    assert math.log2(120) == pytest.approx(6.9069, abs=1e-4)
    assert shannon_entropy([0.5, 0.25, 0.25]) == pytest.approx(1.5)
    with pytest.raises(ContractError):
        shannon_entropy([0.5, 0.6])


def test_binary_entropy_examples():
    assert binary_entropy(0) == binary_entropy(1) == 0
    assert binary_entropy(0.5) == pytest.approx(1)
    assert binary_entropy(0.25) == pytest.approx(0.8113, abs=1e-4)
    with pytest.raises(ContractError):
        binary_entropy(1.5)


def test_support_bounds():
    assert support_upper_bound(2, 1) == 17
    assert support_upper_bound(2, 2) == 257
    assert support_upper_bound(1, 7) == 2
    assert support_upper_bound(2, 5) == 1048577
    assert support_lower_bound(2, 2) == 1
    assert support_lower_bound(2, 3) == 4
    assert support_lower_bound(2, 5) == 26
    assert support_lower_bound(1, 3) == 0


def test_sym_dimension():
    assert sym_dimension(2, 2) == 3
    assert sym_dimension(2, 5) == 6
    assert sym_dimension(3, 2) == 6
    assert sym_dimension(3, 3) == 10


def test_entropy_rate_formulas():
    assert entropy_rate_upper(1) == 4
    assert entropy_rate_upper(2) == pytest.approx(6.3399, abs=1e-4)
    assert entropy_rate_upper(3) == pytest.approx(8)
    assert entropy_rate_lower(2, 5) == pytest.approx(1 - 0.8 * math.log2(6), abs=1e-12)
    assert entropy_rate_lower(2, 5) == pytest.approx(-1.0680, abs=1e-4)
    assert entropy_rate_lower(1, 9) < 0
    assert entropy_rate_lower(2, 10**6) == pytest.approx(0.99992, abs=1e-5)


def test_audenaert_f_examples():
    assert audenaert_f(0, 5) == 0
    assert audenaert_f(0.5, 4) == pytest.approx(math.log2(3) + 2)
    assert audenaert_f(1, 2) == 0
    with pytest.raises(ContractError):
        audenaert_f(1.2, 4)


def test_entropy_rate_lower_approx():
    for d, n in [(2, 5), (3, 4), (2, 1)]:
        assert entropy_rate_lower_approx(d, n, 0) == entropy_rate_lower(d, n)
    # independent evaluation: 0.2 log2 31 + 2 H2(0.1), with H2 written out
    h2 = -(0.1 * math.log(0.1) + 0.9 * math.log(0.9)) / math.log(2)
    expected = 1 - 0.8 * math.log(6) / math.log(2) - (0.2 * math.log(31) / math.log(2) + 2 * h2) / 5
    assert entropy_rate_lower_approx(2, 5, 0.1) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(-1.4537, abs=1e-4)
    grid = np.linspace(0, 0.5, 51)
    values = [entropy_rate_lower_approx(2, 5, e) for e in grid]
    assert all(a >= b for a, b in zip(values, values[1:]))
    assert entropy_rate_lower_approx(2, 5, 1.7) == entropy_rate_lower_approx(2, 5, 1.0)
    assert entropy_rate_lower_approx(2, 5, 0.1, D=2) != entropy_rate_lower_approx(2, 5, 0.1)
    with pytest.raises(ContractError):
        entropy_rate_lower_approx(2, 5, 2.5)


def test_channel_entropy_rate_lower():
    assert channel_entropy_rate_lower(2, 2, 5) == entropy_rate_lower(4, 5)
    assert channel_entropy_rate_lower(2, 2, 5) == pytest.approx(2 - 1.6 * math.log2(6))
    assert channel_entropy_rate_lower(2, 2, 5) == pytest.approx(-2.136, abs=1e-3)
    assert channel_entropy_rate_lower(1, 3, 7) == entropy_rate_lower(3, 7)
    assert channel_entropy_rate_lower(2, 2, 10**6) == pytest.approx(2, abs=1e-3)


def test_almost_convexity_examples(rng):
    rho = random_density(3, rng)
    assert almost_convexity_gap([1.0], [rho]) == pytest.approx(0, abs=1e-9)
    e0, e1 = np.diag([1.0, 0]), np.diag([0, 1.0])
    assert almost_convexity_gap([0.5, 0.5], [e0, e1]) == pytest.approx(0, abs=1e-9)
    assert almost_convexity_gap([0.5, 0.5], [rho, rho]) == pytest.approx(1, abs=1e-9)
    with pytest.raises(ContractError):
        almost_convexity_gap([0.5, 0.5], [rho, np.eye(2) / 2])


def test_uniform_rate_beats_floor():
    for d in range(1, 5):
        for n in range(1, 8):
            assert shannon_entropy(Distribution.uniform(n)) / n >= entropy_rate_lower(d, n) - 1e-9


def test_report_without_design():
    r = bounds_report(3, 3)
    assert r.sym_dimension == 10
    assert r.design_support is None
    data = r.to_json()
    assert data["support_upper_bound"] == 3**12 + 1


def test_report_with_uniform_design():
    sys = build_constraint_system(2, 2)
    design = certify(Distribution.uniform(2), sys)
    r = bounds_report(2, 2, design=design)
    assert r.design_entropy_rate == pytest.approx(0.5)
    assert r.entropy_rate_lower == pytest.approx(-2.17, abs=1e-2)
    assert r.entropy_bound_holds and r.entropy_bound_vacuous and r.support_within_bounds


def test_report_with_reduced_design():
    sys = build_constraint_system(2, 5)
    design = caratheodory_reduce(None, sys)
    r = bounds_report(2, 5, design=design, eps=0.1)
    assert r.entropy_bound_holds and r.support_within_bounds
    assert r.support_lower_bound <= r.design_support <= 120
    assert r.entropy_rate_lower_approx == entropy_rate_lower_approx(2, 5, 0.1)
    assert r.eps_clamped is False and r.continuity_dimension == 32


def test_report_refuses_unverified():
    design = WeightedDesign(2, {P(1, 2): Fraction(1, 2), P(2, 1): Fraction(1, 2)}, 2)
    with pytest.raises(NotVerifiedError):
        bounds_report(2, 2, design=design)
    with pytest.raises(NotVerifiedError):
        bounds_report(2, 2, design=Distribution.uniform(2))


def test_report_eps_clamp():
    r = bounds_report(2, 5, eps=1.5)
    assert r.eps_clamped is True
    assert r.entropy_rate_lower_approx == entropy_rate_lower_approx(2, 5, 1.0)


def test_support_floor_can_exceed_group_order():
    # the uniform distribution is a verified design with support n!, below the floor here
    for d, n in [(3, 2), (3, 3), (4, 5)]:
        assert support_lower_bound(d, n) > math.factorial(n)
        design = certify(Distribution.uniform(n), build_constraint_system(d, n))
        r = bounds_report(d, n, design=design)
        assert r.support_lower_bound_exceeds_group_order
        assert r.support_within_bounds is False
    assert not bounds_report(2, 5).support_lower_bound_exceeds_group_order
