"""Closed-form randomness-cost bounds and entropy utilities (all logs base 2)."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .exact_operator import check_density_matrix, entropy_of_spectrum, von_neumann_entropy
from .limits import ContractError, NotVerifiedError
from .twirl import Distribution

SLACK = 1e-9


def shannon_entropy(p) -> float:
    """Entropy in bits of a :class:`Distribution` or a probability vector."""
    if isinstance(p, Distribution):
        probs = np.array(p.probabilities())
    else:
        probs = np.asarray(list(p), dtype=float)
        if probs.size == 0 or np.any(probs < 0) or abs(probs.sum() - 1) > 1e-12:
            raise ContractError("not a probability vector")
    return max(entropy_of_spectrum(probs), 0.0)


def binary_entropy(x: float) -> float:
    if not 0 <= x <= 1:
        raise ContractError(f"binary entropy needs 0 <= x <= 1, got {x}")
    if x in (0, 1):
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def support_upper_bound(d: int, n: int) -> int:
    """d^(4n) + 1."""
    return d ** (4 * n) + 1


def entropy_rate_upper(d: int) -> float:
    return 4 * math.log2(d + 1)


def entropy_rate_lower(d: int, n: int) -> float:
    """log2 d - 2 d log2(n+1) / n, unclamped."""
    return math.log2(d) - 2 * d * math.log2(n + 1) / n


def audenaert_f(eps: float, D: int) -> float:
    """2 eps log2(D-1) + 2 H2(eps) for eps in [0, 1]."""
    if not 0 <= eps <= 1:
        raise ContractError(f"eps must lie in [0, 1], got {eps}")
    if D < 2:
        raise ContractError(f"D must be at least 2, got {D}")
    return 2 * eps * math.log2(D - 1) + 2 * binary_entropy(eps)


def continuity_dimension(d: int, n: int, convention: str = "tensor") -> int:
    """Dimension used inside the continuity bound: d^n (``"tensor"``) or d (``"local"``)."""
    if convention == "tensor":
        return d**n
    if convention == "local":
        return d
    raise ValueError(f"unknown convention {convention!r}")


def entropy_rate_lower_approx(d: int, n: int, eps: float, D: int | None = None) -> float:
    """Entropy-rate floor for a distribution whose twirl is eps-close in diamond norm.

    eps may reach 2; values above 1 are clamped before entering the continuity
    term. D defaults to d**n.
    """
    if not 0 <= eps <= 2:
        raise ContractError(f"eps must lie in [0, 2], got {eps}")
    if D is None:
        D = continuity_dimension(d, n)
    correction = audenaert_f(min(eps, 1.0), D) / n if eps > 0 else 0.0
    return entropy_rate_lower(d, n) - correction


def channel_entropy_rate_lower(dK: int, dH: int, n: int) -> float:
    return entropy_rate_lower(dK * dH, n)


def sym_dimension(d: int, n: int) -> int:
    return math.comb(d + n - 1, d - 1)


def support_lower_bound(d: int, n: int) -> int:
    """d^n - C(d+n-1, d-1); may be nonpositive for small n."""
    return d**n - sym_dimension(d, n)


def almost_convexity_gap(p: Sequence[float], states: Sequence[np.ndarray]) -> float:
    """sum p S(rho_x) + H(p) - S(sum p rho_x); never below -1e-9 for valid input."""
    p = np.asarray(p, dtype=float)
    if len(p) != len(states):
        raise ContractError("one probability per state is required")
    states = [check_density_matrix(rho, f"state {i}") for i, rho in enumerate(states)]
    if len({rho.shape for rho in states}) != 1:
        raise ContractError("states have different dimensions")
    mixture = sum(w * rho for w, rho in zip(p, states))
    gap = sum(w * von_neumann_entropy(rho) for w, rho in zip(p, states)) + shannon_entropy(p) - von_neumann_entropy(mixture)
    if gap < -SLACK:
        raise AssertionError(f"almost-convexity violated by {-gap:.3g}")
    return gap


@dataclass
class BoundsReport:
    d: int
    n: int
    support_upper_bound: int
    support_lower_bound: int
    sym_dimension: int
    entropy_rate_upper: float
    entropy_rate_lower: float
    entropy_rate_lower_clamped: float
    channel_entropy_rate_lower: float
    uniform_entropy_rate: float
    # the uniform distribution is always a design, so a floor above n! cannot hold
    support_lower_bound_exceeds_group_order: bool
    eps: float | None = None
    eps_clamped: bool | None = None
    continuity_dimension: int | None = None
    entropy_rate_lower_approx: float | None = None
    design_support: int | None = None
    design_entropy: float | None = None
    design_entropy_rate: float | None = None
    entropy_bound_holds: bool | None = None
    entropy_bound_vacuous: bool | None = None
    support_within_bounds: bool | None = None

    def to_json(self) -> dict:
        return asdict(self)


def bounds_report(d: int, n: int, design=None, eps: float | None = None, D: int | None = None) -> BoundsReport:
    """Evaluate every closed-form bound at (d, n), optionally against a verified design."""
    if d < 1 or n < 1:
        raise ContractError("d and n must be positive")
    lower = entropy_rate_lower(d, n)
    report = BoundsReport(
        d=d,
        n=n,
        support_upper_bound=support_upper_bound(d, n),
        support_lower_bound=support_lower_bound(d, n),
        sym_dimension=sym_dimension(d, n),
        entropy_rate_upper=entropy_rate_upper(d),
        entropy_rate_lower=lower,
        entropy_rate_lower_clamped=max(lower, 0.0),
        channel_entropy_rate_lower=channel_entropy_rate_lower(d, d, n),
        uniform_entropy_rate=math.log2(math.factorial(n)) / n,
        support_lower_bound_exceeds_group_order=support_lower_bound(d, n) > math.factorial(n),
    )
    if eps is not None:
        D = continuity_dimension(d, n) if D is None else D
        report.eps = eps
        report.eps_clamped = eps > 1
        report.continuity_dimension = D
        report.entropy_rate_lower_approx = entropy_rate_lower_approx(d, n, eps, D)
    if design is not None:
        if not getattr(design, "verified", False):
            raise NotVerifiedError("design must pass exact verification before it is reported")
        if (design.d, design.n) != (d, n):
            raise ContractError(f"design is for d={design.d}, n={design.n}, report for d={d}, n={n}")
        h = shannon_entropy(design)
        report.design_support = len(design)
        report.design_entropy = h
        report.design_entropy_rate = h / n
        report.entropy_bound_holds = h / n >= lower - SLACK
        report.entropy_bound_vacuous = lower <= 0
        report.support_within_bounds = (
            report.support_lower_bound <= len(design) <= min(math.factorial(n), report.support_upper_bound)
        )
    return report
