"""Approximate designs (diamond-norm brackets) and channel designs via Choi states."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bounds import SLACK, audenaert_f, continuity_dimension, entropy_rate_lower, shannon_entropy
from .design import build_constraint_system, verify_design
from .exact_operator import FLOAT_TOL, ExactOperator, trace_norm
from .limits import ContractError, DimensionError, check_dim
from .perm_core import Permutation, basis_permutation, encode_tuple, enumerate_permutations, inverse
from .twirl import Distribution
from .typestat import enumerate_types, representative, type_class, type_class_size


# diamond-norm bracket ---------------------------------------------------------------


def diamond_upper_via_l1(q: Distribution) -> float:
    """sum_pi |1/n! - q(pi)|, an upper bound on the diamond distance to the uniform twirl."""
    perms = enumerate_permutations(q.n)
    u = Fraction(1, len(perms))
    return float(sum((abs(u - q[pi]) for pi in perms), Fraction(0)))


@dataclass
class DiamondBracket:
    lower: float
    upper: float
    witness: str  # "basis:<word>" or "entangled"

    def __post_init__(self):
        if not -FLOAT_TOL <= self.lower <= self.upper + FLOAT_TOL or self.upper > 2 + FLOAT_TOL:
            raise ContractError(f"inconsistent bracket [{self.lower}, {self.upper}]")


def _basis_lower(q: Distribution, d: int) -> tuple[float, str]:
    # twirls of |e_x><e_x| depend only on the type of x, so one word per type suffices
    n = q.n
    dim = check_dim(d, n)
    best, witness = 0.0, ""
    for mu in enumerate_types(n, d):
        word = representative(mu)
        size = type_class_size(mu)
        diff = np.zeros(dim)
        for w in type_class(mu):
            diff[encode_tuple(w, d)] += 1.0 / size
        x = encode_tuple(word, d)
        for pi, w in q.weights.items():
            diff[basis_permutation(pi, d)[x]] -= float(w)
        value = trace_norm(np.diag(diff))
        if value > best:
            best, witness = value, "basis:" + "".join(map(str, word))
    return best, witness


def _entangled_lower(q: Distribution, d: int) -> float:
    # (id (x) (U - U_q))(|Phi><Phi|) = (1/D) sum_pi c_pi vec(U^pi) vec(U^pi)^dagger
    n = q.n
    dim = check_dim(d, n)
    check_dim(d, 2 * n)
    perms = enumerate_permutations(n)
    u = Fraction(1, len(perms))
    diff = np.zeros((dim * dim, dim * dim))
    cols = np.arange(dim)
    for pi in perms:
        c = float(q[pi] - u)
        if c == 0:
            continue
        v = np.zeros((dim, dim))
        v[basis_permutation(pi, d), cols] = 1.0
        v = v.reshape(-1)
        diff += c * np.outer(v, v)
    return trace_norm(diff / dim)


def diamond_lower_via_inputs(q: Distribution, d: int, entangled: bool = True) -> tuple[float, str]:
    """Largest output trace-norm difference over basis-state inputs and the
    maximally entangled input. Returns ``(value, witness)``."""
    best, witness = _basis_lower(q, d)
    if entangled:
        value = _entangled_lower(q, d)
        if value > best:
            best, witness = value, "entangled"
    return best, witness


def diamond_bracket(q: Distribution, d: int, entangled: bool = True) -> DiamondBracket:
    lower, witness = diamond_lower_via_inputs(q, d, entangled)
    upper = diamond_upper_via_l1(q)
    return DiamondBracket(min(lower, upper), upper, witness)


def _continuity_max(lo: float, hi: float, D: int) -> float:
    """Max of the continuity term over eps in [lo, hi] (clamped into [0, 1])."""
    lo, hi = min(max(lo, 0.0), 1.0), min(max(hi, 0.0), 1.0)
    peak = (D - 1) / D  # the continuity term is concave and peaks here
    return audenaert_f(min(max(peak, lo), hi), D)


@dataclass
class Theorem4Report:
    """Entropy rate of q against the approximate-design floor, evaluated on a bracket."""

    H_rate: float
    eps_lower: float
    eps_upper: float
    rhs_at_lower: float
    rhs_at_upper: float
    rhs_certified: float
    vacuous: bool
    holds: bool
    continuity_dimension: int

    def to_json(self) -> dict:
        return asdict(self)


def theorem4_report(q: Distribution, d: int, D: int | None = None, entangled: bool = True) -> Theorem4Report:
    n = q.n
    if D is None:
        D = continuity_dimension(d, n)
    bracket = diamond_bracket(q, d, entangled)
    base = entropy_rate_lower(d, n)

    def rhs(eps: float) -> float:
        return base - (audenaert_f(min(eps, 1.0), D) / n if eps > FLOAT_TOL else 0.0)

    eps_lo = 0.0 if bracket.lower <= FLOAT_TOL else bracket.lower
    certified = base - (_continuity_max(eps_lo, bracket.upper, D) / n if bracket.upper > FLOAT_TOL else 0.0)
    h_rate = shannon_entropy(q) / n
    at_upper = rhs(bracket.upper)
    holds = h_rate >= at_upper - SLACK and h_rate >= certified - SLACK
    report = Theorem4Report(
        H_rate=h_rate,
        eps_lower=bracket.lower,
        eps_upper=bracket.upper,
        rhs_at_lower=rhs(eps_lo),
        rhs_at_upper=at_upper,
        rhs_certified=certified,
        vacuous=at_upper < 0,
        holds=holds,
        continuity_dimension=D,
    )
    if not holds:
        raise AssertionError(f"entropy rate {h_rate} below the approximate-design floor {at_upper}")
    return report


# channels ---------------------------------------------------------------------------


@dataclass
class ChannelRep:
    """Channel from (C^dH)^(x)n to (C^dK)^(x)n given by Kraus operators.

    Kraus operators are either complex float arrays or object arrays of real
    Fractions (exact mode).
    """

    dH: int
    dK: int
    n: int
    kraus: list[np.ndarray]

    def __post_init__(self):
        d_in, d_out = check_dim(self.dH, self.n), check_dim(self.dK, self.n)
        for K in self.kraus:
            if K.shape != (d_out, d_in):
                raise DimensionError(f"Kraus operator of shape {K.shape}, expected {(d_out, d_in)}")
        if self.exact:
            total = sum(K.T.dot(K) for K in self.kraus)
            if not np.all(total == np.eye(d_in, dtype=int)):
                raise ContractError("Kraus operators are not complete")
        else:
            total = sum(K.conj().T @ K for K in self.kraus)
            if np.max(np.abs(total - np.eye(d_in))) > FLOAT_TOL:
                raise ContractError("Kraus operators are not complete")

    @property
    def exact(self) -> bool:
        return all(K.dtype == object for K in self.kraus)

    @property
    def dim_in(self) -> int:
        return self.dH**self.n

    @property
    def dim_out(self) -> int:
        return self.dK**self.n

    def conjugated(self, pi: Permutation) -> "ChannelRep":
        """Kraus operators of U_pi o N o V_{pi^-1}, built from permutation matrices."""
        U = _perm_matrix(pi, self.dK, self.exact)
        V = _perm_matrix(inverse(pi), self.dH, self.exact)
        return ChannelRep(self.dH, self.dK, self.n, [U.dot(K).dot(V) for K in self.kraus])


def _perm_matrix(pi: Permutation, d: int, exact: bool) -> np.ndarray:
    idx = basis_permutation(pi, d)
    dim = len(idx)
    if exact:
        m = np.full((dim, dim), Fraction(0), dtype=object)
        m[idx, np.arange(dim)] = Fraction(1)
        return m
    m = np.zeros((dim, dim))
    m[idx, np.arange(dim)] = 1.0
    return m


def identity_channel(d: int, n: int, exact: bool = False) -> ChannelRep:
    dim = d**n
    if exact:
        eye = np.full((dim, dim), Fraction(0), dtype=object)
        for i in range(dim):
            eye[i, i] = Fraction(1)
        return ChannelRep(d, d, n, [eye])
    return ChannelRep(d, d, n, [np.eye(dim, dtype=complex)])


def depolarizing_channel(d: int, n: int) -> ChannelRep:
    """Completely depolarizing channel, Kraus operators |i><j| / sqrt(D)."""
    dim = d**n
    kraus = []
    for i in range(dim):
        for j in range(dim):
            K = np.zeros((dim, dim), dtype=complex)
            K[i, j] = 1 / math.sqrt(dim)
            kraus.append(K)
    return ChannelRep(d, d, n, kraus)


def random_channel(dH: int, dK: int, n: int, rng: np.random.Generator, n_kraus: int = 2) -> ChannelRep:
    """Float channel from a random isometry (QR of a Gaussian matrix).

    ``n_kraus`` is raised to the smallest count that admits an isometry."""
    d_in, d_out = dH**n, dK**n
    n_kraus = max(n_kraus, -(-d_in // d_out))
    g = rng.normal(size=(n_kraus * d_out, d_in)) + 1j * rng.normal(size=(n_kraus * d_out, d_in))
    iso, _ = np.linalg.qr(g)
    return ChannelRep(dH, dK, n, [iso[k * d_out : (k + 1) * d_out] for k in range(n_kraus)])


def _cayley_orthogonal(m: int, rng: np.random.Generator) -> np.ndarray:
    # (I - S)(I + S)^-1 is orthogonal and rational for rational skew-symmetric S
    S = np.full((m, m), Fraction(0), dtype=object)
    for i in range(m):
        for j in range(i + 1, m):
            v = Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 4)))
            S[i, j], S[j, i] = v, -v
    eye = np.full((m, m), Fraction(0), dtype=object)
    for i in range(m):
        eye[i, i] = Fraction(1)
    return (eye - S).dot(_exact_inverse(eye + S))


def _exact_inverse(M: np.ndarray) -> np.ndarray:
    m = M.shape[0]
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(m)] for i, row in enumerate(M)]
    for col in range(m):
        piv = next(r for r in range(col, m) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        lead = aug[col][col]
        aug[col] = [v / lead for v in aug[col]]
        for r in range(m):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    out = np.empty((m, m), dtype=object)
    for i in range(m):
        for j in range(m):
            out[i, j] = aug[i][m + j]
    return out


def random_rational_channel(dH: int, dK: int, n: int, rng: np.random.Generator, n_kraus: int = 2) -> ChannelRep:
    """Channel with real rational Kraus operators, cut from a rational orthogonal matrix."""
    d_in, d_out = dH**n, dK**n
    m = n_kraus * d_out
    if m < d_in:
        raise ContractError("not enough Kraus operators for an isometry")
    iso = _cayley_orthogonal(m, rng)[:, :d_in]
    return ChannelRep(dH, dK, n, [iso[k * d_out : (k + 1) * d_out] for k in range(n_kraus)])


def channel_choi(N: ChannelRep) -> np.ndarray:
    """(N (x) id)(|Phi><Phi|) with normalized |Phi>, ordered output (x) input."""
    if N.exact:
        return _choi_exact(N).to_float()
    check_dim(N.dim_out * N.dim_in, 1)
    vecs = [np.asarray(K, dtype=complex).reshape(-1) for K in N.kraus]
    return sum(np.outer(v, v.conj()) for v in vecs) / N.dim_in


def _choi_exact(N: ChannelRep) -> ExactOperator:
    check_dim(N.dim_out * N.dim_in, 1)
    vecs = [K.reshape(-1) for K in N.kraus]
    re = sum(np.outer(v, v) for v in vecs) * Fraction(1, N.dim_in)
    return ExactOperator(re)


def choi(N: ChannelRep):
    """Exact Choi operator for rational channels, float array otherwise."""
    return _choi_exact(N) if N.exact else channel_choi(N)


def _joint_index(pi: Permutation, dK: int, dH: int) -> np.ndarray:
    out_idx = basis_permutation(pi, dK)
    in_idx = basis_permutation(pi, dH)
    return (out_idx[:, None] * len(in_idx) + in_idx[None, :]).reshape(-1)


def permute_choi(sigma, pi: Permutation, dK: int, dH: int):
    """(U_pi (x) V_pi)(sigma) by index relabeling."""
    idx = _joint_index(pi, dK, dH)
    if isinstance(sigma, ExactOperator):
        return sigma.relabel(idx)
    inv = np.argsort(idx)
    return sigma[np.ix_(inv, inv)]


def covariance_identity_check(N: ChannelRep, pi: Permutation) -> bool:
    """Choi of U_pi o N o V_{pi^-1} equals (U_pi (x) V_pi) applied to the Choi of N."""
    if pi.n != N.n:
        raise DimensionError(f"{pi} does not act on {N.n} factors")
    lhs = choi(N.conjugated(pi))
    rhs = permute_choi(choi(N), pi, N.dK, N.dH)
    if N.exact:
        return lhs == rhs
    return bool(np.max(np.abs(lhs - rhs)) <= SLACK)


def channel_design_spot_check(candidate: Distribution, N: ChannelRep) -> float:
    """Max entry deviation between the uniform and weighted covariant averages of N,
    compared through Choi states built directly from conjugated Kraus operators."""
    perms = enumerate_permutations(N.n)
    uniform = sum(channel_choi(N.conjugated(pi)) for pi in perms) / len(perms)
    weighted = sum(float(w) * channel_choi(N.conjugated(pi)) for pi, w in candidate.weights.items())
    return float(np.max(np.abs(uniform - weighted)))


@dataclass
class ChannelVerdict:
    accepted: bool
    local_dimension: int
    detail: str
    spot_check_deviation: float | None = None

    def __bool__(self) -> bool:
        return self.accepted


def verify_channel_design(
    candidate: Distribution, dH: int, dK: int, spot_checks: int = 1, seed: int = 0, spot_max_dim: int = 16
) -> ChannelVerdict:
    """Accept iff ``candidate`` is a state design at local dimension dK * dH.

    When the channel spaces are small enough (d**n <= ``spot_max_dim`` on both
    sides), random channels are also checked directly.
    """
    d = dK * dH
    sys = build_constraint_system(d, candidate.n)
    verdict = verify_design(candidate, sys)
    result = ChannelVerdict(verdict.accepted, d, verdict.describe())
    if spot_checks and max(dH, dK) ** candidate.n <= spot_max_dim:
        rng = np.random.default_rng(seed)
        worst = max(
            channel_design_spot_check(candidate, random_channel(dH, dK, candidate.n, rng)) for _ in range(spot_checks)
        )
        result.spot_check_deviation = worst
        if verdict.accepted and worst > SLACK:
            raise AssertionError(f"state-design reduction accepted but direct check deviates by {worst:.3g}")
    return result
