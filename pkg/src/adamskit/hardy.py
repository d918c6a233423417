"""Weighted Hardy inequalities with power weights on (0, R).

Carries the two-sided estimate B <= C <= k(q,p) B for the best constant of

    (int_0^R |u|^q r^theta dr)^{1/q} <= C (int_0^R |u'|^p r^alpha dr)^{1/p}

over functions vanishing at 0 (left) or at R (right), the second-order
radial inequality with its iterated constants, and randomized
Rayleigh-quotient probes that certify the sandwich numerically.

For pure power weights the product defining B is unimodal in the split
point for every parameter choice (its log-derivative is C - G(x) with G
strictly increasing), so the supremum is located in closed form.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .constants import AdamsParams
from .errors import DegenerateTrialError, DomainError, InfeasibleError
from .profiles import FuncPiece, LinearPiece, Piece, PiecewiseProfile, PowerPiece
from .quadrature import DEFAULT_SPEC, QuadratureSpec, adaptive_gauss

_BOUNDARY_RTOL = 1e-12


class Side(enum.Enum):
    """Which endpoint the admissible functions vanish at."""

    LEFT_VANISHING = "left"
    RIGHT_VANISHING = "right"


@dataclass(frozen=True)
class HardySetup:
    """Exponents (p, q), weight powers (alpha, theta), interval (0, R), side."""

    p: float
    q: float
    alpha: float
    theta: float
    R: float
    side: Side

    def __post_init__(self) -> None:
        if not (self.p > 1.0 and self.q > 1.0):
            raise DomainError(f"need p, q > 1, got p={self.p}, q={self.q}")
        if self.p > self.q:
            raise DomainError(f"the sandwich requires p <= q, got p={self.p} > q={self.q}")
        if not self.R > 0.0:
            raise DomainError(f"interval endpoint must be positive, got R={self.R}")
        if not isinstance(self.side, Side):
            raise DomainError(f"side must be a Side enum member, got {self.side!r}")


@dataclass(frozen=True)
class Sandwich:
    """lower = B <= best constant <= upper = k(q,p) B."""

    lower: float
    upper: float
    b_value: float
    k_factor: float


def k_factor(q: float, p: float) -> float:
    """(1 + q(p-1)/p)^{1/q} (1 + p/(q(p-1)))^{(p-1)/p}; equals
    p (p-1)^{-(p-1)/p} on the diagonal q = p."""
    if not (p > 1.0 and q > 1.0):
        raise DomainError(f"k_factor needs p, q > 1, got p={p}, q={q}")
    first = (1.0 + q * (p - 1.0) / p) ** (1.0 / q)
    second = (1.0 + p / (q * (p - 1.0))) ** ((p - 1.0) / p)
    return first * second


def _feasible(setup: HardySetup) -> None:
    s = setup
    shifted = s.alpha - s.p + 1.0
    if s.side is Side.LEFT_VANISHING and not shifted < 0.0:
        raise InfeasibleError(
            f"left-vanishing case needs alpha - p + 1 < 0, got {shifted}"
        )
    if s.side is Side.RIGHT_VANISHING and not shifted > 0.0:
        raise InfeasibleError(
            f"right-vanishing case needs alpha - p + 1 > 0, got {shifted}"
        )
    lhs = s.q * shifted
    rhs = s.p * (s.theta + 1.0)
    scale = max(1.0, abs(lhs), abs(rhs))
    if lhs > rhs + _BOUNDARY_RTOL * scale:
        raise InfeasibleError(
            f"balance condition q(alpha-p+1) <= p(theta+1) fails: {lhs} > {rhs}"
        )


def _b_left(setup: HardySetup) -> float:
    p, q, alpha, theta, R = setup.p, setup.q, setup.alpha, setup.theta, setup.R
    ev = (p - 1.0 - alpha) / (p - 1.0)
    c_crit = q * (p - 1.0 - alpha) / p

    def log_f(x: float) -> float:
        if theta > -1.0:
            log_w = math.log((R ** (theta + 1.0) - x ** (theta + 1.0)) / (theta + 1.0))
        elif theta == -1.0:
            log_w = math.log(math.log(R / x))
        else:
            log_w = (
                (theta + 1.0) * math.log(x)
                + math.log1p(-((x / R) ** (-theta - 1.0)))
                - math.log(-theta - 1.0)
            )
        log_v = ev * math.log(x) - math.log(ev)
        return log_w / q + (p - 1.0) / p * log_v

    if theta > -1.0:
        x_star = R * (c_crit / (theta + 1.0 + c_crit)) ** (1.0 / (theta + 1.0))
        return math.exp(log_f(x_star))
    if theta == -1.0:
        return math.exp(log_f(R * math.exp(-1.0 / c_crit)))
    edge = -theta - 1.0
    if c_crit <= edge * (1.0 + _BOUNDARY_RTOL):
        # Balance condition holds with equality: the powers of x cancel and
        # the supremum is the x -> 0 limit.
        return edge ** (-1.0 / q) * ev ** (-(p - 1.0) / p)
    x_star = R * (1.0 - edge / c_crit) ** (1.0 / edge)
    return math.exp(log_f(x_star))


def _b_right(setup: HardySetup) -> float:
    p, q, alpha, theta, R = setup.p, setup.q, setup.alpha, setup.theta, setup.R
    ev2 = (alpha - p + 1.0) / (p - 1.0)
    c_crit = q * (alpha - p + 1.0) / p
    # Feasibility forces theta + 1 >= c_crit > 0.

    def log_f(x: float) -> float:
        log_w = (theta + 1.0) * math.log(x) - math.log(theta + 1.0)
        log_v = (
            -ev2 * math.log(x)
            + math.log1p(-((x / R) ** ev2))
            - math.log(ev2)
        )
        return log_w / q + (p - 1.0) / p * log_v

    if theta + 1.0 <= c_crit * (1.0 + _BOUNDARY_RTOL):
        return (theta + 1.0) ** (-1.0 / q) * ev2 ** (-(p - 1.0) / p)
    x_star = R * (1.0 - c_crit / (theta + 1.0)) ** (1.0 / ev2)
    return math.exp(log_f(x_star))


def b_constant(setup: HardySetup) -> float:
    """The characterizing constant B (lower end of the sandwich).

    Raises ``InfeasibleError`` when the power-weight conditions fail, in
    which case B would be infinite.
    """
    _feasible(setup)
    if setup.side is Side.LEFT_VANISHING:
        return _b_left(setup)
    return _b_right(setup)


def sandwich(setup: HardySetup) -> Sandwich:
    """Two-sided estimate [B, k(q,p) B] for the best constant."""
    b = b_constant(setup)
    k = k_factor(setup.q, setup.p)
    return Sandwich(lower=b, upper=k * b, b_value=b, k_factor=k)


# ---------------------------------------------------------------------------
# Rayleigh-quotient probe
# ---------------------------------------------------------------------------

def _weighted_abs_pow_integral(
    piece: Piece,
    power: float,
    weight_pow: float,
    lo: float,
    hi: float,
    spec: QuadratureSpec,
) -> float:
    """integral_lo^hi |piece(r)|^power r^weight_pow dr."""
    if hi <= lo:
        return 0.0
    if isinstance(piece, PowerPiece) and piece.offset == 0.0 and piece.shift == 0.0:
        w1 = piece.exponent * power + weight_pow + 1.0
        c = abs(piece.coeff) ** power
        if lo == 0.0:
            if w1 <= 0.0:
                return math.inf
            return c * hi**w1 / w1
        if w1 == 0.0:
            return c * math.log(hi / lo)
        # expm1 form stays exact when w1 is a tiny rounding residue.
        return c * (math.expm1(w1 * math.log(hi)) - math.expm1(w1 * math.log(lo))) / w1
    if isinstance(piece, LinearPiece):
        # Split at a sign change so the integrand stays smooth.
        if piece.slope != 0.0:
            root = -piece.intercept / piece.slope
            if lo < root < hi:
                return _weighted_abs_pow_integral(
                    piece, power, weight_pow, lo, root, spec
                ) + _weighted_abs_pow_integral(piece, power, weight_pow, root, hi, spec)
        elif piece.intercept == 0.0:
            return 0.0

    def integrand(r):
        return np.abs(piece.value(r)) ** power * r**weight_pow

    if lo == 0.0 and -1.0 < weight_pow < 0.0:
        # Substitute r = hi * s^{1/(weight_pow+1)} to absorb the endpoint
        # singularity of the weight.
        wp1 = weight_pow + 1.0

        def smooth(s):
            r = hi * s ** (1.0 / wp1)
            return np.abs(piece.value(r)) ** power

        return hi**wp1 / wp1 * adaptive_gauss(smooth, 0.0, 1.0, spec)
    return adaptive_gauss(integrand, lo, hi, spec)


def _profile_weighted_norm(
    u: PiecewiseProfile,
    power: float,
    weight_pow: float,
    R: float,
    spec: QuadratureSpec,
    *,
    of_derivative: bool,
) -> float:
    """(integral_0^R |u or u'|^power r^weight_pow dr)^{1/power}."""
    total = 0.0
    for lo, hi, piece in u.segments():
        hi = min(hi, R)
        if hi <= lo:
            continue
        if of_derivative:
            if isinstance(piece, LinearPiece):
                if piece.slope == 0.0:
                    continue
                c = abs(piece.slope) ** power
                if weight_pow == -1.0:
                    total += c * math.log(hi / lo)
                else:
                    wp1 = weight_pow + 1.0
                    lower = lo**wp1 if lo > 0.0 else (0.0 if wp1 > 0.0 else math.inf)
                    total += c * (hi**wp1 - lower) / wp1
            else:
                deriv = _derivative_as_piece(piece)
                total += _weighted_abs_pow_integral(deriv, power, weight_pow, lo, hi, spec)
        else:
            total += _weighted_abs_pow_integral(piece, power, weight_pow, lo, hi, spec)
    return total ** (1.0 / power)


def _derivative_as_piece(piece: Piece) -> Piece:
    if isinstance(piece, PowerPiece) and piece.shift == 0.0:
        # The derivative of c r^e is again a pure power.
        return PowerPiece(
            coeff=piece.coeff * piece.exponent,
            shift=0.0,
            exponent=piece.exponent - 1.0,
            offset=0.0,
        )
    return FuncPiece(fn=piece.derivative)


class ProbeResult(NamedTuple):
    max_ratio: float
    witness: PiecewiseProfile


def _random_trial(setup: HardySetup, rng: np.random.Generator) -> PiecewiseProfile:
    R = setup.R
    n_knots = int(rng.integers(3, 7))
    if setup.side is Side.LEFT_VANISHING:
        # Vanish identically near 0 to stay clear of the weight singularity.
        x0 = R * rng.uniform(0.08, 0.35)
        interior = np.sort(rng.uniform(x0, R, size=n_knots))
        knots = np.concatenate(([0.0, x0], interior, [R]))
        values = np.concatenate(([0.0, 0.0], rng.uniform(-1.0, 1.0, size=n_knots + 1)))
    else:
        interior = np.sort(rng.uniform(0.0, R, size=n_knots))
        knots = np.concatenate(([0.0], interior, [R]))
        values = np.concatenate((rng.uniform(-1.0, 1.0, size=n_knots + 1), [0.0]))
    knots, idx = np.unique(knots, return_index=True)
    values = values[idx]
    pieces = []
    for i in range(len(knots) - 1):
        slope = (values[i + 1] - values[i]) / (knots[i + 1] - knots[i])
        pieces.append(LinearPiece(intercept=values[i] - slope * knots[i], slope=slope))
    return PiecewiseProfile(knots=tuple(knots), pieces=tuple(pieces), tail=None)


def trial_ratio(
    setup: HardySetup, u: PiecewiseProfile, spec: QuadratureSpec = DEFAULT_SPEC
) -> float:
    """(int |u|^q r^theta)^{1/q} / (int |u'|^p r^alpha)^{1/p} for one trial.

    Returns NaN for trials with zero derivative norm.
    """
    denom = _profile_weighted_norm(
        u, setup.p, setup.alpha, setup.R, spec, of_derivative=True
    )
    if denom == 0.0 or math.isnan(denom):
        return math.nan
    numer = _profile_weighted_norm(
        u, setup.q, setup.theta, setup.R, spec, of_derivative=False
    )
    return float(numer / denom)


def rayleigh_probe(
    setup: HardySetup,
    trial_count: int,
    seed: int,
    trials: Sequence[PiecewiseProfile] | None = None,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> ProbeResult:
    """Max Rayleigh ratio over random piecewise-linear trials in the
    vanishing class of the setup (or over explicitly supplied trials).

    Every ratio must sit below k(q,p) B; a violation certifies a bug.
    """
    _feasible(setup)
    if trials is None:
        if trial_count < 1:
            raise DomainError(f"trial_count must be >= 1, got {trial_count}")
        rng = np.random.default_rng(seed)
        trials = [_random_trial(setup, rng) for _ in range(trial_count)]
    best = -math.inf
    witness = None
    for u in trials:
        ratio = trial_ratio(setup, u, spec)
        if math.isnan(ratio):
            continue
        if ratio > best:
            best = ratio
            witness = u
    if witness is None:
        raise DegenerateTrialError("every trial had zero derivative norm")
    return ProbeResult(max_ratio=best, witness=witness)


def near_extremal_power_trial(setup: HardySetup, eps: float) -> PiecewiseProfile:
    """u(r) = r^{(p-1-alpha)/(p-1) + eps}, the almost-optimizing power family
    for the left-vanishing balanced case."""
    if setup.side is not Side.LEFT_VANISHING:
        raise DomainError("power trials target the left-vanishing case")
    exponent = (setup.p - 1.0 - setup.alpha) / (setup.p - 1.0) + eps
    piece = PowerPiece(coeff=1.0, shift=0.0, exponent=exponent, offset=0.0)
    return PiecewiseProfile(knots=(0.0, setup.R), pieces=(piece,), tail=None)


# ---------------------------------------------------------------------------
# second-order radial inequality
# ---------------------------------------------------------------------------

def second_order_constant(n: int, q: float) -> float:
    """q^2 / ((q-1) n (n-2q)), the constant in front of the iterated
    radial-laplacian bound; requires n - 2q > 0."""
    q = float(q)
    if not q > 1.0:
        raise DomainError(f"need q > 1, got {q}")
    if not n - 2.0 * q > 0.0:
        raise DomainError(f"need n - 2q > 0, got n={n}, q={q}")
    return q * q / ((q - 1.0) * n * (n - 2.0 * q))


def _abs_pow_poly_integral(
    poly: np.polynomial.Polynomial,
    power: float,
    weight_pow: float,
    R: float,
    spec: QuadratureSpec,
) -> float:
    """integral_0^R |poly(r)|^power r^weight_pow dr, split at real roots."""
    roots = [
        float(r.real)
        for r in poly.roots()
        if abs(r.imag) < 1e-12 and 1e-12 < r.real < R * (1 - 1e-12)
    ]
    cuts = [0.0] + sorted(roots) + [R]
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi <= lo:
            continue

        def integrand(r):
            return np.abs(poly(r)) ** power * r**weight_pow

        if lo == 0.0 and -1.0 < weight_pow < 0.0:
            wp1 = weight_pow + 1.0

            def smooth(s, hi=hi):
                return np.abs(poly(hi * s ** (1.0 / wp1))) ** power

            total += hi**wp1 / wp1 * adaptive_gauss(smooth, 0.0, 1.0, spec)
        else:
            total += adaptive_gauss(integrand, lo, hi, spec)
    return total


def second_order_trial_ratio(
    n: int,
    p: float,
    q: float,
    R: float,
    poly: np.polynomial.Polynomial,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """LHS/RHS of the second-order inequality for u = (R - r)^2 poly(r).

    The boundary conditions u(R) = 0 and u'(R) = 0 hold by construction.
    """
    q_star = n * q / (n - 2.0 * q)
    base = np.polynomial.Polynomial([R, -1.0]) ** 2
    u = base * poly
    du = u.deriv()
    d2u = u.deriv(2)
    # |r u'' + (n-1) u'|^p r^{np/q - 1 - p} keeps the laplacian integrand
    # polynomial-times-power (no 1/r at the origin).
    lap_times_r = np.polynomial.Polynomial([0.0, 1.0]) * d2u + (n - 1.0) * du
    lhs = _abs_pow_poly_integral(u, p, n * p / q_star - 1.0, R, spec) ** (1.0 / p)
    rhs = _abs_pow_poly_integral(lap_times_r, p, n * p / q - 1.0 - p, R, spec) ** (1.0 / p)
    if rhs == 0.0:
        return math.nan
    return lhs / rhs


def second_order_probe(
    n: int,
    p: float,
    q: float,
    R: float,
    trial_count: int,
    seed: int,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """Max LHS/RHS over random polynomial trials; must stay below
    second_order_constant(n, q) (up to 1e-6 relative)."""
    constant = second_order_constant(n, q)  # validates n - 2q > 0
    if trial_count < 1:
        raise DomainError(f"trial_count must be >= 1, got {trial_count}")
    rng = np.random.default_rng(seed)
    best = -math.inf
    for _ in range(trial_count):
        coeffs = rng.uniform(-1.0, 1.0, size=4)
        ratio = second_order_trial_ratio(
            n, p, q, R, np.polynomial.Polynomial(coeffs), spec
        )
        if not math.isnan(ratio):
            best = max(best, ratio)
    if best == -math.inf:
        raise DegenerateTrialError("every polynomial trial degenerated")
    assert best <= constant * (1.0 + 1e-6), (
        f"probe ratio {best} exceeds the closed-form constant {constant}"
    )
    return best


# ---------------------------------------------------------------------------
# iterated constants
# ---------------------------------------------------------------------------

def iterated_constant(params: AdamsParams) -> float:
    """Product of the per-step constants in the radial-laplacian iteration.

    Even m = 2k: prod_{j=0}^{k-2} 1/((n-m+2j)(m-2j-2)), empty product = 1.
    Odd m = 2k+1 >= 3: the analogous product times the extra 1/(m-1) step.
    """
    m, n = params.m, params.n
    if m < 2:
        raise DomainError(f"iteration needs m >= 2, got m={m}")
    if m % 2 == 0:
        k = m // 2
        value = 1.0
        for j in range(k - 1):
            value /= (n - m + 2 * j) * (m - 2 * j - 2)
        return value
    if m < 3:
        raise DomainError(f"odd path needs m >= 3, got m={m}")
    k = (m - 1) // 2
    value = 1.0 / (m - 1)
    for j in range(k - 1):
        value /= (n - m + 2 * j + 1) * (m - 2 * j - 3)
    return value
