"""One-dimensional exponential functional machinery.

The central object is J(g) = integral_0^inf exp(g(t)^q - t) dt over
nonnegative profiles with unit p-energy (p conjugate to q).  Energies use
closed forms wherever the piece type permits; the improper upper end is
handled exactly for constant and saturating tails, by pullback for
log-radial tails, and by the sub-unit-energy majorant otherwise.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import DomainError, EnergyBoundError
from .profiles import (
    ExpApproachPiece,
    LinearPiece,
    LogRadialPiece,
    Piece,
    PiecewiseProfile,
    PowerPiece,
    constant_piece,
    piecewise_linear,
)
from .quadrature import DEFAULT_SPEC, QuadratureSpec, adaptive_gauss
from .specfun import EULER_GAMMA, digamma


# ---------------------------------------------------------------------------
# energy
# ---------------------------------------------------------------------------

def _energy_piece(piece: Piece, p: float, lo: float, hi: float, spec: QuadratureSpec) -> float:
    """integral_lo^hi |piece'(t)|^p dt; hi may be inf."""
    if hi <= lo:
        return 0.0
    if isinstance(piece, LinearPiece):
        if piece.slope == 0.0:
            return 0.0
        if math.isinf(hi):
            return math.inf
        return abs(piece.slope) ** p * (hi - lo)
    if isinstance(piece, PowerPiece):
        c = abs(piece.coeff * piece.exponent) ** p
        if c == 0.0:
            return 0.0
        w1 = (piece.exponent - 1.0) * p + 1.0
        a = lo - piece.shift
        b = hi - piece.shift
        if math.isinf(b):
            if w1 >= 0.0:
                return math.inf
            return -c * a**w1 / w1
        if a == 0.0:
            if w1 <= 0.0:
                return math.inf
            return c * b**w1 / w1
        if w1 == 0.0:
            return c * math.log(b / a)
        # (b^w1 - a^w1)/w1 via expm1: exact even when w1 is a rounding
        # residue of an exponent that should be -1 (e.g. ((n-2)/n - 1) n/2).
        return (
            c
            * (math.expm1(w1 * math.log(b)) - math.expm1(w1 * math.log(a)))
            / w1
        )
    if isinstance(piece, ExpApproachPiece):
        rate = piece.rate * p
        c = abs(piece.amplitude * piece.rate) ** p
        upper = 0.0 if math.isinf(hi) else math.exp(-rate * (hi - piece.anchor))
        lower = math.exp(-rate * (lo - piece.anchor))
        return c * (lower - upper) / rate
    if isinstance(piece, LogRadialPiece):
        # Pull back to radii: dt = -n dr / r and |g'(t)|^p = (scale r |w'(r)| / n)^p,
        # so the t -> inf end becomes the bounded endpoint r -> 0.
        n = piece.dim
        r_hi = 0.0 if math.isinf(hi) else piece.big_r * math.exp(-hi / n)
        r_lo = piece.big_r * math.exp(-lo / n)

        def integrand(r):
            return np.abs(piece.source.derivative(r)) ** p * r ** (p - 1.0)

        return n * (abs(piece.scale) / n) ** p * adaptive_gauss(integrand, r_hi, r_lo, spec)
    if math.isinf(hi):
        raise DomainError(
            f"cannot integrate a {piece.kind} piece over an unbounded interval"
        )

    def integrand(t):
        return np.abs(piece.derivative(t)) ** p

    return adaptive_gauss(integrand, lo, hi, spec)


def energy(
    g: PiecewiseProfile,
    p: float,
    interval: tuple[float, float] = (0.0, math.inf),
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """integral over ``interval`` of |g'|^p dt, by closed form where possible."""
    if not p > 1.0:
        raise DomainError(f"energy requires p > 1, got {p}")
    a, b = float(interval[0]), float(interval[1])
    if b <= a:
        return 0.0
    total = 0.0
    for lo, hi, piece in g.segments():
        lo_c, hi_c = max(lo, a), min(hi, b)
        if hi_c > lo_c:
            total += _energy_piece(piece, p, lo_c, hi_c, spec)
    return total


# ---------------------------------------------------------------------------
# the exponential functional
# ---------------------------------------------------------------------------

def _cc_finite(piece: Piece, q: float, lo: float, hi: float, spec: QuadratureSpec) -> float:
    def integrand(t):
        return np.exp(piece.value(t) ** q - t)

    panels = max(1, min(64, int(math.ceil((hi - lo) / 8.0))))
    return adaptive_gauss(integrand, lo, hi, spec, initial_panels=panels)


def _cc_tail(
    g: PiecewiseProfile,
    piece: Piece,
    q: float,
    lo: float,
    spec: QuadratureSpec,
    scale_hint: float,
) -> float:
    """integral_lo^inf exp(piece^q - t) dt for a tail piece."""
    eps = spec.truncation_epsilon * max(1.0, scale_hint)
    if isinstance(piece, LinearPiece):
        if piece.slope == 0.0:
            v = piece.intercept
            return math.exp(v**q - lo)
        if piece.slope > 0.0:
            raise DomainError("functional diverges on a growing linear tail")
        cap = float(np.asarray(piece.value(lo)))
        hi = max(lo + 1.0, cap**q - math.log(eps))
        return _cc_finite(piece, q, lo, hi, spec)
    if isinstance(piece, ExpApproachPiece):
        cap = max(float(np.asarray(piece.value(lo))), piece.limit_value)
        hi = max(lo + 1.0, cap**q - math.log(eps))
        return _cc_finite(piece, q, lo, hi, spec)
    if isinstance(piece, LogRadialPiece):
        # Exact pullback: dt = -n dr/r and e^{-t} = (r/R)^n.
        n, big_r = piece.dim, piece.big_r
        r_lo = big_r * math.exp(-lo / n)

        def integrand(r):
            return np.exp((piece.scale * piece.source.value(r)) ** q) * r ** (n - 1.0)

        return n * big_r ** (-n) * adaptive_gauss(integrand, 0.0, r_lo, spec)
    # Generic tail: majorize g by the Hoelder envelope
    # g(t) <= g(lo) + delta^{1/p} (t - lo)^{1/q}, delta the tail energy.
    p = q / (q - 1.0)
    delta = energy(g, p, (lo, math.inf), spec)
    if delta >= 1.0:
        raise DomainError(
            "cannot certify truncation: tail energy >= 1 on a generic tail piece"
        )
    g_lo = float(np.asarray(piece.value(lo)))
    b = delta ** (1.0 / p)

    def envelope_exponent(t: float) -> float:
        return (g_lo + b * (t - lo) ** (1.0 / q)) ** q - t

    hi = lo + 1.0
    while envelope_exponent(hi) > math.log(eps):
        hi = 2.0 * hi + 1.0
        if hi > 1e12:
            raise DomainError("tail truncation point ran away; profile inadmissible")
    return _cc_finite(piece, q, lo, hi, spec)


def cc_integral(
    g: PiecewiseProfile,
    q: float,
    lo: float,
    hi: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    scale_hint: float = 1.0,
) -> float:
    """integral_lo^hi exp(g^q - t) dt along the profile's pieces."""
    total = 0.0
    for seg_lo, seg_hi, piece in g.segments():
        a, b = max(seg_lo, lo), min(seg_hi, hi)
        if b <= a:
            continue
        if math.isinf(b):
            total += _cc_tail(g, piece, q, a, spec, scale_hint)
        else:
            total += _cc_finite(piece, q, a, b, spec)
    return total


def _check_nonnegative(g: PiecewiseProfile) -> None:
    # Knot values plus the far value; cheap guard, not a proof of positivity.
    values = [float(np.asarray(piece.value(k))) for k, _hi, piece in g.segments()]
    values.append(float(np.asarray(g.value(g.end))))
    if min(values) < -1e-12:
        raise DomainError("profile must be nonnegative")


def cc_functional(
    g: PiecewiseProfile,
    q: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    *,
    enforce_energy: bool = True,
) -> float:
    """J(g) = integral_0^inf exp(g^q - t) dt for a nonnegative profile.

    With ``enforce_energy`` (the default) the conjugate-exponent energy must
    satisfy integral |g'|^p <= 1 + 1e-9, p = q/(q-1); pass False to evaluate
    the functional on profiles outside the unit-energy class.
    """
    if not q > 1.0:
        raise DomainError(f"cc_functional requires q > 1, got {q}")
    if g.tail is None:
        raise DomainError("profile must extend to infinity (attach a tail piece)")
    if abs(g.start) > 1e-12:
        raise DomainError(f"profile must start at t = 0, got {g.start}")
    _check_nonnegative(g)
    if enforce_energy:
        p = q / (q - 1.0)
        total_energy = energy(g, p, (0.0, math.inf), spec)
        if total_energy > 1.0 + 1e-9:
            raise EnergyBoundError(
                f"profile energy {total_energy} exceeds 1; "
                "use enforce_energy=False to evaluate anyway"
            )
    return cc_integral(g, q, 0.0, math.inf, spec)


# ---------------------------------------------------------------------------
# tail-bound certificate
# ---------------------------------------------------------------------------

class LemmaBound(NamedTuple):
    lhs: float
    rhs: float


def cc_lemma_bound(
    w: PiecewiseProfile,
    p: float,
    a: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> LemmaBound:
    """Tail integral against its closed-form certificate.

    lhs = integral_a^inf exp(w^q - t) dt with q = p/(p-1); rhs is the
    product bound assembled from delta = integral_a^inf |w'|^p dt (< 1
    required), gamma_p = delta (1 - delta^{1/(p-1)})^{1-p}, and
    c = q w(a)^{q-1}.
    """
    if not p >= 2.0:
        raise DomainError(f"the certificate requires p >= 2, got {p}")
    a = float(a)
    if not a > 0.0:
        raise DomainError(f"left endpoint must be positive, got {a}")
    _check_nonnegative(w)
    delta = energy(w, p, (a, math.inf), spec)
    if delta >= 1.0:
        raise DomainError(f"tail energy must be < 1, got {delta}")
    q = p / (p - 1.0)
    lhs = cc_integral(w, q, a, math.inf, spec)
    w_a = float(np.asarray(w.value(a)))
    shrink = 1.0 - delta ** (1.0 / (p - 1.0))
    gamma_p = delta * shrink ** (1.0 - p)
    c = q * w_a ** (q - 1.0)
    exponent = ((p - 1.0) / p) ** (p - 1.0) * c**p * gamma_p / p
    rhs = math.exp(w_a**q - a) / shrink * math.exp(exponent + digamma(p) + EULER_GAMMA)
    return LemmaBound(lhs=lhs, rhs=rhs)


# ---------------------------------------------------------------------------
# concentrating family
# ---------------------------------------------------------------------------

def moser_family(a: float, p: float) -> PiecewiseProfile:
    """Unit-energy ramp g(t) = t a^{-1/p} on [0, a], constant a^{1/q} beyond.

    Energy on (0, A) equals min(A, a)/a, so the family concentrates as a
    grows.  J(g_a) decreases to p + 1: the ramp meets the diagonal
    g^q = t exactly at t = a, so the right end of the ramp contributes
    1/(q-1) and the plateau contributes 1 on top of the bulk's 1.
    """
    a = float(a)
    if not a > 0.0:
        raise DomainError(f"scale must be positive, got {a}")
    if not p > 1.0:
        raise DomainError(f"p must exceed 1, got {p}")
    q = p / (p - 1.0)
    return PiecewiseProfile(
        knots=(0.0, a),
        pieces=(LinearPiece(intercept=0.0, slope=a ** (-1.0 / p)),),
        tail=constant_piece(a ** (1.0 / q)),
    )


# ---------------------------------------------------------------------------
# constrained maximizer
# ---------------------------------------------------------------------------

class MaximizerResult(NamedTuple):
    profile: PiecewiseProfile
    functional_value: float


_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(16)


class _SlopeObjective:
    """J and its gradient over nonnegative segment slopes (+ base offset).

    Each segment is covered by fixed-width Gauss panels: the integrand
    e^{g^q - t} concentrates in O(1)-wide strips, which a single rule on a
    wide geometric segment would miss entirely.
    """

    _PANEL_WIDTH = 1.5

    def __init__(self, knots: np.ndarray, q: float):
        self.knots = knots
        self.q = q
        self.dt = np.diff(knots)
        self.t_end = knots[-1]
        nodes = []
        weights = []
        panel_seg = []
        for i, (lo, hi) in enumerate(zip(knots[:-1], knots[1:])):
            n_panels = max(1, int(math.ceil((hi - lo) / self._PANEL_WIDTH)))
            edges = np.linspace(lo, hi, n_panels + 1)
            mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
            half = 0.5 * np.diff(edges)[:, None]
            nodes.append(mid + half * _GAUSS_X[None, :])
            weights.append(half * np.broadcast_to(_GAUSS_W, (n_panels, _GAUSS_W.size)))
            panel_seg.extend([i] * n_panels)
        self.nodes = np.concatenate(nodes, axis=0)
        self.weights = np.concatenate(weights, axis=0)
        self.panel_seg = np.asarray(panel_seg)

    def value_and_grad(self, s: np.ndarray, y0: float = 0.0):
        q = self.q
        y = y0 + np.concatenate(([0.0], np.cumsum(s * self.dt)))
        seg = self.panel_seg
        offsets = self.nodes - self.knots[seg][:, None]
        g_nodes = y[seg][:, None] + s[seg][:, None] * offsets
        core = np.exp(g_nodes**q - self.nodes) * self.weights
        v_end = y[-1]
        j_tail = math.exp(v_end**q - self.t_end)
        j_total = float(core.sum() + j_tail)

        # dJ/dg at the nodes, weighted; g^{q-1} guarded at g = 0 for q < 2.
        sens = core * q * np.maximum(g_nodes, 1e-12) ** (q - 1.0)
        seg_sens = np.bincount(seg, weights=sens.sum(axis=1), minlength=self.dt.size)
        local = np.bincount(
            seg, weights=(sens * offsets).sum(axis=1), minlength=self.dt.size
        )
        tail_sens = j_tail * q * max(v_end, 1e-12) ** (q - 1.0)
        # dg/ds_j = (t - t_j) inside segment j, dt_j on every later segment.
        suffix = np.concatenate((np.cumsum(seg_sens[::-1])[::-1][1:], [0.0]))
        grad = local + self.dt * (suffix + tail_sens)
        grad_y0 = float(seg_sens.sum() + tail_sens)
        return j_total, grad, grad_y0


def _project(
    s: np.ndarray, dt: np.ndarray, in_window: np.ndarray, p: float, epsilon: float
) -> np.ndarray:
    """Clip to s >= 0, cap the window energy at epsilon, renormalize total to 1."""
    s = np.maximum(s, 0.0)
    e_window = float(np.sum(s[in_window] ** p * dt[in_window]))
    e_rest = float(np.sum(s[~in_window] ** p * dt[~in_window]))
    if e_rest <= 0.0:
        s = s.copy()
        s[~in_window] = 0.05
        e_rest = float(np.sum(s[~in_window] ** p * dt[~in_window]))
    if e_window > epsilon:
        s = s.copy()
        s[in_window] *= (epsilon / e_window) ** (1.0 / p) * (1.0 - 1e-12)
        e_window = float(np.sum(s[in_window] ** p * dt[in_window]))
    s = s.copy()
    s[~in_window] *= ((1.0 - e_window) / e_rest) ** (1.0 / p)
    return s


def concentration_maximizer(
    p: float,
    big_a: float,
    epsilon: float,
    knot_count: int,
    seed: int,
    *,
    t_max: float | None = None,
    n_starts: int = 6,
    max_iter: int = 400,
    spec: QuadratureSpec = DEFAULT_SPEC,
    pin_origin: bool = True,
) -> MaximizerResult:
    """Projected-gradient search for the largest J over the concentrated class.

    Feasible set: piecewise-linear g with g(0) = 0, total energy exactly 1,
    and energy on (0, big_a) at most epsilon.  ``pin_origin=False`` relaxes
    g(0) = 0 to a free nonnegative base level (exploratory; the
    concentration estimate itself assumes a pinned origin).  Deterministic
    given seed.
    """
    if not p >= 2.0:
        raise DomainError(f"maximizer requires p >= 2, got {p}")
    if not 0.0 < epsilon < 0.5:
        raise DomainError(f"epsilon must lie in (0, 0.5), got {epsilon}")
    if knot_count < 8:
        raise DomainError(f"knot_count must be >= 8, got {knot_count}")
    if not big_a > 0.0:
        raise DomainError(f"window endpoint must be positive, got {big_a}")
    if t_max is None:
        t_max = max(600.0, 60.0 * big_a)
    q = p / (p - 1.0)

    n_window = max(3, knot_count // 6)
    window = np.linspace(0.0, big_a, n_window + 1)
    n_out = knot_count - n_window
    outer = big_a * np.geomspace(1.0, t_max / big_a, n_out + 1)[1:]
    knots = np.concatenate((window, outer))
    dt = np.diff(knots)
    in_window = knots[:-1] < big_a - 1e-12
    objective = _SlopeObjective(knots, q)

    # Warm starts: ramps that spend the window allowance immediately and
    # the remaining energy linearly up to a trial scale; the integrand's
    # e^{-t} weighting makes cold random starts blind to the far region.
    scales = np.geomspace(2.0 * big_a, 1.001 * t_max, n_starts)
    children = np.random.SeedSequence(seed).spawn(n_starts)
    best = None
    for scale, child in zip(scales, children):
        rng = np.random.default_rng(child)
        s0 = np.zeros(knots.size - 1)
        s0[in_window] = (epsilon / big_a) ** (1.0 / p)
        ramp = (~in_window) & (knots[:-1] < scale)
        span = max(scale - big_a, dt[~in_window].min())
        s0[ramp] = ((1.0 - epsilon) / span) ** (1.0 / p)
        # Symmetry-breaking only: slope noise delta shifts the endpoint
        # exponent by ~2 g_end^2 delta, so it must stay tiny.
        s0 *= 1.0 + 1e-4 * rng.standard_normal(s0.size)
        s = _project(s0, dt, in_window, p, epsilon)
        y0 = 0.0 if pin_origin else float(rng.uniform(0.0, 0.5))
        j_val, grad, grad_y0 = objective.value_and_grad(s, y0)
        step = 0.1
        for _ in range(max_iter):
            scale_free = step / max(float(np.max(np.abs(grad))), 1e-12)
            trial = _project(s + scale_free * grad, dt, in_window, p, epsilon)
            trial_y0 = y0 if pin_origin else max(0.0, y0 + scale_free * grad_y0)
            j_trial, grad_trial, grad_y0_trial = objective.value_and_grad(trial, trial_y0)
            if j_trial > j_val:
                s, y0, j_val = trial, trial_y0, j_trial
                grad, grad_y0 = grad_trial, grad_y0_trial
                step *= 1.3
            else:
                step *= 0.4
                if step < 1e-14:
                    break
        if best is None or j_val > best[0]:
            best = (j_val, s, y0)

    _, s, y0 = best
    values = y0 + np.concatenate(([0.0], np.cumsum(s * dt)))
    profile = piecewise_linear(knots, values, constant_tail=True)
    j_final = cc_functional(profile, q, spec, enforce_energy=pin_origin)
    return MaximizerResult(profile=profile, functional_value=j_final)
