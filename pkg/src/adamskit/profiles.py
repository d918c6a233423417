"""Piecewise analytic profiles on an interval or half line.

A profile is a list of increasing knots, one analytic piece per gap, and an
optional tail piece on [last knot, infinity).  Pieces expose vectorized
value/derivative/second-derivative; the integral machinery elsewhere
dispatches on the piece type to use closed forms where they exist.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, NonSmoothError

_CONTINUITY_TOL = 1e-10


class Piece:
    """One analytic segment, in global coordinates."""

    kind = "abstract"

    def value(self, t):  # pragma: no cover - interface
        raise NotImplementedError

    def derivative(self, t):  # pragma: no cover - interface
        raise NotImplementedError

    def second_derivative(self, t):
        raise NonSmoothError(f"{self.kind} piece has no second derivative")

    def params(self) -> dict:
        return {}


@dataclass(frozen=True)
class LinearPiece(Piece):
    """intercept + slope * t."""

    intercept: float
    slope: float
    kind = "linear"

    def value(self, t):
        return self.intercept + self.slope * np.asarray(t, dtype=float)

    def derivative(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.slope)

    def second_derivative(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))

    def params(self) -> dict:
        return {"intercept": self.intercept, "slope": self.slope}


def constant_piece(value: float) -> LinearPiece:
    return LinearPiece(intercept=value, slope=0.0)


@dataclass(frozen=True)
class PowerPiece(Piece):
    """coeff * (t - shift)^exponent + offset, defined for t > shift."""

    coeff: float
    shift: float
    exponent: float
    offset: float = 0.0
    kind = "power"

    def value(self, t):
        return self.coeff * (np.asarray(t, dtype=float) - self.shift) ** self.exponent + self.offset

    def derivative(self, t):
        e = self.exponent
        return self.coeff * e * (np.asarray(t, dtype=float) - self.shift) ** (e - 1.0)

    def second_derivative(self, t):
        e = self.exponent
        return self.coeff * e * (e - 1.0) * (np.asarray(t, dtype=float) - self.shift) ** (e - 2.0)

    def params(self) -> dict:
        return {
            "coeff": self.coeff,
            "shift": self.shift,
            "exponent": self.exponent,
            "offset": self.offset,
        }


@dataclass(frozen=True)
class ExpApproachPiece(Piece):
    """amplitude * (1 - exp(-rate (t - anchor))) + offset, for t >= anchor.

    Saturates at offset + amplitude; the derivative decays like exp(-rate t).
    """

    amplitude: float
    rate: float
    anchor: float
    offset: float = 0.0
    kind = "exp"

    def value(self, t):
        u = np.asarray(t, dtype=float) - self.anchor
        return self.amplitude * (-np.expm1(-self.rate * u)) + self.offset

    def derivative(self, t):
        u = np.asarray(t, dtype=float) - self.anchor
        return self.amplitude * self.rate * np.exp(-self.rate * u)

    def second_derivative(self, t):
        u = np.asarray(t, dtype=float) - self.anchor
        return -self.amplitude * self.rate**2 * np.exp(-self.rate * u)

    @property
    def limit_value(self) -> float:
        return self.amplitude + self.offset

    def params(self) -> dict:
        return {
            "amplitude": self.amplitude,
            "rate": self.rate,
            "anchor": self.anchor,
            "offset": self.offset,
        }


@dataclass(frozen=True)
class FuncPiece(Piece):
    """Callable-backed piece; derivatives must be supplied when needed."""

    fn: Callable[[np.ndarray], np.ndarray]
    dfn: Callable[[np.ndarray], np.ndarray] | None = None
    d2fn: Callable[[np.ndarray], np.ndarray] | None = None
    kind = "callable"

    def value(self, t):
        return self.fn(np.asarray(t, dtype=float))

    def derivative(self, t):
        if self.dfn is None:
            raise NonSmoothError("callable piece has no derivative attached")
        return self.dfn(np.asarray(t, dtype=float))

    def second_derivative(self, t):
        if self.d2fn is None:
            raise NonSmoothError("callable piece has no second derivative attached")
        return self.d2fn(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class SplinePiece(Piece):
    """C^1 cubic Hermite interpolant of samples (Catmull-Rom tangents)."""

    ts: tuple[float, ...]
    ys: tuple[float, ...]
    kind = "spline"

    def __post_init__(self):
        if len(self.ts) != len(self.ys) or len(self.ts) < 2:
            raise DomainError("spline piece needs matching sample arrays, length >= 2")
        if np.any(np.diff(self.ts) <= 0):
            raise DomainError("spline sample abscissae must increase")

    def _tangents(self) -> np.ndarray:
        t = np.asarray(self.ts)
        y = np.asarray(self.ys)
        m = np.empty_like(y)
        m[1:-1] = (y[2:] - y[:-2]) / (t[2:] - t[:-2])
        m[0] = (y[1] - y[0]) / (t[1] - t[0])
        m[-1] = (y[-1] - y[-2]) / (t[-1] - t[-2])
        return m

    def _locate(self, x: np.ndarray):
        t = np.asarray(self.ts)
        idx = np.clip(np.searchsorted(t, x, side="right") - 1, 0, len(t) - 2)
        h = t[idx + 1] - t[idx]
        s = (x - t[idx]) / h
        return idx, h, s

    def value(self, t):
        x = np.asarray(t, dtype=float)
        y = np.asarray(self.ys)
        m = self._tangents()
        idx, h, s = self._locate(x)
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s**2 * (3 - 2 * s)
        h11 = s**2 * (s - 1)
        return h00 * y[idx] + h10 * h * m[idx] + h01 * y[idx + 1] + h11 * h * m[idx + 1]

    def derivative(self, t):
        x = np.asarray(t, dtype=float)
        y = np.asarray(self.ys)
        m = self._tangents()
        idx, h, s = self._locate(x)
        d00 = 6 * s * (s - 1) / h
        d10 = (1 - s) * (1 - 3 * s)
        d01 = -6 * s * (s - 1) / h
        d11 = s * (3 * s - 2)
        return d00 * y[idx] + d10 * m[idx] + d01 * y[idx + 1] + d11 * m[idx + 1]

    def second_derivative(self, t):
        x = np.asarray(t, dtype=float)
        y = np.asarray(self.ys)
        m = self._tangents()
        idx, h, s = self._locate(x)
        s00 = (12 * s - 6) / h**2
        s10 = (6 * s - 4) / h
        s01 = (6 - 12 * s) / h**2
        s11 = (6 * s - 2) / h
        return s00 * y[idx] + s10 * m[idx] + s01 * y[idx + 1] + s11 * m[idx + 1]

    def params(self) -> dict:
        return {"ts": list(self.ts), "ys": list(self.ys)}


@dataclass(frozen=True)
class LogRadialPiece(Piece):
    """Radial piece seen through r = R e^{-t/n}, scaled by a constant.

    g(t) = scale * w(R e^{-t/n}) on the t-interval mapped from [r_lo, r_hi].
    Keeps the source piece so integrals can be pulled back to the bounded
    radial domain (exact treatment of the t -> infinity end).
    """

    source: Piece
    scale: float
    big_r: float
    dim: int
    r_lo: float
    r_hi: float
    kind = "radial-log"

    def radius(self, t):
        return self.big_r * np.exp(-np.asarray(t, dtype=float) / self.dim)

    def value(self, t):
        return self.scale * self.source.value(self.radius(t))

    def derivative(self, t):
        r = self.radius(t)
        return -self.scale * self.source.derivative(r) * r / self.dim

    def second_derivative(self, t):
        r = self.radius(t)
        n = self.dim
        wp = self.source.derivative(r)
        wpp = self.source.second_derivative(r)
        return self.scale * (r * wp + r**2 * wpp) / n**2


@dataclass(frozen=True)
class PiecewiseProfile:
    """Continuous piecewise function on [knots[0], knots[-1]] or [knots[0], inf).

    ``strict_interior`` makes evaluation at knots (and outside the domain)
    raise, for derived profiles that are only defined inside open pieces.
    """

    knots: tuple[float, ...]
    pieces: tuple[Piece, ...]
    tail: Piece | None = None
    strict_interior: bool = False
    check_continuity: bool = True
    _knots_arr: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        knots = tuple(float(k) for k in self.knots)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "pieces", tuple(self.pieces))
        arr = np.asarray(knots, dtype=float)
        object.__setattr__(self, "_knots_arr", arr)
        if len(knots) != len(self.pieces) + 1:
            raise DomainError(
                f"need len(knots) == len(pieces) + 1, got {len(knots)} and {len(self.pieces)}"
            )
        if np.any(np.diff(arr) <= 0):
            raise DomainError("knots must be strictly increasing")
        if self.check_continuity:
            self._check_continuity()

    def _check_continuity(self) -> None:
        segments = list(self.pieces)
        if self.tail is not None:
            segments.append(self.tail)
        for i in range(1, len(segments)):
            k = self.knots[i]
            left = float(np.asarray(segments[i - 1].value(k)))
            right = float(np.asarray(segments[i].value(k)))
            scale = max(1.0, abs(left), abs(right))
            if abs(left - right) > _CONTINUITY_TOL * scale:
                raise DomainError(
                    f"profile discontinuous at knot {k}: {left} vs {right}"
                )

    @property
    def start(self) -> float:
        return self.knots[0]

    @property
    def end(self) -> float:
        """Last knot; the profile extends beyond it iff it has a tail."""
        return self.knots[-1]

    @property
    def unbounded(self) -> bool:
        return self.tail is not None

    def segments(self):
        """Yield (lo, hi, piece); the tail has hi = inf."""
        for i, piece in enumerate(self.pieces):
            yield self.knots[i], self.knots[i + 1], piece
        if self.tail is not None:
            yield self.knots[-1], math.inf, self.tail

    def _piece_index(self, t: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self._knots_arr, t, side="right") - 1
        top = len(self.pieces) if self.tail is not None else len(self.pieces) - 1
        return np.clip(idx, 0, top)

    def _apply(self, t, method: str):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        below = t_arr < self.knots[0]
        above = t_arr > self.knots[-1]
        if np.any(below) or (self.tail is None and np.any(above)):
            raise DomainError(f"evaluation outside profile domain [{self.knots[0]}, ...]")
        if self.strict_interior:
            at_knot = np.isin(t_arr, self._knots_arr)
            if np.any(at_knot):
                raise NonSmoothError(
                    f"evaluation at knot(s) {t_arr[at_knot]} interior to no piece"
                )
        out = np.empty_like(t_arr)
        idx = self._piece_index(t_arr)
        segments = list(self.pieces) + ([self.tail] if self.tail is not None else [])
        for i in np.unique(idx):
            mask = idx == i
            out[mask] = getattr(segments[i], method)(t_arr[mask])
        if np.isscalar(t) or np.asarray(t).ndim == 0:
            return float(out[0])
        return out

    def value(self, t):
        return self._apply(t, "value")

    def derivative(self, t):
        return self._apply(t, "derivative")

    def second_derivative(self, t):
        return self._apply(t, "second_derivative")

    def to_json_obj(self) -> list[dict]:
        """Serialization as [{knot, value, piece_kind, params}, ...]."""
        out = []
        for lo, _hi, piece in self.segments():
            out.append(
                {
                    "knot": lo,
                    "value": float(np.asarray(piece.value(lo))),
                    "piece_kind": piece.kind,
                    "params": piece.params(),
                }
            )
        return out


def piecewise_linear(ts: Sequence[float], ys: Sequence[float], *, constant_tail: bool = True) -> PiecewiseProfile:
    """Polyline through (ts, ys), optionally continued as a constant."""
    ts = [float(x) for x in ts]
    ys = [float(y) for y in ys]
    if len(ts) != len(ys) or len(ts) < 2:
        raise DomainError("piecewise_linear needs matching arrays of length >= 2")
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise DomainError("knots must be strictly increasing")
    pieces = []
    for i in range(len(ts) - 1):
        slope = (ys[i + 1] - ys[i]) / (ts[i + 1] - ts[i])
        pieces.append(LinearPiece(intercept=ys[i] - slope * ts[i], slope=slope))
    tail = constant_piece(ys[-1]) if constant_tail else None
    return PiecewiseProfile(knots=tuple(ts), pieces=tuple(pieces), tail=tail)
