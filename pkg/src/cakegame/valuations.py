"""Piecewise-constant value densities on the unit cake.

Densities are step functions on [0,1] with unit total mass and values
bounded away from zero; pieces are finite unions of half-open
intervals. Everything here is immutable and pure, so values can be
shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .errors import ContractError, DomainError

MASS_TOL = 1e-12


@dataclass(frozen=True)
class Density:
    """Step density: ``vals[i]`` on [breaks[i], breaks[i+1])."""

    breaks: np.ndarray
    vals: np.ndarray
    cum: np.ndarray
    delta_bound: float
    Delta_bound: float

    def __post_init__(self):
        self.breaks.setflags(write=False)
        self.vals.setflags(write=False)
        self.cum.setflags(write=False)

    @property
    def total_mass(self) -> float:
        return float(self.cum[-1])

    def at(self, x: float) -> float:
        """Density value at x (right-continuous; left limit at 1)."""
        idx = int(np.searchsorted(self.breaks, x, side="right")) - 1
        idx = min(max(idx, 0), len(self.vals) - 1)
        return float(self.vals[idx])

    def __eq__(self, other):
        if not isinstance(other, Density):
            return NotImplemented
        return (
            np.array_equal(self.breaks, other.breaks)
            and np.array_equal(self.vals, other.vals)
        )

    def __hash__(self):
        return hash((self.breaks.tobytes(), self.vals.tobytes()))


def density(breakpoints, values, delta=None, Delta=None) -> Density:
    """Build and validate a Density from segment right-endpoint data.

    ``breakpoints`` are the n+1 segment boundaries (first 0, last 1);
    ``values`` the n segment densities. Declared bounds default to the
    observed min/max.
    """
    breaks = np.asarray(breakpoints, dtype=np.float64)
    vals = np.asarray(values, dtype=np.float64)
    if breaks.ndim != 1 or vals.ndim != 1 or len(breaks) != len(vals) + 1:
        raise ContractError("need n+1 breakpoints for n segment values")
    if breaks[0] != 0.0 or breaks[-1] != 1.0:
        raise ContractError("breakpoints must start at 0 and end at 1")
    if not np.all(np.diff(breaks) > 0):
        raise ContractError("breakpoints must be strictly increasing")
    if not np.all(vals > 0):
        raise ContractError("density values must be positive")
    lo = float(vals.min()) if delta is None else float(delta)
    hi = float(vals.max()) if Delta is None else float(Delta)
    if not (0 < lo <= hi):
        raise ContractError("need 0 < delta <= Delta")
    if vals.min() < lo - 1e-15 or vals.max() > hi + 1e-15:
        raise ContractError("segment values outside declared [delta, Delta]")
    cum = np.empty(len(breaks), dtype=np.float64)
    cum[0] = 0.0
    for i in range(len(vals)):
        cum[i + 1] = cum[i] + (breaks[i + 1] - breaks[i]) * vals[i]
    if abs(cum[-1] - 1.0) > MASS_TOL:
        raise ContractError(f"density mass {cum[-1]!r} not 1 within {MASS_TOL}")
    return Density(breaks, vals, cum, lo, hi)


def uniform_density() -> Density:
    return density([0.0, 1.0], [1.0])


@dataclass(frozen=True)
class Piece:
    """Finite union of disjoint half-open intervals of [0,1]."""

    intervals: tuple = ()

    @property
    def length(self) -> float:
        return float(sum(b - a for a, b in self.intervals))

    def is_empty(self) -> bool:
        return not self.intervals

    def complement(self) -> "Piece":
        out = []
        prev = 0.0
        for a, b in self.intervals:
            if a > prev:
                out.append((prev, a))
            prev = b
        if prev < 1.0:
            out.append((prev, 1.0))
        return Piece(tuple(out))

    def contains_point(self, x: float) -> bool:
        return any(a <= x < b for a, b in self.intervals)


def piece(*intervals) -> Piece:
    """Normalize intervals: sort, drop empty, merge touching, check range."""
    ivs = sorted((float(a), float(b)) for a, b in intervals)
    out = []
    for a, b in ivs:
        if b <= a:
            continue
        if a < 0.0 or b > 1.0:
            raise DomainError(f"interval [{a}, {b}) outside the unit cake")
        if out and a < out[-1][1]:
            raise ContractError("piece intervals must be disjoint")
        if out and a == out[-1][1]:
            out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return Piece(tuple(out))


def piece_union(p: Piece, q: Piece) -> Piece:
    return piece(*(p.intervals + q.intervals))


def whole_cake() -> Piece:
    return piece((0.0, 1.0))


def value_of(d: Density, p: Piece) -> float:
    """Integral of the density over the piece."""
    total = 0.0
    for a, b in p.intervals:
        if a < 0.0 or b > 1.0:
            raise DomainError(f"interval [{a}, {b}) outside the unit cake")
        total += kernels.interval_value(d.breaks, d.vals, d.cum, a, b)
    return total


def interval_value(d: Density, a: float, b: float) -> float:
    if a < 0.0 or b > 1.0:
        raise DomainError(f"interval [{a}, {b}) outside the unit cake")
    return kernels.interval_value(d.breaks, d.vals, d.cum, a, b)


def cdf(d: Density, x: float) -> float:
    if x < 0.0 or x > 1.0:
        raise DomainError(f"point {x} outside the unit cake")
    return kernels.cdf_at(d.breaks, d.vals, d.cum, x)


def cut_point(d: Density, target: float) -> float:
    """Leftmost y with mass(d, [0,y]) = target, for target in [0,1].

    The endpoints map exactly: target 1 returns 1 even when the stored
    mass carries rounding dust a few ulp from one.
    """
    if not 0.0 <= target <= 1.0:
        raise ContractError("cut target must be in [0, 1]")
    if target >= 1.0:
        return 1.0
    return kernels.inverse_cdf(d.breaks, d.vals, d.cum, target)


def midpoint(d: Density) -> float:
    return cut_point(d, 0.5)


# --- valuation warping -------------------------------------------------


@dataclass(frozen=True)
class WarpMap:
    """Monotone reparameterization x -> target_cdf^{-1}(source_cdf(x)).

    Piecewise linear and strictly increasing with f(0)=0, f(1)=1;
    ``knots_x``/``knots_y`` list the slope breakpoints.
    """

    source: Density
    target: Density
    knots_x: tuple
    knots_y: tuple

    def __call__(self, x: float) -> float:
        if x < 0.0 or x > 1.0:
            raise DomainError(f"point {x} outside the unit cake")
        t = kernels.cdf_at(self.source.breaks, self.source.vals, self.source.cum, x)
        return kernels.inverse_cdf(self.target.breaks, self.target.vals, self.target.cum, t)

    def inverse(self) -> "WarpMap":
        return WarpMap(self.target, self.source, self.knots_y, self.knots_x)

    def map_cuts(self, cuts):
        return tuple(self(c) for c in cuts)

    def map_piece(self, p: Piece) -> Piece:
        return piece(*((self(a), self(b)) for a, b in p.intervals))


def warp_map(vA1: Density, vA2: Density) -> WarpMap:
    """The map f carrying play under vA1 to equivalent play under vA2."""
    masses = sorted(set(np.concatenate([vA1.cum, vA2.cum]).tolist()))
    xs = tuple(kernels.inverse_cdf(vA1.breaks, vA1.vals, vA1.cum, t) for t in masses)
    ys = tuple(kernels.inverse_cdf(vA2.breaks, vA2.vals, vA2.cum, t) for t in masses)
    return WarpMap(vA1, vA2, xs, ys)


def warp_bob_density(vB1: Density, vA1: Density, vA2: Density) -> Density:
    """Responder density that replicates vB1's play after warping by f.

    New density at x is vB1(f^{-1}(x)) / vA1(f^{-1}(x)) * vA2(x), which
    preserves the value of every piece: mass(vB1, p) = mass(result, f(p)).
    """
    f = warp_map(vA1, vA2)
    src_breaks = sorted(set(np.concatenate([vB1.breaks, vA1.breaks]).tolist()))
    breaks2 = sorted(set([f(b) for b in src_breaks] + vA2.breaks.tolist()))
    finv = f.inverse()
    vals2 = []
    for lo, hi in zip(breaks2[:-1], breaks2[1:]):
        xm = 0.5 * (lo + hi)
        x1 = finv(xm)
        vals2.append(vB1.at(x1) / vA1.at(x1) * vA2.at(xm))
    return density(breaks2, vals2)


# --- density files ------------------------------------------------------


def save_density(d: Density, path) -> None:
    """Write as one "right_endpoint value" pair per line."""
    with open(path, "w") as fh:
        for i in range(len(d.vals)):
            fh.write(f"{float(d.breaks[i + 1])!r} {float(d.vals[i])!r}\n")


def load_density(path) -> Density:
    rights = []
    vals = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ContractError(f"{path}:{lineno}: expected 'breakpoint value'")
            rights.append(float(parts[0]))
            vals.append(float(parts[1]))
    if not rights:
        raise ContractError(f"{path}: empty density file")
    return density([0.0] + rights, vals)
