"""Isoperimetric intervals on the real line under the density |x|**p + a.

Closed-form solvers exist for p = 1/2, 1 and 2; a constrained numerical
minimizer covers every other exponent, and an exhaustive grid oracle
cross-checks them all.  The module also carries the multi-interval
reduction pipeline (concatenate, translate to the origin, merge across
the origin) and the contour-grid generator used to visualize the
perimeter/mass landscape over the two endpoints.

An interval [alpha, beta] is always reported with alpha <= 0 < beta; the
weighted perimeter is rho(|alpha|) + rho(beta) = |alpha|**p + beta**p + 2a.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .density import Density
from .numerics import bisect, golden_min, grow_bracket

__all__ = [
    "Interval",
    "IntervalBranch",
    "IntervalSolution",
    "perimeter1d",
    "mass1d",
    "solve_p2",
    "solve_p1",
    "solve_p_lt_1",
    "solve_symmetric",
    "solve_general",
    "brute_force_oracle",
    "reduce_intervals",
    "contour_grid",
    "ContourGrid",
    "contour_curvatures",
]


class IntervalBranch(enum.Enum):
    AT_ORIGIN = "at_origin"
    ASYMMETRIC = "asymmetric"
    SYMMETRIC = "symmetric"


@dataclass(frozen=True)
class Interval:
    """A closed interval [lo, hi] on the real line."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("interval endpoints must be finite")
        if self.lo > self.hi:
            raise ValueError(f"need lo <= hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class IntervalSolution:
    """A solved minimum-perimeter interval [alpha, beta] for a target mass.

    branch records which stationary family the optimum belongs to:
    one end at the origin, asymmetric straddling the origin, or symmetric
    about it.  lagrange_multiplier is the sensitivity of the minimal
    perimeter to the mass constraint, taken from the right-endpoint
    stationarity condition; it is None when not computed.
    """

    alpha: float
    beta: float
    perimeter: float
    branch: IntervalBranch
    lagrange_multiplier: Optional[float] = None

    def __post_init__(self):
        if not (self.alpha <= 0.0 < self.beta):
            raise ValueError("solution must satisfy alpha <= 0 < beta")


def perimeter1d(dens: Density, iv: Interval) -> float:
    """Weighted perimeter rho(|lo|) + rho(|hi|) of an interval."""
    return abs(iv.lo) ** dens.p + abs(iv.hi) ** dens.p + 2.0 * dens.a


def mass1d(dens: Density, iv: Interval) -> float:
    """Weighted mass of an interval: the integral of rho(|x|) over it."""
    F = dens.primitive
    if iv.lo <= 0.0 <= iv.hi:
        return F(iv.hi) + F(-iv.lo)
    return abs(F(abs(iv.hi)) - F(abs(iv.lo)))


def _multiplier(dens: Density, beta: float) -> float:
    # Stationarity at the free right end: d(perimeter)/d(beta) + lambda * rho(beta) = 0.
    return -dens.p * beta ** (dens.p - 1.0) / (beta ** dens.p + dens.a)


def _invert_primitive(dens: Density, m: float) -> float:
    """q >= 0 with F(q) = m."""
    if m < 0.0:
        raise ValueError("mass must be nonnegative")
    if m == 0.0:
        return 0.0
    hi = max(1.0, (m * (dens.p + 1.0)) ** (1.0 / (dens.p + 1.0)))
    hi = grow_bracket(lambda q: dens.primitive(q) - m, hi)
    return bisect(lambda q: dens.primitive(q) - m, 0.0, hi)


def _invert_primitive_grid(dens: Density, m: np.ndarray, iters: int = 110) -> np.ndarray:
    """Vectorized inverse of the primitive for a nonnegative array of masses."""
    p, a = dens.p, dens.a
    m = np.asarray(m, dtype=float)
    lo = np.zeros_like(m)
    # F(q) >= q**(p+1)/(p+1), so this upper end always brackets the root.
    hi = (np.maximum(m, 0.0) * (p + 1.0)) ** (1.0 / (p + 1.0))
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        low = mid ** (p + 1.0) / (p + 1.0) + a * mid < m
        lo = np.where(low, mid, lo)
        hi = np.where(low, hi, mid)
    return 0.5 * (lo + hi)


def _classify(alpha_abs: float, beta: float, rel_tol: float = 1e-6) -> IntervalBranch:
    scale = max(beta, alpha_abs)
    if alpha_abs <= rel_tol * scale:
        return IntervalBranch.AT_ORIGIN
    if abs(beta - alpha_abs) <= rel_tol * scale:
        return IntervalBranch.SYMMETRIC
    return IntervalBranch.ASYMMETRIC


def solve_p2(a: float, M0: float) -> IntervalSolution:
    """Minimum-perimeter interval for p = 2, offset a, mass M0.

    Below the critical offset (3*M0)**(2/3)/4 the optimum straddles the
    origin with alpha*beta = -a and perimeter (3*M0)**(2/3), independent
    of a; at a = 0 the left end degenerates to the origin.  At or above
    the critical offset the optimum is symmetric, with beta from the
    solved cubic of the symmetric mass constraint.
    """
    if M0 <= 0.0:
        raise ValueError("mass must be positive")
    if a < 0.0:
        raise ValueError("offset must be nonnegative")
    dens = Density(2.0, a)
    cbrt = (3.0 * M0) ** (1.0 / 3.0)
    disc = cbrt * cbrt - 4.0 * a
    if disc > 0.0:  # a < a_crit
        beta = 0.5 * (math.sqrt(disc) + cbrt)
        alpha = -a / beta
        per = cbrt * cbrt
        branch = IntervalBranch.AT_ORIGIN if a == 0.0 else IntervalBranch.ASYMMETRIC
        return IntervalSolution(alpha, beta, per, branch, _multiplier(dens, beta))
    # Symmetric branch: M0 = 2*beta^3/3 + 2*a*beta, solved in radicals.
    w = 0.75 * M0 + 0.25 * math.sqrt(9.0 * M0 * M0 + 16.0 * a ** 3)
    w3 = w ** (1.0 / 3.0)
    beta = w3 - a / w3
    per = 2.0 * beta * beta + 2.0 * a
    return IntervalSolution(-beta, beta, per, IntervalBranch.SYMMETRIC,
                            _multiplier(dens, beta))


def solve_p1(a: float, M0: float) -> IntervalSolution:
    """Minimum-perimeter interval for p = 1: one end at the origin.

    beta = -a + sqrt(a**2 + 2*M0) and perimeter a + sqrt(a**2 + 2*M0);
    the symmetric regime never occurs for p = 1.
    """
    if M0 <= 0.0:
        raise ValueError("mass must be positive")
    if a < 0.0:
        raise ValueError("offset must be nonnegative")
    root = math.sqrt(a * a + 2.0 * M0)
    beta = root - a
    return IntervalSolution(0.0, beta, a + root, IntervalBranch.AT_ORIGIN,
                            _multiplier(Density(1.0, a), beta))


def _beta_p_lt_1_closed(p: float, a: float, M0: float) -> Optional[float]:
    """Closed-form endpoint for p = 1/2 via the cubic in sqrt(beta).

    Valid while a <= (3*M0)**(1/3); returns None otherwise or for p != 1/2.
    The textbook expression for the cubic's resolvent Z is a difference of
    nearly equal terms for small a, so it is evaluated through the
    conjugate product Z = E / (D + sqrt(D^2 - E)) instead.
    """
    if p != 0.5:
        return None
    if a == 0.0:
        return (1.5 * M0) ** (2.0 / 3.0)
    d_term = 0.75 * M0 - a ** 3 / 8.0
    e_term = a ** 6 / 64.0
    disc = d_term * d_term - e_term
    if disc < 0.0 or d_term <= 0.0:
        return None
    z = e_term / (d_term + math.sqrt(disc))
    z3 = z ** (1.0 / 3.0)
    s = a * a / (4.0 * z3) + z3 - 0.5 * a
    return s * s


def solve_p_lt_1(dens: Density, M0: float) -> IntervalSolution:
    """Minimum-perimeter interval for 0 < p < 1: one end at the origin.

    beta is the unique positive root of beta**(p+1) = (p+1)*(M0 - a*beta),
    found by bracketed bisection.  For p = 1/2 the cubic-in-sqrt(beta)
    closed form is also evaluated (while its discriminant permits) and
    required to agree with the bisection root.
    """
    if not 0.0 < dens.p < 1.0:
        raise ValueError("this solver requires 0 < p < 1")
    if M0 <= 0.0:
        raise ValueError("mass must be positive")
    beta = _invert_primitive(dens, M0)
    closed = _beta_p_lt_1_closed(dens.p, dens.a, M0)
    if closed is not None and not math.isclose(closed, beta, rel_tol=1e-6):
        raise AssertionError(
            f"closed-form endpoint {closed} disagrees with bisection root {beta}")
    per = beta ** dens.p + 2.0 * dens.a
    return IntervalSolution(0.0, beta, per, IntervalBranch.AT_ORIGIN,
                            _multiplier(dens, beta))


def solve_symmetric(dens: Density, M0: float) -> IntervalSolution:
    """Symmetric interval [-beta, beta] of mass M0 for p > 1.

    beta solves 2*beta**(p+1)/(p+1) + 2*a*beta = M0 by bisection; the
    perimeter is 2*beta**p + 2*a.  Only optimal above the critical offset,
    but well defined for any a.
    """
    if dens.p <= 1.0:
        raise ValueError("symmetric solver requires p > 1")
    if M0 <= 0.0:
        raise ValueError("mass must be positive")
    beta = _invert_primitive(dens, 0.5 * M0)
    per = 2.0 * beta ** dens.p + 2.0 * dens.a
    return IntervalSolution(-beta, beta, per, IntervalBranch.SYMMETRIC,
                            _multiplier(dens, beta))


def _beta_from_alpha(dens: Density, alpha_abs: float, M0: float) -> float:
    """Right endpoint for a trial left endpoint, from the mass constraint."""
    rest = M0 - dens.primitive(alpha_abs)
    if rest < 0.0:
        raise ValueError("left endpoint already exceeds the target mass")
    return _invert_primitive(dens, rest)


def solve_general(dens: Density, M0: float) -> IntervalSolution:
    """Numerical minimum-perimeter interval for any p > 0.

    The mass constraint is parametrized by s = |alpha|: for each trial s
    the right endpoint is recovered by bisection, and the perimeter is
    minimized over s in [0, beta_sym] by golden-section search.  The exact
    s = 0 and symmetric candidates are always probed as well.
    """
    if M0 <= 0.0:
        raise ValueError("mass must be positive")
    p, a = dens.p, dens.a
    s_sym = _invert_primitive(dens, 0.5 * M0)

    def objective(s: float) -> float:
        beta = _beta_from_alpha(dens, s, M0)
        return s ** p + beta ** p + 2.0 * a

    s_best, _ = golden_min(objective, 0.0, s_sym, tol=1e-12 * max(1.0, s_sym))
    candidates = [0.0, s_sym, s_best]
    best_s, best_per = None, math.inf
    for s in candidates:
        per = objective(s)
        if per < best_per:
            best_s, best_per = s, per
    beta = _beta_from_alpha(dens, best_s, M0)
    branch = _classify(best_s, beta)
    if branch is IntervalBranch.SYMMETRIC:
        best_s = beta = s_sym
    elif branch is IntervalBranch.AT_ORIGIN:
        best_s = 0.0
        beta = _beta_from_alpha(dens, 0.0, M0)
    per = best_s ** p + beta ** p + 2.0 * a
    return IntervalSolution(-best_s, beta, per, branch, _multiplier(dens, beta))


def brute_force_oracle(dens: Density, M0: float, grid_n: int) -> IntervalSolution:
    """Exhaustive minimum over a uniform grid of left endpoints.

    Scans |alpha| over [0, L] with F(L) = M0 (the widest feasible left
    extent), recovers each right endpoint from the mass constraint by
    bisection, and returns the grid minimizer.  Accurate to O(L/grid_n)
    in the endpoints; used as an independent check on the solvers.
    """
    if grid_n < 100:
        raise ValueError("grid_n must be at least 100")
    if M0 <= 0.0:
        raise ValueError("mass must be positive")
    p, a = dens.p, dens.a
    L = _invert_primitive(dens, M0)
    s = np.linspace(0.0, L, grid_n)
    rest = np.maximum(M0 - (s ** (p + 1.0) / (p + 1.0) + a * s), 0.0)
    beta = _invert_primitive_grid(dens, rest)
    per = s ** p + beta ** p + 2.0 * a
    i = int(np.argmin(per))
    s_i, b_i = float(s[i]), float(beta[i])
    if s_i > b_i:  # mirror image of the canonical optimum; reflect it back
        s_i, b_i = b_i, s_i
    grid_tol = max(1e-6, 2.0 * L / (grid_n - 1) / max(b_i, s_i, 1e-300))
    branch = _classify(s_i, b_i, rel_tol=grid_tol)
    if branch is IntervalBranch.AT_ORIGIN:
        s_i = 0.0
        b_i = float(_beta_from_alpha(dens, 0.0, M0))
    return IntervalSolution(-s_i, b_i, float(s_i ** p + b_i ** p + 2.0 * a), branch,
                            _multiplier(dens, b_i))


# ---------------------------------------------------------------------------
# Reduction of several intervals to one interval containing the origin.
# ---------------------------------------------------------------------------

def _concatenate_half_line(dens: Density, parts: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Slide disjoint intervals on the positive half-line into one.

    Each interval after the first is moved down to abut its predecessor,
    its upper end recomputed to preserve its mass.  Monotonicity of rho
    makes every slide lower the perimeter.
    """
    parts = sorted(parts)
    lo0 = parts[0][0]
    total = sum(dens.primitive(hi) - dens.primitive(lo) for lo, hi in parts)
    target = dens.primitive(lo0) + total
    hi = bisect(lambda q: dens.primitive(q) - target, lo0,
                grow_bracket(lambda q: dens.primitive(q) - target,
                             max(1.0, (target * (dens.p + 1.0)) ** (1.0 / (dens.p + 1.0)))))
    return lo0, hi


def _translate_to_origin(dens: Density, lo: float, hi: float) -> float:
    """Move [lo, hi] on the positive half-line so its left end is 0.

    Returns the new upper end t with F(t) = F(hi) - F(lo); the perimeter
    never increases because rho is increasing away from the origin.
    """
    return _invert_primitive(dens, dens.primitive(hi) - dens.primitive(lo))


def reduce_intervals(dens: Density, ivs: Sequence[Interval]) -> Interval:
    """Reduce disjoint intervals to one interval containing the origin.

    Pipeline: negative-side intervals are reflected for bookkeeping, each
    half-line's intervals are concatenated pairwise and translated to the
    origin, and the two origin-anchored intervals are merged across the
    origin (saving exactly 2*rho(0) = 2a of perimeter).  Total mass is
    conserved and the perimeter never increases.
    """
    if not ivs:
        raise ValueError("need at least one interval")
    if len(ivs) == 1 and ivs[0].lo <= 0.0 <= ivs[0].hi:
        return ivs[0]  # already a single interval containing the origin
    ordered = sorted(ivs, key=lambda iv: iv.lo)
    for prev, cur in zip(ordered, ordered[1:]):
        if prev.hi > cur.lo:
            raise ValueError(f"intervals overlap: [{prev.lo}, {prev.hi}] and [{cur.lo}, {cur.hi}]")

    pos: list[tuple[float, float]] = []
    neg: list[tuple[float, float]] = []  # reflected onto the positive axis
    for iv in ordered:
        if iv.width == 0.0:
            continue
        if iv.lo >= 0.0:
            pos.append((iv.lo, iv.hi))
        elif iv.hi <= 0.0:
            neg.append((-iv.hi, -iv.lo))
        else:  # straddles the origin: split at 0
            neg.append((0.0, -iv.lo))
            pos.append((0.0, iv.hi))

    t_pos = t_neg = 0.0
    if pos:
        t_pos = _translate_to_origin(dens, *_concatenate_half_line(dens, pos))
    if neg:
        t_neg = _translate_to_origin(dens, *_concatenate_half_line(dens, neg))
    return Interval(-t_neg, t_pos)


# ---------------------------------------------------------------------------
# Contours of perimeter and mass over the endpoint plane.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContourGrid:
    """Perimeter and mass sampled on a rectangular (|alpha|, beta) grid.

    perimeter[i, j] and mass[i, j] correspond to (alpha_abs[i], beta[j]);
    records are row-major over i then j.
    """

    alpha_abs: np.ndarray
    beta: np.ndarray
    perimeter: np.ndarray
    mass: np.ndarray


def contour_grid(dens: Density, alpha_max: float, beta_max: float, n: int) -> ContourGrid:
    """Sample perimeter and mass on an n x n grid over [0, alpha_max] x [0, beta_max]."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if alpha_max <= 0.0 or beta_max <= 0.0:
        raise ValueError("grid extents must be positive")
    p, a = dens.p, dens.a
    s = np.linspace(0.0, alpha_max, n)
    b = np.linspace(0.0, beta_max, n)
    S, B = np.meshgrid(s, b, indexing="ij")
    per = S ** p + B ** p + 2.0 * a
    mass = (S ** (p + 1.0) + B ** (p + 1.0)) / (p + 1.0) + a * (S + B)
    return ContourGrid(s, b, per, mass)


def contour_curvatures(dens: Density, alpha_abs: float, beta: float) -> tuple[float, float]:
    """Second derivatives d^2(beta)/d|alpha|^2 along the two contour families.

    First component: along the constant-perimeter contour through the
    point; second: along the constant-mass contour.  For 0 < p < 1 the
    perimeter contour is convex (positive) and the mass contour concave
    (negative); the signs flip with p - 1.
    """
    if alpha_abs <= 0.0 or beta <= 0.0:
        raise ValueError("need alpha_abs > 0 and beta > 0")
    p, a = dens.p, dens.a
    dd_per = -(p - 1.0) / beta ** (p - 1.0) * (
        alpha_abs ** (p - 2.0) + alpha_abs ** (2.0 * p - 2.0) / beta ** p)
    rb = beta ** p + a
    ra = alpha_abs ** p + a
    dd_mass = -(p * alpha_abs ** (p - 1.0) * rb * rb + p * beta ** (p - 1.0) * ra * ra) / rb ** 3
    return dd_per, dd_mass
