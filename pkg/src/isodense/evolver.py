"""Constrained curve evolution: weighted-perimeter descent at fixed weighted mass.

A closed polygonal curve in the plane (or an axisymmetric profile revolved
about the x-axis in 3D) is driven by projected gradient descent: the step
direction is the perimeter gradient with its mass-gradient component
removed, followed by a scalar Newton correction that restores the mass by
a uniform offset along vertex normals.  Steps are accepted only if the
weighted perimeter does not increase and the curve stays star-shaped
(which guarantees it stays simple).

All functionals are discretized consistently with their analytic
gradients: perimeter by edge midpoints, mass by fanning signed triangles
from the origin with a tensor Gauss-Legendre rule (7 radial x 4 angular
nodes per triangle), so the fan works even when the region does not
contain the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import Density, Dimension
from .numerics import NumericError, gauss_legendre_nodes
from .radial import symmetric_ball

__all__ = [
    "PolyCurve",
    "EvolveReport",
    "weighted_perimeter_2d",
    "weighted_mass_2d",
    "perimeter_gradient_2d",
    "mass_gradient_2d",
    "evolve_2d",
    "evolve_3d_axisym",
    "isoperimetric_quotient",
]

_TWO_PI = 2.0 * math.pi

# Quadrature nodes mapped to [0, 1]: 4 along each edge, 7 across the fan.
_X4, _W4 = gauss_legendre_nodes(4)
_T4 = 0.5 * (_X4 + 1.0)
_WT4 = 0.5 * _W4
_X7, _W7 = gauss_legendre_nodes(7)
_U7 = 0.5 * (_X7 + 1.0)
_WU7 = 0.5 * _W7


def _radial_factor(p: float) -> float:
    # integral of u**(p+1) over [0,1]; exact 1/(p+2) for the polynomial cases
    return float(np.sum(_WU7 * _U7 ** (p + 1.0)))


def _radial_factor_rev(p: float) -> float:
    # integral of u**(p+2) over [0,1], for surfaces of revolution
    return float(np.sum(_WU7 * _U7 ** (p + 2.0)))


def _star_ok(V: np.ndarray, ref: np.ndarray) -> bool:
    """True if the closed vertex loop winds once, monotonically, about ref."""
    W = V - ref
    if np.min(np.hypot(W[:, 0], W[:, 1])) <= 0.0:
        return False
    ang = np.arctan2(W[:, 1], W[:, 0])
    steps = np.mod(np.diff(ang, append=ang[:1]), _TWO_PI)
    return abs(float(np.sum(steps)) - _TWO_PI) < 1e-9 and float(np.max(steps)) < math.pi


class PolyCurve:
    """Closed polygonal curve: ordered counterclockwise vertices, no repeats.

    The curve must be star-shaped with respect to its own centroid, which
    also guarantees simplicity; this is validated at construction.
    """

    def __init__(self, vertices, validate: bool = True):
        V = np.array(vertices, dtype=float)
        if V.ndim != 2 or V.shape[1] != 2:
            raise ValueError("vertices must be an (n, 2) array")
        if len(V) >= 2 and np.allclose(V[0], V[-1]):
            V = V[:-1]
        if len(V) < 16:
            raise ValueError("need at least 16 vertices")
        self._V = V
        if validate:
            self._validate()

    def _validate(self):
        V = self._V
        E = np.roll(V, -1, axis=0) - V
        if np.min(np.hypot(E[:, 0], E[:, 1])) <= 0.0:
            raise ValueError("curve has a zero-length edge")
        if _signed_area(V) <= 0.0:
            raise ValueError("vertices must be ordered counterclockwise")
        if not _star_ok(V, V.mean(axis=0)):
            raise ValueError("curve is not star-shaped about its centroid")

    @classmethod
    def circle(cls, radius: float, center=(0.0, 0.0), n: int = 256) -> "PolyCurve":
        theta = np.linspace(0.0, _TWO_PI, n, endpoint=False)
        cx, cy = center
        V = np.column_stack([cx + radius * np.cos(theta), cy + radius * np.sin(theta)])
        return cls(V, validate=False)

    @property
    def n(self) -> int:
        return len(self._V)

    @property
    def vertices(self) -> np.ndarray:
        return self._V.copy()

    def centroid(self) -> np.ndarray:
        return self._V.mean(axis=0)

    def unweighted_perimeter(self) -> float:
        E = np.roll(self._V, -1, axis=0) - self._V
        return float(np.sum(np.hypot(E[:, 0], E[:, 1])))

    def unweighted_area(self) -> float:
        return _signed_area(self._V)


def _signed_area(V: np.ndarray) -> float:
    Vn = np.roll(V, -1, axis=0)
    return 0.5 * float(np.sum(V[:, 0] * Vn[:, 1] - V[:, 1] * Vn[:, 0]))


def _perimeter(dens: Density, V: np.ndarray) -> float:
    Vn = np.roll(V, -1, axis=0)
    E = Vn - V
    L = np.hypot(E[:, 0], E[:, 1])
    mid = 0.5 * (V + Vn)
    rm = np.hypot(mid[:, 0], mid[:, 1])
    return float(np.sum(L * (rm ** dens.p + dens.a)))


def _perimeter_grad(dens: Density, V: np.ndarray) -> tuple[float, np.ndarray]:
    p, a = dens.p, dens.a
    Vn = np.roll(V, -1, axis=0)
    E = Vn - V
    L = np.hypot(E[:, 0], E[:, 1])
    mid = 0.5 * (V + Vn)
    rm = np.maximum(np.hypot(mid[:, 0], mid[:, 1]), 1e-300)
    rho = rm ** p + a
    per = float(np.sum(L * rho))
    ehat = E / L[:, None]
    # d(rho(rm))/d(mid) pulled back to the two edge vertices (factor 1/2 each)
    radial = (0.5 * L * p * rm ** (p - 2.0))[:, None] * mid
    g_start = -rho[:, None] * ehat + radial
    g_end = rho[:, None] * ehat + radial
    return per, g_start + np.roll(g_end, 1, axis=0)


def _mass(dens: Density, V: np.ndarray) -> float:
    p, a = dens.p, dens.a
    Vn = np.roll(V, -1, axis=0)
    cross = V[:, 0] * Vn[:, 1] - V[:, 1] * Vn[:, 0]
    P = V[None, :, :] + _T4[:, None, None] * (Vn - V)[None, :, :]
    Rn = np.hypot(P[:, :, 0], P[:, :, 1])
    S = np.einsum("j,jn->n", _WT4, Rn ** p)
    return a * 0.5 * float(np.sum(cross)) + _radial_factor(p) * float(np.sum(cross * S))


def _mass_grad(dens: Density, V: np.ndarray) -> tuple[float, np.ndarray]:
    p, a = dens.p, dens.a
    Vn = np.roll(V, -1, axis=0)
    cross = V[:, 0] * Vn[:, 1] - V[:, 1] * Vn[:, 0]
    E = Vn - V
    P = V[None, :, :] + _T4[:, None, None] * E[None, :, :]
    Rn = np.maximum(np.hypot(P[:, :, 0], P[:, :, 1]), 1e-300)
    Rp = Rn ** p
    S = np.einsum("j,jn->n", _WT4, Rp)
    cp = _radial_factor(p)
    mass = a * 0.5 * float(np.sum(cross)) + cp * float(np.sum(cross * S))

    # gradient of the shoelace area
    gA = 0.5 * np.column_stack([
        np.roll(V[:, 1], -1) - np.roll(V[:, 1], 1),
        np.roll(V[:, 0], 1) - np.roll(V[:, 0], -1),
    ])
    # d|P|^p / dP = p |P|^(p-2) P, weighted by the node shares of each vertex
    core = p * Rn ** (p - 2.0)
    T0 = np.einsum("j,jn,jnk->nk", _WT4 * (1.0 - _T4), core, P)
    T1 = np.einsum("j,jn,jnk->nk", _WT4 * _T4, core, P)
    d_cross_start = np.column_stack([Vn[:, 1], -Vn[:, 0]])
    d_cross_end = np.column_stack([-V[:, 1], V[:, 0]])
    term_start = S[:, None] * d_cross_start + cross[:, None] * T0
    term_end = S[:, None] * d_cross_end + cross[:, None] * T1
    G = a * gA + cp * (term_start + np.roll(term_end, 1, axis=0))
    return mass, G


def weighted_perimeter_2d(dens: Density, curve: PolyCurve) -> float:
    """Weighted perimeter: sum of edge lengths times the density at edge midpoints."""
    V = curve.vertices
    E = np.roll(V, -1, axis=0) - V
    if np.min(np.hypot(E[:, 0], E[:, 1])) <= 0.0:
        raise ValueError("curve has a zero-length edge")
    return _perimeter(dens, V)


def weighted_mass_2d(dens: Density, curve: PolyCurve) -> float:
    """Weighted mass a*A_u + integral of r**p over the enclosed region.

    The r**p part is integrated by fanning signed triangles from the
    origin; A_u is the shoelace area.  The curve must be star-shaped
    about its centroid.
    """
    V = curve.vertices
    if not _star_ok(V, V.mean(axis=0)):
        raise ValueError("curve is not star-shaped about its centroid")
    return _mass(dens, V)


def perimeter_gradient_2d(dens: Density, curve: PolyCurve) -> np.ndarray:
    """Analytic gradient of the weighted perimeter with respect to each vertex."""
    return _perimeter_grad(dens, curve.vertices)[1]


def mass_gradient_2d(dens: Density, curve: PolyCurve) -> np.ndarray:
    """Analytic gradient of the weighted mass with respect to each vertex."""
    return _mass_grad(dens, curve.vertices)[1]


def _smooth_closed(d: np.ndarray, k0: float = 4.0) -> np.ndarray:
    """Sobolev-precondition a vertex field: damp mode k by 1/(1 + (k/k0)**2).

    Vertex-wise descent directions are dominated by mesh-frequency
    components that cap the accepted step length; damping them makes the
    convergence rate independent of the resolution without changing the
    stationary points.
    """
    n = len(d)
    spec = np.fft.rfft(d, axis=0)
    k = np.arange(spec.shape[0])
    mult = 1.0 / (1.0 + (n / (math.pi * k0)) ** 2 * np.sin(math.pi * k / n) ** 2)
    return np.fft.irfft(spec * mult[:, None], n=n, axis=0)


def _smooth_open(d: np.ndarray, k0: float = 4.0) -> np.ndarray:
    """Same smoother for an open polyline field, via even/Neumann extension."""
    ext = np.vstack([d, d[-2:0:-1]])
    return _smooth_closed(ext, k0)[: len(d)]


def _vertex_normals(V: np.ndarray) -> np.ndarray:
    E = np.roll(V, -1, axis=0) - V
    L = np.maximum(np.hypot(E[:, 0], E[:, 1]), 1e-300)
    ne = np.column_stack([E[:, 1], -E[:, 0]]) / L[:, None]  # outward for ccw
    nv = ne + np.roll(ne, 1, axis=0)
    nn = np.maximum(np.hypot(nv[:, 0], nv[:, 1]), 1e-300)
    return nv / nn[:, None]


def _project_mass(dens: Density, V: np.ndarray, M0: float,
                  rel_tol: float = 1e-10, max_newton: int = 15) -> np.ndarray:
    """Restore the mass constraint by a uniform offset along vertex normals."""
    for _ in range(max_newton):
        mass, gM = _mass_grad(dens, V)
        resid = mass - M0
        if abs(resid) <= rel_tol * M0:
            return V
        N = _vertex_normals(V)
        slope = float(np.sum(gM * N))
        if slope <= 0.0:
            raise NumericError("mass projection lost its outward slope")
        V = V + (-resid / slope) * N
    raise NumericError("mass projection did not converge")


def _catmull_rom(P0, P1, P2, P3, t):
    t = t[:, None]
    return 0.5 * (2.0 * P1 + (P2 - P0) * t
                  + (2.0 * P0 - 5.0 * P1 + 4.0 * P2 - P3) * t * t
                  + (3.0 * P1 - P0 - 3.0 * P2 + P3) * t * t * t)


def _resample_closed(V: np.ndarray) -> np.ndarray:
    """Redistribute vertices uniformly in arc length (closed curve).

    Cubic (Catmull-Rom) interpolation: a piecewise-linear resampler would
    leave C0 kinks that dominate any curvature diagnostic afterwards.
    """
    n = len(V)
    Vc = np.vstack([V, V[:1]])
    seg = np.hypot(np.diff(Vc[:, 0]), np.diff(Vc[:, 1]))
    s = np.concatenate([[0.0], np.cumsum(seg)])
    targets = np.linspace(0.0, s[-1], n, endpoint=False)
    idx = np.clip(np.searchsorted(s, targets, side="right") - 1, 0, n - 1)
    t = (targets - s[idx]) / seg[idx]
    return _catmull_rom(V[(idx - 1) % n], V[idx], V[(idx + 1) % n],
                        V[(idx + 2) % n], t)


def _fit_circle(V: np.ndarray) -> tuple[float, float, float]:
    """Algebraic (Kasa) circle fit: returns (cx, cy, R)."""
    x, y = V[:, 0], V[:, 1]
    A = np.column_stack([2.0 * x, 2.0 * y, np.ones_like(x)])
    b = x * x + y * y
    (cx, cy, c), *_ = np.linalg.lstsq(A, b, rcond=None)
    return float(cx), float(cy), float(math.sqrt(max(c + cx * cx + cy * cy, 0.0)))


def _curvature_spread(dens: Density, V: np.ndarray) -> float:
    """Relative spread of the generalized curvature over the vertices.

    Uses finite differences of r(theta) in the polar parametrization about
    the origin; NaN when the origin is not safely interior.
    """
    r = np.hypot(V[:, 0], V[:, 1])
    if not _star_ok(V, np.zeros(2)) or np.min(r) < 1e-3 * np.max(r):
        return math.nan
    theta = np.unwrap(np.arctan2(V[:, 1], V[:, 0]))
    h1 = theta - np.roll(theta, 1)
    h1[0] += _TWO_PI
    h2 = np.roll(theta, -1) - theta
    h2[-1] += _TWO_PI
    rm = np.roll(r, 1)
    rp = np.roll(r, -1)
    denom = h1 * h2 * (h1 + h2)
    r_dot = (rp * h1 * h1 - rm * h2 * h2 + r * (h2 * h2 - h1 * h1)) / denom
    r_ddot = 2.0 * (rp * h1 + rm * h2 - r * (h1 + h2)) / denom
    g = r * r + r_dot * r_dot
    kappa = (r * r + 2.0 * r_dot * r_dot - r * r_ddot) / g ** 1.5
    kappa += dens.p * r ** (dens.p - 1.0) / (r ** dens.p + dens.a) * r / np.sqrt(g)
    mean = float(np.mean(kappa))
    if mean == 0.0:
        return math.nan
    return float((np.max(kappa) - np.min(kappa)) / abs(mean))


@dataclass
class EvolveReport:
    """Outcome of a constrained evolution run.

    For axisymmetric 3D runs, weighted_perimeter/unweighted_perimeter hold
    the weighted/unweighted surface area and unweighted_area holds the
    enclosed volume; final_curve is the full meridional cross-section.
    curvature_spread is the relative max-min spread of the generalized
    curvature over vertices (NaN when undefined, e.g. in 3D or when the
    origin is not interior).
    """

    final_curve: PolyCurve
    weighted_perimeter: float
    weighted_mass: float
    unweighted_perimeter: float
    unweighted_area: float
    iterations: int
    converged: bool
    curvature_spread: float
    radius_estimate: float
    center_offset_estimate: float


def isoperimetric_quotient(report: EvolveReport) -> float:
    """P_u / sqrt(4*pi*A_u): 1 for a perfect circle, larger otherwise."""
    if report.unweighted_area <= 0.0:
        raise ValueError("report has nonpositive unweighted area")
    return report.unweighted_perimeter / math.sqrt(4.0 * math.pi * report.unweighted_area)


def _initial_center(dens: Density, R: float) -> float:
    if dens.p == 2.0:
        return max(0.0, math.sqrt(max(0.0, R * R - dens.a)))
    return 0.5 * R


def _try_direction(dens: Density, V: np.ndarray, M0: float, per: float,
                   dhat: np.ndarray, step0: float) -> tuple[np.ndarray, float, bool]:
    """Backtracking move along dhat (unit max-displacement) with mass re-projection."""
    ref_scale = float(np.max(np.abs(V))) + 1.0
    t = step0
    while t > 1e-14 * ref_scale:
        Vt = V + t * dhat
        if _star_ok(Vt, Vt.mean(axis=0)):
            try:
                Vt = _project_mass(dens, Vt, M0)
            except NumericError:
                t *= 0.5
                continue
            if _star_ok(Vt, Vt.mean(axis=0)):
                pt = _perimeter(dens, Vt)
                if pt <= per:
                    return Vt, pt, True
        t *= 0.5
    return V, per, False


def descent_step(dens: Density, V: np.ndarray, M0: float, per: float,
                 step0: float) -> tuple[np.ndarray, float, bool]:
    """One projected-descent iteration; returns (V, perimeter, accepted).

    The direction is -grad(P) with its component along grad(M) removed,
    Sobolev-smoothed along the curve; trial curves are re-projected onto
    the mass constraint and accepted only if star-shaped and not longer
    (in weighted perimeter) than before.  Because vertex-wise descent
    leaves the rigid-motion mode of an off-centre optimum nearly
    stationary at fine resolutions, each iteration also line-searches the
    rigid translation carried by the mean of the same direction field;
    the projection step then slides the radius along the constraint.
    """
    _, gP = _perimeter_grad(dens, V)
    _, gM = _mass_grad(dens, V)
    gM2 = float(np.sum(gM * gM))
    lam = float(np.sum(gP * gM) / gM2)
    d = -gP + lam * gM
    ds = _smooth_closed(d)
    ds -= (float(np.sum(ds * gM)) / gM2) * gM
    moved = False
    # smoothed direction for the smooth modes, raw direction for mesh-scale
    # cleanup; the smoother alone would leave vertex noise behind
    for direction in (ds, d):
        dmax = float(np.max(np.abs(direction)))
        if dmax > 1e-300:
            V, per, ok = _try_direction(dens, V, M0, per, direction / dmax, step0)
            moved = moved or ok
    shift = d.mean(axis=0)
    norm = float(math.hypot(shift[0], shift[1]))
    if norm > 1e-300:
        V, per, slid = _try_direction(dens, V, M0, per, shift / norm, step0)
        moved = moved or slid
    return V, per, moved


def evolve_2d(dens: Density, M0: float, n: int = 256, max_iters: int = 4000,
              tol: float = 1e-9) -> EvolveReport:
    """Minimize weighted perimeter at fixed weighted mass M0 in the plane.

    Starts from a circle whose radius solves the centred mass equation,
    displaced along the x-axis to dodge the centred saddle when the
    optimum straddles the origin.  Terminates when the relative perimeter
    decrease over 50 iterations falls below tol (with the mass constraint
    satisfied) or when no further downhill step exists at the mesh
    resolution.
    """
    if M0 <= 0.0:
        raise ValueError("mass must be positive")
    if n < 64:
        raise ValueError("need at least 64 vertices")
    R = symmetric_ball(dens, Dimension(2), M0).radius
    V = PolyCurve.circle(R, center=(_initial_center(dens, R), 0.0), n=n).vertices
    V = _project_mass(dens, V, M0)
    per = _perimeter(dens, V)

    iterations = 0
    history = [per]
    stalled = 0
    since_resample = 0
    plateau = False
    while iterations < max_iters:
        iterations += 1
        E = np.roll(V, -1, axis=0) - V
        mean_edge = float(np.mean(np.hypot(E[:, 0], E[:, 1])))
        V, per, accepted = descent_step(dens, V, M0, per, 0.1 * mean_edge)
        if accepted:
            stalled = 0
            since_resample += 1
        else:
            stalled += 1
            if stalled >= 25:
                break
        history.append(per)
        if len(history) > 50 and history[-51] - per < tol * abs(per):
            plateau = True
            break
        if since_resample >= 100:
            V = _project_mass(dens, _resample_closed(V), M0)
            per = _perimeter(dens, V)
            since_resample = 0
    converged_main = plateau or stalled >= 25

    mass = _mass(dens, V)
    mass_ok = abs(mass - M0) <= 1e-8 * M0
    curve = PolyCurve(V, validate=False)
    cx, cy, R_fit = _fit_circle(V)
    return EvolveReport(
        final_curve=curve,
        weighted_perimeter=per,
        weighted_mass=mass,
        unweighted_perimeter=curve.unweighted_perimeter(),
        unweighted_area=curve.unweighted_area(),
        iterations=iterations,
        converged=bool(mass_ok and converged_main),
        curvature_spread=_curvature_spread(dens, V),
        radius_estimate=R_fit,
        center_offset_estimate=float(math.hypot(cx, cy)),
    )


# ---------------------------------------------------------------------------
# Axisymmetric 3D: a half-profile polyline revolved about the x-axis.
# The profile runs from the right pole to the left pole through y > 0.
# ---------------------------------------------------------------------------

def _rev_area(dens: Density, W: np.ndarray) -> float:
    A, B = W[:-1], W[1:]
    E = B - A
    L = np.hypot(E[:, 0], E[:, 1])
    mid = 0.5 * (A + B)
    rm = np.hypot(mid[:, 0], mid[:, 1])
    return _TWO_PI * float(np.sum(mid[:, 1] * L * (rm ** dens.p + dens.a)))


def _rev_area_grad(dens: Density, W: np.ndarray) -> tuple[float, np.ndarray]:
    p, a = dens.p, dens.a
    A, B = W[:-1], W[1:]
    E = B - A
    L = np.hypot(E[:, 0], E[:, 1])
    mid = 0.5 * (A + B)
    ym = mid[:, 1]
    rm = np.maximum(np.hypot(mid[:, 0], mid[:, 1]), 1e-300)
    rho = rm ** p + a
    area = _TWO_PI * float(np.sum(ym * L * rho))
    ehat = E / L[:, None]
    radial = (0.5 * ym * L * p * rm ** (p - 2.0))[:, None] * mid
    y_term = np.column_stack([np.zeros_like(ym), 0.5 * L * rho])
    g_start = -(ym * rho)[:, None] * ehat + radial + y_term
    g_end = (ym * rho)[:, None] * ehat + radial + y_term
    G = np.zeros_like(W)
    G[:-1] += g_start
    G[1:] += g_end
    return area, _TWO_PI * G


def _rev_mass(dens: Density, W: np.ndarray) -> float:
    p, a = dens.p, dens.a
    A, B = W[:-1], W[1:]
    cross = A[:, 0] * B[:, 1] - A[:, 1] * B[:, 0]
    P = A[None, :, :] + _T4[:, None, None] * (B - A)[None, :, :]
    Rn = np.hypot(P[:, :, 0], P[:, :, 1])
    T = np.einsum("j,jn->n", _WT4, P[:, :, 1] * Rn ** p)
    vol = math.pi / 3.0 * float(np.sum(cross * (A[:, 1] + B[:, 1])))
    return a * vol + _TWO_PI * _radial_factor_rev(p) * float(np.sum(cross * T))


def _rev_mass_grad(dens: Density, W: np.ndarray) -> tuple[float, np.ndarray]:
    p, a = dens.p, dens.a
    A, B = W[:-1], W[1:]
    E = B - A
    cross = A[:, 0] * B[:, 1] - A[:, 1] * B[:, 0]
    P = A[None, :, :] + _T4[:, None, None] * E[None, :, :]
    Rn = np.maximum(np.hypot(P[:, :, 0], P[:, :, 1]), 1e-300)
    Rp = Rn ** p
    yP = P[:, :, 1]
    T = np.einsum("j,jn->n", _WT4, yP * Rp)
    cp = _radial_factor_rev(p)
    vol = math.pi / 3.0 * float(np.sum(cross * (A[:, 1] + B[:, 1])))
    mass = a * vol + _TWO_PI * cp * float(np.sum(cross * T))

    core = p * yP[:, :, None] * Rn[:, :, None] ** (p - 2.0) * P
    core[:, :, 1] += Rp
    dT0 = np.einsum("j,jnk->nk", _WT4 * (1.0 - _T4), core)
    dT1 = np.einsum("j,jnk->nk", _WT4 * _T4, core)
    d_cross_start = np.column_stack([B[:, 1], -B[:, 0]])
    d_cross_end = np.column_stack([-A[:, 1], A[:, 0]])
    ysum = A[:, 1] + B[:, 1]
    y_unit = np.column_stack([np.zeros_like(ysum), np.ones_like(ysum)])
    gV_start = math.pi / 3.0 * (d_cross_start * ysum[:, None] + cross[:, None] * y_unit)
    gV_end = math.pi / 3.0 * (d_cross_end * ysum[:, None] + cross[:, None] * y_unit)
    gM_start = _TWO_PI * cp * (d_cross_start * T[:, None] + cross[:, None] * dT0)
    gM_end = _TWO_PI * cp * (d_cross_end * T[:, None] + cross[:, None] * dT1)
    G = np.zeros_like(W)
    G[:-1] += a * gV_start + gM_start
    G[1:] += a * gV_end + gM_end
    return mass, G


def _profile_normals(W: np.ndarray) -> np.ndarray:
    E = W[1:] - W[:-1]
    L = np.maximum(np.hypot(E[:, 0], E[:, 1]), 1e-300)
    ne = np.column_stack([E[:, 1], -E[:, 0]]) / L[:, None]
    N = np.zeros_like(W)
    N[:-1] += ne
    N[1:] += ne
    nn = np.maximum(np.hypot(N[:, 0], N[:, 1]), 1e-300)
    N = N / nn[:, None]
    # poles move along the axis only; the profile runs right pole -> left pole
    N[0] = [1.0, 0.0]
    N[-1] = [-1.0, 0.0]
    return N


def _profile_ok(W: np.ndarray) -> bool:
    if np.any(W[1:-1, 1] <= 0.0):
        return False
    if W[0, 0] <= W[-1, 0]:
        return False
    # closing the profile back along the axis must give a star-shaped loop
    return _star_ok(W, W.mean(axis=0))


def _project_mass_rev(dens: Density, W: np.ndarray, M0: float,
                      rel_tol: float = 1e-10, max_newton: int = 15) -> np.ndarray:
    for _ in range(max_newton):
        mass, gM = _rev_mass_grad(dens, W)
        resid = mass - M0
        if abs(resid) <= rel_tol * M0:
            return W
        N = _profile_normals(W)
        slope = float(np.sum(gM * N))
        if slope <= 0.0:
            raise NumericError("mass projection lost its outward slope")
        W = W + (-resid / slope) * N
        W[0, 1] = W[-1, 1] = 0.0
    raise NumericError("mass projection did not converge")


def _resample_profile(W: np.ndarray) -> np.ndarray:
    n = len(W)
    seg = np.hypot(np.diff(W[:, 0]), np.diff(W[:, 1]))
    s = np.concatenate([[0.0], np.cumsum(seg)])
    targets = np.linspace(0.0, s[-1], n)
    idx = np.clip(np.searchsorted(s, targets, side="right") - 1, 0, n - 2)
    t = (targets - s[idx]) / seg[idx]
    ext = np.vstack([W[0] + (W[0] - W[1]), W, W[-1] + (W[-1] - W[-2])])
    out = _catmull_rom(ext[idx], ext[idx + 1], ext[idx + 2], ext[idx + 3], t)
    out[0], out[-1] = W[0], W[-1]
    out[0, 1] = out[-1, 1] = 0.0
    return out


def _try_direction_rev(dens: Density, W: np.ndarray, M0: float, area: float,
                       dhat: np.ndarray, step0: float) -> tuple[np.ndarray, float, bool]:
    ref_scale = float(np.max(np.abs(W))) + 1.0
    t = step0
    while t > 1e-14 * ref_scale:
        Wt = W + t * dhat
        Wt[0, 1] = Wt[-1, 1] = 0.0
        if _profile_ok(Wt):
            try:
                Wt = _project_mass_rev(dens, Wt, M0)
            except NumericError:
                t *= 0.5
                continue
            if _profile_ok(Wt):
                st = _rev_area(dens, Wt)
                if st <= area:
                    return Wt, st, True
        t *= 0.5
    return W, area, False


def _rev_step(dens: Density, W: np.ndarray, M0: float, area: float,
              step0: float) -> tuple[np.ndarray, float, bool]:
    _, gS = _rev_area_grad(dens, W)
    _, gM = _rev_mass_grad(dens, W)
    for g in (gS, gM):
        g[0, 1] = g[-1, 1] = 0.0  # poles stay on the axis
    gM2 = float(np.sum(gM * gM))
    lam = float(np.sum(gS * gM) / gM2)
    d = -gS + lam * gM
    ds = _smooth_open(d)
    ds -= (float(np.sum(ds * gM)) / gM2) * gM
    ds[0, 1] = ds[-1, 1] = 0.0
    moved = False
    for direction in (ds, d):
        dmax = float(np.max(np.abs(direction)))
        if dmax > 1e-300:
            W, area, ok = _try_direction_rev(dens, W, M0, area, direction / dmax, step0)
            moved = moved or ok
    # axial translation carried by the mean of the direction field
    shift = float(d[:, 0].mean())
    if abs(shift) > 1e-300:
        axis = np.array([math.copysign(1.0, shift), 0.0])
        W, area, slid = _try_direction_rev(dens, W, M0, area, axis, step0)
        moved = moved or slid
    return W, area, moved


def evolve_3d_axisym(dens: Density, M0: float, n: int = 129, max_iters: int = 4000,
                     tol: float = 1e-9) -> EvolveReport:
    """Minimize weighted surface area at fixed weighted mass, axisymmetrically.

    The state is a half-profile polyline revolved about the x-axis, with
    the poles pinned to the axis; otherwise the scheme matches evolve_2d.
    """
    if M0 <= 0.0:
        raise ValueError("mass must be positive")
    if n < 17:
        raise ValueError("need at least 17 profile points")
    R = symmetric_ball(dens, Dimension(3), M0).radius
    x0 = _initial_center(dens, R)
    theta = np.linspace(0.0, math.pi, n)
    W = np.column_stack([x0 + R * np.cos(theta), R * np.sin(theta)])
    W[0, 1] = W[-1, 1] = 0.0
    W = _project_mass_rev(dens, W, M0)
    area = _rev_area(dens, W)

    iterations = 0
    history = [area]
    stalled = 0
    since_resample = 0
    plateau = False
    while iterations < max_iters:
        iterations += 1
        seg = np.hypot(np.diff(W[:, 0]), np.diff(W[:, 1]))
        W, area, accepted = _rev_step(dens, W, M0, area, 0.1 * float(np.mean(seg)))
        if accepted:
            stalled = 0
            since_resample += 1
        else:
            stalled += 1
            if stalled >= 25:
                break
        history.append(area)
        if len(history) > 50 and history[-51] - area < tol * abs(area):
            plateau = True
            break
        if since_resample >= 100:
            W = _project_mass_rev(dens, _resample_profile(W), M0)
            area = _rev_area(dens, W)
            since_resample = 0
    converged_main = plateau or stalled >= 25

    mass = _rev_mass(dens, W)
    mass_ok = abs(mass - M0) <= 1e-8 * M0
    # full meridional cross-section: profile plus its mirror image
    mirror = W[::-1].copy()
    mirror[:, 1] *= -1.0
    section = np.vstack([W, mirror[1:-1]])
    curve = PolyCurve(section, validate=False)
    cx, cy, R_fit = _fit_circle(W)
    A, B = W[:-1], W[1:]
    L = np.hypot((B - A)[:, 0], (B - A)[:, 1])
    area_u = _TWO_PI * float(np.sum(0.5 * (A[:, 1] + B[:, 1]) * L))
    cross = A[:, 0] * B[:, 1] - A[:, 1] * B[:, 0]
    vol_u = math.pi / 3.0 * float(np.sum(cross * (A[:, 1] + B[:, 1])))
    return EvolveReport(
        final_curve=curve,
        weighted_perimeter=area,
        weighted_mass=mass,
        unweighted_perimeter=area_u,
        unweighted_area=vol_u,
        iterations=iterations,
        converged=bool(mass_ok and converged_main),
        curvature_spread=math.nan,
        radius_estimate=R_fit,
        center_offset_estimate=float(abs(cx)),
    )
