"""Bump functions, mollification, and the smoothing error bound.

The bump is the standard compactly supported mollifier
phi_R(x) = c * exp(-1 / (1 - |x/R|^2)) inside the open radius-R ball,
zero outside, with c chosen so its own-grid quadrature is exactly 1.
Convolving against it approximates the identity: the distance at a point
is controlled by the local modulus of continuity of the other factor.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from ._accum import VecKahan
from .convolution import ConvRequest, convolve_at, convolve
from .errors import GconvError, SpaceMismatchError
from .functions import SampledFunction, SymbolicFunction
from .groups import (
    Cyclic,
    GridVolume,
    GroupSpace,
    Integers,
    Lattice,
    Measure,
    Point,
)
from .pairings import Pairing, ScalarSmul


@dataclass(frozen=True)
class BumpSpec:
    radius: float
    dim: int
    grid_h: float

    def __post_init__(self):
        if not (self.radius > 0.0):
            raise GconvError("bump radius must be positive")
        if self.dim < 1:
            raise GconvError("bump dimension must be >= 1")
        if not (0.0 < self.grid_h <= self.radius / 10.0):
            raise GconvError(
                "grid spacing %g too coarse for radius %g "
                "(need at least 10 samples per radius)" % (self.grid_h, self.radius)
            )

    @property
    def group(self) -> Lattice:
        return Lattice(self.dim, self.grid_h)


def bump(spec: BumpSpec) -> SymbolicFunction:
    """The normalized mollifier with analytic first and second derivatives."""
    R = spec.radius
    r2 = R * R
    group = spec.group
    d = spec.dim

    def raw(x: np.ndarray) -> float:
        u = float(np.dot(x, x)) / r2
        if u >= 1.0:
            return 0.0
        return math.exp(-1.0 / (1.0 - u))

    # renormalize on the bump's own grid so the quadrature is exactly 1
    k = int(math.ceil(R / spec.grid_h))
    cell = spec.grid_h**d
    quad = math.fsum(
        raw(group.embed(p)) * cell
        for p in itertools.product(range(-k, k + 1), repeat=d)
    )
    c = 1.0 / quad

    def value(x: np.ndarray) -> float:
        return c * raw(x)

    def gradient(x: np.ndarray) -> np.ndarray:
        phi = c * raw(x)
        if phi == 0.0:
            return np.zeros(d)
        theta = 1.0 / (1.0 - float(np.dot(x, x)) / r2)
        return phi * (-2.0 * theta * theta / r2) * x

    def hessian(x: np.ndarray) -> np.ndarray:
        phi = c * raw(x)
        if phi == 0.0:
            return np.zeros((d, d))
        theta = 1.0 / (1.0 - float(np.dot(x, x)) / r2)
        t2 = theta * theta
        outer = np.outer(x, x)
        return phi * (
            (4.0 * t2 * t2 / (r2 * r2)) * outer
            - (8.0 * theta * t2 / (r2 * r2)) * outer
            - (2.0 * t2 / r2) * np.eye(d)
        )

    return SymbolicFunction(group, R, value, gradient, hessian)


def mollify(g: SampledFunction, spec: BumpSpec, measure: Measure) -> SampledFunction:
    """Smooth g by convolving the sampled bump against it."""
    if g.group != spec.group:
        raise SpaceMismatchError(
            "signal lives on %s, bump grid is %s" % (g.group.token(), spec.group.token())
        )
    if not isinstance(measure, GridVolume):
        raise SpaceMismatchError("mollification integrates against grid volume")
    phi = bump(spec).sample()
    return convolve(ConvRequest(phi, g, ScalarSmul(g.vdim), measure))


def ball_points(group: GroupSpace, center, radius: float) -> list[Point]:
    """Grid points strictly inside the metric ball around center."""
    center = group.check_point(center)
    if isinstance(group, Lattice):
        k = int(math.ceil(radius / group.spacing))
        out = []
        for off in itertools.product(range(-k, k + 1), repeat=group.dim):
            p = group.add(center, off)
            if group.dist(p, center) < radius:
                out.append(p)
        return sorted(out)
    if isinstance(group, Integers):
        k = int(math.ceil(radius))
        return [
            (center[0] + j,) for j in range(-k, k + 1) if abs(j) < radius
        ]
    if isinstance(group, Cyclic):
        return sorted(
            (j,) for j in range(group.n) if group.dist((j,), center) < radius
        )
    raise SpaceMismatchError("%s has no declared metric" % group.token())


def continuity_modulus(g: SampledFunction, x0, radius: float) -> float:
    """Exact max of |g(x) - g(x0)| over sampled ball points."""
    x0 = g.group.check_point(x0)
    base = g.eval(x0)
    worst = 0.0
    for p in ball_points(g.group, x0, radius):
        worst = max(worst, float(np.linalg.norm(g.eval(p) - base)))
    return worst


@dataclass
class BallBoundReport:
    distance: float
    bound: float
    epsilon: float
    passed: bool

    def to_dict(self):
        return {
            "distance": self.distance,
            "bound": self.bound,
            "epsilon": self.epsilon,
            "passed": self.passed,
        }


def conv_dist_bound(
    f: SampledFunction,
    g: SampledFunction,
    pairing: Pairing,
    measure: Measure,
    x0,
    radius: float,
    epsilon: float,
) -> BallBoundReport:
    """Distance of (f*g)(x0) from the frozen-g sum, against its bound.

    Requires supp(f) inside the open radius ball at the origin and epsilon
    a valid modulus for g on the ball around x0; both are checked.  The
    bound is epsilon * norm_bound * integral of |f|.
    """
    group = f.group
    x0 = group.check_point(x0)
    zero = group.zero()
    for t in f.support():
        if not (group.dist(t, zero) < radius):
            raise GconvError(
                "support point %r lies outside the radius-%g ball" % (t, radius)
            )
    base = g.eval(x0)
    for p in ball_points(group, x0, radius):
        d = float(np.linalg.norm(g.eval(p) - base))
        if d > epsilon:
            raise GconvError(
                "epsilon=%g is not a valid modulus: |g(%r) - g(x0)| = %g"
                % (epsilon, p, d)
            )
    req = ConvRequest(f, g, pairing, measure)
    actual = convolve_at(req, x0)
    frozen = VecKahan(pairing.dim_out)
    for t in f.support():
        frozen.add(measure.weight(t) * pairing.apply(f._entries[t], base))
    distance = float(np.linalg.norm(actual - frozen.total()))
    bound = epsilon * pairing.norm_bound * f.norm_integral(measure)
    passed = distance <= bound * (1.0 + 1e-10)
    return BallBoundReport(distance, bound, epsilon, passed)


@dataclass
class ConvergenceReport:
    radii: list[float]
    distances: list[float]
    bounds: list[float]
    slack: float
    entry_passed: list[bool]
    target: float | None
    passed: bool
    note: str = field(
        default="slack = 2*Lip*h + 1e-9 covers rectangle-rule quadrature error"
    )

    def rows(self):
        for i in range(len(self.radii)):
            yield {
                "radius": self.radii[i],
                "distance": self.distances[i],
                "bound": self.bounds[i],
                "slack": self.slack,
                "passed": self.entry_passed[i],
            }

    def to_dict(self):
        return {
            "rows": list(self.rows()),
            "target": self.target,
            "passed": self.passed,
            "note": self.note,
        }


def estimate_lipschitz(g: SampledFunction, x0, radius: float) -> float:
    """Largest per-axis difference quotient over ball samples."""
    group = g.group
    if not isinstance(group, Lattice):
        raise SpaceMismatchError("Lipschitz estimation needs a lattice carrier")
    h = group.spacing
    worst = 0.0
    for p in ball_points(group, x0, radius):
        for j in range(group.dim):
            e = [0] * group.dim
            e[j] = 1
            q = group.add(p, tuple(e))
            worst = max(
                worst, float(np.linalg.norm(g.eval(q) - g.eval(p))) / h
            )
    return worst


def convergence_study(
    g: SampledFunction,
    x0,
    radii: list[float],
    measure: Measure,
    lip: float | None = None,
    target: float | None = None,
) -> ConvergenceReport:
    """Mollify g at x0 with shrinking radii and track distance vs bound."""
    group = g.group
    if not isinstance(group, Lattice):
        raise SpaceMismatchError("the convergence study runs on lattices")
    if not isinstance(measure, GridVolume):
        raise SpaceMismatchError("the convergence study integrates grid volume")
    if len(radii) < 1 or any(b >= a for a, b in zip(radii, radii[1:])):
        raise GconvError("radii must be strictly decreasing")
    x0 = group.check_point(x0)
    h = group.spacing
    if lip is None:
        lip = estimate_lipschitz(g, x0, max(radii))
    slack = 2.0 * lip * h + 1e-9
    base = g.eval(x0)
    distances = []
    bounds = []
    entry_passed = []
    for R in radii:
        spec = BumpSpec(R, group.dim, h)  # raises if R < 10h
        phi = bump(spec).sample()
        eps = continuity_modulus(g, x0, R)
        req = ConvRequest(phi, g, ScalarSmul(g.vdim), measure)
        dist = float(np.linalg.norm(convolve_at(req, x0) - base))
        bound = eps * 1.0 * phi.norm_integral(measure)
        distances.append(dist)
        bounds.append(bound)
        entry_passed.append(dist <= bound + slack)
    passed = all(entry_passed) and (target is None or distances[-1] <= target)
    return ConvergenceReport(
        list(radii), distances, bounds, slack, entry_passed, target, passed
    )
