"""Derivatives of convolutions on lattice discretizations.

The derivative of f * g with a smooth g is again a convolution: pair f
with the gradient field of g under the column-wise lift of the pairing.
Directional derivatives recurse the same way, so C^n checks reduce to
comparing convolutions of analytic derivatives against repeated central
finite differences of the order-0 output.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .convolution import ConvRequest, convolve
from .errors import DimensionMismatchError, GconvError, SpaceMismatchError
from .functions import SampledFunction, SymbolicFunction
from .groups import Lattice, Measure, Point
from .pairings import Pairing, lift


def _require_lattice(group) -> Lattice:
    if not isinstance(group, Lattice):
        raise SpaceMismatchError("derivatives need a lattice carrier")
    return group


def _basis_point(d: int, axis: int) -> Point:
    e = [0] * d
    e[axis] = 1
    return tuple(e)


@dataclass
class JacobianField:
    """Finitely supported map from lattice points to (rows x d) matrices."""

    group: Lattice
    rows: int
    entries: dict[Point, np.ndarray]

    def __post_init__(self):
        d = self.group.dim
        pruned = {}
        for p, m in self.entries.items():
            p = self.group.check_point(p)
            m = np.asarray(m, dtype=float)
            if m.shape != (self.rows, d):
                raise DimensionMismatchError(
                    "matrix at %r has shape %r, expected (%d, %d)"
                    % (p, m.shape, self.rows, d)
                )
            if np.all(m == 0.0):
                continue
            pruned[p] = m
        self.entries = pruned

    def support(self) -> list[Point]:
        return sorted(self.entries)

    def eval(self, p) -> np.ndarray:
        p = self.group.check_point(p)
        m = self.entries.get(p)
        if m is None:
            return np.zeros((self.rows, self.group.dim))
        return m.copy()

    def matvec(self, v) -> SampledFunction:
        v = np.asarray(v, dtype=float)
        return SampledFunction(
            self.group, self.rows, {p: m @ v for p, m in self.entries.items()}
        )

    def to_flat(self) -> SampledFunction:
        d = self.group.dim
        return SampledFunction(
            self.group,
            self.rows * d,
            {p: m.reshape(self.rows * d, order="F") for p, m in self.entries.items()},
        )

    @classmethod
    def from_flat(cls, fn: SampledFunction, rows: int) -> "JacobianField":
        group = _require_lattice(fn.group)
        d = group.dim
        if fn.vdim != rows * d:
            raise DimensionMismatchError(
                "flat vdim %d does not factor as %d x %d" % (fn.vdim, rows, d)
            )
        return cls(
            group,
            rows,
            {p: fn._entries[p].reshape(rows, d, order="F") for p in fn.support()},
        )


def fd_jacobian(f: SampledFunction, x) -> np.ndarray:
    """Central-difference Jacobian of a sampled signal at one point."""
    group = _require_lattice(f.group)
    x = group.check_point(x)
    d = group.dim
    cols = []
    for j in range(d):
        e = _basis_point(d, j)
        hi = f.eval(group.add(x, e))
        lo = f.eval(group.sub(x, e))
        cols.append((hi - lo) / (2.0 * group.spacing))
    return np.stack(cols, axis=1)


def fd_jacobian_field(f: SampledFunction) -> JacobianField:
    """fd_jacobian evaluated wherever it can be nonzero."""
    group = _require_lattice(f.group)
    d = group.dim
    pts = set()
    for p in f.support():
        pts.add(p)
        for j in range(d):
            e = _basis_point(d, j)
            pts.add(group.add(p, e))
            pts.add(group.sub(p, e))
    return JacobianField(group, f.vdim, {p: fd_jacobian(f, p) for p in sorted(pts)})


def _gradient_flat(g, d: int, pairing: Pairing) -> SampledFunction:
    if isinstance(g, SymbolicFunction):
        if pairing.dim_right != 1:
            raise DimensionMismatchError(
                "symbolic operands are scalar; pairing expects vdim %d"
                % pairing.dim_right
            )
        return g.sample_gradient()
    return fd_jacobian_field(g).to_flat()


def conv_fderiv(
    f: SampledFunction, g, pairing: Pairing, measure: Measure
) -> JacobianField:
    """Total derivative of the convolution: f paired with the gradient of g.

    g may be symbolic (analytic gradient) or sampled (central-difference
    gradient field).  Returns a JacobianField with pairing.dim_out rows.
    """
    group = _require_lattice(f.group)
    d = group.dim
    dg_flat = _gradient_flat(g, d, pairing)
    req = ConvRequest(f, dg_flat, lift(pairing, d), measure)
    return JacobianField.from_flat(convolve(req), pairing.dim_out)


def conv_dderiv(
    f: SampledFunction, g, pairing: Pairing, measure: Measure, v
) -> SampledFunction:
    """Directional derivative along v: f convolved with t -> Dg(t) v."""
    _require_lattice(f.group)
    v = np.asarray(v, dtype=float)
    if isinstance(g, SymbolicFunction):
        if pairing.dim_right != 1:
            raise DimensionMismatchError("symbolic operands are scalar")
        dgv = g.sample_dderiv(v)
    else:
        dgv = fd_jacobian_field(g).matvec(v)
    return convolve(ConvRequest(f, dgv, pairing, measure))


def fd_axis(u: SampledFunction, axis: int) -> SampledFunction:
    """One central-difference application along a lattice axis."""
    group = _require_lattice(u.group)
    e = _basis_point(group.dim, axis)
    pts = set()
    for p in u.support():
        pts.add(group.add(p, e))
        pts.add(group.sub(p, e))
        pts.add(p)
    two_h = 2.0 * group.spacing
    entries = {
        p: (u.eval(group.add(p, e)) - u.eval(group.sub(p, e))) / two_h
        for p in sorted(pts)
    }
    return SampledFunction(group, u.vdim, entries)


def interior_window(f: SampledFunction, g_radius: float) -> list[tuple[int, int]]:
    """Per-axis index ranges a safe margin inside the output support hull.

    The hull is supp(f) expanded by the radius of the smooth factor; the
    margin is ceil(R/h) + 2 cells, outside of which support truncation
    pollutes finite differences of the convolution.
    """
    group = _require_lattice(f.group)
    d = group.dim
    k = int(math.ceil(g_radius / group.spacing))
    margin = k + 2
    f_pts = f.support()
    if not f_pts:
        raise GconvError("empty signal has no interior window")
    lo = [min(p[j] for p in f_pts) - k for j in range(d)]
    hi = [max(p[j] for p in f_pts) + k for j in range(d)]
    window = [(lo[j] + margin, hi[j] - margin) for j in range(d)]
    if any(a > b for a, b in window):
        raise GconvError("interior window is empty; signal too small for R")
    return window


def window_points(window: list[tuple[int, int]]):
    return itertools.product(*(range(a, b + 1) for a, b in window))


def _max_dev_on(window, a: SampledFunction, b: SampledFunction) -> float:
    worst = 0.0
    for p in window_points(window):
        d = float(np.max(np.abs(a.eval(p) - b.eval(p))))
        if d > worst:
            worst = d
    return worst


@dataclass
class SmoothnessReport:
    order: int
    deviations: list[float]  # per order 0..n, max over the interior window
    tol: float
    h: float
    window: list[tuple[int, int]]
    passed: bool
    note: str = "tolerance is a declared choice, not a derived bound"

    def to_dict(self):
        return {
            "order": self.order,
            "deviations": self.deviations,
            "tol": self.tol,
            "h": self.h,
            "window": [list(w) for w in self.window],
            "passed": self.passed,
            "note": self.note,
        }


def cont_diff_check(
    f: SampledFunction,
    g: SymbolicFunction,
    pairing: Pairing,
    measure: Measure,
    n: int,
    tol: float,
) -> SmoothnessReport:
    """Check that f * g is C^n by the directional-derivative recursion.

    Order k along each axis compares the analytic route (f convolved with
    the k-th derivative of g) against the central-difference operator
    applied k times to the order-0 convolution, on interior points only.
    Orders above 2 are not supported.
    """
    group = _require_lattice(f.group)
    if n not in (0, 1, 2):
        raise GconvError("supported orders are 0, 1, 2; got %d" % n)
    if n == 2 and g.hessian is None:
        raise GconvError("order 2 needs analytic second derivatives")
    d = group.dim
    conv0 = convolve(ConvRequest(f, g.sample(), pairing, measure))
    window = interior_window(f, g.radius)
    deviations = [0.0]
    if n >= 1:
        worst = 0.0
        for j in range(d):
            formula = convolve(ConvRequest(f, g.sample_dderiv(_basis_point(d, j)), pairing, measure))
            oracle = fd_axis(conv0, j)
            worst = max(worst, _max_dev_on(window, formula, oracle))
        deviations.append(worst)
    if n >= 2:
        worst = 0.0
        for j in range(d):
            e = _basis_point(d, j)
            formula = convolve(ConvRequest(f, g.sample_d2(e), pairing, measure))
            oracle = fd_axis(fd_axis(conv0, j), j)
            worst = max(worst, _max_dev_on(window, formula, oracle))
        deviations.append(worst)
    passed = all(dev <= tol for dev in deviations)
    return SmoothnessReport(n, deviations, tol, group.spacing, window, passed)
