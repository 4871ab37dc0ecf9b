"""Bilinear pairings: the multiplication plugged into a convolution.

A pairing maps R^dim_left x R^dim_right -> R^dim_out bilinearly and
declares ``norm_bound`` with |L(e, e')| <= norm_bound * |e| * |e'| in
Euclidean norms.  ``lift`` extends a pairing to matrix-valued right
arguments column by column, which is how derivative fields are convolved.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError


class Pairing:
    dim_left: int
    dim_right: int
    dim_out: int
    norm_bound: float

    def apply(self, e, ep) -> np.ndarray:
        e = self._coerce(e, self.dim_left, "left")
        ep = self._coerce(ep, self.dim_right, "right")
        return self._apply(e, ep)

    def _apply(self, e, ep):
        raise NotImplementedError

    @staticmethod
    def _coerce(v, dim, side):
        v = np.atleast_1d(np.asarray(v, dtype=float))
        if v.shape != (dim,):
            raise DimensionMismatchError(
                "%s argument has shape %r, expected (%d,)" % (side, v.shape, dim)
            )
        return v


class Mul(Pairing):
    """Plain scalar multiplication."""

    dim_left = dim_right = dim_out = 1
    norm_bound = 1.0

    def _apply(self, e, ep):
        return e * ep


class ScalarSmul(Pairing):
    """Scalar times vector: (k, v) -> k*v."""

    def __init__(self, m: int):
        if m < 1:
            raise DimensionMismatchError("vector dimension must be >= 1")
        self.dim_left = 1
        self.dim_right = m
        self.dim_out = m
        self.norm_bound = 1.0

    def _apply(self, e, ep):
        return e[0] * ep


class Tensor3(Pairing):
    """General bilinear map given by a coefficient tensor c[f, i, j].

    The default norm bound is the Frobenius norm of the tensor, which
    dominates the operator norm; a sharper bound may be supplied.
    """

    def __init__(self, coeffs, norm_bound: float | None = None):
        c = np.array(coeffs, dtype=float)
        if c.ndim != 3:
            raise DimensionMismatchError("coefficient tensor must have 3 axes")
        self.coeffs = c
        self.dim_out, self.dim_left, self.dim_right = c.shape
        self.norm_bound = (
            float(np.sqrt(np.sum(c * c))) if norm_bound is None else float(norm_bound)
        )

    def _apply(self, e, ep):
        return np.einsum("fij,i,j->f", self.coeffs, e, ep)


class TransposeOf(Pairing):
    """The same pairing with its arguments swapped."""

    def __init__(self, inner: Pairing):
        self.inner = inner
        self.dim_left = inner.dim_right
        self.dim_right = inner.dim_left
        self.dim_out = inner.dim_out
        self.norm_bound = inner.norm_bound

    def _apply(self, e, ep):
        return self.inner.apply(ep, e)


class Lifted(Pairing):
    """Column-wise lift of a pairing to matrix-valued right arguments.

    The right slot takes a (dim_right x d) matrix flattened column-major;
    column j of the result is inner(e, column j of the argument).  The
    norm bound carries over because the flattened 2-norm of a matrix is
    its Frobenius norm.
    """

    def __init__(self, inner: Pairing, d: int):
        if d < 1:
            raise DimensionMismatchError("lift width must be >= 1")
        self.inner = inner
        self.d = d
        self.dim_left = inner.dim_left
        self.dim_right = inner.dim_right * d
        self.dim_out = inner.dim_out * d
        self.norm_bound = inner.norm_bound

    def _apply(self, e, ep):
        m = ep.reshape(self.inner.dim_right, self.d, order="F")
        cols = [self.inner.apply(e, m[:, j]) for j in range(self.d)]
        return np.stack(cols, axis=1).reshape(self.dim_out, order="F")


def transpose(pairing: Pairing) -> Pairing:
    """Swap the arguments; an exact involution."""
    if isinstance(pairing, TransposeOf):
        return pairing.inner
    return TransposeOf(pairing)


def lift(pairing: Pairing, d: int) -> Pairing:
    return Lifted(pairing, d)


def assoc_compatible(
    l1: Pairing,
    l2: Pairing,
    l3: Pairing,
    l4: Pairing,
    samples: int = 20,
    rng=None,
) -> bool:
    """Whether l2(l1(x1,x2),x3) = l3(x1,l4(x2,x3)) on random triples.

    This is the compatibility a quadruple needs for convolution to
    associate.  Checked within 1e-10 relative on `samples` draws.
    """
    if samples < 1:
        raise DimensionMismatchError("samples must be >= 1")
    if l2.dim_left != l1.dim_out:
        raise DimensionMismatchError("l2 left dim must match l1 output dim")
    if l3.dim_right != l4.dim_out:
        raise DimensionMismatchError("l3 right dim must match l4 output dim")
    if l3.dim_left != l1.dim_left or l4.dim_left != l1.dim_right:
        raise DimensionMismatchError("outer input dims disagree across the quadruple")
    if l4.dim_right != l2.dim_right:
        raise DimensionMismatchError("third-slot dims disagree across the quadruple")
    if l3.dim_out != l2.dim_out:
        raise DimensionMismatchError("quadruple output dims disagree")
    if rng is None:
        rng = np.random.default_rng(0)
    for _ in range(samples):
        x1 = rng.uniform(-1.0, 1.0, l1.dim_left)
        x2 = rng.uniform(-1.0, 1.0, l1.dim_right)
        x3 = rng.uniform(-1.0, 1.0, l2.dim_right)
        lhs = l2.apply(l1.apply(x1, x2), x3)
        rhs = l3.apply(x1, l4.apply(x2, x3))
        if np.max(np.abs(lhs - rhs)) > 1e-10 * (1.0 + np.max(np.abs(rhs))):
            return False
    return True
