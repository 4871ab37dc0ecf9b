"""Discrete group carriers and the point weights used to integrate over them.

Points are tuples of ints.  Each carrier knows how to add, negate and
subtract points; subtraction is ``x * t**-1`` so it works unchanged for the
one nonabelian carrier (the dihedral group).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GconvError, SpaceMismatchError

Point = tuple[int, ...]


def _as_point(p) -> Point:
    return tuple(int(c) for c in p)


@dataclass(frozen=True)
class GroupSpace:
    """Common interface for the supported carriers."""

    @property
    def point_len(self) -> int:
        raise NotImplementedError

    @property
    def is_abelian(self) -> bool:
        return True

    def zero(self) -> Point:
        return (0,) * self.point_len

    def check_point(self, p) -> Point:
        p = _as_point(p)
        if len(p) != self.point_len:
            raise SpaceMismatchError(
                "point %r has %d coordinates, %s expects %d"
                % (p, len(p), self.token(), self.point_len)
            )
        return self._normalize(p)

    def _normalize(self, p: Point) -> Point:
        return p

    def add(self, a: Point, b: Point) -> Point:
        raise NotImplementedError

    def neg(self, a: Point) -> Point:
        raise NotImplementedError

    def sub(self, x: Point, t: Point) -> Point:
        """x * t**-1; equals coordinatewise x - t on the abelian carriers."""
        return self.add(x, self.neg(t))

    def embed(self, p: Point) -> np.ndarray:
        """Real coordinates of a point, for metric and derivative work."""
        raise SpaceMismatchError("%s has no real embedding" % self.token())

    def dist(self, a: Point, b: Point) -> float:
        raise SpaceMismatchError("%s has no declared metric" % self.token())

    def unit_step(self) -> Point:
        """A canonical generator, used to synthesize translated test data."""
        raise NotImplementedError

    def token(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Integers(GroupSpace):
    @property
    def point_len(self) -> int:
        return 1

    def add(self, a, b):
        return (a[0] + b[0],)

    def neg(self, a):
        return (-a[0],)

    def embed(self, p):
        return np.array([float(p[0])])

    def dist(self, a, b):
        return float(abs(a[0] - b[0]))

    def unit_step(self):
        return (1,)

    def token(self):
        return "Z"


@dataclass(frozen=True)
class Cyclic(GroupSpace):
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise GconvError("cyclic order must be >= 1, got %d" % self.n)

    @property
    def point_len(self) -> int:
        return 1

    def _normalize(self, p):
        return (p[0] % self.n,)

    def add(self, a, b):
        return ((a[0] + b[0]) % self.n,)

    def neg(self, a):
        return ((-a[0]) % self.n,)

    def dist(self, a, b):
        d = (a[0] - b[0]) % self.n
        return float(min(d, self.n - d))

    def unit_step(self):
        return (1 % self.n,)

    def token(self):
        return "Zn:%d" % self.n


@dataclass(frozen=True)
class Lattice(GroupSpace):
    dim: int
    spacing: float

    def __post_init__(self):
        if self.dim < 1:
            raise GconvError("lattice dimension must be >= 1, got %d" % self.dim)
        if not (self.spacing > 0.0):
            raise GconvError("lattice spacing must be positive, got %r" % self.spacing)

    @property
    def point_len(self) -> int:
        return self.dim

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def embed(self, p):
        return np.array([c * self.spacing for c in p])

    def dist(self, a, b):
        return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b))) * self.spacing

    def unit_step(self):
        return (1,) + (0,) * (self.dim - 1)

    def token(self):
        return "lattice:%d:%s" % (self.dim, format_float(self.spacing))


@dataclass(frozen=True)
class Dihedral(GroupSpace):
    """Symmetries of the regular n-gon; (a, f) is rotation^a * reflection^f."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise GconvError("dihedral order parameter must be >= 1, got %d" % self.n)

    @property
    def point_len(self) -> int:
        return 2

    @property
    def is_abelian(self) -> bool:
        return self.n <= 2

    def _normalize(self, p):
        return (p[0] % self.n, p[1] & 1)

    def check_point(self, p):
        p = _as_point(p)
        if len(p) != 2:
            raise SpaceMismatchError(
                "point %r has %d coordinates, %s expects 2" % (p, len(p), self.token())
            )
        if p[1] not in (0, 1):
            raise SpaceMismatchError("flip coordinate must be 0 or 1, got %d" % p[1])
        return (p[0] % self.n, p[1])

    def add(self, a, b):
        # (a1,f1)(a2,f2): the first flip conjugates the second rotation
        rot = a[0] - b[0] if a[1] else a[0] + b[0]
        return (rot % self.n, a[1] ^ b[1])

    def neg(self, a):
        if a[1]:
            return a  # reflections are involutions
        return ((-a[0]) % self.n, 0)

    def unit_step(self):
        return (1 % self.n, 0)

    def token(self):
        return "D%d" % self.n


def format_float(x: float) -> str:
    return "%.12g" % x


def parse_group(token: str) -> GroupSpace:
    """Inverse of ``GroupSpace.token``.  Raises GconvError on bad input."""
    tok = token.strip()
    try:
        if tok == "Z":
            return Integers()
        if tok.startswith("Zn:"):
            return Cyclic(int(tok[3:]))
        if tok.startswith("lattice:"):
            _, d, h = tok.split(":")
            return Lattice(int(d), float(h))
        if tok.startswith("D"):
            return Dihedral(int(tok[1:]))
    except (ValueError, GconvError) as exc:
        raise GconvError("bad group token %r: %s" % (token, exc)) from None
    raise GconvError("unknown group token %r" % token)


class Measure:
    """Per-point weight together with declared invariance flags."""

    left_invariant = False
    right_invariant = False
    neg_invariant = False

    def __init__(self, group: GroupSpace):
        self.group = group

    def weight(self, p: Point) -> float:
        raise NotImplementedError

    def token(self) -> str:
        raise NotImplementedError


class CountingMeasure(Measure):
    left_invariant = True
    right_invariant = True
    neg_invariant = True

    def weight(self, p):
        return 1.0

    def token(self):
        return "counting"


class GridVolume(Measure):
    """Cell volume spacing**dim on a lattice; the Riemann-sum weight."""

    left_invariant = True
    right_invariant = True
    neg_invariant = True

    def __init__(self, group: Lattice):
        if not isinstance(group, Lattice):
            raise SpaceMismatchError("grid volume weight needs a lattice carrier")
        super().__init__(group)
        self.cell = group.spacing**group.dim

    def weight(self, p):
        return self.cell

    def token(self):
        return "grid"


class WeightedMeasure(Measure):
    """Arbitrary nonnegative per-point weights; declares no invariance."""

    def __init__(self, group: GroupSpace, weights: dict[Point, float], default: float = 1.0):
        super().__init__(group)
        self.weights = {group.check_point(p): float(w) for p, w in weights.items()}
        self.default = float(default)

    def weight(self, p):
        return self.weights.get(p, self.default)

    def token(self):
        return "weighted"


def parse_measure(token: str, group: GroupSpace) -> Measure:
    tok = token.strip().lower()
    if tok == "counting":
        return CountingMeasure(group)
    if tok == "grid":
        return GridVolume(group)
    raise GconvError("unknown measure token %r" % token)
