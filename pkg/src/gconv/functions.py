"""Finitely supported vector-valued signals and their on-disk format.

A :class:`SampledFunction` maps finitely many group points to vectors in
R^vdim and is zero elsewhere.  Stored vectors are never zero: pruning at
construction keeps the support canonical, so equality of signals is
equality of the stored tables.

The CSV format is one signal per file:

    # group=<token> vdim=<m>
    i1,...,id,v1,...,vm

with the support sorted lexicographically and values printed with %.12g.
Parsing a file the writer produced and writing it again is byte-identical.
"""

from __future__ import annotations

import itertools
import math
import os
import re
import tempfile
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._accum import VecKahan, kahan_sum
from .errors import CsvFormatError, DimensionMismatchError, GconvError
from .groups import GroupSpace, Lattice, Measure, Point, format_float, parse_group

_INT_RE = re.compile(r"^-?\d+$")


class SampledFunction:
    """A finitely supported function from a group into R^vdim."""

    __slots__ = ("group", "vdim", "_entries", "_support")

    def __init__(self, group: GroupSpace, vdim: int, entries=None):
        if vdim < 1:
            raise DimensionMismatchError("vdim must be >= 1, got %d" % vdim)
        self.group = group
        self.vdim = vdim
        table: dict[Point, np.ndarray] = {}
        for p, v in (entries or {}).items():
            p = group.check_point(p)
            vec = np.atleast_1d(np.asarray(v, dtype=float))
            if vec.shape != (vdim,):
                raise DimensionMismatchError(
                    "value at %r has shape %r, expected (%d,)" % (p, vec.shape, vdim)
                )
            if np.all(vec == 0.0):
                continue
            table[p] = vec
        self._entries = table
        self._support = None

    @classmethod
    def from_scalar(cls, group: GroupSpace, pairs: dict) -> "SampledFunction":
        return cls(group, 1, {p: (float(v),) for p, v in pairs.items()})

    def eval(self, p) -> np.ndarray:
        p = self.group.check_point(p)
        v = self._entries.get(p)
        if v is None:
            return np.zeros(self.vdim)
        return v.copy()

    def support(self) -> list[Point]:
        if self._support is None:
            self._support = sorted(self._entries)
        return list(self._support)

    @property
    def support_size(self) -> int:
        return len(self._entries)

    def is_empty(self) -> bool:
        return not self._entries

    def scale(self, c: float) -> "SampledFunction":
        c = float(c)
        return SampledFunction(
            self.group, self.vdim, {p: c * v for p, v in self._entries.items()}
        )

    def translate(self, shift) -> "SampledFunction":
        """The signal x -> f(shift + x)."""
        g = self.group
        shift = g.check_point(shift)
        back = g.neg(shift)
        return SampledFunction(
            g, self.vdim, {g.add(back, p): v for p, v in self._entries.items()}
        )

    def integral(self, measure: Measure) -> np.ndarray:
        self._check_measure(measure)
        acc = VecKahan(self.vdim)
        for p in self.support():
            acc.add(measure.weight(p) * self._entries[p])
        return acc.total()

    def norm_integral(self, measure: Measure) -> float:
        self._check_measure(measure)
        return kahan_sum(
            measure.weight(p) * float(np.linalg.norm(self._entries[p]))
            for p in self.support()
        )

    def _check_measure(self, measure: Measure):
        if measure.group != self.group:
            raise GconvError("measure is defined on a different carrier")

    def __repr__(self):
        return "SampledFunction(%s, vdim=%d, %d points)" % (
            self.group.token(),
            self.vdim,
            len(self._entries),
        )


def delta(group: GroupSpace, point, value=1.0, vdim: int = 1) -> SampledFunction:
    vec = np.full(vdim, float(value)) if np.isscalar(value) else value
    return SampledFunction(group, vdim, {point: vec})


def lin_comb(a: float, f: SampledFunction, b: float, g: SampledFunction) -> SampledFunction:
    if f.group != g.group or f.vdim != g.vdim:
        raise DimensionMismatchError("operands live on different spaces")
    entries: dict[Point, np.ndarray] = {}
    for p in f.support():
        entries[p] = a * f._entries[p]
    for p in g.support():
        if p in entries:
            entries[p] = entries[p] + b * g._entries[p]
        else:
            entries[p] = b * g._entries[p]
    return SampledFunction(f.group, f.vdim, entries)


def max_deviation(f: SampledFunction, g: SampledFunction) -> float:
    """Sup-norm distance between two signals on the union of supports."""
    if f.group != g.group or f.vdim != g.vdim:
        raise DimensionMismatchError("operands live on different spaces")
    worst = 0.0
    for p in set(f.support()) | set(g.support()):
        fv = f._entries.get(p)
        gv = g._entries.get(p)
        if fv is None:
            d = float(np.max(np.abs(gv)))
        elif gv is None:
            d = float(np.max(np.abs(fv)))
        else:
            d = float(np.max(np.abs(fv - gv)))
        worst = max(worst, d)
    return worst


@dataclass(frozen=True)
class SymbolicFunction:
    """A smooth scalar function on a lattice's ambient space.

    ``value`` takes real coordinates; the function must vanish outside the
    open ball of ``radius`` around the origin.  ``gradient`` and ``hessian``
    are analytic derivatives used by the convolution calculus.
    """

    group: Lattice
    radius: float
    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    hessian: Callable[[np.ndarray], np.ndarray] | None = None

    def _grid_points(self):
        h = self.group.spacing
        k = int(math.ceil(self.radius / h))
        rng = range(-k, k + 1)
        for p in itertools.product(rng, repeat=self.group.dim):
            x = self.group.embed(p)
            if float(np.dot(x, x)) < self.radius**2:
                yield p, x

    def sample(self) -> SampledFunction:
        return SampledFunction(
            self.group, 1, {p: (self.value(x),) for p, x in self._grid_points()}
        )

    def sample_gradient(self) -> SampledFunction:
        d = self.group.dim
        return SampledFunction(
            self.group, d, {p: self.gradient(x) for p, x in self._grid_points()}
        )

    def sample_dderiv(self, v) -> SampledFunction:
        v = np.asarray(v, dtype=float)
        return SampledFunction(
            self.group,
            1,
            {p: (float(np.dot(self.gradient(x), v)),) for p, x in self._grid_points()},
        )

    def sample_d2(self, v, w=None) -> SampledFunction:
        if self.hessian is None:
            raise GconvError("second derivatives need a hessian")
        v = np.asarray(v, dtype=float)
        w = v if w is None else np.asarray(w, dtype=float)
        return SampledFunction(
            self.group,
            1,
            {p: (float(v @ self.hessian(x) @ w),) for p, x in self._grid_points()},
        )


def dumps_csv(fn: SampledFunction) -> str:
    lines = ["# group=%s vdim=%d" % (fn.group.token(), fn.vdim)]
    for p in fn.support():
        coords = ",".join(str(c) for c in p)
        vals = ",".join(format_float(v) for v in fn._entries[p])
        lines.append("%s,%s" % (coords, vals))
    return "\n".join(lines) + "\n"


def atomic_write_text(path: str, text: str) -> None:
    """Write via a temp file and rename: the target never holds a partial file."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".gconv-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(fn: SampledFunction, path: str) -> None:
    atomic_write_text(path, dumps_csv(fn))


def _parse_header(line: str, line_no: int):
    m = re.match(r"^#\s*group=(\S+)\s+vdim=(\d+)\s*$", line)
    if not m:
        raise CsvFormatError("expected header '# group=<token> vdim=<m>'", line_no)
    try:
        group = parse_group(m.group(1))
    except GconvError as exc:
        raise CsvFormatError(str(exc), line_no) from None
    return group, int(m.group(2))


def _canonical_coord(group: GroupSpace, coords, line_no: int) -> Point:
    p = tuple(coords)
    canon = group.check_point(p)
    if canon != p:
        raise CsvFormatError("coordinates %r are not canonical for %s" % (p, group.token()), line_no)
    return canon


def loads_csv(text: str) -> SampledFunction:
    lines = text.splitlines()
    if not lines:
        raise CsvFormatError("empty file", 1)
    group, vdim = _parse_header(lines[0], 1)
    if vdim < 1:
        raise CsvFormatError("vdim must be >= 1", 1)
    d = group.point_len
    entries: dict[Point, np.ndarray] = {}
    for i, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != d + vdim:
            raise CsvFormatError(
                "expected %d fields (%d coords + %d values), got %d"
                % (d + vdim, d, vdim, len(parts)),
                i,
            )
        coords = []
        for tok in parts[:d]:
            tok = tok.strip()
            if not _INT_RE.match(tok):
                raise CsvFormatError("bad integer coordinate %r" % tok, i)
            coords.append(int(tok))
        try:
            p = _canonical_coord(group, coords, i)
        except CsvFormatError:
            raise
        except GconvError as exc:
            raise CsvFormatError(str(exc), i) from None
        if p in entries:
            raise CsvFormatError("duplicate point %r" % (p,), i)
        try:
            vals = np.array([float(tok) for tok in parts[d:]])
        except ValueError as exc:
            raise CsvFormatError("bad value: %s" % exc, i) from None
        entries[p] = vals
    return SampledFunction(group, vdim, entries)


def read_csv(path: str) -> SampledFunction:
    with open(path, "r") as fh:
        return loads_csv(fh.read())
