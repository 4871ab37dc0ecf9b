"""Fast scalar convolution via an in-repo radix-2 transform.

Dense scalar signals on Z or Z/n are convolved in O(n log n) by
transform-multiply-inverse with power-of-two zero padding, and checked
differentially against the naive kernels.  Only the commutative scalar
case factorizes this way; everything else belongs to the sparse path.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import DimensionMismatchError, GconvError
from .functions import SampledFunction
from .groups import CountingMeasure, Cyclic, Integers
from .pairings import Mul, ScalarSmul

_twiddle_cache: dict[tuple[int, bool], tuple[np.ndarray, np.ndarray]] = {}


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def _next_pow2(n: int) -> int:
    p = 1
    while p < n:
        p <<= 1
    return p


def _tables(n: int, inverse: bool):
    """Twiddle factors exp(-+2*pi*i*k/n); shared by both kernel backends."""
    key = (n, inverse)
    tab = _twiddle_cache.get(key)
    if tab is None:
        angles = (-2.0 * np.pi / n) * np.arange(n // 2, dtype=np.float64)
        wre = np.cos(angles)
        wim = np.sin(angles)
        if inverse:
            wim = -wim
        tab = (wre, wim)
        _twiddle_cache[key] = tab
    return tab


def fft(x, inverse: bool = False) -> np.ndarray:
    """Radix-2 transform of a power-of-two-length complex array."""
    x = np.asarray(x)
    n = len(x)
    if not _is_pow2(n):
        raise GconvError("transform length must be a power of two, got %d" % n)
    re = np.ascontiguousarray(x.real, dtype=np.float64).copy()
    im = np.ascontiguousarray(x.imag, dtype=np.float64).copy()
    wre, wim = _tables(n, inverse)
    kernels.fft_radix2(re, im, wre, wim)
    if inverse:
        scale = 1.0 / n
        re *= scale
        im *= scale
    return re + 1j * im


def _spectral_multiply_inverse(ar, ai, br, bi, n):
    # the product and inverse stages are shared numpy code on both backends
    cr = ar * br - ai * bi
    ci = ar * bi + ai * br
    wre, wim = _tables(n, True)
    kernels.fft_radix2(cr, ci, wre, wim)
    cr *= 1.0 / n
    return cr


def _fft_pair(values, n):
    re = np.zeros(n)
    re[: len(values)] = values
    im = np.zeros(n)
    wre, wim = _tables(n, False)
    kernels.fft_radix2(re, im, wre, wim)
    return re, im


def _linear_fft_conv(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out_len = len(a) + len(b) - 1
    n = _next_pow2(out_len)
    ar, ai = _fft_pair(a, n)
    br, bi = _fft_pair(b, n)
    return _spectral_multiply_inverse(ar, ai, br, bi, n)[:out_len]


@dataclass(frozen=True)
class DenseSignal:
    """Contiguous scalar signal: circular on Z/n or compact on Z."""

    values: np.ndarray
    kind: str = "linear"  # "circular" | "linear"
    offset: int = 0

    def __post_init__(self):
        if self.kind not in ("circular", "linear"):
            raise GconvError("kind must be 'circular' or 'linear'")
        if self.kind == "circular" and self.offset != 0:
            raise GconvError("circular signals have no offset")
        v = np.ascontiguousarray(self.values, dtype=np.float64)
        if v.ndim != 1 or len(v) < 1:
            raise GconvError("values must be a nonempty 1-d array")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_sampled(cls, fn: SampledFunction) -> "DenseSignal":
        if fn.vdim != 1:
            raise DimensionMismatchError("dense signals are scalar (vdim 1)")
        if isinstance(fn.group, Cyclic):
            vals = np.zeros(fn.group.n)
            for p in fn.support():
                vals[p[0]] = fn._entries[p][0]
            return cls(vals, "circular")
        if isinstance(fn.group, Integers):
            pts = fn.support()
            if not pts:
                return cls(np.zeros(1), "linear", 0)
            lo = pts[0][0]
            vals = np.zeros(pts[-1][0] - lo + 1)
            for p in pts:
                vals[p[0] - lo] = fn._entries[p][0]
            return cls(vals, "linear", lo)
        raise GconvError("dense signals live on Z or Z/n")

    def to_sampled(self) -> SampledFunction:
        if self.kind == "circular":
            group = Cyclic(len(self.values))
            entries = {(i,): (v,) for i, v in enumerate(self.values)}
        else:
            group = Integers()
            entries = {
                (self.offset + i,): (v,) for i, v in enumerate(self.values)
            }
        return SampledFunction(group, 1, entries)

    def shifted(self, k: int) -> "DenseSignal":
        if self.kind != "circular":
            raise GconvError("shift is defined for circular signals")
        return DenseSignal(np.roll(self.values, k), "circular")


def fast_convolve(a: DenseSignal, b: DenseSignal) -> DenseSignal:
    """Transform-based convolution; linear results carry summed offsets."""
    if a.kind != b.kind:
        raise GconvError("cannot mix circular and linear signals")
    if a.kind == "circular":
        n = len(a.values)
        if len(b.values) != n:
            raise GconvError("circular convolution needs equal lengths")
        if _is_pow2(n):
            ar, ai = _fft_pair(a.values, n)
            br, bi = _fft_pair(b.values, n)
            return DenseSignal(_spectral_multiply_inverse(ar, ai, br, bi, n), "circular")
        lin = _linear_fft_conv(a.values, b.values)
        out = lin[:n].copy()
        out[: n - 1] += lin[n:]
        return DenseSignal(out, "circular")
    out = _linear_fft_conv(a.values, b.values)
    return DenseSignal(out, "linear", a.offset + b.offset)


def naive_convolve(a: DenseSignal, b: DenseSignal) -> DenseSignal:
    """Direct-sum twin of fast_convolve, running on the naive kernels."""
    if a.kind != b.kind:
        raise GconvError("cannot mix circular and linear signals")
    if a.kind == "circular":
        n = len(a.values)
        if len(b.values) != n:
            raise GconvError("circular convolution needs equal lengths")
        idx = np.arange(n, dtype=np.int64)
        return DenseSignal(kernels.naive_circular(idx, a.values, b.values), "circular")
    la, lb = len(a.values), len(b.values)
    idx = np.arange(la, dtype=np.int64) + a.offset
    out = kernels.naive_linear(
        idx, a.values, b.values, b.offset, a.offset + b.offset, la + lb - 1
    )
    return DenseSignal(out, "linear", a.offset + b.offset)


def try_fast_request(req) -> SampledFunction | None:
    """Dense route for a ConvRequest, or None when it does not apply.

    Eligible: standard variant, counting weight, carrier Z or Z/n, and a
    scalar pairing (plain multiplication, or scalar-times-vector handled
    one component at a time).
    """
    if req.variant != "standard":
        return None
    if type(req.measure) is not CountingMeasure:
        return None
    if not isinstance(req.group, (Integers, Cyclic)):
        return None
    pairing = req.pairing
    if not (type(pairing) is Mul or type(pairing) is ScalarSmul):
        return None
    if req.f.is_empty() or req.g.is_empty():
        return SampledFunction(req.group, pairing.dim_out, {})
    fa = DenseSignal.from_sampled(req.f)
    m = req.g.vdim
    columns = []
    for i in range(m):
        comp = SampledFunction(
            req.group, 1, {p: (req.g._entries[p][i],) for p in req.g.support()}
        )
        if comp.is_empty():
            columns.append(None)
            continue
        columns.append(fast_convolve(fa, DenseSignal.from_sampled(comp)))
    sized = [c for c in columns if c is not None]
    if not sized:
        return SampledFunction(req.group, m, {})
    if isinstance(req.group, Cyclic):
        n = req.group.n
        entries = {}
        for k in range(n):
            vec = np.array([0.0 if c is None else c.values[k] for c in columns])
            entries[(k,)] = vec
        return SampledFunction(req.group, m, entries)
    lo = min(c.offset for c in sized)
    hi = max(c.offset + len(c.values) for c in sized)
    entries = {}
    for k in range(lo, hi):
        vec = np.zeros(m)
        for i, c in enumerate(columns):
            if c is not None and c.offset <= k < c.offset + len(c.values):
                vec[i] = c.values[k - c.offset]
        entries[(k,)] = vec
    return SampledFunction(req.group, m, entries)


@dataclass
class BenchEntry:
    size: int
    naive_time: float
    fast_time: float
    max_deviation: float

    def to_dict(self):
        return {
            "size": self.size,
            "naive_time": self.naive_time,
            "fast_time": self.fast_time,
            "max_deviation": self.max_deviation,
        }


def relative_deviation(got: np.ndarray, want: np.ndarray) -> float:
    return float(np.max(np.abs(got - want)) / (1.0 + np.max(np.abs(want))))


def bench(sizes, trials: int = 3, rng=None) -> list[BenchEntry]:
    """Median wall-clock times of both paths on random dense signals.

    Runs single-threaded for timing stability; the deviation column is
    the differential check of the fast result against the naive kernel.
    """
    if trials < 1:
        raise GconvError("trials must be >= 1")
    for s in sizes:
        if s < 64:
            raise GconvError("bench sizes must be >= 64, got %d" % s)
    if rng is None:
        rng = np.random.default_rng(0)
    out = []
    for size in sizes:
        a = DenseSignal(rng.uniform(-1.0, 1.0, size), "linear", 0)
        b = DenseSignal(rng.uniform(-1.0, 1.0, size), "linear", 0)
        naive_times = []
        naive_res = None
        for _ in range(trials):
            t0 = time.perf_counter()
            naive_res = naive_convolve(a, b)
            naive_times.append(time.perf_counter() - t0)
        fast_times = []
        fast_res = None
        for _ in range(trials):
            t0 = time.perf_counter()
            fast_res = fast_convolve(a, b)
            fast_times.append(time.perf_counter() - t0)
        dev = relative_deviation(fast_res.values, naive_res.values)
        out.append(
            BenchEntry(
                int(size),
                float(np.median(naive_times)),
                float(np.median(fast_times)),
                dev,
            )
        )
    return out
