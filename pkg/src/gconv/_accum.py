"""Compensated accumulation helpers.

Every reduction in the package runs through these so that results are
deterministic and identical between the sparse path, the vectorized
fallback kernels and the compiled kernels.
"""

from __future__ import annotations

import numpy as np


class VecKahan:
    """Kahan-compensated sum of equally shaped float vectors."""

    __slots__ = ("s", "c")

    def __init__(self, dim: int):
        self.s = np.zeros(dim)
        self.c = np.zeros(dim)

    def add(self, term: np.ndarray) -> None:
        y = term - self.c
        t = self.s + y
        self.c = (t - self.s) - y
        self.s = t

    def total(self) -> np.ndarray:
        return self.s.copy()


def kahan_sum(values) -> float:
    s = 0.0
    c = 0.0
    for v in values:
        y = v - c
        t = s + y
        c = (t - s) - y
        s = t
    return s
