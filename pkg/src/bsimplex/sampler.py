"""
Draws from the bivariate Simplex law by conditional inversion.

For pair ``i`` two uniforms ``(u1, v)`` are taken from block ``i`` of a
Philox counter-based stream keyed by the master seed, so any pair can be
regenerated without replaying the ones before it.  Then
``u2 = conditional_inverse(u1, v)`` and each margin is inverted through the
Simplex quantile.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import simplex
from .bivariate import BivParams
from .copula import conditional_inverse
from .errors import DomainError

# one Philox block (4 x 64 bits) per pair; block i yields doubles 4i..4i+3
_DOUBLES_PER_PAIR = 4
_HALF_ULP = 2.0 ** -54
_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SeededStream:
    """Pair ``index`` of the stream keyed by ``seed``."""

    seed: int
    index: int = 0

    def __post_init__(self):
        if self.index < 0:
            raise DomainError("stream index must be nonnegative")


def _bitgen(seed: int) -> np.random.Philox:
    return np.random.Philox(key=int(seed) & _SEED_MASK)


def uniform_pairs(seed: int, n: int, start: int = 0) -> np.ndarray:
    """``(n, 2)`` open-interval uniforms for pairs ``start .. start + n - 1``."""
    bg = _bitgen(seed)
    if start:
        bg.advance(start)
    raw = np.random.Generator(bg).random(_DOUBLES_PER_PAIR * n).reshape(n, _DOUBLES_PER_PAIR)
    # random() returns k / 2^53; shifting by half a step keeps 0 out
    return raw[:, :2] + _HALF_ULP


def _transform(th: BivParams, uv: np.ndarray) -> np.ndarray:
    u1, v = uv[:, 0], uv[:, 1]
    u2 = conditional_inverse(u1, v, th.lam)
    return np.column_stack([simplex.quantile(u1, th.m1), simplex.quantile(u2, th.m2)])


def sample_pair(th: BivParams, stream: SeededStream) -> tuple[float, float]:
    y = _transform(th, uniform_pairs(stream.seed, 1, stream.index))
    return float(y[0, 0]), float(y[0, 1])


def sample_matrix(th: BivParams, n: int, seed: int) -> np.ndarray:
    """``n`` pairs; row ``i`` equals ``sample_pair(th, SeededStream(seed, i))``."""
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    return _transform(th, uniform_pairs(seed, int(n)))
