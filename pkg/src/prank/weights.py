"""The catalog of rank-position weight functions.

A weight function assigns a (possibly complex) weight to every rank position
i >= 1; a tuple's score under a parameterized ranking is the weighted sum of
its positional probabilities.  ``cutoff`` reports the largest position with a
nonzero weight when one exists, which lets the engine truncate expansions.
``tuple_factor`` is a per-tuple multiplier, one for every variant except
ScoreScaled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import ProbTuple


class WeightFunction:
    name = "weight"

    def weight(self, i: int):
        """Weight of rank position i >= 1."""
        raise NotImplementedError

    def weights(self, n: int) -> np.ndarray:
        """Vector of weights for positions 1..n."""
        return np.array([self.weight(i) for i in range(1, n + 1)])

    def sample(self, i: int):
        """Weight extended to i >= 0 for spectral sampling.

        Position zero continues the value at position one unless the closed
        form already covers it.
        """
        return self.weight(i) if i >= 1 else self.weight(1)

    def sample_grid(self, m: int) -> np.ndarray:
        return np.array([self.sample(i) for i in range(m)])

    def cutoff(self) -> int | None:
        """Smallest h with weight(i) == 0 for every i > h, if bounded."""
        return None

    def tuple_factor(self, t: ProbTuple) -> float:
        return 1.0


@dataclass(frozen=True)
class Constant(WeightFunction):
    """weight(i) = c; with c = 1 the score is the membership probability."""

    c: float = 1.0
    name = "constant"

    def weight(self, i: int):
        return self.c

    def weights(self, n: int) -> np.ndarray:
        return np.full(n, self.c, dtype=float)

    def sample(self, i: int):
        return self.c


@dataclass(frozen=True)
class Step(WeightFunction):
    """weight(i) = 1 for i <= h, else 0: probability of ranking in the top h."""

    h: int
    name = "step"

    def weight(self, i: int):
        return 1.0 if i <= self.h else 0.0

    def weights(self, n: int) -> np.ndarray:
        w = np.zeros(n)
        w[: min(self.h, n)] = 1.0
        return w

    def sample(self, i: int):
        return 1.0 if i <= self.h else 0.0

    def cutoff(self) -> int:
        return self.h


@dataclass(frozen=True)
class Delta(WeightFunction):
    """weight(i) = 1 exactly at position j: picks out one positional probability."""

    j: int
    name = "delta"

    def weight(self, i: int):
        return 1.0 if i == self.j else 0.0

    def weights(self, n: int) -> np.ndarray:
        w = np.zeros(n)
        if self.j <= n:
            w[self.j - 1] = 1.0
        return w

    def sample(self, i: int):
        return 1.0 if i == self.j else 0.0

    def cutoff(self) -> int:
        return self.j


@dataclass(frozen=True)
class Exponential(WeightFunction):
    """weight(i) = alpha ** i; alpha may be complex with |alpha| <= 1."""

    alpha: complex
    name = "exponential"

    def weight(self, i: int):
        return self.alpha**i

    def weights(self, n: int) -> np.ndarray:
        return np.asarray(self.alpha) ** np.arange(1, n + 1)

    def sample(self, i: int):
        return self.alpha**i


@dataclass(frozen=True)
class Linear(WeightFunction):
    """weight(i) = -i; magnitudes invert the expected-rank order."""

    name = "linear"

    def weight(self, i: int):
        return -float(i)

    def weights(self, n: int) -> np.ndarray:
        return -np.arange(1, n + 1, dtype=float)

    def sample(self, i: int):
        return -float(i)


@dataclass(frozen=True)
class Discount(WeightFunction):
    """weight(i) = ln 2 / ln(i + 1), the usual logarithmic position discount."""

    name = "discount"

    def weight(self, i: int):
        return math.log(2.0) / math.log(i + 1.0)

    def weights(self, n: int) -> np.ndarray:
        return math.log(2.0) / np.log(np.arange(2, n + 2, dtype=float))


@dataclass(frozen=True)
class Tabulated(WeightFunction):
    """Arbitrary weights for positions 1..len(values); zero beyond."""

    values: tuple[float, ...]
    name = "tabulated"

    def weight(self, i: int):
        return self.values[i - 1] if i <= len(self.values) else 0.0

    def weights(self, n: int) -> np.ndarray:
        w = np.zeros(n, dtype=np.asarray(self.values).dtype)
        k = min(n, len(self.values))
        w[:k] = np.asarray(self.values)[:k]
        return w

    def sample(self, i: int):
        if i == 0:
            return self.values[0] if self.values else 0.0
        return self.weight(i)

    def cutoff(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ScoreScaled(WeightFunction):
    """Wraps another weight function, scaling each tuple's result by its score."""

    inner: WeightFunction
    name = "score-scaled"

    def weight(self, i: int):
        return self.inner.weight(i)

    def weights(self, n: int) -> np.ndarray:
        return self.inner.weights(n)

    def sample(self, i: int):
        return self.inner.sample(i)

    def cutoff(self) -> int | None:
        return self.inner.cutoff()

    def tuple_factor(self, t: ProbTuple) -> float:
        return t.score
