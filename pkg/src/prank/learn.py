"""Preference-based learning of ranking-function parameters.

Two learners over a :class:`PreferenceSample` (a small set of tuples plus the
user's full ranking of them): a recursive grid search for the exponential
ranking base, and a pairwise hinge-loss linear learner over positional
probabilities for general rank weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import positional_matrix, rank_prfe
from .errors import DegenerateSampleError, ShapeError
from .model import AndXorTree, Model, Relation
from .ranking import kendall

GRID_POINTS = 10
DEFAULT_TOL = 1e-4
DEFAULT_REG = 1e-3
DEFAULT_ITERS = 500


def _model_ids(model: Model) -> list[int]:
    if isinstance(model, Relation):
        return [t.id for t in model]
    return [t.id for t in model.leaves]


@dataclass(frozen=True)
class PreferenceSample:
    """A sample of tuples together with the user's full ranking of them."""

    sample: Model
    target_order: tuple[int, ...]

    def __post_init__(self) -> None:
        ids = _model_ids(self.sample)
        if len(self.target_order) != len(ids) or set(self.target_order) != set(ids):
            raise ShapeError(
                "target order must be a permutation of the sample's tuple ids"
            )

    def __len__(self) -> int:
        return len(self.target_order)


def alpha_distance(s: PreferenceSample, alpha: float) -> float:
    """Normalized pair disagreement between the target and the alpha ranking."""
    order = [sc.tuple_id for sc in rank_prfe(s.sample, alpha)]
    return kendall(list(s.target_order), order)


def learn_alpha(s: PreferenceSample, tol: float = DEFAULT_TOL) -> float:
    """Fit the exponential base by recursive grid refinement over [0, 1].

    Each level scores the nine interior points of a uniform ten-way split of
    the bracket and recurses into the two cells around the best one; ties
    break toward the smaller value.  Stops once the bracket is narrower than
    ``tol`` and returns its midpoint.
    """
    if tol <= 0:
        raise ShapeError(f"tolerance must be positive, got {tol}")
    lo, hi = 0.0, 1.0
    while hi - lo >= tol:
        xs = [lo + i * (hi - lo) / GRID_POINTS for i in range(GRID_POINTS + 1)]
        dists = [alpha_distance(s, x) for x in xs[1:GRID_POINTS]]
        best = 1 + int(np.argmin(dists))
        lo, hi = max(lo, xs[best - 1]), min(hi, xs[best + 1])
    return 0.5 * (lo + hi)


def _pair_differences(s: PreferenceSample, h: int) -> np.ndarray:
    ids, feats = positional_matrix(s.sample, h)
    rows = {tid: feats[i] for i, tid in enumerate(ids)}
    order = s.target_order
    diffs = [
        rows[a] - rows[b]
        for i, a in enumerate(order)
        for b in order[i + 1 :]
    ]
    return np.asarray(diffs)


def _hinge_loss(w: np.ndarray, diffs: np.ndarray, reg: float) -> float:
    margins = 1.0 - diffs @ w
    return float(np.sum(np.maximum(margins, 0.0)) + reg * (w @ w))


def learn_prfw_weights(
    s: PreferenceSample,
    h: int,
    reg: float = DEFAULT_REG,
    iters: int = DEFAULT_ITERS,
) -> np.ndarray:
    """Fit rank weights w[0..h-1] to pairwise preferences.

    Features are the positional probabilities of each sample tuple, computed
    as if the sample were the entire relation.  Minimizes the pairwise hinge
    loss plus an L2 penalty by deterministic full-batch subgradient descent;
    a step is only taken when it does not increase the loss, so the loss is
    non-increasing across epochs.
    """
    m = len(s)
    if m < 2:
        raise ShapeError(f"need at least two sample tuples, got {m}")
    if h < 1 or h > m:
        raise ShapeError(f"feature cutoff {h} outside [1, {m}]")
    diffs = _pair_differences(s, h)
    spread = float(np.max(np.linalg.norm(diffs, axis=1)))
    if spread == 0.0:
        raise DegenerateSampleError(
            "all sample tuples have identical positional probabilities"
        )

    w = np.zeros(h)
    cur = _hinge_loss(w, diffs, reg)
    scale = 1.0 / spread
    for epoch in range(1, iters + 1):
        active = (diffs @ w) < 1.0
        grad = 2.0 * reg * w - diffs[active].sum(axis=0)
        cand = w - (scale / math.sqrt(epoch)) * grad
        cand_loss = _hinge_loss(cand, diffs, reg)
        if cand_loss <= cur:
            w, cur = cand, cand_loss
        else:
            scale *= 0.5
    return w
