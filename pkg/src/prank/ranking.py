"""Baseline ranking semantics, top-k extraction, and list-comparison metrics.

The expected-score, probability-threshold, uncertain-rank, expected-rank, and
k-selection baselines all reduce to positional probabilities or weighted sums
of them, so everything here drives the generating-function engine rather than
re-deriving its own algorithms.

The Kendall distance follows top-k list semantics: a pair of tuples counts as
discordant only when the two lists provably order it in opposite ways, which
can follow either from both orders being visible or from membership alone
(a list ranks all of its members above every non-member).  The count is
normalized by k squared, so identical lists score 0 and disjoint lists 1.

The consensus helper scores a candidate top-k list against the answer of every
possible world.  It exists to let small models verify, by exhaustive search,
that the weighted ranking functions pick the list with minimal expected
distance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .engine import PrfScore, order_scores, positional_matrix, rank_prf
from .errors import MismatchedKError, UnknownTupleError, UnsupportedModelError
from .model import (
    AndXorTree,
    Model,
    Relation,
    TreeLeaf,
    TreeNode,
    TreeXor,
    enumerate_worlds,
    sort_key,
)
from .weights import Delta, Linear, ScoreScaled, Step


@dataclass(frozen=True)
class TopK:
    """An ordered answer list; ``ids[0]`` is the highest-ranked tuple."""

    k: int
    ids: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be at least 1, got {self.k}")
        if len(self.ids) > self.k:
            raise ValueError(f"{len(self.ids)} ids exceed k={self.k}")
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("duplicate ids in top-k list")

    def __iter__(self):
        return iter(self.ids)

    def __len__(self) -> int:
        return len(self.ids)


def topk(scores: Sequence[PrfScore], k: int) -> TopK:
    """First k scores by descending magnitude, ties by ascending id."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    ordered = order_scores(scores)
    return TopK(k=k, ids=tuple(s.tuple_id for s in ordered[:k]))


def _candidate_ids(x) -> tuple[int, ...]:
    if isinstance(x, TopK):
        return x.ids
    return tuple(x)


# --------------------------------------------------------------------------
# baseline rankings


def rank_escore(model: Model) -> list[PrfScore]:
    """Expected score Pr(t) * score(t) per tuple.

    Only marginals enter the product, so any correlation structure yields
    exactly the same output as an independent relation with equal marginals.
    """
    if isinstance(model, Relation):
        rel = model
    elif isinstance(model, AndXorTree):
        rel = model.relation()
    else:
        raise UnsupportedModelError(f"no expected score for {type(model)!r}")
    return order_scores(PrfScore.of(t.id, t.prob * t.score) for t in rel.tuples)


def rank_pt(model: Model, h: int, k: int) -> TopK:
    """Top k tuples by Pr(rank <= h), the probability-threshold answer."""
    if h < 1:
        raise ValueError(f"h must be at least 1, got {h}")
    return topk(rank_prf(model, Step(h)), k)


def rank_urank(model: Model, k: int, allow_repeats: bool = False):
    """Per-position winners: position i goes to the argmax of Pr(rank = i).

    By default every position must pick a fresh tuple and the result is a
    :class:`TopK`.  With ``allow_repeats`` the raw per-position argmax is
    returned as a plain tuple, which may name the same tuple more than once.
    Ties break toward the smaller id.
    """
    ids, matrix = positional_matrix(model, k)
    n = len(ids)
    if k > n:
        raise ValueError(f"k={k} exceeds the {n} tuples in the model")
    chosen: list[int] = []
    used: set[int] = set()
    for col in range(k):
        best_id = -1
        best_p = -1.0
        for row in range(n):
            tid = ids[row]
            if not allow_repeats and tid in used:
                continue
            p = matrix[row, col]
            if p > best_p or (p == best_p and tid < best_id):
                best_id, best_p = tid, p
        chosen.append(best_id)
        used.add(best_id)
    if allow_repeats:
        return tuple(chosen)
    return TopK(k=k, ids=tuple(chosen))


def rank_kselection(model: Model, k: int) -> TopK:
    """Top k by score(t) * Pr(rank = 1), the expected winner score."""
    return topk(rank_prf(model, ScoreScaled(Delta(1))), k)


# --------------------------------------------------------------------------
# expected rank (smaller is better)


def _absent_size_stats(node: TreeNode, target: int) -> tuple[float, float]:
    """(mass, expected member count) of worlds that omit the target tuple.

    Realized under this node, each non-target leaf contributes one member.
    Returned as the value and derivative at 1 of the counting polynomial, so
    an and node combines children by the product rule (computed with prefix
    and suffix products, never dividing by a possibly zero child value).
    """
    if isinstance(node, TreeLeaf):
        if node.tuple.id == target:
            return 0.0, 0.0
        return 1.0, 1.0
    if isinstance(node, TreeXor):
        value = max(1.0 - sum(e.p for e in node.children), 0.0)
        deriv = 0.0
        for e in node.children:
            cv, cd = _absent_size_stats(e.node, target)
            value += e.p * cv
            deriv += e.p * cd
        return value, deriv
    stats = [_absent_size_stats(c, target) for c in node.children]
    m = len(stats)
    prefix = np.ones(m + 1)
    for i in range(m):
        prefix[i + 1] = prefix[i] * stats[i][0]
    suffix = np.ones(m + 1)
    for i in reversed(range(m)):
        suffix[i] = stats[i][0] * suffix[i + 1]
    deriv = sum(stats[i][1] * prefix[i] * suffix[i + 1] for i in range(m))
    return float(prefix[m]), float(deriv)


def rank_erank(model: Model) -> list[tuple[int, float]]:
    """Expected rank per tuple, ascending (smaller expected rank is better).

    A tuple absent from a world is charged that world's size as its rank, so
    the expectation splits into the rank-weighted positional sum plus the
    expected world size over the worlds omitting the tuple.  For independent
    tuples the second term is (1 - p) * (C - p) with C the sum of all
    membership probabilities; for trees it is the derivative at 1 of the
    member-counting polynomial restricted to target-free worlds.
    """
    weighted = rank_prf(model, Linear())
    er1 = {s.tuple_id: -s.value.real for s in weighted}
    if isinstance(model, Relation):
        total = sum(t.prob for t in model.tuples)
        er2 = {t.id: (1.0 - t.prob) * (total - t.prob) for t in model.tuples}
    elif isinstance(model, AndXorTree):
        er2 = {t.id: _absent_size_stats(model.root, t.id)[1] for t in model.leaves}
    else:
        raise UnsupportedModelError(f"no expected rank for {type(model)!r}")
    pairs = [(tid, er1[tid] + er2[tid]) for tid in er1]
    pairs.sort(key=lambda p: (p[1], p[0]))
    return pairs


# --------------------------------------------------------------------------
# normalized Kendall distance over top-k lists


def _count_inversions(seq: Sequence[int]) -> int:
    """Pairs appearing in descending order, counted by merge sort."""

    def merge(arr: list[int]) -> tuple[list[int], int]:
        if len(arr) <= 1:
            return arr, 0
        mid = len(arr) // 2
        left, cl = merge(arr[:mid])
        right, cr = merge(arr[mid:])
        out: list[int] = []
        count = cl + cr
        i = j = 0
        while i < len(left) and j < len(right):
            if left[i] <= right[j]:
                out.append(left[i])
                i += 1
            else:
                out.append(right[j])
                j += 1
                count += len(left) - i
        out.extend(left[i:])
        out.extend(right[j:])
        return out, count

    return merge(list(seq))[1]


def kendall(
    a,
    b,
    full_a: Sequence[int] | None = None,
    full_b: Sequence[int] | None = None,
) -> float:
    """Normalized Kendall distance between two k-length top-k lists.

    Over all unordered pairs drawn from the union of the two lists, a pair is
    discordant when the lists provably order it oppositely: both orders are
    visible and disagree, one list shows an order the other list contradicts
    through membership, or each element appears in only the other's list.
    Pairs invisible to one of the lists contribute nothing.  The total is
    divided by k squared, which maps identical lists to 0 and disjoint lists
    to 1.

    ``full_a``/``full_b`` optionally carry the complete orders the lists were
    truncated from, which lets the caller pass candidates in any order.
    """
    ka, kb = _candidate_ids(a), _candidate_ids(b)
    if len(ka) != len(kb):
        raise MismatchedKError(f"top-k lengths differ: {len(ka)} vs {len(kb)}")
    k = len(ka)
    if k == 0:
        raise ValueError("empty top-k lists")
    sa, sb = set(ka), set(kb)
    if len(sa) != k or len(sb) != k:
        raise ValueError("duplicate ids in a top-k list")

    pos_a = {tid: i for i, tid in enumerate(ka if full_a is None else full_a)}
    pos_b = {tid: i for i, tid in enumerate(kb if full_b is None else full_b)}
    if not (sa <= pos_a.keys() and sb <= pos_b.keys()):
        raise ValueError("full rankings do not cover the top-k lists")

    if sa == sb:
        in_a_order = sorted(sa, key=pos_a.__getitem__)
        return _count_inversions([pos_b[t] for t in in_a_order]) / (k * k)

    union = sorted(sa | sb)
    discordant = 0
    for i in range(len(union)):
        for j in range(i + 1, len(union)):
            u, v = union[i], union[j]
            in_a = (u in sa) + (v in sa)
            in_b = (u in sb) + (v in sb)
            if in_a == 2 and in_b == 2:
                if (pos_a[u] - pos_a[v]) * (pos_b[u] - pos_b[v]) < 0:
                    discordant += 1
            elif in_a == 2:
                if in_b == 1:
                    present, absent = (u, v) if u in sb else (v, u)
                    if pos_a[absent] < pos_a[present]:
                        discordant += 1
            elif in_b == 2:
                if in_a == 1:
                    present, absent = (u, v) if u in sa else (v, u)
                    if pos_b[absent] < pos_b[present]:
                        discordant += 1
            else:
                # one element exclusive to each list: provably opposite
                discordant += 1
    return discordant / (k * k)


# --------------------------------------------------------------------------
# consensus answers


def consensus_expected_distance(
    candidate,
    model: Model,
    dis: Union[str, Sequence[float]] = "symmetric_diff",
) -> float:
    """Expected distance from a candidate top-k list to each world's answer.

    Every possible world is enumerated; its answer is the first k members in
    score order (all of them if the world is smaller).  ``dis`` selects the
    distance: ``"symmetric_diff"`` counts members unique to either list, and
    a weight sequence charges ``dis[i]`` whenever position i+1 of the world
    answer is missing from the candidate.
    """
    cand = _candidate_ids(candidate)
    k = len(cand)
    if k == 0:
        raise ValueError("empty candidate list")
    cset = set(cand)
    if len(cset) != k:
        raise ValueError("duplicate ids in candidate list")
    by_id = model.by_id()
    missing = cset - by_id.keys()
    if missing:
        raise UnknownTupleError(f"candidate ids not in model: {sorted(missing)}")

    weights: np.ndarray | None = None
    if not isinstance(dis, str):
        weights = np.asarray(dis, dtype=float)
        if len(weights) < k:
            raise ValueError(f"need at least {k} weights, got {len(weights)}")
    elif dis != "symmetric_diff":
        raise ValueError(f"unknown distance {dis!r}")

    total = 0.0
    for world in enumerate_worlds(model):
        top = sorted((by_id[m] for m in world.members), key=sort_key)[:k]
        if weights is None:
            shared = sum(1 for t in top if t.id in cset)
            d = (k - shared) + (len(top) - shared)
        else:
            d = float(sum(weights[i] for i, t in enumerate(top) if t.id not in cset))
        total += world.prob * d
    return total
