"""Generating-function engine for positional probabilities and ranking scores.

For independent tuples sorted by score, the probability that tuple t_i ranks
j-th equals Pr(t_i) times the coefficient of x^(j-1) in the running product
prod_{l<i} (1 - p_l + p_l x).  Extending that product one linear factor per
tuple yields every rank distribution in one quadratic sweep, and truncating it
at degree h gives the O(n h) path for weight functions that vanish beyond h.

For exponential weights the polynomial never has to be expanded: the weighted
score is the running product evaluated at the single point alpha, so one pass
with a log-space accumulator ranks any number of tuples.

Correlated tuples arrive as and/xor trees.  Leaves are tagged with x (tuples
that would outrank the target), y (the target itself), or 1, and the tree is
collapsed bottom-up: xor nodes mix children linearly, and nodes multiply them.
The coefficient of x^(j-1) y in the result is Pr(rank = j).  The same
collapse evaluated at a point, maintained incrementally along leaf-to-root
paths, gives the exponential-weight fast path for trees.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from .errors import ProbabilityConstraintError, UnsupportedModelError
from .model import (
    AndXorTree,
    Model,
    ProbTuple,
    Relation,
    TreeAnd,
    TreeLeaf,
    TreeNode,
    TreeXor,
    XorEdge,
    make_xtuple_tree,
    sort_key,
    tree_depth,
)
from .polynomial import Poly, poly_product
from .util import fanout_map
from .weights import WeightFunction

#: magnitudes below this count as exact zeros in log-space products
ZERO_MAG = 1e-300

#: trees deeper than this are expanded through point evaluation instead of
#: polynomial products (the products would recurse as deep as the tree)
ROOTS_DEPTH_CUTOFF = 32

_LOG_HUGE = 709.0  # just under log(float64 max)


@dataclass
class LogProduct:
    """A running product kept as log-magnitude, phase, and a zero counter.

    Multiplying or dividing by an (effectively) zero factor only moves the
    counter, so a zero can be divided back out without losing the finite part.
    """

    log_magnitude: float = 0.0
    phase: float = 0.0
    zero_count: int = 0

    def multiply(self, factor: complex) -> None:
        m = abs(factor)
        if m < ZERO_MAG:
            self.zero_count += 1
            return
        self.log_magnitude += math.log(m)
        self.phase = math.remainder(self.phase + cmath.phase(factor), math.tau)

    def divide(self, factor: complex) -> None:
        m = abs(factor)
        if m < ZERO_MAG:
            self.zero_count -= 1
            return
        self.log_magnitude -= math.log(m)
        self.phase = math.remainder(self.phase - cmath.phase(factor), math.tau)

    def value(self) -> complex:
        if self.zero_count > 0:
            return 0j
        if self.log_magnitude > _LOG_HUGE:
            return cmath.rect(math.inf, self.phase)
        return cmath.rect(math.exp(self.log_magnitude), self.phase)


@dataclass(frozen=True)
class RankDistribution:
    """Positional probabilities of one tuple: probs[j-1] = Pr(rank = j)."""

    tuple_id: int
    probs: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.probs, dtype=float)
        low = p.min(initial=0.0)
        if low < -1e-12:
            raise ValueError(
                f"tuple {self.tuple_id}: negative positional probability {low}"
            )
        object.__setattr__(self, "probs", np.clip(p, 0.0, 1.0))

    def check_mass(self, appears: float, tol: float = 1e-7) -> None:
        total = float(self.probs.sum())
        if abs(total - appears) > tol:
            raise ValueError(
                f"tuple {self.tuple_id}: positional mass {total} != Pr(appears) {appears}"
            )


class PrfScore(NamedTuple):
    """A tuple's ranking score; comparisons use the magnitude of ``value``.

    ``log_magnitude`` carries the ordering even when the complex value has
    underflowed to zero.  A named tuple rather than a dataclass: ranking a
    large relation materializes one of these per tuple.
    """

    tuple_id: int
    value: complex
    log_magnitude: float

    @property
    def magnitude(self) -> float:
        return math.exp(self.log_magnitude) if self.log_magnitude < _LOG_HUGE else math.inf

    @staticmethod
    def of(tuple_id: int, value: complex) -> "PrfScore":
        m = abs(value)
        return PrfScore(
            tuple_id=tuple_id,
            value=complex(value),
            log_magnitude=math.log(m) if m > 0.0 else -math.inf,
        )


class ScoreList(Sequence[PrfScore]):
    """Ranked scores held as parallel arrays; items materialize on access.

    Entries are always in ranking order (descending magnitude, ties by
    ascending id), so this behaves like the equivalent list of PrfScore
    without paying for one Python object per tuple up front.
    """

    __slots__ = ("ids", "values", "log_magnitudes")

    def __init__(
        self, ids: np.ndarray, values: np.ndarray, log_magnitudes: np.ndarray
    ) -> None:
        self.ids = ids
        self.values = values
        self.log_magnitudes = log_magnitudes

    def __len__(self) -> int:
        return len(self.ids)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return list(
                map(
                    PrfScore._make,
                    zip(
                        self.ids[i].tolist(),
                        self.values[i].tolist(),
                        self.log_magnitudes[i].tolist(),
                    ),
                )
            )
        return PrfScore(
            int(self.ids[i]), complex(self.values[i]), float(self.log_magnitudes[i])
        )

    def __iter__(self):
        return map(
            PrfScore._make,
            zip(
                self.ids.tolist(),
                self.values.tolist(),
                self.log_magnitudes.tolist(),
            ),
        )

    def __repr__(self) -> str:
        return f"ScoreList(n={len(self.ids)})"


Scores = Union[list[PrfScore], ScoreList]


def order_scores(scores: Union[Iterable[PrfScore], ScoreList]) -> Scores:
    """Descending magnitude, ties by ascending tuple id."""
    if isinstance(scores, ScoreList):
        return scores
    return sorted(scores, key=lambda s: (-s.log_magnitude, s.tuple_id))


def log_magnitudes(values: np.ndarray) -> np.ndarray:
    """Elementwise log|v| with exact zeros mapped to -inf."""
    mag = np.abs(values)
    positive = mag > 0.0
    return np.where(positive, np.log(np.where(positive, mag, 1.0)), -np.inf)


def scores_from_arrays(
    ids: np.ndarray, values: np.ndarray, log_total: np.ndarray
) -> ScoreList:
    """Order parallel score arrays into a ScoreList without a Python sort."""
    order = np.lexsort((ids, -log_total))
    return ScoreList(ids[order], values[order], log_total[order])


def _sorted_tuples(model: Model) -> list[ProbTuple]:
    if isinstance(model, Relation):
        return list(model.sorted().tuples)
    return sorted(model.leaves, key=sort_key)


# --------------------------------------------------------------------------
# independent tuples


def rank_distributions_independent(rel: Relation) -> list[RankDistribution]:
    """Every tuple's full rank distribution, one quadratic sweep."""
    ts = _sorted_tuples(rel)
    n = len(ts)
    p = np.array([t.prob for t in ts])
    g = np.zeros(n, dtype=float)
    if n:
        g[0] = 1.0
    out = []
    for i, t in enumerate(ts):
        probs = np.zeros(n)
        probs[: i + 1] = t.prob * g[: i + 1]
        dist = RankDistribution(tuple_id=t.id, probs=probs)
        dist.check_mass(t.prob)
        out.append(dist)
        if i + 1 < n:
            g[1 : i + 2] = g[1 : i + 2] * (1.0 - p[i]) + g[: i + 1] * p[i]
            g[0] *= 1.0 - p[i]
    return out


def _truncated_prefix_products(p: np.ndarray, h: int) -> Iterable[np.ndarray]:
    """Yield the first h coefficients of the running product before each tuple."""
    g = np.zeros(h, dtype=float)
    g[0] = 1.0
    for i in range(len(p)):
        yield g
        g[1:] = g[1:] * (1.0 - p[i]) + g[:-1] * p[i]
        g[0] *= 1.0 - p[i]


def positional_matrix_independent(rel: Relation, h: int) -> tuple[list[int], np.ndarray]:
    """(ids in score order, matrix[i, j] = Pr(tuple i ranks j+1)), truncated at h."""
    ts = _sorted_tuples(rel)
    n = len(ts)
    h = min(h, n) if n else 0
    p = np.array([t.prob for t in ts])
    out = np.zeros((n, h))
    if h > 0:
        for i, g in enumerate(_truncated_prefix_products(p, h)):
            out[i] = p[i] * g
    return [t.id for t in ts], out


def rank_prf_independent(rel: Relation, wf: WeightFunction) -> ScoreList:
    """Scores under an arbitrary weight function, truncating when it vanishes."""
    ts = _sorted_tuples(rel)
    n = len(ts)
    ids = np.array([t.id for t in ts], dtype=np.int64)
    p = np.array([t.prob for t in ts], dtype=float)
    h = wf.cutoff()
    h = n if h is None else min(h, n)
    values = np.zeros(n, dtype=complex)
    if h > 0:
        w = np.asarray(wf.weights(h))
        for i, g in enumerate(_truncated_prefix_products(p, h)):
            m = min(i + 1, h)
            values[i] = wf.tuple_factor(ts[i]) * p[i] * (w[:m] @ g[:m])
    return scores_from_arrays(ids, values, log_magnitudes(values))


def independent_arrays(rel: Relation) -> tuple[np.ndarray, np.ndarray]:
    """(ids, probabilities) of a relation in score order, as flat arrays."""
    ts = _sorted_tuples(rel)
    ids = np.array([t.id for t in ts], dtype=np.int64)
    p = np.array([t.prob for t in ts], dtype=float)
    return ids, p


def prfe_values_from_probs(
    p: np.ndarray, alpha: complex
) -> tuple[np.ndarray, np.ndarray]:
    """(values, log magnitudes) for one exponential base over sorted probabilities."""
    alpha = complex(alpha)
    f = 1.0 - p + p * alpha
    mag = np.abs(f)
    zero = mag < ZERO_MAG
    safe = np.where(zero, 1.0, f)
    logf = np.where(zero, 0.0, np.log(np.where(zero, 1.0, mag)))
    angf = np.angle(safe)
    pre_log = np.cumsum(logf) - logf
    pre_ang = np.cumsum(angf) - angf
    pre_zero = np.cumsum(zero) - zero

    own = p * alpha
    own_mag = np.abs(own)
    own_zero = own_mag < ZERO_MAG
    log_total = pre_log + np.where(own_zero, 0.0, np.log(np.where(own_zero, 1.0, own_mag)))
    ang_total = pre_ang + np.angle(np.where(own_zero, 1.0, own))
    dead = (pre_zero + own_zero) > 0

    log_total = np.where(dead, -np.inf, log_total)
    with np.errstate(under="ignore"):
        values = np.where(dead, 0j, np.exp(log_total) * np.exp(1j * ang_total))
    return values, log_total


def prfe_values_independent(
    rel: Relation, alpha: complex
) -> tuple[list[int], np.ndarray, np.ndarray]:
    """Raw exponential-weight scores: (ids in score order, values, log magnitudes).

    Array-level variant of :func:`rank_prfe_independent` for callers that
    combine several bases per tuple and cannot afford one score object per
    tuple and base.
    """
    ids, p = independent_arrays(rel)
    if len(p) == 0:
        return [], np.zeros(0, dtype=complex), np.zeros(0)
    values, log_total = prfe_values_from_probs(p, alpha)
    return ids.tolist(), values, log_total


def rank_prfe_independent(rel: Relation, alpha: complex) -> ScoreList:
    """Exponential weights in one vectorized pass.

    The score of tuple i is the running product evaluated at alpha, times
    p_i * alpha.  Log-space prefix sums keep the ordering exact far past the
    point where the complex values underflow.
    """
    ids, p = independent_arrays(rel)
    if len(p) == 0:
        return scores_from_arrays(ids, np.zeros(0, dtype=complex), np.zeros(0))
    values, log_total = prfe_values_from_probs(p, alpha)
    return scores_from_arrays(ids, values, log_total)


def _mixture_scan_numpy(
    p: np.ndarray, coeffs: np.ndarray, alphas: np.ndarray
) -> np.ndarray:
    """Reference scan: one damped prefix-product pass per exponential base."""
    total = np.zeros(len(p), dtype=complex)
    q = 1.0 - p
    for c, a in zip(coeffs, alphas):
        pref = np.multiply.accumulate(q + p * a)
        total[0] += c
        total[1:] += c * pref[:-1]
    return p * total


_mixture_scan_compiled = None


def mixture_values_independent(
    p: np.ndarray, coeffs: np.ndarray, alphas: np.ndarray
) -> np.ndarray:
    """Per-tuple totals sum(coeffs[l] * prod_{j<i} (1 - p_j + p_j alphas[l])) * p_i.

    The scan walks every (tuple, base) pair once, so a compiled kernel is used
    when available; the numpy path computes the same products base by base.
    """
    global _mixture_scan_compiled
    if _mixture_scan_compiled is None:
        try:
            import numba

            @numba.njit(cache=True)
            def scan(p, coeffs, alphas):  # pragma: no cover - compiled
                n = p.shape[0]
                m = coeffs.shape[0]
                state = np.ones(m, dtype=np.complex128)
                out = np.empty(n, dtype=np.complex128)
                for i in range(n):
                    pi = p[i]
                    tot = 0j
                    for l in range(m):
                        tot += coeffs[l] * state[l]
                        state[l] *= 1.0 - pi + pi * alphas[l]
                    out[i] = pi * tot
                return out

            _mixture_scan_compiled = scan
        except ImportError:  # pragma: no cover - numba always present in CI
            _mixture_scan_compiled = _mixture_scan_numpy
    return _mixture_scan_compiled(
        np.ascontiguousarray(p, dtype=float),
        np.ascontiguousarray(coeffs, dtype=complex),
        np.ascontiguousarray(alphas, dtype=complex),
    )


# --------------------------------------------------------------------------
# and/xor trees

_X, _Y, _ONE = 0, 1, 2


def _bivariate_divide(node: TreeNode, codes: dict[int, int]) -> tuple[Poly, Poly | None]:
    """Collapse to (P0, P1) with value = P0(x) + P1(x) * y via polynomial products."""
    if isinstance(node, TreeLeaf):
        code = codes[node.tuple.id]
        if code == _X:
            return Poly.of([0.0, 1.0]), None
        if code == _Y:
            return Poly.of([0.0]), Poly.of([1.0])
        return Poly.of([1.0]), None
    if isinstance(node, TreeXor):
        leftover = 1.0 - sum(e.p for e in node.children)
        parts = [(_bivariate_divide(e.node, codes), e.p) for e in node.children]
        deg0 = max(p0.degree for (p0, _), _ in parts)
        c0 = np.zeros(deg0 + 1)
        c0[0] = max(leftover, 0.0)
        for (p0, _), pe in parts:
            c0[: len(p0.coeffs)] += pe * p0.coeffs
        p1_parts = [(p1, pe) for (_, p1), pe in parts if p1 is not None]
        if not p1_parts:
            return Poly(coeffs=c0), None
        deg1 = max(p1.degree for p1, _ in p1_parts)
        c1 = np.zeros(deg1 + 1)
        for p1, pe in p1_parts:
            c1[: len(p1.coeffs)] += pe * p1.coeffs
        return Poly(coeffs=c0), Poly(coeffs=c1)
    # and node: multiply children; at most one child carries the y part
    pairs = [_bivariate_divide(c, codes) for c in node.children]
    carriers = [i for i, (_, p1) in enumerate(pairs) if p1 is not None]
    p0_all = poly_product([p0 for p0, _ in pairs])
    if not carriers:
        return p0_all, None
    (ci,) = carriers
    others = [p0 for i, (p0, _) in enumerate(pairs) if i != ci]
    p1 = poly_product([pairs[ci][1], *others]) if others else pairs[ci][1]
    return p0_all, p1


def _tree_eval(node: TreeNode, codes: dict[int, int], xv: np.ndarray, yv: complex):
    if isinstance(node, TreeLeaf):
        code = codes[node.tuple.id]
        if code == _X:
            return xv
        if code == _Y:
            return np.full_like(xv, yv)
        return np.ones_like(xv)
    if isinstance(node, TreeXor):
        leftover = 1.0 - sum(e.p for e in node.children)
        acc = np.full_like(xv, max(leftover, 0.0))
        for e in node.children:
            acc = acc + e.p * _tree_eval(e.node, codes, xv, yv)
        return acc
    acc = np.ones_like(xv)
    for c in node.children:
        acc = acc * _tree_eval(c, codes, xv, yv)
    return acc


def _bivariate_roots(tree: AndXorTree, codes: dict[int, int], n: int) -> np.ndarray:
    """The y-part coefficients recovered from point values at roots of unity."""
    m = n + 1
    pts = np.exp(-2j * np.pi * np.arange(m) / m)
    with_y = _tree_eval(tree.root, codes, pts, 1.0)
    without_y = _tree_eval(tree.root, codes, pts, 0.0)
    return np.fft.ifft(with_y - without_y).real


def _target_coeffs(tree: AndXorTree, ts: list[ProbTuple], i: int, method: str) -> np.ndarray:
    """Coefficients c[j-1] = Pr(tuple ts[i] ranks j) for the tree model."""
    codes = {t.id: (_X if k < i else (_Y if k == i else _ONE)) for k, t in enumerate(ts)}
    if method == "auto":
        method = "divide" if tree_depth(tree.root) <= ROOTS_DEPTH_CUTOFF else "roots"
    if method == "divide":
        _, p1 = _bivariate_divide(tree.root, codes)
        return np.zeros(1) if p1 is None else np.asarray(p1.coeffs, dtype=float)
    if method == "roots":
        return _bivariate_roots(tree, codes, len(ts))
    raise ValueError(f"unknown expansion method {method!r}")


def rank_distributions_andxor(tree: AndXorTree, method: str = "auto") -> list[RankDistribution]:
    """Rank distributions for every leaf of an and/xor tree."""
    ts = _sorted_tuples(tree)
    n = len(ts)
    margs = tree.relation().by_id()

    def one(i: int) -> RankDistribution:
        c = _target_coeffs(tree, ts, i, method)
        probs = np.zeros(n)
        k = min(len(c), n)
        probs[:k] = np.where(np.abs(c[:k]) < 1e-15, 0.0, c[:k])
        dist = RankDistribution(tuple_id=ts[i].id, probs=probs)
        dist.check_mass(margs[ts[i].id].prob)
        return dist

    return fanout_map(one, range(n))


def positional_matrix_andxor(
    tree: AndXorTree, h: int, method: str = "auto"
) -> tuple[list[int], np.ndarray]:
    ts = _sorted_tuples(tree)
    n = len(ts)
    h = min(h, n) if n else 0
    out = np.zeros((n, h))

    def one(i: int) -> np.ndarray:
        c = _target_coeffs(tree, ts, i, method)
        row = np.zeros(h)
        k = min(len(c), h)
        row[:k] = np.clip(c[:k], 0.0, 1.0)
        return row

    rows = fanout_map(one, range(n))
    for i, row in enumerate(rows):
        out[i] = row
    return [t.id for t in ts], out


def rank_prf_andxor(
    tree: AndXorTree, wf: WeightFunction, method: str = "auto"
) -> list[PrfScore]:
    """Scores under an arbitrary weight function for a correlated tree."""
    ts = _sorted_tuples(tree)
    n = len(ts)
    if n == 0:
        return []
    h = wf.cutoff()
    h = n if h is None else min(h, n)
    w = wf.weights(h)

    def one(i: int) -> PrfScore:
        c = _target_coeffs(tree, ts, i, method)
        m = min(len(c), h)
        val = wf.tuple_factor(ts[i]) * (w[:m] @ c[:m]) if m else 0j
        return PrfScore.of(ts[i].id, val)

    return order_scores(fanout_map(one, range(n)))


# --------------------------------------------------------------------------
# exponential weights on trees: incremental path updates


_AND, _XOR, _LEAF = 0, 1, 2


class _TreeState:
    """Flattened tree with per-node values of the collapse at a fixed point.

    Two copies of the state are kept per ranking pass: one where the target
    leaf contributes alpha (counted among the outranking set) and one where
    it contributes zero.  The difference of the two root values is exactly
    the coefficient-weighted sum that the exponential ranking needs.
    """

    def __init__(self, tree: AndXorTree):
        self.kind: list[int] = []
        self.parent: list[int] = []
        self.edge_p: list[float] = []
        self.children: list[list[int]] = []
        self.leaf_node: dict[int, int] = {}
        self._flatten(tree.root, -1, 1.0)

    def _flatten(self, node: TreeNode, parent: int, edge_p: float) -> int:
        idx = len(self.kind)
        if isinstance(node, TreeLeaf):
            self.kind.append(_LEAF)
        elif isinstance(node, TreeAnd):
            self.kind.append(_AND)
        else:
            self.kind.append(_XOR)
        self.parent.append(parent)
        self.edge_p.append(edge_p)
        self.children.append([])
        if parent >= 0:
            self.children[parent].append(idx)
        if isinstance(node, TreeLeaf):
            self.leaf_node[node.tuple.id] = idx
        elif isinstance(node, TreeAnd):
            for c in node.children:
                self._flatten(c, idx, 1.0)
        else:
            for e in node.children:
                self._flatten(e.node, idx, e.p)
        return idx


class _PointValues:
    """Node values for one labeled evaluation, updatable along leaf paths."""

    def __init__(self, st: _TreeState):
        self.st = st
        n = len(st.kind)
        self.value: list[complex] = [1.0 + 0j] * n
        self.logprod: list[LogProduct | None] = [None] * n
        # initial pass: all leaves hold 1, so every inner node holds 1 as
        # well, but xor leftovers make that false when edges sum below 1
        for idx in reversed(range(n)):
            k = st.kind[idx]
            if k == _LEAF:
                continue
            if k == _AND:
                lp = LogProduct()
                for c in st.children[idx]:
                    lp.multiply(self.value[c])
                self.logprod[idx] = lp
                self.value[idx] = lp.value()
            else:
                leftover = 1.0 - sum(st.edge_p[c] for c in st.children[idx])
                acc = complex(max(leftover, 0.0))
                for c in st.children[idx]:
                    acc += st.edge_p[c] * self.value[c]
                self.value[idx] = acc

    def set_leaf(self, leaf_idx: int, new: complex) -> None:
        old = self.value[leaf_idx]
        if new == old:
            return
        self.value[leaf_idx] = new
        node = leaf_idx
        while self.st.parent[node] >= 0:
            par = self.st.parent[node]
            old_par = self.value[par]
            if self.st.kind[par] == _AND:
                lp = self.logprod[par]
                lp.divide(old)
                lp.multiply(new)
                new_par = lp.value()
            else:
                new_par = old_par + self.st.edge_p[node] * (new - old)
            self.value[par] = new_par
            old, new, node = old_par, new_par, par

    def root(self) -> complex:
        return self.value[0]


def rank_prfe_andxor(tree: AndXorTree, alpha: complex) -> list[PrfScore]:
    """Exponential weights on a tree without expanding any polynomial.

    Walk the tuples in score order; at step i the previous target leaf joins
    the outranking set (value alpha in both copies) and the new target leaf
    takes value alpha in one copy and zero in the other.  Each relabeling
    updates only the leaf-to-root path.
    """
    ts = _sorted_tuples(tree)
    if not ts:
        return []
    alpha = complex(alpha)
    st = _TreeState(tree)
    with_target = _PointValues(st)
    without_target = _PointValues(st)
    scores = []
    prev: int | None = None
    for t in ts:
        if prev is not None:
            with_target.set_leaf(prev, alpha)
            without_target.set_leaf(prev, alpha)
        leaf = st.leaf_node[t.id]
        with_target.set_leaf(leaf, alpha)
        without_target.set_leaf(leaf, 0j)
        scores.append(PrfScore.of(t.id, with_target.root() - without_target.root()))
        prev = leaf
    return order_scores(scores)


# --------------------------------------------------------------------------
# dispatch and score uncertainty


def rank_distributions(model: Model, method: str = "auto") -> list[RankDistribution]:
    if isinstance(model, Relation):
        return rank_distributions_independent(model)
    if isinstance(model, AndXorTree):
        return rank_distributions_andxor(model, method)
    raise UnsupportedModelError(f"no rank distributions for {type(model)!r}")


def positional_matrix(model: Model, h: int, method: str = "auto"):
    if isinstance(model, Relation):
        return positional_matrix_independent(model, h)
    if isinstance(model, AndXorTree):
        return positional_matrix_andxor(model, h, method)
    raise UnsupportedModelError(f"no positional matrix for {type(model)!r}")


def rank_prf(model: Model, wf: WeightFunction, method: str = "auto") -> Scores:
    if isinstance(model, Relation):
        return rank_prf_independent(model, wf)
    if isinstance(model, AndXorTree):
        return rank_prf_andxor(model, wf, method)
    raise UnsupportedModelError(f"no weighted ranking for {type(model)!r}")


def rank_prfe(model: Model, alpha: complex) -> Scores:
    if isinstance(model, Relation):
        return rank_prfe_independent(model, alpha)
    if isinstance(model, AndXorTree):
        return rank_prfe_andxor(model, alpha)
    raise UnsupportedModelError(f"no exponential ranking for {type(model)!r}")


Alternative = tuple[int, Sequence[tuple[float, float]]]


def expand_score_uncertainty(
    alternatives: Iterable[Alternative],
) -> tuple[AndXorTree, dict[int, int]]:
    """Turn per-tuple score alternatives into an exclusive-choice tree.

    ``alternatives`` maps each original tuple to its possible (score, prob)
    pairs.  Every pair becomes its own leaf under an xor node, so a fresh id
    space is allocated; the returned map sends each new leaf id back to the
    original tuple id for regrouping.
    """
    groups: list[list[ProbTuple]] = []
    regroup: dict[int, int] = {}
    next_id = 1
    for orig_id, pairs in alternatives:
        group = []
        for score, prob in pairs:
            group.append(ProbTuple(id=next_id, score=float(score), prob=float(prob)))
            regroup[next_id] = orig_id
            next_id += 1
        if not group:
            raise ProbabilityConstraintError(
                f"tuple {orig_id}: empty alternative list"
            )
        groups.append(group)
    return make_xtuple_tree(groups), regroup


def regroup_scores(scores: Iterable[PrfScore], regroup: dict[int, int]) -> list[PrfScore]:
    """Sum alternative-leaf scores back onto their original tuples."""
    acc: dict[int, complex] = {}
    for s in scores:
        orig = regroup[s.tuple_id]
        acc[orig] = acc.get(orig, 0j) + s.value
    return order_scores(PrfScore.of(tid, v) for tid, v in acc.items())
