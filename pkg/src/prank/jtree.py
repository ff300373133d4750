"""Positional probabilities under arbitrary correlations via junction trees.

A junction tree holds binary presence variables (one per tuple) in small
overlapping cliques.  After calibration every clique table is the joint
marginal over its variables, every separator table the marginal over the
shared variables, and the full distribution factorizes as the product of
clique tables divided by the product of separator tables.

Ranking a tuple needs the distribution of the number of higher-scored
present tuples.  That is obtained by conditioning the tree on the tuple's
presence and running a partial-sum dynamic program bottom-up over the
(possibly several) resulting trees.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .engine import PrfScore, RankDistribution, Scores, order_scores
from .errors import (
    InconsistentPotentialsError,
    ShapeError,
    UnknownTupleError,
    ZeroProbabilityError,
)
from .model import Relation
from .weights import WeightFunction

#: Potential entries at or below this count as structural zeros.
ZERO_POTENTIAL = 1e-300

#: Tolerance of the calibration consistency check.
CALIBRATION_TOL = 1e-9


@dataclass(eq=False)
class Clique:
    """One clique: a variable scope and a table over {0,1}^len(vars).

    The table axes follow the order of ``vars``; entry [x1, ..., xk] is the
    (possibly unnormalized) potential of the assignment.
    """

    id: int
    vars: tuple[int, ...]
    table: np.ndarray

    def __post_init__(self) -> None:
        self.vars = tuple(self.vars)
        if len(set(self.vars)) != len(self.vars):
            raise ShapeError(f"clique {self.id}: duplicate variables {self.vars}")
        if not self.vars:
            raise ShapeError(f"clique {self.id}: empty variable scope")
        table = np.asarray(self.table, dtype=float)
        want = (2,) * len(self.vars)
        if table.shape != want:
            if table.size == 2 ** len(self.vars):
                table = table.reshape(want)
            else:
                raise ShapeError(
                    f"clique {self.id}: table size {table.size} does not cover "
                    f"{len(self.vars)} binary variables"
                )
        if float(table.min()) < 0.0:
            raise ShapeError(f"clique {self.id}: negative potential entry")
        self.table = np.where(table > ZERO_POTENTIAL, table, 0.0)


@dataclass(eq=False)
class SeparatorEdge:
    """An edge between two cliques and the table over the shared variables.

    An empty separator is allowed and couples nothing: the halves of the
    tree on either side are independent.  Its table is a scalar.
    """

    a: int
    b: int
    sep: tuple[int, ...]
    table: np.ndarray = None

    def __post_init__(self) -> None:
        self.sep = tuple(self.sep)
        if len(set(self.sep)) != len(self.sep):
            raise ShapeError(f"edge {self.a}-{self.b}: duplicate separator variables")
        if self.table is None:
            self.table = np.ones((2,) * len(self.sep))
        else:
            table = np.asarray(self.table, dtype=float)
            if table.shape != (2,) * len(self.sep):
                raise ShapeError(f"edge {self.a}-{self.b}: separator table shape")
            self.table = np.where(table > ZERO_POTENTIAL, table, 0.0)


@dataclass(eq=False)
class JunctionTree:
    """A tree of cliques whose separators carry the running intersection."""

    cliques: tuple[Clique, ...]
    edges: tuple[SeparatorEdge, ...]
    calibrated: bool = False

    def __post_init__(self) -> None:
        self.cliques = tuple(self.cliques)
        self.edges = tuple(self.edges)
        if not self.cliques:
            raise ShapeError("junction tree needs at least one clique")
        ids = [c.id for c in self.cliques]
        if len(set(ids)) != len(ids):
            raise ShapeError("duplicate clique ids")
        if len(self.edges) != len(self.cliques) - 1:
            raise ShapeError(
                f"{len(self.cliques)} cliques need {len(self.cliques) - 1} edges, "
                f"got {len(self.edges)}"
            )
        by_id = self.clique_by_id()
        for e in self.edges:
            if e.a not in by_id or e.b not in by_id:
                raise ShapeError(f"edge {e.a}-{e.b} references a missing clique")
            for v in e.sep:
                if v not in by_id[e.a].vars or v not in by_id[e.b].vars:
                    raise ShapeError(
                        f"edge {e.a}-{e.b}: separator variable {v} missing from "
                        "an endpoint clique"
                    )
        self._check_connected()
        self._check_running_intersection()

    def clique_by_id(self) -> dict[int, Clique]:
        return {c.id: c for c in self.cliques}

    def adjacency(self) -> dict[int, list[tuple[int, SeparatorEdge]]]:
        adj: dict[int, list[tuple[int, SeparatorEdge]]] = {
            c.id: [] for c in self.cliques
        }
        for e in self.edges:
            adj[e.a].append((e.b, e))
            adj[e.b].append((e.a, e))
        return adj

    @property
    def variables(self) -> tuple[int, ...]:
        seen: set[int] = set()
        for c in self.cliques:
            seen.update(c.vars)
        return tuple(sorted(seen))

    def _check_connected(self) -> None:
        adj = self.adjacency()
        seen = {self.cliques[0].id}
        stack = [self.cliques[0].id]
        while stack:
            for nxt, _ in adj[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if len(seen) != len(self.cliques):
            raise ShapeError("clique graph is not connected")

    def _check_running_intersection(self) -> None:
        # Every variable's cliques must be linked by edges whose separator
        # carries it: #cliques(v) - #edges(v) == 1 for each variable, given
        # the whole graph is a tree.
        holders: dict[int, int] = {}
        for c in self.cliques:
            for v in c.vars:
                holders[v] = holders.get(v, 0) + 1
        carried: dict[int, int] = {v: 0 for v in holders}
        for e in self.edges:
            for v in e.sep:
                carried[v] += 1
        for v, count in holders.items():
            if count - carried[v] != 1:
                raise ShapeError(
                    f"variable {v} appears in {count} cliques but "
                    f"{carried[v]} separators; running intersection fails"
                )


def _marginalize(table: np.ndarray, vars: tuple[int, ...], keep: tuple[int, ...]) -> np.ndarray:
    """Sum out every axis not in keep, returning axes in keep's order."""
    drop = tuple(i for i, v in enumerate(vars) if v not in keep)
    out = table.sum(axis=drop) if drop else table
    left = [v for v in vars if v in keep]
    perm = tuple(left.index(v) for v in keep)
    return out.transpose(perm) if perm != tuple(range(len(perm))) else out

def _expand(table: np.ndarray, sep: tuple[int, ...], vars: tuple[int, ...]) -> np.ndarray:
    """Broadcast a separator table across a clique's axes."""
    order = sorted(range(len(sep)), key=lambda i: vars.index(sep[i]))
    arranged = table.transpose(order) if order != list(range(len(sep))) else table
    shape = tuple(2 if v in sep else 1 for v in vars)
    return arranged.reshape(shape)


def _ratio(new: np.ndarray, old: np.ndarray, where: str) -> np.ndarray:
    """new / old with 0/0 = 0; a nonzero message into a zero entry is fatal."""
    bad = (old <= 0.0) & (new > 0.0)
    if bool(bad.any()):
        raise InconsistentPotentialsError(
            f"{where}: message places mass on a zero separator entry"
        )
    return np.divide(new, old, out=np.zeros_like(new), where=old > 0.0)


def _rooted_order(jt: JunctionTree, root: int) -> list[tuple[int, int, SeparatorEdge]]:
    """(clique, parent, connecting edge) pairs in BFS order from the root."""
    adj = jt.adjacency()
    order = [(root, None, None)]
    seen = {root}
    i = 0
    while i < len(order):
        node = order[i][0]
        i += 1
        for nxt, edge in adj[node]:
            if nxt not in seen:
                seen.add(nxt)
                order.append((nxt, node, edge))
    return order


def calibrate(jt: JunctionTree) -> JunctionTree:
    """Two-pass message passing; returns a new tree of joint marginals.

    After return every clique table is the joint marginal over its scope,
    every separator table the marginal over its variables, and all tables
    sum to one.
    """
    cliques = {c.id: Clique(c.id, c.vars, c.table.copy()) for c in jt.cliques}
    edges = {
        (e.a, e.b): SeparatorEdge(e.a, e.b, e.sep, e.table.copy()) for e in jt.edges
    }

    root = max(cliques)
    order = _rooted_order(jt, root)
    index = {(e.a, e.b): (e.a, e.b) for e in jt.edges}
    index.update({(e.b, e.a): (e.a, e.b) for e in jt.edges})

    def pass_message(src: int, dst: int) -> None:
        edge = edges[index[(src, dst)]]
        s, d = cliques[src], cliques[dst]
        msg = _marginalize(s.table, s.vars, edge.sep)
        ratio = _ratio(msg, edge.table, f"edge {edge.a}-{edge.b}")
        d.table = d.table * _expand(ratio, edge.sep, d.vars)
        edge.table = msg

    for node, parent, _ in reversed(order[1:]):
        pass_message(node, parent)
    for node, parent, _ in order[1:]:
        pass_message(parent, node)

    mass = float(cliques[root].table.sum())
    if mass <= 0.0:
        raise InconsistentPotentialsError("total potential mass is zero")
    for c in cliques.values():
        c.table = c.table / mass
    for e in edges.values():
        e.table = e.table / mass

    return JunctionTree(
        cliques=tuple(cliques[c.id] for c in jt.cliques),
        edges=tuple(edges[index[(e.a, e.b)]] for e in jt.edges),
        calibrated=True,
    )


def check_calibration(jt: JunctionTree, tol: float = CALIBRATION_TOL) -> None:
    """Raise unless tables are unit-mass marginals consistent on separators."""
    by_id = jt.clique_by_id()
    for c in jt.cliques:
        if abs(float(c.table.sum()) - 1.0) > tol:
            raise InconsistentPotentialsError(f"clique {c.id} mass != 1")
    for e in jt.edges:
        if abs(float(e.table.sum()) - 1.0) > tol:
            raise InconsistentPotentialsError(f"edge {e.a}-{e.b} mass != 1")
        for end in (e.a, e.b):
            c = by_id[end]
            got = _marginalize(c.table, c.vars, e.sep)
            if float(np.max(np.abs(got - e.table))) > tol:
                raise InconsistentPotentialsError(
                    f"clique {end} disagrees with separator {e.a}-{e.b}"
                )


def joint_distribution(jt: JunctionTree) -> tuple[tuple[int, ...], np.ndarray]:
    """The full joint as (variable order, table over {0,1}^m).

    Product of clique tables over product of separator tables, with 0/0
    read as 0.  Exponential in the variable count; intended for tests and
    small oracle checks.
    """
    vars = jt.variables
    joint = np.ones((2,) * len(vars))
    for c in jt.cliques:
        joint = joint * _expand(c.table, c.vars, vars)
    for e in jt.edges:
        denom = _expand(e.table, e.sep, vars)
        mask = denom > 0.0
        joint = np.divide(joint, denom, out=np.zeros_like(joint), where=mask)
        joint[~np.broadcast_to(mask, joint.shape)] = 0.0
    return vars, joint


def variable_marginal(jt: JunctionTree, var: int) -> float:
    """Pr(var = 1) read off any calibrated clique containing it."""
    for c in jt.cliques:
        if var in c.vars:
            return float(_marginalize(c.table, c.vars, (var,))[1])
    raise UnknownTupleError(f"variable {var} not in the junction tree")


def _require_calibrated(jt: JunctionTree) -> None:
    if not jt.calibrated:
        raise ShapeError("junction tree must be calibrated first")


def condition_on_presence(
    jt: JunctionTree, var: int
) -> tuple[list[JunctionTree], float]:
    """Fix one variable to 1: the conditional trees and the variable's mass.

    Slices the var=1 rows out of every table containing the variable and
    recalibrates.  When the variable sat on separators the remainder falls
    apart into independent trees, returned in ascending order of their
    smallest clique id; conditioning away the only variable returns no
    trees.  The scalar is Pr(var = 1) in the input tree.
    """
    _require_calibrated(jt)
    p1 = variable_marginal(jt, var)
    if p1 <= ZERO_POTENTIAL:
        raise ZeroProbabilityError(f"variable {var} is never present")

    kept: dict[int, Clique] = {}
    for c in jt.cliques:
        if var not in c.vars:
            kept[c.id] = Clique(c.id, c.vars, c.table.copy())
            continue
        axis = c.vars.index(var)
        sliced = np.take(c.table, 1, axis=axis)
        rest = tuple(v for v in c.vars if v != var)
        if rest:
            kept[c.id] = Clique(c.id, rest, sliced)

    surviving_edges: list[SeparatorEdge] = []
    for e in jt.edges:
        if e.a not in kept or e.b not in kept:
            continue
        if var in e.sep:
            axis = e.sep.index(var)
            sep = tuple(v for v in e.sep if v != var)
            if not sep:
                continue
            surviving_edges.append(
                SeparatorEdge(e.a, e.b, sep, np.take(e.table, 1, axis=axis))
            )
        else:
            surviving_edges.append(SeparatorEdge(e.a, e.b, e.sep, e.table.copy()))

    # group the remainder into connected components
    adj: dict[int, list[int]] = {cid: [] for cid in kept}
    for e in surviving_edges:
        adj[e.a].append(e.b)
        adj[e.b].append(e.a)
    components: list[list[int]] = []
    unseen = set(kept)
    while unseen:
        start = min(unseen)
        comp = [start]
        unseen.remove(start)
        stack = [start]
        while stack:
            for nxt in adj[stack.pop()]:
                if nxt in unseen:
                    unseen.remove(nxt)
                    comp.append(nxt)
                    stack.append(nxt)
        components.append(sorted(comp))
    components.sort(key=lambda comp: comp[0])

    trees = []
    for comp in components:
        members = set(comp)
        trees.append(
            calibrate(
                JunctionTree(
                    cliques=tuple(kept[cid] for cid in comp),
                    edges=tuple(
                        e for e in surviving_edges if e.a in members and e.b in members
                    ),
                )
            )
        )
    return trees, p1


# --------------------------------------------------------------------------
# partial-sum dynamic programs


def _check_deltas(jt: JunctionTree, deltas: Mapping[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for v in jt.variables:
        if v not in deltas:
            raise ShapeError(f"no indicator weight for variable {v}")
        d = int(deltas[v])
        if d not in (0, 1):
            raise ShapeError(f"indicator weight of variable {v} must be 0 or 1")
        out[v] = d
    return out


def is_markov_path(jt: JunctionTree) -> bool:
    """True when every clique has two variables chained into a simple path."""
    if len(jt.cliques) == 1:
        return len(jt.cliques[0].vars) <= 2
    if any(len(c.vars) != 2 for c in jt.cliques):
        return False
    degrees = {c.id: 0 for c in jt.cliques}
    for e in jt.edges:
        if len(e.sep) != 1:
            return False
        degrees[e.a] += 1
        degrees[e.b] += 1
    if max(degrees.values()) > 2:
        return False
    # A path of cliques is only a chain of variables when no separator
    # variable is reused: cliques (2,5)-(1,2)-(2,7) form a clique path but a
    # variable star around the hub 2.  Running intersection guarantees a
    # genuine chain uses each separator variable exactly once.
    sep_vars = [e.sep[0] for e in jt.edges]
    return len(set(sep_vars)) == len(sep_vars)


def _path_variable_order(jt: JunctionTree) -> list[int]:
    """Variables along the path, starting at the smaller endpoint clique."""
    if len(jt.cliques) == 1:
        return list(jt.cliques[0].vars)
    adj = jt.adjacency()
    by_id = jt.clique_by_id()
    ends = [cid for cid, nbrs in adj.items() if len(nbrs) == 1]
    node, prev = min(ends), None
    first_sep = next(e for n, e in adj[node] if n != prev).sep[0]
    order = [v for v in by_id[node].vars if v != first_sep] + [first_sep]
    seen = set(order)
    while True:
        nxt = next((n for n, _ in adj[node] if n != prev), None)
        if nxt is None:
            return order
        prev, node = node, nxt
        for v in by_id[node].vars:
            if v not in seen:
                seen.add(v)
                order.append(v)


def markov_chain_partial_sum(
    jt: JunctionTree, deltas: Mapping[int, int]
) -> np.ndarray:
    """Distribution of the weighted presence count along a chain.

    Entry a of the result is Pr(sum of delta-selected present variables
    equals a).  Quadratic in the chain length: the running state is the
    joint of the current variable and the partial sum so far.
    """
    _require_calibrated(jt)
    if not is_markov_path(jt):
        raise ShapeError("junction tree is not a two-variable chain")
    dmap = _check_deltas(jt, deltas)
    vars_in_order = _path_variable_order(jt)
    width = sum(dmap.values()) + 1

    by_pair: dict[frozenset[int], np.ndarray] = {}
    for c in jt.cliques:
        if len(c.vars) == 2:
            by_pair[frozenset(c.vars)] = _marginalize(c.table, c.vars, tuple(c.vars))

    first = vars_in_order[0]
    c0 = next(c for c in jt.cliques if first in c.vars)
    start = _marginalize(c0.table, c0.vars, (first,))
    state = np.zeros((2, width))
    state[0, 0] = start[0]
    state[1, dmap[first]] = start[1]

    for j in range(1, len(vars_in_order)):
        prev_v, cur_v = vars_in_order[j - 1], vars_in_order[j]
        clique = next(c for c in jt.cliques if set(c.vars) == {prev_v, cur_v})
        joint = _marginalize(clique.table, clique.vars, (prev_v, cur_v))
        prior = joint.sum(axis=1)
        cond = _ratio(joint, prior[:, None] * np.ones((1, 2)), "chain step")
        moved = cond.T @ state
        if dmap[cur_v]:
            shifted = np.zeros_like(moved)
            shifted[0] = moved[0]
            shifted[1, 1:] = moved[1, :-1]
            state = shifted
        else:
            state = moved
    return state.sum(axis=0)


def junction_tree_partial_sum(
    jt: JunctionTree, deltas: Mapping[int, int]
) -> np.ndarray:
    """Distribution of the weighted presence count over an arbitrary tree.

    Bottom-up over the cliques rooted at the highest clique id: each child
    message is the joint of a separator assignment and the partial sum
    strictly below it; a clique absorbs children by convolution, adds its
    own newly-covered variables, and marginalizes onto its parent separator.
    """
    _require_calibrated(jt)
    dmap = _check_deltas(jt, deltas)
    by_id = jt.clique_by_id()
    root = max(by_id)
    order = _rooted_order(jt, root)
    children: dict[int, list[tuple[int, SeparatorEdge]]] = {cid: [] for cid in by_id}
    parent_edge: dict[int, SeparatorEdge] = {}
    for node, parent, edge in order[1:]:
        children[parent].append((node, edge))
        parent_edge[node] = edge

    messages: dict[int, np.ndarray] = {}
    for node, parent, _ in reversed(order):
        clique = by_id[node]
        k = len(clique.vars)
        state = clique.table[..., None].copy()
        for child, edge in children[node]:
            msg = messages.pop(child)
            sep_table = _marginalize(clique.table, clique.vars, edge.sep)
            cond = _ratio(msg, sep_table[..., None], f"edge {edge.a}-{edge.b}")
            # expand separator axes onto the clique's axes
            expand_shape = tuple(
                2 if v in edge.sep else 1 for v in clique.vars
            ) + (msg.shape[-1],)
            arrange = sorted(
                range(len(edge.sep)), key=lambda i: clique.vars.index(edge.sep[i])
            )
            cond = cond.transpose(tuple(arrange) + (len(edge.sep),)).reshape(
                expand_shape
            )
            wa, wb = state.shape[-1], cond.shape[-1]
            merged = np.zeros(state.shape[:-1] + (wa + wb - 1,))
            for b in range(wb):
                merged[..., b : b + wa] += state * cond[..., b : b + 1]
            state = merged
        keep = parent_edge[node].sep if node != root else ()
        own = [v for v in clique.vars if v not in keep and dmap[v]]
        if own:
            shift = np.zeros((2,) * k, dtype=int)
            for v in own:
                axis_shape = tuple(2 if u == v else 1 for u in clique.vars)
                shift = shift + np.arange(2).reshape(axis_shape)
            max_shift = int(shift.max())
            wa = state.shape[-1]
            shifted = np.zeros(state.shape[:-1] + (wa + max_shift,))
            for s in range(max_shift + 1):
                mask = shift == s
                shifted[mask, s : s + wa] += state[mask, :]
            state = shifted
        if node == root:
            total = state.reshape(-1, state.shape[-1]).sum(axis=0)
            width = sum(dmap.values()) + 1
            out = np.zeros(width)
            out[: total.shape[0]] = total
            return out
        sep = parent_edge[node].sep
        drop = tuple(i for i, v in enumerate(clique.vars) if v not in sep)
        summed = state.sum(axis=drop) if drop else state
        left = [v for v in clique.vars if v in sep]
        perm = tuple(left.index(v) for v in sep) + (len(sep),)
        messages[node] = summed.transpose(perm)
    raise AssertionError("unreachable")


def partial_sum(jt: JunctionTree, deltas: Mapping[int, int]) -> np.ndarray:
    """Dispatch to the chain program when the tree is a simple path."""
    if is_markov_path(jt):
        return markov_chain_partial_sum(jt, deltas)
    return junction_tree_partial_sum(jt, deltas)


# --------------------------------------------------------------------------
# ranking


def _check_binding(jt: JunctionTree, rel: Relation) -> None:
    vars = set(jt.variables)
    ids = {t.id for t in rel}
    if vars != ids:
        missing = sorted(ids - vars) + sorted(vars - ids)
        raise UnknownTupleError(
            f"tree variables and relation ids disagree on {missing}"
        )


def rank_distributions_jt(jt: JunctionTree, rel: Relation) -> list[RankDistribution]:
    """Every tuple's rank distribution under the tree's correlations.

    Per tuple: condition the tree on its presence, mark every higher-scored
    tuple with indicator one, run the partial-sum program per resulting
    tree, convolve the pieces, and scale by the tuple's own mass.
    """
    _require_calibrated(jt)
    _check_binding(jt, rel)
    ts = list(rel.sorted().tuples)
    n = len(ts)
    out: list[RankDistribution] = []
    preceding: set[int] = set()
    for t in ts:
        trees, p1 = condition_on_presence(jt, t.id)
        combined = np.ones(1)
        for sub in trees:
            deltas = {v: (1 if v in preceding else 0) for v in sub.variables}
            combined = np.convolve(combined, partial_sum(sub, deltas))
        probs = np.zeros(n)
        m = min(len(combined), n)
        probs[:m] = np.clip(combined[:m], 0.0, None) * p1
        dist = RankDistribution(tuple_id=t.id, probs=probs)
        dist.check_mass(p1)
        out.append(dist)
        preceding.add(t.id)
    return out


def independent_junction_tree(rel: Relation) -> JunctionTree:
    """Encode a relation of independent tuples as a calibrated tree.

    One single-variable clique per tuple with table (1 - p, p), chained by
    empty separators so the joint stays a plain product.
    """
    ids = sorted(t.id for t in rel)
    if not ids:
        raise ShapeError("cannot build a junction tree for an empty relation")
    by_id = {t.id: t for t in rel}
    cliques = tuple(
        Clique(i, (i,), np.array([1.0 - by_id[i].prob, by_id[i].prob]))
        for i in ids
    )
    edges = tuple(
        SeparatorEdge(a=ids[j - 1], b=ids[j], sep=()) for j in range(1, len(ids))
    )
    return calibrate(JunctionTree(cliques=cliques, edges=edges))


def rank_prf_jt(jt: JunctionTree, rel: Relation, wf: WeightFunction) -> Scores:
    """Ranking scores from junction-tree positional probabilities."""
    dists = rank_distributions_jt(jt, rel)
    ts = {t.id: t for t in rel}
    n = len(dists)
    cutoff = wf.cutoff()
    h = n if cutoff is None else min(cutoff, n)
    weights = np.asarray(wf.weights(h)) if h else np.zeros(0)
    scores = []
    for d in dists:
        value = complex(weights @ d.probs[:h]) if h else 0j
        scores.append(PrfScore.of(d.tuple_id, wf.tuple_factor(ts[d.tuple_id]) * value))
    return order_scores(scores)


# --------------------------------------------------------------------------
# serialization


def junction_tree_from_json(data: dict) -> JunctionTree:
    """Build and calibrate a tree from its JSON description."""
    try:
        variables = [int(v) for v in data["variables"]]
        cliques = tuple(
            Clique(
                id=int(c["id"]),
                vars=tuple(int(v) for v in c["vars"]),
                table=np.asarray(c["table"], dtype=float),
            )
            for c in data["cliques"]
        )
        edges = tuple(
            SeparatorEdge(
                a=int(e["a"]),
                b=int(e["b"]),
                sep=tuple(int(v) for v in e["separator_vars"]),
            )
            for e in data["edges"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeError(f"malformed junction tree description: {exc}") from exc
    jt = JunctionTree(cliques=cliques, edges=edges)
    if set(jt.variables) != set(variables):
        raise ShapeError("declared variables disagree with clique scopes")
    return calibrate(jt)


def junction_tree_to_json(jt: JunctionTree) -> dict:
    """JSON description whose reload reproduces the same distribution.

    Each non-root clique's table is divided by its parent separator, so the
    plain product of the emitted tables equals the tree's joint.
    """
    _require_calibrated(jt)
    by_id = jt.clique_by_id()
    root = max(by_id)
    tables: dict[int, np.ndarray] = {c.id: c.table for c in jt.cliques}
    for node, _parent, edge in _rooted_order(jt, root)[1:]:
        clique = by_id[node]
        denom = _expand(edge.table, edge.sep, clique.vars)
        tables[node] = np.divide(
            clique.table,
            denom,
            out=np.zeros_like(clique.table),
            where=denom > 0.0,
        )
    return {
        "variables": list(jt.variables),
        "cliques": [
            {
                "id": c.id,
                "vars": list(c.vars),
                "table": tables[c.id].reshape(-1).tolist(),
            }
            for c in jt.cliques
        ],
        "edges": [
            {"a": e.a, "b": e.b, "separator_vars": list(e.sep)} for e in jt.edges
        ],
    }


def save_junction_tree_json(jt: JunctionTree, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(junction_tree_to_json(jt), fh, indent=2)
        fh.write("\n")


def load_junction_tree_json(path: str) -> JunctionTree:
    with open(path) as fh:
        return junction_tree_from_json(json.load(fh))
