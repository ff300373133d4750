"""Probabilistic relations, and/xor correlation trees, and possible-worlds semantics.

A model is either a :class:`Relation` (tuples present independently with their
own probabilities) or an :class:`AndXorTree` (leaves are tuples, inner nodes
compose them: an ``xor`` node realizes at most one child, chosen with the
probability on its edge; an ``and`` node realizes the union of all children).
Both induce a distribution over possible worlds.  The enumeration helpers in
this module are deliberately naive; they are the ground truth that every fast
algorithm in the package is tested against.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .errors import (
    InvalidTreeError,
    ProbabilityConstraintError,
    SizeLimitError,
    UnknownTupleError,
)

#: Rank reported for a tuple that does not appear in a world.
ABSENT: float = math.inf

#: Hard cap on leaves for exhaustive world enumeration (2**24 subsets).
MAX_ENUM_LEAVES = 24

#: Edge probabilities below this are rejected as degenerate.
MIN_EDGE_PROB = 1e-12

#: Slack allowed on sums of sibling xor-edge probabilities.
XOR_SUM_TOL = 1e-9


@dataclass(frozen=True)
class ProbTuple:
    """One uncertain tuple: identity, score, and marginal membership probability.

    ``key`` is an optional attribute-key label; tuples sharing a key are
    mutually exclusive and a valid tree must place their leaves under a common
    xor ancestor.
    """

    id: int
    score: float
    prob: float
    key: str | None = None

    def __post_init__(self) -> None:
        if not (0.0 < self.prob <= 1.0):
            raise ProbabilityConstraintError(
                f"tuple {self.id}: prob must lie in (0, 1], got {self.prob!r}"
            )
        if not math.isfinite(self.score):
            raise ValueError(f"tuple {self.id}: score must be finite")


def sort_key(t: ProbTuple) -> tuple[float, int]:
    """Global ordering key: descending score, ties by ascending id."""
    return (-t.score, t.id)


@dataclass(frozen=True)
class Relation:
    """A set of independent probabilistic tuples.

    ``sorted_flag`` records whether ``tuples`` is already in score order so
    repeated ranking calls can skip the sort.
    """

    tuples: tuple[ProbTuple, ...]
    sorted_flag: bool = False

    def __post_init__(self) -> None:
        ids = [t.id for t in self.tuples]
        if len(ids) != len(set(ids)):
            raise ValueError("duplicate tuple ids in relation")

    @staticmethod
    def of(tuples: Iterable[ProbTuple]) -> "Relation":
        return Relation(tuples=tuple(tuples))

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self) -> Iterator[ProbTuple]:
        return iter(self.tuples)

    def by_id(self) -> dict[int, ProbTuple]:
        return {t.id: t for t in self.tuples}

    def sorted(self) -> "Relation":
        """Return a copy ordered by descending score (ties by ascending id)."""
        if self.sorted_flag:
            return self
        ordered = tuple(sorted(self.tuples, key=sort_key))
        return Relation(tuples=ordered, sorted_flag=True)


# --------------------------------------------------------------------------
# and/xor trees


@dataclass(frozen=True)
class TreeLeaf:
    tuple: ProbTuple


@dataclass(frozen=True)
class XorEdge:
    p: float
    node: "TreeNode"


@dataclass(frozen=True)
class TreeAnd:
    children: tuple["TreeNode", ...]


@dataclass(frozen=True)
class TreeXor:
    children: tuple[XorEdge, ...]


TreeNode = Union[TreeLeaf, TreeAnd, TreeXor]


@dataclass(frozen=True)
class AndXorTree:
    """A correlation tree over probabilistic tuples.

    Semantics per node: a leaf is always realized once reached; an ``and``
    node realizes every child; an ``xor`` node realizes child ``i`` with the
    probability on edge ``i`` (edge probabilities sum to at most one, the
    leftover mass realizing nothing).
    """

    root: TreeNode
    _leaves: tuple[ProbTuple, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        leaves = tuple(l.tuple for l in iter_leaves(self.root))
        object.__setattr__(self, "_leaves", leaves)
        ids = [t.id for t in leaves]
        if len(ids) != len(set(ids)):
            raise InvalidTreeError("duplicate tuple ids among tree leaves")

    @property
    def leaves(self) -> tuple[ProbTuple, ...]:
        return self._leaves

    def __len__(self) -> int:
        return len(self._leaves)

    def by_id(self) -> dict[int, ProbTuple]:
        return {t.id: t for t in self._leaves}

    def relation(self) -> Relation:
        """The leaves as a relation, probabilities set to tree marginals."""
        margs = tree_marginals(self)
        return Relation.of(
            ProbTuple(id=t.id, score=t.score, prob=margs[t.id], key=t.key)
            for t in self._leaves
        )


Model = Union[Relation, AndXorTree]


def iter_leaves(node: TreeNode) -> Iterator[TreeLeaf]:
    if isinstance(node, TreeLeaf):
        yield node
    elif isinstance(node, TreeAnd):
        for c in node.children:
            yield from iter_leaves(c)
    elif isinstance(node, TreeXor):
        for e in node.children:
            yield from iter_leaves(e.node)
    else:  # pragma: no cover
        raise TypeError(f"unknown node type {type(node)!r}")


def tree_depth(node: TreeNode) -> int:
    """Count of inner-node levels on the deepest root-to-leaf path."""
    if isinstance(node, TreeLeaf):
        return 0
    if isinstance(node, TreeAnd):
        kids = node.children
    else:
        kids = tuple(e.node for e in node.children)
    return 1 + max((tree_depth(c) for c in kids), default=0)


def tree_marginals(tree: AndXorTree) -> dict[int, float]:
    """Marginal membership probability of every leaf.

    A leaf is realized exactly when every xor ancestor picks the edge leading
    to it, so the marginal is the product of edge probabilities on the path.
    """
    out: dict[int, float] = {}

    def walk(node: TreeNode, acc: float) -> None:
        if isinstance(node, TreeLeaf):
            out[node.tuple.id] = acc
        elif isinstance(node, TreeAnd):
            for c in node.children:
                walk(c, acc)
        else:
            for e in node.children:
                walk(e.node, acc * e.p)

    walk(tree.root, 1.0)
    return out


def validate_tree(tree: AndXorTree) -> list[str]:
    """Structural check; returns a list of human-readable violations.

    Checks per xor node: each edge probability in [MIN_EDGE_PROB, 1], sibling
    sum at most 1 (within tolerance).  Tuples sharing an attribute key must
    have an xor node as their lowest common ancestor, which makes them
    mutually exclusive.
    """
    problems: list[str] = []
    seen_ids: set[int] = set()
    # leaf id -> path of node indices from the root, to locate LCAs
    leaf_paths: dict[int, tuple[tuple[str, int], ...]] = {}
    node_kind: dict[tuple[tuple[str, int], ...], str] = {}

    def walk(node: TreeNode, path: tuple[tuple[str, int], ...], label: str) -> None:
        if isinstance(node, TreeLeaf):
            t = node.tuple
            if t.id in seen_ids:
                problems.append(f"{label}: duplicate tuple id {t.id}")
            seen_ids.add(t.id)
            leaf_paths[t.id] = path
            return
        if isinstance(node, TreeAnd):
            node_kind[path] = "and"
            if not node.children:
                problems.append(f"{label}: and node with no children")
            for i, c in enumerate(node.children):
                walk(c, path + (("and", i),), f"{label}.children[{i}]")
            return
        node_kind[path] = "xor"
        if not node.children:
            problems.append(f"{label}: xor node with no children")
        total = 0.0
        for i, e in enumerate(node.children):
            if e.p > 1.0:
                problems.append(f"{label}.children[{i}]: edge probability {e.p} > 1")
            elif e.p < MIN_EDGE_PROB:
                problems.append(
                    f"{label}.children[{i}]: edge probability {e.p} below {MIN_EDGE_PROB}"
                )
            total += e.p
            walk(e.node, path + (("xor", i),), f"{label}.children[{i}]")
        if total > 1.0 + XOR_SUM_TOL:
            problems.append(f"{label}: xor edge probabilities sum to {total} > 1")

    walk(tree.root, (), "root")

    # key constraint: same-key leaves need an xor LCA
    by_key: dict[str, list[int]] = {}
    for t in tree.leaves:
        if t.key is not None:
            by_key.setdefault(t.key, []).append(t.id)
    for key, ids in by_key.items():
        for a_pos in range(len(ids)):
            for b_pos in range(a_pos + 1, len(ids)):
                a, b = ids[a_pos], ids[b_pos]
                pa, pb = leaf_paths[a], leaf_paths[b]
                common = 0
                while common < len(pa) and common < len(pb) and pa[common] == pb[common]:
                    common += 1
                lca = pa[:common]
                if node_kind.get(lca) != "xor":
                    problems.append(
                        f"key {key!r}: tuples {a} and {b} are not separated by an xor node"
                    )
    return problems


def make_xtuple_tree(groups: Iterable[Iterable[ProbTuple]]) -> AndXorTree:
    """Build the height-2 tree for x-tuples: one xor node per exclusive group.

    Edge probabilities are taken from the member tuples' own probabilities;
    the sum within a group must not exceed one.
    """
    xor_nodes: list[TreeNode] = []
    for g in groups:
        members = tuple(g)
        total = sum(t.prob for t in members)
        if total > 1.0 + XOR_SUM_TOL:
            ids = [t.id for t in members]
            raise ProbabilityConstraintError(
                f"x-tuple group {ids}: probabilities sum to {total} > 1"
            )
        xor_nodes.append(
            TreeXor(children=tuple(XorEdge(p=t.prob, node=TreeLeaf(t)) for t in members))
        )
    return AndXorTree(root=TreeAnd(children=tuple(xor_nodes)))


# --------------------------------------------------------------------------
# possible worlds


@dataclass(frozen=True)
class PossibleWorld:
    members: frozenset[int]
    prob: float


def _model_tuples(model: Model) -> tuple[ProbTuple, ...]:
    if isinstance(model, Relation):
        return model.tuples
    return model.leaves


def enumerate_worlds(model: Model) -> list[PossibleWorld]:
    """All possible worlds with their probabilities.

    Worlds with identical membership are merged.  Exponential in the number
    of tuples; guarded at MAX_ENUM_LEAVES.
    """
    n = len(_model_tuples(model))
    if n > MAX_ENUM_LEAVES:
        raise SizeLimitError(f"{n} tuples exceed the enumeration cap of {MAX_ENUM_LEAVES}")

    if isinstance(model, Relation):
        dist: dict[frozenset[int], float] = {frozenset(): 1.0}
        for t in model.tuples:
            nxt: dict[frozenset[int], float] = {}
            for s, q in dist.items():
                nxt[s] = nxt.get(s, 0.0) + q * (1.0 - t.prob)
                s2 = s | {t.id}
                nxt[s2] = nxt.get(s2, 0.0) + q * t.prob
            dist = nxt
    else:
        dist = _subset_distribution(model.root)

    worlds = [PossibleWorld(members=s, prob=q) for s, q in dist.items()]
    worlds.sort(key=lambda w: tuple(sorted(w.members)))
    return worlds


def _subset_distribution(node: TreeNode) -> dict[frozenset[int], float]:
    if isinstance(node, TreeLeaf):
        return {frozenset({node.tuple.id}): 1.0}
    if isinstance(node, TreeAnd):
        acc: dict[frozenset[int], float] = {frozenset(): 1.0}
        for c in node.children:
            child = _subset_distribution(c)
            nxt: dict[frozenset[int], float] = {}
            for s1, q1 in acc.items():
                for s2, q2 in child.items():
                    s = s1 | s2
                    nxt[s] = nxt.get(s, 0.0) + q1 * q2
            acc = nxt
        return acc
    # xor: one child realized with its edge probability, or nothing
    out: dict[frozenset[int], float] = {}
    leftover = 1.0
    for e in node.children:
        leftover -= e.p
        for s, q in _subset_distribution(e.node).items():
            out[s] = out.get(s, 0.0) + e.p * q
    # sums meant to be exactly 1 can leave float dust; don't invent a world for it
    if leftover > MIN_EDGE_PROB:
        out[frozenset()] = out.get(frozenset(), 0.0) + leftover
    return out


def world_rank(world: PossibleWorld, model: Model, tuple_id: int) -> float:
    """1-based rank of a tuple inside one world, or ABSENT.

    Members are ordered by descending score with ties broken by ascending id.
    """
    by_id = (
        model.by_id() if isinstance(model, Relation) else model.by_id()
    )
    if tuple_id not in by_id:
        raise UnknownTupleError(f"tuple {tuple_id} not in model")
    if tuple_id not in world.members:
        return ABSENT
    ordered = sorted((by_id[m] for m in world.members), key=sort_key)
    for pos, t in enumerate(ordered, start=1):
        if t.id == tuple_id:
            return pos
    raise AssertionError("unreachable")  # pragma: no cover


def positional_prob_oracle(model: Model, tuple_id: int, j: int) -> float:
    """Pr(tuple ranks exactly j) by exhaustive world enumeration."""
    total = 0.0
    for w in enumerate_worlds(model):
        if world_rank(w, model, tuple_id) == j:
            total += w.prob
    return total


def positional_matrix_oracle(model: Model) -> dict[int, list[float]]:
    """Whole positional table Pr(rank = j) for every tuple, j = 1..n.

    One enumeration pass shared by all tuples; same semantics as
    positional_prob_oracle.
    """
    tuples = _model_tuples(model)
    n = len(tuples)
    ids = {t.id: t for t in tuples}
    out = {t.id: [0.0] * n for t in tuples}
    for w in enumerate_worlds(model):
        ordered = sorted((ids[m] for m in w.members), key=sort_key)
        for pos, t in enumerate(ordered):
            out[t.id][pos] += w.prob
    return out


# --------------------------------------------------------------------------
# serialization

CSV_HEADER = ["id", "score", "prob"]


def load_relation_csv(path: str) -> Relation:
    """Read a relation from CSV with header ``id,score,prob``."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != CSV_HEADER:
            raise ValueError(f"{path}: expected header {','.join(CSV_HEADER)}")
        tuples = []
        for row in reader:
            if not row:
                continue
            tuples.append(
                ProbTuple(id=int(row[0]), score=float(row[1]), prob=float(row[2]))
            )
    return Relation.of(tuples)


def save_relation_csv(rel: Relation, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for t in rel.tuples:
            writer.writerow([t.id, repr(t.score), repr(t.prob)])


def _tuple_to_json(t: ProbTuple) -> dict:
    d = {"id": t.id, "score": t.score, "prob": t.prob}
    if t.key is not None:
        d["key"] = t.key
    return d


def _tuple_from_json(d: dict) -> ProbTuple:
    return ProbTuple(
        id=int(d["id"]), score=float(d["score"]), prob=float(d["prob"]),
        key=d.get("key"),
    )


def _node_to_json(node: TreeNode) -> dict:
    if isinstance(node, TreeLeaf):
        return {"kind": "leaf", "tuple": _tuple_to_json(node.tuple)}
    if isinstance(node, TreeAnd):
        return {
            "kind": "and",
            "children": [{"node": _node_to_json(c)} for c in node.children],
        }
    return {
        "kind": "xor",
        "children": [
            {"p": e.p, "node": _node_to_json(e.node)} for e in node.children
        ],
    }


def _node_from_json(d: dict) -> TreeNode:
    kind = d.get("kind")
    if kind == "leaf":
        return TreeLeaf(_tuple_from_json(d["tuple"]))
    if kind == "and":
        return TreeAnd(
            children=tuple(_node_from_json(c["node"]) for c in d["children"])
        )
    if kind == "xor":
        return TreeXor(
            children=tuple(
                XorEdge(p=float(c["p"]), node=_node_from_json(c["node"]))
                for c in d["children"]
            )
        )
    raise ValueError(f"unknown node kind {kind!r}")


def tree_to_json(tree: AndXorTree) -> dict:
    return _node_to_json(tree.root)


def tree_from_json(data: dict) -> AndXorTree:
    tree = AndXorTree(root=_node_from_json(data))
    problems = validate_tree(tree)
    if problems:
        raise InvalidTreeError("; ".join(problems))
    return tree


def load_tree_json(path: str) -> AndXorTree:
    with open(path) as fh:
        return tree_from_json(json.load(fh))


def save_tree_json(tree: AndXorTree, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(tree_to_json(tree), fh, indent=2)
        fh.write("\n")
