"""Synthetic model generation for tests and benchmarks.

Tree shape is controlled by three knobs: the inner-node height, the maximum
degree of non-root nodes, and the xor:and ratio among non-root inner nodes.
The root is always an and node (it unions the database); an infinite ratio
means every other inner node is an xor, which is exactly the x-tuple shape
at height two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    AndXorTree,
    ProbTuple,
    Relation,
    TreeAnd,
    TreeLeaf,
    TreeNode,
    TreeXor,
    XorEdge,
)

GENERATOR_NAME = "numpy PCG64"


@dataclass(frozen=True)
class SynthSpec:
    height: int
    xor_ratio: float
    max_degree: int


PRESETS: dict[str, SynthSpec] = {
    "xor": SynthSpec(height=2, xor_ratio=math.inf, max_degree=5),
    "low": SynthSpec(height=3, xor_ratio=10.0, max_degree=2),
    "med": SynthSpec(height=5, xor_ratio=3.0, max_degree=5),
    "high": SynthSpec(height=5, xor_ratio=1.0, max_degree=10),
}

SCORE_RANGE = (0.0, 10000.0)


def gen_independent(n: int, rng: np.random.Generator, sorted_by_score: bool = False) -> Relation:
    """n independent tuples: scores uniform on [0, 10000], probs in (0, 1]."""
    scores = rng.uniform(*SCORE_RANGE, size=n)
    probs = 1.0 - rng.random(n)  # uniform on (0, 1]
    tuples = [
        ProbTuple(id=i + 1, score=float(scores[i]), prob=float(probs[i]))
        for i in range(n)
    ]
    rel = Relation.of(tuples)
    return rel.sorted() if sorted_by_score else rel


def gen_andxor(n: int, spec: SynthSpec, rng: np.random.Generator) -> AndXorTree:
    """Random correlation tree with exactly n leaves under the given shape."""
    counter = {"next_id": 1}

    def subtree_cap(level: int) -> float:
        # most leaves an inner node at this level can host
        if level > spec.height:
            return 1.0
        return float(spec.max_degree) ** (spec.height - level + 1)

    def make_leaf(acc_prob: float) -> TreeNode:
        tid = counter["next_id"]
        counter["next_id"] += 1
        score = float(rng.uniform(*SCORE_RANGE))
        return TreeLeaf(ProbTuple(id=tid, score=score, prob=acc_prob))

    def split_budget(budget: int, part_cap: float, max_parts: float) -> list[int]:
        parts: list[int] = []
        remaining = budget
        while remaining > 0:
            slots_left = max_parts - len(parts) - 1
            need = remaining - slots_left * part_cap  # lower bound so the rest still fits
            low = max(1, int(math.ceil(need)) if math.isfinite(need) else 1)
            high = int(min(part_cap, remaining))
            part = int(rng.integers(low, high + 1))
            parts.append(part)
            remaining -= part
        return parts

    def edge_probs(k: int) -> list[float]:
        raw = rng.uniform(0.1, 1.0, size=k)
        total = float(rng.uniform(0.5, 1.0))
        raw = raw / raw.sum() * total
        return [float(max(p, 1e-9)) for p in raw]

    def gen_node(level: int, budget: int, acc_prob: float) -> TreeNode:
        if level > spec.height:
            # budget reached 1 by construction: caps shrink to 1 at the bottom
            return make_leaf(acc_prob)
        if budget == 1 and rng.random() < 0.3:
            return make_leaf(acc_prob)
        is_xor = (
            spec.xor_ratio == math.inf
            or rng.random() < spec.xor_ratio / (1.0 + spec.xor_ratio)
        )
        parts = split_budget(budget, subtree_cap(level + 1), float(spec.max_degree))
        if is_xor:
            ps = edge_probs(len(parts))
            kids = tuple(
                XorEdge(p=ps[i], node=gen_node(level + 1, parts[i], acc_prob * ps[i]))
                for i in range(len(parts))
            )
            return TreeXor(children=kids)
        kids_and = tuple(gen_node(level + 1, b, acc_prob) for b in parts)
        return TreeAnd(children=kids_and)

    root_parts = split_budget(n, subtree_cap(2), math.inf)
    children = tuple(gen_node(2, b, 1.0) for b in root_parts)
    return AndXorTree(root=TreeAnd(children=children))


def gen_preset(n: int, kind: str, rng: np.random.Generator):
    """Dispatch by preset name; 'ind' yields a relation, others a tree."""
    if kind == "ind":
        return gen_independent(n, rng)
    if kind not in PRESETS:
        raise ValueError(f"unknown synthetic kind {kind!r}")
    return gen_andxor(n, PRESETS[kind], rng)


JUNCTION_SHAPES = ("chain", "star", "random")


def gen_junction(n: int, rng: np.random.Generator, shape: str = "random"):
    """Random calibrated junction tree over n presence variables.

    Returns the tree together with the relation bound to it: tuple ids are
    the variable ids, scores are fresh uniforms, and each tuple's prob field
    carries its marginal under the tree.  Cliques stay at four variables or
    fewer.  Shapes: a two-variable chain, a star around one central clique,
    or a random attachment tree mixing clique sizes.
    """
    from .jtree import JunctionTree, Clique, SeparatorEdge, calibrate, variable_marginal

    if n < 1:
        raise ValueError(f"need at least one variable, got {n}")
    if shape not in JUNCTION_SHAPES:
        raise ValueError(f"unknown junction shape {shape!r}")

    def table(k: int) -> np.ndarray:
        return rng.uniform(0.1, 1.0, size=(2,) * k)

    cliques: list[Clique] = []
    edges: list[SeparatorEdge] = []
    if n == 1 or (shape == "star" and n <= 2) or (shape == "random" and n == 1):
        cliques.append(Clique(id=1, vars=tuple(range(1, n + 1)), table=table(n)))
    elif shape == "chain":
        for j in range(1, n):
            cliques.append(Clique(id=j, vars=(j, j + 1), table=table(2)))
            if j > 1:
                edges.append(SeparatorEdge(a=j - 1, b=j, sep=(j,)))
    elif shape == "star":
        center = int(rng.integers(2, min(4, n - 1) + 1))
        cliques.append(Clique(id=1, vars=tuple(range(1, center + 1)), table=table(center)))
        for v in range(center + 1, n + 1):
            hub = int(rng.integers(1, center + 1))
            cid = len(cliques) + 1
            cliques.append(Clique(id=cid, vars=(hub, v), table=table(2)))
            edges.append(SeparatorEdge(a=1, b=cid, sep=(hub,)))
    else:
        first = int(rng.integers(1, min(4, n) + 1))
        cliques.append(Clique(id=1, vars=tuple(range(1, first + 1)), table=table(first)))
        next_var = first + 1
        while next_var <= n:
            host = cliques[int(rng.integers(0, len(cliques)))]
            ssize = int(rng.integers(1, min(3, len(host.vars)) + 1))
            shared = tuple(
                int(v) for v in rng.choice(host.vars, size=ssize, replace=False)
            )
            fresh = int(rng.integers(1, min(4 - ssize, n - next_var + 1) + 1))
            vars = shared + tuple(range(next_var, next_var + fresh))
            next_var += fresh
            cid = len(cliques) + 1
            cliques.append(Clique(id=cid, vars=vars, table=table(len(vars))))
            edges.append(SeparatorEdge(a=host.id, b=cid, sep=shared))

    jt = calibrate(JunctionTree(cliques=tuple(cliques), edges=tuple(edges)))
    scores = rng.uniform(*SCORE_RANGE, size=n)
    rel = Relation.of(
        ProbTuple(
            id=v, score=float(scores[v - 1]), prob=variable_marginal(jt, v)
        )
        for v in range(1, n + 1)
    )
    return jt, rel
