"""Shared fixtures: the small worked examples used across test modules."""

from __future__ import annotations

import pytest

from prank.model import (
    AndXorTree,
    ProbTuple,
    Relation,
    TreeAnd,
    TreeLeaf,
    TreeXor,
    XorEdge,
)


@pytest.fixture
def three_tuple_relation() -> Relation:
    """Three independent tuples, scores descending: probs .5, .6, .4."""
    return Relation.of(
        [
            ProbTuple(id=1, score=300.0, prob=0.5),
            ProbTuple(id=2, score=200.0, prob=0.6),
            ProbTuple(id=3, score=100.0, prob=0.4),
        ]
    )


def build_six_tuple_tree() -> AndXorTree:
    """Six tuples; (t2, t3) and (t4, t5) mutually exclusive, t6 certain."""
    t1 = ProbTuple(id=1, score=120.0, prob=0.4)
    t2 = ProbTuple(id=2, score=130.0, prob=0.7)
    t3 = ProbTuple(id=3, score=80.0, prob=0.3)
    t4 = ProbTuple(id=4, score=95.0, prob=0.4)
    t5 = ProbTuple(id=5, score=110.0, prob=0.6)
    t6 = ProbTuple(id=6, score=105.0, prob=1.0)
    root = TreeAnd(
        children=(
            TreeXor(children=(XorEdge(p=0.4, node=TreeLeaf(t1)),)),
            TreeXor(
                children=(
                    XorEdge(p=0.7, node=TreeLeaf(t2)),
                    XorEdge(p=0.3, node=TreeLeaf(t3)),
                )
            ),
            TreeXor(
                children=(
                    XorEdge(p=0.4, node=TreeLeaf(t4)),
                    XorEdge(p=0.6, node=TreeLeaf(t5)),
                )
            ),
            TreeXor(children=(XorEdge(p=1.0, node=TreeLeaf(t6)),)),
        )
    )
    return AndXorTree(root=root)


@pytest.fixture
def six_tuple_tree() -> AndXorTree:
    return build_six_tuple_tree()


#: The eight worlds of the six-tuple tree, keyed by membership.
SIX_TUPLE_WORLDS = {
    frozenset({1, 2, 4, 6}): 0.112,
    frozenset({1, 2, 5, 6}): 0.168,
    frozenset({1, 3, 4, 6}): 0.048,
    frozenset({1, 3, 5, 6}): 0.072,
    frozenset({2, 4, 6}): 0.168,
    frozenset({2, 5, 6}): 0.252,
    frozenset({3, 4, 6}): 0.072,
    frozenset({3, 5, 6}): 0.108,
}
