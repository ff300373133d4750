"""Acceptance gate: each criterion runs at its stated tolerance and budget
and reports one visible pass or fail line on the terminal."""

import itertools
import time

import numpy as np
import pytest

from conftest import SIX_TUPLE_WORLDS, build_six_tuple_tree
from test_polynomial import WORKED_COEFFS, worked_expression

from prank.approx import ApproxConfig, dft_approx_full, rank_mixture
from prank.cli import _oracle_checks_model
from prank.engine import (
    positional_matrix,
    rank_distributions_independent,
    rank_prf,
    rank_prfe,
    rank_prfe_independent,
)
from prank.jtree import (
    Clique,
    JunctionTree,
    SeparatorEdge,
    calibrate,
    condition_on_presence,
    joint_distribution,
    rank_distributions_jt,
    variable_marginal,
)
from prank.learn import PreferenceSample, alpha_distance, learn_alpha
from prank.model import ProbTuple, Relation, enumerate_worlds, sort_key
from prank.polynomial import Poly, expand_nested, poly_mul_fft, poly_mul_naive
from prank.ranking import (
    consensus_expected_distance,
    kendall,
    rank_pt,
    topk,
)
from prank.synth import PRESETS, gen_andxor, gen_independent, gen_junction
from prank.weights import Step, Tabulated


def run_criterion(capsys, number, name, budget, body):
    """Execute one criterion, print its line, and enforce the runtime budget."""
    start = time.perf_counter()
    try:
        detail = body()
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        with capsys.disabled():
            print(
                f"[acceptance] criterion {number} ({name}): FAIL; "
                f"{str(exc)[:160]}; {elapsed:.2f}s of {budget:.0f}s",
                flush=True,
            )
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < budget
    with capsys.disabled():
        print(
            f"[acceptance] criterion {number} ({name}): "
            f"{'PASS' if ok else 'FAIL'}; {detail}; "
            f"{elapsed:.2f}s of {budget:.0f}s",
            flush=True,
        )
    assert ok, f"criterion {number} exceeded its {budget:.0f}s budget"


def three_tuple_relation() -> Relation:
    return Relation.of(
        [
            ProbTuple(id=1, score=300.0, prob=0.5),
            ProbTuple(id=2, score=200.0, prob=0.6),
            ProbTuple(id=3, score=100.0, prob=0.4),
        ]
    )


def test_criterion_1_worked_examples(capsys):
    def body():
        rel = three_tuple_relation()
        dists = {d.tuple_id: d.probs for d in rank_distributions_independent(rel)}
        np.testing.assert_allclose(dists[3], [0.08, 0.2, 0.12], atol=1e-12)

        scores = {s.tuple_id: s.value for s in rank_prfe_independent(rel, 0.6)}
        assert scores[3].real == pytest.approx(0.14592, abs=1e-12)
        assert scores[3].imag == pytest.approx(0.0, abs=1e-12)

        tree = build_six_tuple_tree()
        worlds = {w.members: w.prob for w in enumerate_worlds(tree)}
        assert len(worlds) == len(SIX_TUPLE_WORLDS) == 8
        for members, prob in SIX_TUPLE_WORLDS.items():
            assert worlds[members] == pytest.approx(prob, abs=1e-12)

        from prank.engine import rank_distributions_andxor

        tdists = {d.tuple_id: d.probs for d in rank_distributions_andxor(tree)}
        assert tdists[4][2] == pytest.approx(0.216, abs=1e-12)

        consensus = consensus_expected_distance([2, 5], tree)
        assert consensus == pytest.approx(1.736, abs=1e-12)
        return "5 worked values exact at 1e-12"

    run_criterion(capsys, 1, "worked examples", 1.0, body)


def test_criterion_2_oracle_equivalence(capsys):
    def body():
        rng = np.random.default_rng(2024)
        kinds = sorted(PRESETS)
        worst = 0.0
        for trial in range(100):
            rel = gen_independent(int(rng.integers(2, 13)), rng)
            worst = max(worst, max(d for _, d in _oracle_checks_model(rel)))
        for trial in range(100):
            spec = PRESETS[kinds[trial % len(kinds)]]
            tree = gen_andxor(int(rng.integers(2, 13)), spec, rng)
            worst = max(worst, max(d for _, d in _oracle_checks_model(tree)))
        assert worst <= 1e-9, f"worst deviation {worst:.3e}"
        return f"200 models, worst deviation {worst:.2e} <= 1e-9"

    run_criterion(capsys, 2, "oracle equivalence", 60.0, body)


def _vector_rank_truth(jt, rel):
    """Positional truth from the calibrated joint, fully vectorized."""
    vars_, joint = joint_distribution(jt)
    m = len(vars_)
    flat = joint.ravel()
    idx = np.arange(flat.size)
    bits = ((idx[:, None] >> (m - 1 - np.arange(m))) & 1).astype(bool)
    col = {v: i for i, v in enumerate(vars_)}
    order = sorted(rel.tuples, key=sort_key)
    truth = {}
    preceding: list[int] = []
    for t in order:
        present = bits[:, col[t.id]]
        if preceding:
            pos = bits[:, preceding].sum(axis=1)
        else:
            pos = np.zeros(flat.size, dtype=int)
        probs = np.zeros(len(order))
        np.add.at(probs, pos[present], flat[present])
        truth[t.id] = probs
        preceding.append(col[t.id])
    return truth


def test_criterion_3_junction_trees(capsys):
    def body():
        rng = np.random.default_rng(3033)
        shapes = ("chain", "star", "random")
        worst = 0.0
        for trial in range(50):
            n = int(rng.integers(2, 17))
            jt, rel = gen_junction(n, rng, shape=shapes[trial % 3])
            truth = _vector_rank_truth(jt, rel)
            for dist in rank_distributions_jt(jt, rel):
                worst = max(
                    worst, float(np.max(np.abs(dist.probs - truth[dist.tuple_id])))
                )
        assert worst <= 1e-9, f"worst deviation {worst:.3e}"

        # conditioning splits on the branching topology
        prng = np.random.default_rng(3133)
        cliques = (
            Clique(1, (4, 5), prng.uniform(0.1, 1.0, (2, 2))),
            Clique(2, (3, 4), prng.uniform(0.1, 1.0, (2, 2))),
            Clique(3, (1, 3), prng.uniform(0.1, 1.0, (2, 2))),
            Clique(4, (2, 3), prng.uniform(0.1, 1.0, (2, 2))),
        )
        edges = (
            SeparatorEdge(1, 2, (4,)),
            SeparatorEdge(2, 3, (3,)),
            SeparatorEdge(2, 4, (3,)),
        )
        jt = calibrate(JunctionTree(cliques, edges))
        one, _ = condition_on_presence(jt, 5)
        assert len(one) == 1 and set(one[0].variables) == {1, 2, 3, 4}
        two, p1 = condition_on_presence(jt, 4)
        assert len(two) == 2
        assert set(two[0].variables) == {5}
        assert set(two[1].variables) == {1, 2, 3}
        vars_, joint = joint_distribution(jt)
        axis4 = vars_.index(4)
        sliced = np.take(joint, 1, axis=axis4)
        kept = [v for v in vars_ if v != 4]
        for sub in two:
            for v in sub.variables:
                vaxis = kept.index(v)
                drop = tuple(i for i in range(len(kept)) if i != vaxis)
                expect = sliced.sum(axis=drop)[1] / p1
                assert variable_marginal(sub, v) == pytest.approx(expect, abs=1e-9)
        return f"50 trees <= 16 vars, worst deviation {worst:.2e}; splits covered"

    run_criterion(capsys, 3, "junction trees", 120.0, body)


def test_criterion_4_consensus_theorems(capsys):
    def body():
        rng = np.random.default_rng(4044)
        checked = 0
        for trial in range(50):
            n = int(rng.integers(4, 8))
            if trial % 2 == 0:
                model = gen_independent(n, rng)
            else:
                kind = sorted(PRESETS)[trial % len(PRESETS)]
                model = gen_andxor(n, PRESETS[kind], rng)
            ids = sorted(
                t.id
                for t in (model.tuples if isinstance(model, Relation) else model.leaves)
            )
            for k in (1, 2, 3):
                if k > len(ids):
                    continue
                subsets = list(itertools.combinations(ids, k))

                best = min(
                    consensus_expected_distance(c, model) for c in subsets
                )
                ours = consensus_expected_distance(rank_pt(model, h=k, k=k), model)
                assert ours <= best + 1e-12, f"step suboptimal: {ours} > {best}"

                for _ in range(5):
                    w = np.sort(rng.uniform(0.05, 1.0, size=k))[::-1]
                    cand = topk(rank_prf(model, Tabulated(tuple(w))), k)
                    best_w = min(
                        consensus_expected_distance(c, model, dis=w) for c in subsets
                    )
                    ours_w = consensus_expected_distance(cand, model, dis=w)
                    assert ours_w <= best_w + 1e-12, (
                        f"weighted suboptimal: {ours_w} > {best_w}"
                    )
                checked += 1
        return f"{checked} exhaustive searches, both theorems hold exactly"

    run_criterion(capsys, 4, "consensus theorems", 60.0, body)


def test_criterion_5_single_crossing(capsys):
    def body():
        rng = np.random.default_rng(5055)
        grid = np.linspace(1.0 / 200.0, 1.0, 200)
        pairs = 0
        for trial in range(100):
            n = int(rng.integers(2, 11))
            rel = gen_independent(n, rng)
            ids, matrix = positional_matrix(rel, n)
            powers = grid[None, :] ** np.arange(1, n + 1)[:, None]
            mags = matrix @ powers
            first_pos = matrix[:, 0]
            presence = matrix.sum(axis=1)
            tol = 1e-12 * float(mags.max())
            for i in range(n):
                for j in range(i + 1, n):
                    diff = mags[i] - mags[j]
                    signs = np.sign(diff[np.abs(diff) > tol])
                    flips = int(np.count_nonzero(np.diff(signs) != 0))
                    assert flips <= 1, f"pair crossed {flips} times"
                    s0 = np.sign(first_pos[i] - first_pos[j])
                    s1 = np.sign(presence[i] - presence[j])
                    if s0 == s1 and s0 != 0:
                        assert flips == 0 and (signs == s0).all(), (
                            "concordant pair swapped"
                        )
                    pairs += 1
        return f"{pairs} tuple pairs over 200 alpha points, all single-crossing"

    run_criterion(capsys, 5, "prfe single crossing", 30.0, body)


def test_criterion_6_approximation_quality(capsys):
    def body():
        rel = gen_independent(10_000, np.random.default_rng(42), sorted_by_score=True)
        exact = topk(rank_prf(rel, Step(100)), 100)
        details = []
        for terms, bound in ((40, 0.1), (20, 0.2)):
            mixture = dft_approx_full(Step(100), ApproxConfig(N=150, L=terms))
            approx = topk(rank_mixture(rel, mixture), 100)
            d = kendall(exact, approx)
            assert d < bound, f"L={terms}: distance {d} >= {bound}"
            details.append(f"L={terms}: {d:.3f} < {bound}")
        return "; ".join(details)

    run_criterion(capsys, 6, "approximation quality", 60.0, body)


def test_criterion_7_learning(capsys):
    def body():
        rel = gen_independent(500, np.random.default_rng(42))

        target = tuple(s.tuple_id for s in rank_prfe(rel, 0.95))
        sample = PreferenceSample(sample=rel, target_order=target)
        learned = learn_alpha(sample, tol=1e-7)
        d_exp = alpha_distance(sample, learned)
        assert d_exp == 0.0, f"training distance {d_exp} != 0"

        pt_target = tuple(s.tuple_id for s in rank_prf(rel, Step(100)))
        pt_sample = PreferenceSample(sample=rel, target_order=pt_target)
        learned_pt = learn_alpha(pt_sample)
        d_learned = alpha_distance(pt_sample, learned_pt)
        grid = np.linspace(1e-4, 1.0, 10_000)
        d_grid = min(alpha_distance(pt_sample, a) for a in grid)
        assert d_learned <= d_grid + 0.05, (
            f"learned {d_learned} not within 0.05 of grid best {d_grid}"
        )
        return (
            f"exponential target distance 0 at alpha {learned:.4f}; "
            f"threshold target {d_learned:.4f} vs grid best {d_grid:.4f}"
        )

    run_criterion(capsys, 7, "learning", 60.0, body)


def _min_of_three(fn) -> float:
    fn()  # warm-up discarded
    times = []
    for _ in range(3):
        start = time.process_time()
        fn()
        times.append(time.process_time() - start)
    return min(times)


def test_criterion_8_performance_envelope(capsys):
    def body():
        # JIT warm-up on small inputs so compilation never lands in a timing
        small = gen_independent(64, np.random.default_rng(0), sorted_by_score=True)
        rank_prfe(small, 0.95)
        rank_prf(small, Step(8))
        warm_mix = dft_approx_full(Step(8), ApproxConfig(N=9, L=4))
        rank_mixture(small, warm_mix)

        rel6 = gen_independent(
            1_000_000, np.random.default_rng(42), sorted_by_score=True
        )
        start = time.perf_counter()
        rank_prfe(rel6, 0.95)
        prfe_seconds = time.perf_counter() - start
        assert prfe_seconds < 10.0, f"prfe took {prfe_seconds:.2f}s"

        rel5 = gen_independent(
            100_000, np.random.default_rng(43), sorted_by_score=True
        )
        t1 = _min_of_three(lambda: rank_prf(rel5, Step(16_000)))
        t2 = _min_of_three(lambda: rank_prf(rel5, Step(32_000)))
        ratio = t2 / t1
        assert 1.5 <= ratio <= 3.0, f"doubling h scaled by {ratio:.2f}"

        relm = gen_independent(
            500_000, np.random.default_rng(44), sorted_by_score=True
        )
        start = time.process_time()
        rank_prf(relm, Step(10_000))
        exact_seconds = time.process_time() - start
        mixture = dft_approx_full(Step(10_000), ApproxConfig(N=10_001, L=50))
        start = time.process_time()
        rank_mixture(relm, mixture)
        mix_seconds = time.process_time() - start
        speedup = exact_seconds / mix_seconds
        assert speedup >= 10.0, f"mixture speedup only {speedup:.1f}x"
        return (
            f"prfe 1e6 in {prfe_seconds:.2f}s < 10s; h doubling ratio "
            f"{ratio:.2f} in [1.5, 3]; mixture speedup {speedup:.1f}x >= 10x"
        )

    run_criterion(capsys, 8, "performance envelope", 900.0, body)


def test_criterion_9_polynomial_toolkit(capsys):
    def body():
        rng = np.random.default_rng(9099)
        worst = 0.0
        for trial in range(100):
            da = int(rng.integers(0, 257))
            db = int(rng.integers(0, 257))
            a = rng.uniform(-1.0, 1.0, da + 1)
            b = rng.uniform(-1.0, 1.0, db + 1)
            if trial % 3 == 0:
                a = a + 1j * rng.uniform(-1.0, 1.0, da + 1)
                b = b + 1j * rng.uniform(-1.0, 1.0, db + 1)
            pa, pb = Poly.of(a), Poly.of(b)
            diff = poly_mul_fft(pa, pb).coeffs - poly_mul_naive(pa, pb).coeffs
            worst = max(worst, float(np.max(np.abs(diff))))
        assert worst <= 1e-8, f"fft deviation {worst:.3e}"

        expanded = expand_nested(worked_expression(), degree_bound=8)
        dev = float(np.max(np.abs(expanded.coeffs - WORKED_COEFFS)))
        assert dev <= 1e-7, f"worked expression deviation {dev:.3e}"
        return f"100 seeds, fft deviation {worst:.2e}; worked expansion {dev:.2e}"

    run_criterion(capsys, 9, "polynomial toolkit", 10.0, body)
