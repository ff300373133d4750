"""Command-line surface: ranking, comparison, synthesis, approximation,
learning, oracle checks, and benchmarks over probabilistic relations.

Exit codes: 0 success, 2 usage or parse problem, 3 model violation,
4 oracle-check deviation.  Every command is deterministic given its inputs
and --seed, and all randomness flows through one named generator recorded
in the metadata side-car written next to file outputs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import statistics
import sys
import time
from dataclasses import replace

import numpy as np

from .approx import (
    ApproxConfig,
    dft_approx_full,
    eval_mixture,
    rank_mixture,
    save_mixture_json,
)
from .engine import positional_matrix, rank_prf, rank_prfe
from .errors import (
    ConfigError,
    DegenerateSampleError,
    DegreeBoundExceededError,
    InconsistentPotentialsError,
    InvalidTreeError,
    MismatchedKError,
    ProbabilityConstraintError,
    ShapeError,
    SizeLimitError,
    UnknownTupleError,
    UnsupportedModelError,
    ZeroProbabilityError,
)
from .jtree import (
    independent_junction_tree,
    joint_distribution,
    load_junction_tree_json,
    rank_distributions_jt,
    rank_prf_jt,
    save_junction_tree_json,
    variable_marginal,
)
from .learn import PreferenceSample, alpha_distance, learn_alpha, learn_prfw_weights
from .model import (
    CSV_HEADER,
    ProbTuple,
    Relation,
    enumerate_worlds,
    load_relation_csv,
    load_tree_json,
    positional_matrix_oracle,
    save_relation_csv,
    save_tree_json,
    sort_key,
)
from .ranking import kendall, rank_erank, rank_escore, rank_urank
from .synth import (
    GENERATOR_NAME,
    JUNCTION_SHAPES,
    PRESETS,
    gen_andxor,
    gen_independent,
    gen_junction,
)
from .weights import Delta, Exponential, ScoreScaled, Step, Tabulated

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MODEL = 3
EXIT_DEVIATION = 4

ORACLE_TUPLE_LIMIT = 20
ORACLE_TOLERANCE = 1e-7

MODEL_ERRORS = (
    ProbabilityConstraintError,
    InvalidTreeError,
    DegreeBoundExceededError,
    UnknownTupleError,
    MismatchedKError,
    UnsupportedModelError,
    InconsistentPotentialsError,
    ZeroProbabilityError,
    ShapeError,
    DegenerateSampleError,
)

PARSE_ERRORS = (
    ConfigError,
    SizeLimitError,
    FileNotFoundError,
    IsADirectoryError,
    ValueError,
)


# --------------------------------------------------------------------------
# report plumbing


def render_text(header: list[str], rows: list[list]) -> str:
    cells = [[str(v) for v in row] for row in rows]
    widths = [
        max(len(header[i]), *(len(r[i]) for r in cells)) if cells else len(header[i])
        for i in range(len(header))
    ]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for row in cells:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def render_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def render_json(header: list[str], rows: list[list]) -> str:
    return json.dumps({"columns": header, "rows": rows}, indent=2) + "\n"


RENDERERS = {"text": render_text, "csv": render_csv, "json": render_json}


def emit(args, header: list[str], rows: list[list], meta: dict) -> None:
    """Write the report to --output or stdout, plus a metadata side-car."""
    text = RENDERERS[args.format](header, rows)
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
        write_metadata(args.output, meta)
    else:
        sys.stdout.write(text)


def write_metadata(output_path: str, meta: dict) -> None:
    with open(f"{output_path}.meta.json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def base_metadata(args) -> dict:
    return {
        "command": args.command,
        "generator": GENERATOR_NAME,
        "seed": getattr(args, "seed", None),
    }


def figure_path(output_path: str) -> str:
    stem = output_path.rsplit(".", 1)[0] if "." in output_path else output_path
    return f"{stem}.png"


def require_output_for_plot(args) -> None:
    if getattr(args, "plot", False) and not getattr(args, "output", None):
        raise ConfigError("--plot renders next to a report file; also pass --output")


# --------------------------------------------------------------------------
# model loading and ranking dispatch


def load_preferences_csv(path: str) -> PreferenceSample:
    """Relation CSV whose row order is the preferred order, best first."""
    tuples: list[ProbTuple] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != CSV_HEADER:
            raise ValueError(f"{path}: expected header {','.join(CSV_HEADER)}")
        for row in reader:
            if not row:
                continue
            tuples.append(
                ProbTuple(id=int(row[0]), score=float(row[1]), prob=float(row[2]))
            )
    return PreferenceSample(
        sample=Relation.of(tuples), target_order=tuple(t.id for t in tuples)
    )


def load_model(args):
    """The model named by --model/--input; junction models pair tree and data."""
    if args.model == "ind":
        return load_relation_csv(args.input)
    if args.model == "andxor":
        return load_tree_json(args.input)
    if not getattr(args, "relation", None):
        raise ConfigError("--model junction needs --relation with the bound tuples")
    jt = load_junction_tree_json(args.input)
    rel = load_relation_csv(args.relation)
    return (jt, rel)


def parse_fn_token(token: str) -> tuple[str, float | None]:
    """name or name:param, e.g. pt:100 or prfe:0.9."""
    name, _, param = token.partition(":")
    name = name.strip().lower()
    if not name:
        raise ConfigError(f"empty ranking function in {token!r}")
    if not param:
        return name, None
    try:
        return name, float(param)
    except ValueError as exc:
        raise ConfigError(f"bad parameter in {token!r}") from exc


def _require(value, flag: str, fn: str):
    if value is None:
        raise ConfigError(f"ranking function {fn!r} needs {flag}")
    return value


def ranked_rows(model, fn: str, alpha, h, k) -> list[tuple[int, float]]:
    """(id, magnitude) pairs in answer order for one ranking function."""
    junction = isinstance(model, tuple)
    if junction:
        jt, rel = model
        if fn == "escore":
            return [(s.tuple_id, abs(s.value)) for s in rank_escore(rel)]
        if fn == "prfe":
            scores = rank_prf_jt(jt, rel, Exponential(_require(alpha, "--alpha", fn)))
            return [(s.tuple_id, abs(s.value)) for s in scores]
        if fn == "pt":
            scores = rank_prf_jt(jt, rel, Step(int(_require(h, "--h", fn))))
            return [(s.tuple_id, abs(s.value)) for s in scores]
        raise ConfigError(f"ranking function {fn!r} is not defined on junction models")
    if fn == "escore":
        return [(s.tuple_id, abs(s.value)) for s in rank_escore(model)]
    if fn == "erank":
        return [(tid, expected) for tid, expected in rank_erank(model)]
    if fn == "prfe":
        scores = rank_prfe(model, _require(alpha, "--alpha", fn))
        return [(s.tuple_id, abs(s.value)) for s in scores]
    if fn == "pt":
        scores = rank_prf(model, Step(int(_require(h, "--h", fn))))
        return [(s.tuple_id, abs(s.value)) for s in scores]
    if fn == "kselection":
        scores = rank_prf(model, ScoreScaled(Delta(1)))
        return [(s.tuple_id, abs(s.value)) for s in scores]
    if fn == "urank":
        kk = int(k) if k else model_size(model)
        ids, matrix = positional_matrix(model, kk)
        row_of = {tid: i for i, tid in enumerate(ids)}
        chosen = rank_urank(model, kk)
        return [(tid, float(matrix[row_of[tid], i])) for i, tid in enumerate(chosen)]
    raise ConfigError(f"unknown ranking function {fn!r}")


def model_size(model) -> int:
    if isinstance(model, tuple):
        return len(model[1].tuples)
    if isinstance(model, Relation):
        return len(model.tuples)
    return len(model.leaves)


def top_ids(model, token: str, k: int) -> list[int]:
    name, param = parse_fn_token(token)
    alpha = param if name == "prfe" else None
    h = param if name == "pt" else None
    rows = ranked_rows(model, name, alpha, h, k)
    return [tid for tid, _ in rows[:k]]


def tuple_scores(model) -> dict[int, float]:
    if isinstance(model, tuple):
        return {t.id: t.score for t in model[1].tuples}
    if isinstance(model, Relation):
        return {t.id: t.score for t in model.tuples}
    return {t.id: t.score for t in model.leaves}


# --------------------------------------------------------------------------
# commands


def cmd_rank(args) -> int:
    require_output_for_plot(args)
    model = load_model(args)
    rows = ranked_rows(model, args.fn, args.alpha, args.h, args.k)
    if args.k is not None:
        if args.k < 1:
            raise ConfigError(f"--k must be at least 1, got {args.k}")
        rows = rows[: args.k]
    scores = tuple_scores(model)
    table = [
        [pos + 1, tid, scores[tid], value] for pos, (tid, value) in enumerate(rows)
    ]
    meta = base_metadata(args) | {"fn": args.fn, "model": args.model}
    emit(args, ["rank", "id", "score", "value"], table, meta)
    if args.plot and args.output:
        from .plots import plot_magnitudes

        plot_magnitudes([value for _, value in rows], figure_path(args.output))
    return EXIT_OK


def cmd_compare(args) -> int:
    require_output_for_plot(args)
    model = load_model(args)
    tokens = [t.strip() for t in args.fns.split(",") if t.strip()]
    if len(tokens) < 2:
        raise ConfigError("--fns needs at least two comma-separated functions")
    n = model_size(model)
    k = args.k if args.k is not None else min(100, n)
    lists = [top_ids(model, token, k) for token in tokens]
    matrix = np.zeros((len(tokens), len(tokens)))
    for i in range(len(tokens)):
        for j in range(i + 1, len(tokens)):
            d = kendall(lists[i], lists[j])
            matrix[i, j] = matrix[j, i] = d
    table = [
        [tokens[i]] + [float(matrix[i, j]) for j in range(len(tokens))]
        for i in range(len(tokens))
    ]
    meta = base_metadata(args) | {"fns": tokens, "k": k}
    emit(args, ["fn"] + tokens, table, meta)
    if args.plot and args.output:
        from .plots import plot_compare_matrix

        plot_compare_matrix(tokens, matrix, figure_path(args.output))
    return EXIT_OK


def cmd_gen_synth(args) -> int:
    rng = np.random.default_rng(args.seed)
    meta = base_metadata(args) | {"kind": args.kind, "n": args.n}
    written = [args.output]
    if args.kind == "ind":
        save_relation_csv(gen_independent(args.n, rng), args.output)
    elif args.kind in PRESETS:
        spec = PRESETS[args.kind]
        overrides = {}
        if args.height is not None:
            overrides["height"] = args.height
        if args.degree is not None:
            overrides["max_degree"] = args.degree
        if args.xaratio is not None:
            overrides["xor_ratio"] = args.xaratio
        if overrides:
            spec = replace(spec, **overrides)
        meta |= {
            "height": spec.height,
            "max_degree": spec.max_degree,
            "xor_ratio": spec.xor_ratio,
        }
        save_tree_json(gen_andxor(args.n, spec, rng), args.output)
    elif args.kind == "junction":
        jt, rel = gen_junction(args.n, rng, shape=args.shape)
        save_junction_tree_json(jt, args.output)
        relation_path = f"{args.output.rsplit('.', 1)[0]}.relation.csv"
        save_relation_csv(rel, relation_path)
        written.append(relation_path)
        meta |= {"shape": args.shape, "relation": relation_path}
    else:
        raise ConfigError(f"unknown synthetic kind {args.kind!r}")
    write_metadata(args.output, meta)
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def _oracle_prf_values(oracle: dict[int, list[float]], weights) -> dict[int, float]:
    return {
        tid: float(np.dot(weights[: len(probs)], probs[: len(weights)]))
        for tid, probs in oracle.items()
    }


def _oracle_checks_model(model) -> list[tuple[str, float]]:
    n = model_size(model)
    oracle = positional_matrix_oracle(model)
    ids, matrix = positional_matrix(model, n)
    row_of = {tid: i for i, tid in enumerate(ids)}
    checks: list[tuple[str, float]] = []

    dev = max(
        float(np.max(np.abs(matrix[row_of[tid]] - np.asarray(probs))))
        for tid, probs in oracle.items()
    )
    checks.append(("positional vs enumeration", dev))

    alpha = 0.6
    weights = alpha ** np.arange(1, n + 1)
    want = _oracle_prf_values(oracle, weights)
    got = {s.tuple_id: abs(s.value) for s in rank_prfe(model, alpha)}
    checks.append(
        ("prfe vs enumeration", max(abs(got[t] - want[t]) for t in want))
    )

    h = min(2, n)
    want = _oracle_prf_values(oracle, np.ones(h))
    got = {s.tuple_id: abs(s.value) for s in rank_prf(model, Step(h))}
    checks.append(("pt vs enumeration", max(abs(got[t] - want[t]) for t in want)))

    by_id = {t.id: t for t in (model.tuples if isinstance(model, Relation) else model.leaves)}
    want = {
        tid: by_id[tid].score * float(sum(probs)) for tid, probs in oracle.items()
    }
    got = {s.tuple_id: abs(s.value) for s in rank_escore(model)}
    checks.append(("escore vs enumeration", max(abs(got[t] - want[t]) for t in want)))

    worlds = enumerate_worlds(model)
    want = {tid: 0.0 for tid in oracle}
    for world in worlds:
        members = sorted((by_id[m] for m in world.members), key=sort_key)
        positions = {t.id: i + 1 for i, t in enumerate(members)}
        for tid in want:
            want[tid] += world.prob * positions.get(tid, len(world.members))
    got = dict(rank_erank(model))
    checks.append(("erank vs enumeration", max(abs(got[t] - want[t]) for t in want)))

    k = min(3, n)
    fast = tuple(rank_urank(model, k))
    chosen: list[int] = []
    used: set[int] = set()
    for col in range(k):
        cands = [
            (tid, probs[col]) for tid, probs in oracle.items() if tid not in used
        ]
        best = max(cands, key=lambda iv: (iv[1], -iv[0]))
        chosen.append(best[0])
        used.add(best[0])
    checks.append(("urank vs enumeration", 0.0 if fast == tuple(chosen) else 1.0))

    want = {tid: by_id[tid].score * probs[0] for tid, probs in oracle.items()}
    got = {
        s.tuple_id: abs(s.value) for s in rank_prf(model, ScoreScaled(Delta(1)))
    }
    checks.append(
        ("kselection vs enumeration", max(abs(got[t] - want[t]) for t in want))
    )
    return checks


def _oracle_checks_junction(jt, rel) -> list[tuple[str, float]]:
    import itertools

    vars_, joint = joint_distribution(jt)
    by_id = {t.id: t for t in rel}
    n = len(by_id)
    truth = {t.id: np.zeros(n) for t in rel}
    for assignment in itertools.product((0, 1), repeat=len(vars_)):
        p = float(joint[assignment])
        members = sorted(
            (by_id[v] for v, a in zip(vars_, assignment) if a), key=sort_key
        )
        for pos, t in enumerate(members):
            truth[t.id][pos] += p
    dists = rank_distributions_jt(jt, rel)
    dev = max(
        float(np.max(np.abs(d.probs - truth[d.tuple_id]))) for d in dists
    )
    checks = [("tree positional vs enumeration", dev)]

    alpha = 0.6
    weights = alpha ** np.arange(1, n + 1)
    want = {tid: float(weights @ probs) for tid, probs in truth.items()}
    got = {s.tuple_id: abs(s.value) for s in rank_prf_jt(jt, rel, Exponential(alpha))}
    checks.append(
        ("tree prfe vs enumeration", max(abs(got[t] - want[t]) for t in want))
    )
    return checks


def cmd_oracle_check(args) -> int:
    if args.input:
        model = load_model(args)
    else:
        rng = np.random.default_rng(args.seed)
        model = gen_independent(args.n, rng)
    n = model_size(model)
    if n > ORACLE_TUPLE_LIMIT:
        raise SizeLimitError(
            f"oracle check enumerates all worlds; {n} tuples exceed the "
            f"limit of {ORACLE_TUPLE_LIMIT}"
        )
    if isinstance(model, tuple):
        checks = _oracle_checks_junction(*model)
    else:
        checks = _oracle_checks_model(model)
    worst = max(dev for _, dev in checks)
    table = [
        [name, dev, "ok" if dev <= ORACLE_TOLERANCE else "FAIL"]
        for name, dev in checks
    ]
    meta = base_metadata(args) | {"tolerance": ORACLE_TOLERANCE}
    emit(args, ["check", "max_abs_deviation", "status"], table, meta)
    return EXIT_OK if worst <= ORACLE_TOLERANCE else EXIT_DEVIATION


def _timed(fn) -> float:
    fn()  # warm-up discarded: JIT, caches, lazy imports
    samples = []
    for _ in range(3):
        start = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - start)
    return statistics.median(samples)


def cmd_bench(args) -> int:
    require_output_for_plot(args)
    rng = np.random.default_rng(args.seed)
    rel = gen_independent(args.n, rng, sorted_by_score=True)
    if args.task == "prfe":
        alpha = args.alpha if args.alpha is not None else 0.95
        seconds = _timed(lambda: rank_prfe(rel, alpha))
        params = f"alpha={alpha}"
    elif args.task == "pt":
        h = args.h if args.h is not None else 100
        wf = Step(h)
        seconds = _timed(lambda: rank_prf(rel, wf))
        params = f"h={h}"
    elif args.task == "mixture":
        h = args.h if args.h is not None else 100
        terms = args.terms if args.terms is not None else 50
        cfg = ApproxConfig(N=h + 1, L=terms)
        mixture = dft_approx_full(Step(h), cfg)
        seconds = _timed(lambda: rank_mixture(rel, mixture))
        params = f"h={h},L={terms}"
    else:
        raise ConfigError(f"unknown bench task {args.task!r}")
    table = [[args.n, args.task, params, seconds]]
    meta = base_metadata(args) | {"task": args.task, "warmup": 1, "repeats": 3}
    emit(args, ["n", "algorithm", "params", "seconds"], table, meta)
    if args.plot and args.output:
        from .plots import plot_bench

        plot_bench(
            [
                {
                    "n": args.n,
                    "algorithm": args.task,
                    "params": params,
                    "seconds": seconds,
                }
            ],
            figure_path(args.output),
        )
    return EXIT_OK


def cmd_learn_alpha(args) -> int:
    sample = load_preferences_csv(args.target)
    alpha = learn_alpha(sample, tol=args.tol)
    distance = alpha_distance(sample, alpha)
    meta = base_metadata(args) | {"target": args.target, "tol": args.tol}
    emit(
        args,
        ["quantity", "value"],
        [["alpha", alpha], ["distance", distance]],
        meta,
    )
    return EXIT_OK


def cmd_learn_weights(args) -> int:
    sample = load_preferences_csv(args.target)
    w = learn_prfw_weights(sample, args.h, reg=args.reg, iters=args.iters)
    induced = rank_prf(sample.sample, Tabulated(tuple(float(x) for x in w)))
    distance = kendall(
        list(sample.target_order), [s.tuple_id for s in induced]
    )
    rows = [[f"w{i + 1}", float(w[i])] for i in range(len(w))]
    rows.append(["distance", distance])
    meta = base_metadata(args) | {"target": args.target, "h": args.h}
    emit(args, ["quantity", "value"], rows, meta)
    return EXIT_OK


def cmd_approx(args) -> int:
    if args.fn == "step":
        if args.h is None:
            raise ConfigError("approx --fn step needs --h")
        wf = Step(args.h)
        grid = args.grid if args.grid is not None else args.h + 1
    elif args.fn == "exponential":
        if args.alpha is None:
            raise ConfigError("approx --fn exponential needs --alpha")
        wf = Exponential(args.alpha)
        if args.grid is None:
            raise ConfigError("approx --fn exponential needs --grid")
        grid = args.grid
    else:
        raise ConfigError(f"unknown approximation target {args.fn!r}")
    kwargs = {}
    if args.stretch is not None:
        kwargs["a"] = args.stretch
    if args.shiftfrac is not None:
        kwargs["b"] = args.shiftfrac
    if args.eps is not None:
        kwargs["eps"] = args.eps
    if args.bound is not None:
        kwargs["bound"] = args.bound
    cfg = ApproxConfig(N=grid, L=args.terms, **kwargs)
    mixture = dft_approx_full(wf, cfg)
    save_mixture_json(mixture, args.output)
    write_metadata(args.output, base_metadata(args) | {"fn": args.fn, "L": args.terms})

    idx = np.arange(cfg.window)
    truth = wf.sample_grid(cfg.window)
    values = eval_mixture(mixture, idx)
    residual = np.abs(values - truth)
    tail_idx = np.arange(cfg.window, 2 * cfg.window)
    tail = np.max(np.abs(eval_mixture(mixture, tail_idx)))
    rows = [
        ["terms", len(mixture)],
        ["window", cfg.window],
        ["max_residual", float(residual.max())],
        ["mean_residual", float(residual.mean())],
        ["tail_max_abs", float(tail)],
    ]
    report = render_text(["quantity", "value"], rows)
    sys.stdout.write(report)
    if args.plot:
        from .plots import plot_reconstruction

        plot_reconstruction(truth, values, figure_path(args.output))
    print(f"wrote {args.output}")
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prank",
        description="Rank tuples of a probabilistic database.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=True):
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--format", choices=sorted(RENDERERS), default="text")
        if output:
            p.add_argument("--output", help="report file; stdout when omitted")

    def model_flags(p):
        p.add_argument("--input", required=True, help="relation CSV or tree JSON")
        p.add_argument(
            "--model", choices=["ind", "andxor", "junction"], default="ind"
        )
        p.add_argument(
            "--relation", help="tuple CSV bound to a junction tree model"
        )

    p = sub.add_parser("rank", help="top-k answer under one ranking function")
    model_flags(p)
    p.add_argument("--fn", required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--h", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--plot", action="store_true")
    common(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("compare", help="pairwise distance matrix of functions")
    model_flags(p)
    p.add_argument("--fns", required=True, help="comma list, e.g. escore,pt:100")
    p.add_argument("--k", type=int)
    p.add_argument("--plot", action="store_true")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen-synth", help="write a synthetic dataset")
    p.add_argument("--kind", required=True,
                   choices=["ind", *sorted(PRESETS), "junction"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--shape", choices=list(JUNCTION_SHAPES), default="random")
    p.add_argument("--height", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--xaratio", type=float)
    p.add_argument("--output", required=True)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_gen_synth)

    p = sub.add_parser("oracle-check", help="fast paths vs world enumeration")
    p.add_argument("--input")
    p.add_argument("--model", choices=["ind", "andxor", "junction"], default="ind")
    p.add_argument("--relation")
    p.add_argument("--n", type=int, default=8, help="synthetic size without --input")
    common(p)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("bench", help="median-of-3 timing after a warm-up")
    p.add_argument("--task", required=True, choices=["prfe", "pt", "mixture"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--h", type=int)
    p.add_argument("--terms", type=int, help="mixture size L")
    p.add_argument("--plot", action="store_true")
    common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("learn-alpha", help="fit the exponential base to preferences")
    p.add_argument("--target", required=True, help="preference CSV, best row first")
    p.add_argument("--tol", type=float, default=1e-4)
    common(p)
    p.set_defaults(func=cmd_learn_alpha)

    p = sub.add_parser("learn-weights", help="fit positional weights to preferences")
    p.add_argument("--target", required=True, help="preference CSV, best row first")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--reg", type=float, default=1e-3)
    p.add_argument("--iters", type=int, default=500)
    common(p)
    p.set_defaults(func=cmd_learn_weights)

    p = sub.add_parser("approx", help="fit an exponential mixture to a weight function")
    p.add_argument("--fn", required=True, choices=["step", "exponential"])
    p.add_argument("--h", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--grid", type=int, help="sample count N; step defaults to h+1")
    p.add_argument("--terms", type=int, default=40, help="mixture size L")
    p.add_argument("--stretch", type=int, help="window factor a")
    p.add_argument("--shiftfrac", type=float, help="left extension fraction b")
    p.add_argument("--eps", type=float)
    p.add_argument("--bound", type=float)
    p.add_argument("--plot", action="store_true")
    p.add_argument("--output", required=True, help="mixture JSON file")
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_approx)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except MODEL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except PARSE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
