"""Command-line interface: one executable exposing every pipeline stage.

Exit codes: 0 on success, 1 when a reuse/bench run ends in failure,
2 on usage or I/O errors.  Machine-consumable output goes to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .align import build_variables, enumerate_alignments
from .bench import render_benchmark, run_benchmark
from .builtins import standard_corpus_path, standard_registry
from .distance import delta
from .driver import ReuseConfig, code_reuse, query_from_json
from .featurize import psi, symmetric_difference_size
from .rank import rerank
from .runtime import tests_from_json
from .search import build_index, keyword_search
from .synth import adapter_plan_to_json, emit_pseudo_source, generate_adapter
from .typemodel import (
    RefitError,
    TypeEnv,
    load_corpus,
    parse_signature,
    parse_type,
)


def _load_corpus_arg(path: str | None, dependency_cap: int = 10):
    if path in (None, "std"):
        path = standard_corpus_path()
    return load_corpus(path, dependency_cap)


def _read_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _fraction_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator} = {float(x):.6g}"


def _cmd_psi(args) -> int:
    env = _load_corpus_arg(args.corpus)[0] if args.corpus else TypeEnv()
    bag = psi(parse_type(args.type, env), env)
    for token in sorted(bag.counts):
        print(f"{token}:{bag.counts[token]}")
    return 0


def _cmd_distance(args) -> int:
    env = _load_corpus_arg(args.corpus)[0] if args.corpus else TypeEnv()
    a, b = parse_type(args.type_a, env), parse_type(args.type_b, env)
    fa, fb = psi(a, env), psi(b, env)
    d = delta(a, b, env)
    # Unreduced view: disagreement count over the combined bag size.
    print(f"{symmetric_difference_size(fa, fb)}/{fa.size + fb.size} = {float(d):.6g}")
    return 0


def _cmd_align(args) -> int:
    env, _ = _load_corpus_arg(args.corpus)
    adapter = parse_signature(args.adapter, env)
    adaptee = parse_signature(args.adaptee, env)
    problem = build_variables(adapter, adaptee, env, args.max_group)
    for m in enumerate_alignments(problem, args.k):
        print(f"{m.describe()} @ {_fraction_text(m.cost)}")
    return 0


def _cmd_search(args) -> int:
    _, entries = _load_corpus_arg(args.corpus)
    index = build_index(entries)
    for entry_id, score in keyword_search(index, args.query, args.k):
        print(f"{score:.4f} {entry_id}")
    return 0


def _cmd_rank(args) -> int:
    env, entries = _load_corpus_arg(args.corpus)
    query = query_from_json(_read_json(args.query_file), env)
    env = env.extended(query.class_defs)
    index = build_index(entries)
    hits = keyword_search(index, query.description, args.k)
    by_id = {e.id: e for e in entries}
    for cand in rerank(query.signature, [h[0] for h in hits], by_id, env, args.max_group):
        cost = "infeasible" if cand.align_cost is None else _fraction_text(cand.align_cost)
        print(f"{cand.final_rank} {cand.original_rank} {cost} {cand.entry_id}")
    return 0


def _cmd_synth(args) -> int:
    env, entries = _load_corpus_arg(args.corpus)
    query = query_from_json(_read_json(args.query), env)
    env = env.extended(query.class_defs)
    by_id = {e.id: e for e in entries}
    if args.adaptee not in by_id:
        print(f"no corpus entry {args.adaptee!r}", file=sys.stderr)
        return 2
    entry = by_id[args.adaptee]
    problem = build_variables(query.signature, entry.signature, env, args.max_group)
    alignments = enumerate_alignments(problem, args.alignment + 1)
    if len(alignments) <= args.alignment:
        print("no such alignment", file=sys.stderr)
        return 1
    plan = generate_adapter(
        alignments[args.alignment], query.signature, entry, env, args.plan, args.depth
    )
    print(emit_pseudo_source(plan, env))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(adapter_plan_to_json(plan), fh, indent=2)
    return 0


def _cmd_reuse(args) -> int:
    env, entries = _load_corpus_arg(args.corpus, args.dependency_cap)
    query_obj = _read_json(args.query)
    query = query_from_json(query_obj, env)
    if args.tests:
        scratch = env.extended(query.class_defs)
        query.tests.extend(tests_from_json(_read_json(args.tests), scratch))
    if not query.tests:
        print("no tests given: supply --tests or a 'tests' field", file=sys.stderr)
        return 2
    config = ReuseConfig(
        top_k=args.k,
        max_alignments_per_candidate=args.max_alignments,
        max_plans_per_alignment=args.max_plans,
        max_group=args.max_group,
        conversion_depth=args.depth,
        dependency_cap=args.dependency_cap,
    )
    result = code_reuse(query, (env, entries), standard_registry(), config)
    payload = {
        "success": result.success,
        "adaptee": result.adaptee_id,
        "attempts": vars(result.attempts),
        "elapsedSeconds": round(result.elapsed, 4),
        "diagnostics": result.diagnostics,
    }
    if result.success:
        payload["plan"] = adapter_plan_to_json(result.plan)
        payload["pseudoSource"] = emit_pseudo_source(result.plan, result.env)
    if args.json:
        print(json.dumps(payload, indent=2))
    elif result.success:
        print(result.plan.adaptee_id)
        print(payload["pseudoSource"], end="")
    else:
        print("no passing adapter found", file=sys.stderr)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
    return 0 if result.success else 1


def _cmd_bench(args) -> int:
    outcomes = run_benchmark()
    print(render_benchmark(outcomes))
    return 0 if all(o.success for o in outcomes) else 1


def _add_corpus_flag(p, required=False):
    p.add_argument("--corpus", required=required,
                   help="corpus JSONL path, or 'std' for the built-in corpus")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="refit",
        description="Type-directed code reuse: search, align, synthesize, test.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("psi", help="print a type's feature multiset")
    p.add_argument("type")
    _add_corpus_flag(p)
    p.set_defaults(fn=_cmd_psi)

    p = sub.add_parser("distance", help="distance between two types")
    p.add_argument("type_a")
    p.add_argument("type_b")
    _add_corpus_flag(p)
    p.set_defaults(fn=_cmd_distance)

    p = sub.add_parser("align", help="k best alignments between two signatures")
    p.add_argument("--adapter", required=True, help="e.g. 'f(p: Point, n: long) -> void'")
    p.add_argument("--adaptee", required=True)
    _add_corpus_flag(p, required=True)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--max-group", type=int, default=4)
    p.set_defaults(fn=_cmd_align)

    p = sub.add_parser("search", help="keyword search over the corpus")
    _add_corpus_flag(p, required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--k", type=int, default=10)
    p.set_defaults(fn=_cmd_search)

    p = sub.add_parser("rank", help="re-rank keyword results by alignment cost")
    _add_corpus_flag(p, required=True)
    p.add_argument("--query-file", required=True)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--max-group", type=int, default=4)
    p.set_defaults(fn=_cmd_rank)

    p = sub.add_parser("synth", help="synthesize one adapter plan")
    _add_corpus_flag(p, required=True)
    p.add_argument("--query", required=True, help="query JSON file")
    p.add_argument("--adaptee", required=True, help="corpus entry id")
    p.add_argument("--alignment", type=int, default=0)
    p.add_argument("--plan", type=int, default=0)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--max-group", type=int, default=4)
    p.add_argument("--out", help="write the plan JSON here")
    p.set_defaults(fn=_cmd_synth)

    p = sub.add_parser("reuse", help="full search-align-synthesize-test loop")
    _add_corpus_flag(p, required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--tests", help="JSON file with test cases")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--max-alignments", type=int, default=20)
    p.add_argument("--max-plans", type=int, default=100)
    p.add_argument("--max-group", type=int, default=4)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--dependency-cap", type=int, default=10)
    p.add_argument("--out", help="write the result JSON here")
    p.add_argument("--json", action="store_true", help="print result JSON on stdout")
    p.set_defaults(fn=_cmd_reuse)

    p = sub.add_parser("bench", help="run the built-in ten-task benchmark")
    p.set_defaults(fn=_cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (RefitError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
