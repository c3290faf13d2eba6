"""Command-line entry point: ``lislab verify|maxplus|omv|plot|bench``.

Exit codes: 0 success, 1 a check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile
import time
from pathlib import Path

from lislab import verify
from lislab.chains import best_chain_between
from lislab.dynlis import DynamicSequence
from lislab.embedding import A as A_label
from lislab.embedding import Ap as Ap_label
from lislab.embedding import build_embedding, dump_points, parse_dump
from lislab.model import BitVector, FormatError, Matrix, WeightedPoint
from lislab.reductions import ReductionError, maxplus_via_lis, omv_run_online
from lislab.svg import render_svg

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _read_matrix(path) -> Matrix:
    try:
        return Matrix.from_text(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except FormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


# -- verify ----------------------------------------------------------------


def cmd_verify(args) -> int:
    ns = [args.n] if args.n else list(range(1, args.max_n + 1))
    if min(ns) < 1:
        raise UsageError("sizes must be at least 1")
    seeds = list(range(args.seed, args.seed + args.seeds))
    mutate = verify.perturb_turn_weight if args.inject_fault else None

    records = []
    records += verify.structure_suite(ns, seeds)
    records += verify.lemma_suite(ns, seeds, 1, mutate)
    for M in (2, 5, 10):
        records += verify.lemma_suite(ns, seeds, M, mutate)
    records += verify.range_suite(ns, seeds)
    records += verify.expansion_suite(args.expansion_sets, args.seed)
    for s in range(args.seed, args.seed + args.fuzz_scripts):
        records.append(verify.fuzz_script(s, args.fuzz_steps))

    failed = [r for r in records if not r["ok"]]
    summary = {}
    for r in records:
        entry = summary.setdefault(r["suite"], {"checked": 0, "failed": 0})
        entry["checked"] += 1
        entry["failed"] += not r["ok"]
    report = {"command": "verify", "n": ns, "seeds": seeds, "summary": summary,
              "ok": not failed, "failures": failed, "records": records}
    write_atomic(Path(args.out) / "verify_report.json", _dump_json(report))

    for suite, entry in summary.items():
        status = "PASS" if not entry["failed"] else "FAIL"
        print(f"{status} {suite:15s} {entry['checked'] - entry['failed']}/{entry['checked']}")
    for r in failed[:20]:
        print("failed:", json.dumps({k: v for k, v in r.items() if k != "records"}),
              file=sys.stderr)
    if args.json:
        print(_dump_json({"summary": summary, "ok": not failed}), end="")
    return EXIT_OK if not failed else EXIT_FAIL


# -- maxplus ---------------------------------------------------------------


def cmd_maxplus(args) -> int:
    if args.random:
        rng = random.Random(args.seed)
        M = args.M or 5
        A = Matrix.random(args.random, M, rng)
        B = Matrix.random(args.random, M, rng)
    else:
        if not (args.A and args.B):
            raise UsageError("maxplus needs --A and --B files, or --random N")
        A, B = _read_matrix(args.A), _read_matrix(args.B)
        if A.n != B.n:
            raise UsageError(f"dimension mismatch: A is {A.n}x{A.n}, B is {B.n}x{B.n}")
        M = max(A.M, B.M, args.M or 1)
    try:
        C, report = maxplus_via_lis(A, B, M, check_oracle=not args.no_oracle)
    except ReductionError as exc:
        print(f"reduction failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    report.seeds = [args.seed] if args.random else []
    out = Path(args.out)
    write_atomic(out / "C.txt", C.to_text())
    write_atomic(out / "maxplus_report.json", _dump_json(report.to_json()))
    if args.json:
        print(_dump_json(report.to_json()), end="")
    else:
        print(C.to_text(), end="")
    return EXIT_FAIL if report.agree is False else EXIT_OK


# -- omv -------------------------------------------------------------------


def cmd_omv(args) -> int:
    if args.random:
        rng = random.Random(args.seed)
        A = Matrix.random(args.random, 1, rng)
        vectors = iter([(k + 1, BitVector.random(args.random, rng)) for k in range(args.random)])
    else:
        if not (args.A and args.vectors):
            raise UsageError("omv needs --A and --vectors files, or --random M")
        A = _read_matrix(args.A)
        if not A.is_boolean:
            raise UsageError(f"{args.A}: OMv needs a Boolean matrix")
        try:
            lines = Path(args.vectors).read_text().splitlines()
        except OSError as exc:
            raise UsageError(f"cannot read {args.vectors}: {exc.strerror}") from None
        vectors = ((no, ln) for no, ln in enumerate(lines, start=1) if ln.strip())

    def supplier():
        try:
            lineno, item = next(vectors)
        except StopIteration:
            return None
        try:
            v = item if isinstance(item, BitVector) else BitVector.from_text(item)
        except FormatError as exc:
            raise UsageError(f"vectors line {lineno}: {exc}") from None
        if len(v) != A.n:
            raise UsageError(f"vectors line {lineno}: length {len(v)}, expected {A.n}")
        return v

    outputs = []

    def emit(u):
        outputs.append(u.to_text())
        print(u.to_text(), flush=True)

    report = omv_run_online(A, supplier, emit, check_oracle=not args.no_oracle)
    report.seeds = [args.seed] if args.random else []
    out = Path(args.out)
    write_atomic(out / "omv_outputs.txt", "\n".join(outputs) + ("\n" if outputs else ""))
    write_atomic(out / "omv_report.json", _dump_json(report.to_json()))
    if args.json:
        print(_dump_json(report.to_json()), end="")
    return EXIT_FAIL if report.agree is False else EXIT_OK


# -- plot ------------------------------------------------------------------


def cmd_plot(args) -> int:
    if args.n > 16 and not args.force:
        raise UsageError("n > 16 is unreadable; pass --force to render anyway")
    if args.n < 1 or args.M < 1:
        raise UsageError("n and M must be at least 1")
    if args.A:
        A = _read_matrix(args.A)
        n = A.n
        M = max(A.M, args.M)
    else:
        rng = random.Random(args.seed)
        n, M = args.n, args.M
        A = Matrix.random(n, M, rng)
    if args.b:
        try:
            b = [int(t) for t in args.b.replace(",", " ").split()]
        except ValueError:
            raise UsageError(f"bad --b value {args.b!r}") from None
    else:
        b_rng = random.Random(f"b:{args.seed}")
        b = [b_rng.randint(0, M) for _ in range(n)]
    try:
        emb = build_embedding(A, b, M)
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    dump = dump_points(emb.index.values())
    out = Path(args.out)
    if args.dump:
        write_atomic(out / "embedding.txt", dump)
    points = parse_dump(dump)

    chain = None
    if args.chain is not None:
        if not 0 <= args.chain < n:
            raise UsageError(f"--chain must be in 0..{n - 1}")
        by_label = {p.label: p for p in points}
        chain = best_chain_between(points, by_label[A_label(args.chain)],
                                   by_label[Ap_label(args.chain)])
    svg = render_svg(points, chain, width=args.width, height=args.width,
                     show_weights=not args.no_weights,
                     title=f"embedding n={n} M={M} seed={args.seed}")
    path = out / args.svg_name
    write_atomic(path, svg)
    if args.json:
        print(_dump_json({"svg": str(path), "points": len(points),
                          "chain_weight": chain[0] if chain else None}), end="")
    else:
        print(path)
    return EXIT_OK


# -- bench -----------------------------------------------------------------


def _parse_sizes(text: str) -> list:
    if not text.strip():
        return []
    try:
        sizes = [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"bad size list {text!r}") from None
    if any(s < 1 for s in sizes):
        raise UsageError("sizes must be at least 1")
    return sizes


def _bench_row(problem, size, seed, M):
    rng = random.Random(f"bench:{problem}:{size}:{seed}")
    if problem == "maxplus":
        A, B = Matrix.random(size, M, rng), Matrix.random(size, M, rng)
        _, rep = maxplus_via_lis(A, B, M, check_oracle=False)
        points = 3 * size * size + 3 * size
        t = rep.timings_ms
        return {"problem": problem, "size": size, "points": points, "build_ms": t["build"],
                "update_ms": t["update"], "query_ms": t["query"], "counts": rep.counts}
    if problem == "omv":
        A = Matrix.random(size, 1, rng)
        vs = [BitVector.random(size, rng) for _ in range(size)]
        it = iter(vs)
        rep = omv_run_online(A, lambda: next(it, None), lambda u: None, check_oracle=False)
        t = rep.timings_ms
        return {"problem": problem, "size": size, "points": sum(rep.expanded_points),
                "tile_points": rep.expanded_points, "build_ms": t["build"],
                "update_ms": t["update"], "query_ms": t["query"], "counts": rep.counts}
    # raw structure: size points, then size updates and size range queries
    seq = DynamicSequence(seed=seed)
    xs = rng.sample(range(4 * size), size)
    ys = rng.sample(range(4 * size), size)
    t0 = time.perf_counter()
    hs = [seq.insert(WeightedPoint(x, y, rng.randint(0, 9))) for x, y in zip(xs, ys)]
    t1 = time.perf_counter()
    for h in hs:
        seq.update_weight(h, rng.randint(0, 9))
    t2 = time.perf_counter()
    for _ in range(size):
        lo = rng.randint(0, 4 * size)
        seq.query_range(lo, rng.randint(lo, 4 * size))
    t3 = time.perf_counter()
    return {"problem": problem, "size": size, "points": size, "build_ms": (t1 - t0) * 1e3,
            "update_ms": (t2 - t1) * 1e3, "query_ms": (t3 - t2) * 1e3,
            "counts": seq.stats.as_dict()}


def cmd_bench(args) -> int:
    sizes = _parse_sizes(args.sizes)
    rows = [_bench_row(args.problem, s, args.seed, args.M) for s in sizes]
    for r in rows:
        for k in ("build_ms", "update_ms", "query_ms"):
            r[k] = round(r[k], 3)
    header = f"{'problem':8s} {'size':>5s} {'points':>8s} {'build_ms':>10s} {'update_ms':>10s} {'query_ms':>10s}"
    lines = [header]
    for r in rows:
        lines.append(f"{r['problem']:8s} {r['size']:5d} {r['points']:8d} {r['build_ms']:10.3f} "
                     f"{r['update_ms']:10.3f} {r['query_ms']:10.3f}")
    table = "\n".join(lines) + "\n"
    out = Path(args.out)
    write_atomic(out / "bench.txt", table)
    write_atomic(out / "bench.json", _dump_json({"problem": args.problem, "seed": args.seed,
                                                 "rows": rows}))
    print(_dump_json(rows) if args.json else table, end="")
    return EXIT_OK


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--seed", type=int, default=0, help="base seed for all randomness")
    shared.add_argument("--out", default=".", help="output directory")
    shared.add_argument("--json", action="store_true", help="print the JSON report to stdout")

    parser = argparse.ArgumentParser(prog="lislab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[shared], help="closed forms, structure and fuzz suites")
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--n", type=int, help="check this size only")
    p.add_argument("--seeds", type=int, default=10, help="random instances per size")
    p.add_argument("--expansion-sets", type=int, default=200)
    p.add_argument("--fuzz-scripts", type=int, default=5)
    p.add_argument("--fuzz-steps", type=int, default=1000)
    p.add_argument("--inject-fault", action="store_true",
                   help="perturb the weight of Lp(0,0) so the check must fail")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("maxplus", parents=[shared], help="(max,+)-product via weighted LIS")
    p.add_argument("--A")
    p.add_argument("--B")
    p.add_argument("--random", type=int, metavar="N", help="generate random N x N inputs")
    p.add_argument("--M", type=int, default=None, help="entry bound for --random")
    p.add_argument("--no-oracle", action="store_true")
    p.set_defaults(func=cmd_maxplus)

    p = sub.add_parser("omv", parents=[shared], help="online Boolean matrix-vector products")
    p.add_argument("--A")
    p.add_argument("--vectors", help="one vector per line")
    p.add_argument("--random", type=int, metavar="M", help="random M x M matrix and M vectors")
    p.add_argument("--no-oracle", action="store_true")
    p.set_defaults(func=cmd_omv)

    p = sub.add_parser("plot", parents=[shared], help="render an embedding to SVG")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--M", type=int, default=1)
    p.add_argument("--A", help="matrix file instead of a random matrix")
    p.add_argument("--b", help="middle weights, e.g. '1 0 1 1'")
    p.add_argument("--chain", type=int, help="highlight the best A(j) -> Ap(j) chain")
    p.add_argument("--width", type=int, default=900)
    p.add_argument("--no-weights", action="store_true")
    p.add_argument("--svg-name", default="embedding.svg")
    p.add_argument("--dump", action="store_true", help="also write embedding.txt")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("bench", parents=[shared], help="wall-clock timings across sizes")
    p.add_argument("--problem", choices=("maxplus", "omv", "dynlis"), default="maxplus")
    p.add_argument("--sizes", default="2,4,8")
    p.add_argument("--M", type=int, default=5)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"lislab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
