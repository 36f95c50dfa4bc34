"""Command-line interface: ``minquad build|verify|table|oracle|replay|dual|faces``.

Exit codes: 0 success, 2 proven nonexistence, 3 verification failure,
4 oracle search inconclusive (node cap reached).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import io
from .constructor import (
    Construction,
    InadmissibleError,
    NonexistenceError,
    build,
    minimal_order,
    minimal_quadrangulation,
    pair_for_surface,
    parse_log,
    pipeline_for,
    replay,
)
from .embedding import Claim, EmbeddingError, SurfaceSpec, certify, dual_graph
from .oracle import DEFAULT_NODE_CAP, SearchInconclusive, SearchProblem, search

EXIT_OK, EXIT_NONEXISTENT, EXIT_FAILED, EXIT_CAP = 0, 2, 3, 4


def _node_cap(arg: int | None) -> int:
    if arg is not None:
        return arg
    return int(os.environ.get("MINQUAD_NODE_CAP", DEFAULT_NODE_CAP))


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_build(args) -> int:
    try:
        if args.surface:
            con = minimal_quadrangulation(SurfaceSpec.parse(args.surface))
        else:
            if args.n is None or args.t is None or args.orientability is None:
                print("build needs --surface or all of --n, --t, --orientability", file=sys.stderr)
                return EXIT_FAILED
            con = build(args.n, args.t, args.orientability == "o")
    except NonexistenceError as exc:
        print(f"nonexistent: {exc}", file=sys.stderr)
        return EXIT_NONEXISTENT
    except InadmissibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    if args.trace:
        _print_trace(con)
    _emit(io.dumps(con.emb), args.out)
    if args.log:
        Path(args.log).write_text(con.log_text())
    print(con.certificate.render(), file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK if con.certificate.ok else EXIT_FAILED


def _print_trace(con: Construction) -> None:
    print(f"# origin: {con.origin}", file=sys.stderr)
    if con.steps:
        pipe = pipeline_for(con.n, con.orientable)
        for rep in pipe.reports:
            if rep.state.emb.n <= con.n:
                print(rep.render(), file=sys.stderr)


def _claim_from_args(args, emb) -> Claim | None:
    if args.surface is None and args.t is None:
        return None
    surface = SurfaceSpec.parse(args.surface) if args.surface else None
    t = args.t if args.t is not None else emb.n * (emb.n - 1) // 2 - emb.m
    if surface is None:
        m = emb.n * (emb.n - 1) // 2 - t
        surface = SurfaceSpec.from_euler(emb.n - m // 2, emb.orientable)
    return Claim(args.n if args.n is not None else emb.n, t, surface)


def cmd_verify(args) -> int:
    try:
        emb, header_orientable = io.parse(Path(args.file).read_text())
    except (OSError, EmbeddingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    cert = certify(emb, _claim_from_args(args, emb))
    cert.checks.append((f"header orientable = {int(header_orientable)}", header_orientable == emb.orientable))
    print(cert.render())
    return EXIT_OK if cert.ok else EXIT_FAILED


def cmd_faces(args) -> int:
    emb = io.read(args.file)
    for f in emb.face_tuples():
        print(" ".join(map(str, f)))
    return EXIT_OK


def cmd_dual(args) -> int:
    emb = io.read(args.file)
    for i, nbrs in dual_graph(emb).items():
        print(f"{i}: {' '.join(map(str, nbrs))}")
    return EXIT_OK


def cmd_replay(args) -> int:
    base, steps = parse_log(Path(args.logfile).read_text())
    try:
        emb = replay(base, steps)
    except EmbeddingError as exc:
        print(f"replay failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    _emit(io.dumps(emb), args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    problem = SearchProblem.from_text(Path(args.problem).read_text())
    try:
        res = search(problem, limit=args.limit, node_cap=_node_cap(args.node_cap))
    except SearchInconclusive as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_CAP
    status = "complete" if res.complete else f"stopped at limit {args.limit}"
    print(f"# {len(res.solutions)} solution(s), {res.nodes} nodes, {status}", file=sys.stderr)
    if not res.solutions:
        print("no solutions: nonexistence proven by exhaustive search")
        return EXIT_NONEXISTENT if res.complete else EXIT_CAP
    _emit(io.dumps(res.solutions[0]), args.out)
    return EXIT_OK


def surfaces_up_to(max_euler_genus: int) -> list[SurfaceSpec]:
    out = []
    for eg in range(max_euler_genus + 1):
        if eg % 2 == 0:
            out.append(SurfaceSpec(True, eg // 2))
        if eg >= 1:
            out.append(SurfaceSpec(False, eg))
    return out


def cmd_table(args) -> int:
    print(f"{'surface':>8} {'chi':>5} {'n':>4} {'(n,t)':>9} {'status':>9}")
    failed = False
    for s in surfaces_up_to(args.max_euler_genus):
        n_formula = minimal_order(s)
        n, t = pair_for_surface(s)
        status = "formula"
        if not args.formula_only:
            con = minimal_quadrangulation(s)
            ok = con.certificate.ok and con.n == n_formula
            status = "certified" if ok else "FAILED"
            failed |= not ok
        print(f"{str(s):>8} {s.euler_characteristic:>5} {n_formula:>4} {f'({n},{t})':>9} {status:>9}")
    return EXIT_FAILED if failed else EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="minquad", description="Minimal quadrangulations of closed surfaces.")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a minimal quadrangulation or a Q(n,t)")
    b.add_argument("--surface", help="S<g> or N<q>")
    b.add_argument("--n", type=int)
    b.add_argument("--t", type=int)
    b.add_argument("--orientability", choices=["o", "n"])
    b.add_argument("--out", help="embedding file (default stdout)")
    b.add_argument("--log", help="write the surgery log here")
    b.add_argument("--trace", action="store_true", help="dump diagonal sets after each stage")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="recompute and print the certificate of an embedding file")
    v.add_argument("file")
    v.add_argument("--n", type=int)
    v.add_argument("--t", type=int)
    v.add_argument("--surface")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("table", help="minimal orders for all surfaces up to an Euler genus")
    t.add_argument("--max-euler-genus", type=int, default=10)
    t.add_argument("--formula-only", action="store_true")
    t.set_defaults(func=cmd_table)

    o = sub.add_parser("oracle", help="exhaustive search on a problem file")
    o.add_argument("problem")
    o.add_argument("--limit", type=int, default=1)
    o.add_argument("--node-cap", type=int)
    o.add_argument("--out")
    o.set_defaults(func=cmd_oracle)

    r = sub.add_parser("replay", help="re-execute a surgery log from its base embedding")
    r.add_argument("logfile")
    r.add_argument("--out")
    r.set_defaults(func=cmd_replay)

    for name, func, text in (("faces", cmd_faces, "print traced faces"), ("dual", cmd_dual, "print the dual graph")):
        s = sub.add_parser(name, help=text)
        s.add_argument("file")
        s.set_defaults(func=func)
    return p


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
