"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 no perfect matching (or no witness),
3 guard exceeded or search indeterminate.
"""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import math
import sys
from typing import Sequence

import numpy as np

from .algebra import FieldTooSmall
from .corpus import graph_instance, intersection_instance, random_instance, random_intersection_instance
from .formats import (
    InputError,
    dumps_instance,
    load_matrix,
    loads_instance,
    parse_int_list,
)
from .hitting_set import INDETERMINATE, NO_WITNESS, find_witness, gen_hitting_set
from .lattice import NOT_IN_LATTICE, decompose, near_shortest, shortest_length
from .oracle import GuardExceeded, Polytope
from .solver import resolve_mode, solve_instance
from .weights import FamilyParams, family_max_weight, gen_family

EXIT_OK, EXIT_INPUT, EXIT_NONE, EXIT_GUARD = 0, 1, 2, 3


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from None


def _emit(obj) -> None:
    json.dump(obj, sys.stdout)
    sys.stdout.write("\n")


def _family_params(args, mode: str) -> FamilyParams:
    kw = {"mode": mode}
    for name in ("K", "T", "Q", "cap"):
        val = getattr(args, name, None)
        if val is not None:
            kw[name] = val
    return FamilyParams(**kw)


def _int_list_arg(text: str) -> list[int]:
    """A literal list ("1,2,3" or "[1,2,3]") or the path of a file holding one."""
    try:
        return parse_int_list(text)
    except InputError:
        return parse_int_list(_read(text))


# ---------------------------------------------------------------------------


def cmd_solve(args) -> int:
    inst = loads_instance(_read(args.instance))
    v = _int_list_arg(args.weighted) if args.weighted else None
    if v is not None and len(v) != inst.m:
        raise InputError(f"expected {inst.m} input weights, got {len(v)}")
    mode = resolve_mode(args.mode, inst.m)
    report = solve_instance(
        inst,
        mode,
        input_weights=v,
        params=_family_params(args, mode),
        trials=args.trials,
        seed=args.rng_seed,
        parallel=args.parallel,
        workers=args.workers,
    )
    out = report.to_json()
    out["mode"] = mode
    _emit(out)
    return EXIT_OK if report.found else EXIT_NONE


def cmd_oracle(args) -> int:
    inst = loads_instance(_read(args.instance))
    w = _int_list_arg(args.weights) if args.weights else None
    if w is not None and len(w) != inst.m:
        raise InputError(f"expected {inst.m} weights, got {len(w)}")
    opt = Polytope(inst).maximize(w, perfect=args.perfect)
    _emit({"value": opt.value2, "maximizers": [list(y) for y in opt.maximizers]})
    return EXIT_OK if opt.value2 is not None else EXIT_NONE


def cmd_weights_gen(args) -> int:
    params = _family_params(args, args.mode)
    stream = gen_family(args.m, params)
    if args.limit is not None:
        stream = itertools.islice(stream, args.limit)
    for w in stream:
        sys.stdout.write(",".join(str(v) for v in w) + "\n")
    return EXIT_OK


def cmd_lattice(args) -> int:
    d = load_matrix(_read(args.matrix))
    if args.lattice_cmd == "decompose":
        x = _int_list_arg(args.x)
        res = decompose(d, x)
        if res is NOT_IN_LATTICE:
            _emit({"result": "not_in_lattice"})
        else:
            _emit(
                {
                    "result": "circuits",
                    "circuits": [
                        {"vertices": list(c.vertices), "edges": list(c.edges), "indicator": c.indicator.tolist()}
                        for c in res
                    ],
                }
            )
    elif args.lattice_cmd == "lambda":
        lam = shortest_length(d)
        _emit({"lambda": "infinity" if lam == math.inf else int(lam)})
    else:
        vecs = near_shortest(d, args.c)
        lam = shortest_length(d)
        _emit({"lambda": "infinity" if lam == math.inf else int(lam), "vectors": [list(v) for v in vecs]})
    return EXIT_OK


def _hitting_stream(args, m: int, n: int, p: int):
    params = _family_params(args, args.mode)
    return gen_hitting_set(m, n, lambda: gen_family(m, params), p, family_max_weight(m, params)), params


def cmd_hitset(args) -> int:
    if args.hitset_cmd == "gen":
        stream, _ = _hitting_stream(args, args.m, args.n, args.prime)
        it = iter(stream)
        if args.limit is not None:
            it = itertools.islice(it, args.limit)
        for tup in it:
            _emit(tup.to_json())
        return EXIT_OK
    inst = loads_instance(_read(args.instance))
    stream, _ = _hitting_stream(args, inst.m, inst.n, inst.p)
    res = find_witness(
        inst, stream, budget=args.budget, exhaustive=args.exhaustive, rng=np.random.default_rng(args.rng_seed)
    )
    if res is NO_WITNESS:
        _emit({"result": "no_witness"})
        return EXIT_NONE
    if res is INDETERMINATE:
        _emit({"result": "indeterminate", "budget": args.budget})
        return EXIT_GUARD
    _emit({"result": "witness", "index": res.index, **res.to_json()})
    return EXIT_OK


def _edge_list(text: str) -> list[tuple[int, int]]:
    try:
        edges = json.loads(text)
        return [(int(u), int(v)) for u, v in edges]
    except (json.JSONDecodeError, TypeError, ValueError):
        raise InputError(f"edges must be a JSON list of pairs, got {text!r}") from None


def cmd_gen(args) -> int:
    if args.kind == "graph":
        inst = graph_instance(_edge_list(args.edges), args.vertices, args.prime)
    elif args.kind == "random":
        inst = random_instance(args.m, args.n, args.seed, args.prime)
    elif args.us is not None or args.vs is not None:
        try:
            us, vs = json.loads(args.us), json.loads(args.vs)
        except (TypeError, json.JSONDecodeError):
            raise InputError("--us and --vs must both be JSON lists of vectors") from None
        inst = intersection_instance(us, vs, args.prime)
    else:
        inst = random_intersection_instance(args.m, args.r, args.seed, args.prime)
    sys.stdout.write(dumps_instance(inst))
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    from .selfcheck import run_all

    only = set(args.only) if args.only else None
    results = run_all(args.scale, args.rng_seed, args.inject_fault, only)
    for res in results:
        print(res.line())
    ok = all(r.passed for r in results)
    print("selfcheck:", "PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_INPUT


# ---------------------------------------------------------------------------


def _add_family_flags(p: argparse.ArgumentParser, modes: Sequence[str], default: str) -> None:
    p.add_argument("--mode", choices=modes, default=default, help="weight family")
    p.add_argument("--K", type=int, help="brute grid side (default 3m+1)")
    p.add_argument("--T", type=int, help="gtv: largest base t")
    p.add_argument("--Q", type=int, help="gtv: largest prime modulus")
    p.add_argument("--cap", type=int, help="largest admissible family weight")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracmatroid", description="Perfect fractional linear matroid matching.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="find a perfect fractional matching")
    p.add_argument("instance", help="instance JSON file, or - for stdin")
    p.add_argument("--weighted", metavar="V", help="input weights: CSV file or literal list; maximise v.y")
    _add_family_flags(p, ("auto", "brute", "gtv"), "auto")
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--parallel", action="store_true")
    p.add_argument("--workers", type=int, default=4)
    p.add_argument("--rng-seed", type=int, default=0)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="brute-force optimum over the polytope")
    p.add_argument("instance")
    p.add_argument("--weights", metavar="V", help="objective: CSV file or literal list (default all ones)")
    p.add_argument("--perfect", action="store_true", help="restrict to perfect matchings")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("weights", help="weight families")
    wsub = p.add_subparsers(dest="weights_cmd", required=True)
    g = wsub.add_parser("gen", help="print candidate assignments, one per line")
    g.add_argument("--m", type=int, required=True)
    _add_family_flags(g, ("gtv", "brute"), "gtv")
    g.add_argument("--seedless", action="store_true", help="accepted for clarity; families are always deterministic")
    g.add_argument("--limit", type=int)
    g.set_defaults(func=cmd_weights_gen)

    p = sub.add_parser("lattice", help="alternating-circuit lattice tools")
    lsub = p.add_subparsers(dest="lattice_cmd", required=True)
    for name in ("decompose", "lambda", "near"):
        q = lsub.add_parser(name)
        q.add_argument("matrix", help="D-file JSON {rows, cols, entries}")
        if name == "decompose":
            q.add_argument("x", help="vector: literal list or file")
        if name == "near":
            q.add_argument("--c", type=float, default=2.0)
        q.set_defaults(func=cmd_lattice)

    p = sub.add_parser("hitset", help="hitting set for rank-two skew-symmetric blow-ups")
    hsub = p.add_subparsers(dest="hitset_cmd", required=True)
    g = hsub.add_parser("gen", help="stream tuples as JSON lines")
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--prime", type=int, default=2013265921)
    g.add_argument("--limit", type=int)
    _add_family_flags(g, ("brute", "gtv"), "brute")
    g.set_defaults(func=cmd_hitset)
    t = hsub.add_parser("test", help="search the stream for a witness")
    t.add_argument("instance")
    t.add_argument("--budget", type=int)
    t.add_argument("--exhaustive", action="store_true", help="scan every tuple, no identity-test skipping")
    t.add_argument("--rng-seed", type=int, default=0)
    _add_family_flags(t, ("brute", "gtv"), "brute")
    t.set_defaults(func=cmd_hitset)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("kind", choices=("graph", "random", "intersection"))
    p.add_argument("--edges", default="[[0,1]]", help="graph: JSON list of vertex pairs")
    p.add_argument("--vertices", type=int)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--r", type=int, default=2, help="intersection: matroid rank")
    p.add_argument("--us", help="intersection: JSON vectors of the first matroid")
    p.add_argument("--vs", help="intersection: JSON vectors of the second matroid")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prime", type=int, default=2013265921)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("selfcheck", help="run the acceptance suite")
    p.add_argument("--scale", choices=("small", "full"), default="small")
    p.add_argument("--inject-fault", choices=("pfaffian",), help="corrupt a kernel to show the suite catches it")
    p.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    p.add_argument("--rng-seed", type=int, default=0)
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except GuardExceeded as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (InputError, FieldTooSmall, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
