"""``nearfact`` command line.

Exit codes: 0 success, 1 negative mathematical answer, 2 usage error,
3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from typing import Sequence

from . import __version__
from .catalog_io import (
    CatalogError,
    DSListError,
    export_csv,
    import_ds_list,
    load,
    load_builtin,
    record_from_seed,
    save,
)
from .constructions import (
    ConstructionError,
    SeedDesign,
    debruijn_nf,
    ds_to_nf,
    iterated_halfset,
    paley_ds,
    paley_pds,
    pds_to_nf,
    product_halfset,
    singer_ds,
    trivial_nf,
    twin_prime_ds,
)
from .filters import check_all
from .group_ring import NearFactorization, NotANearFactorization, check_nf
from .groups import Group, GroupSyntaxError, parse_group
from .mate import mate
from .search import SearchConfig, default_workers, search
from .tables import format_rows, reproduce_tables

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- output helpers ----------------------------------------------------------------


def _emit(args, text: str, doc: dict | list, rows: list[list] | None = None, header: list[str] | None = None):
    if args.format == "json":
        print(json.dumps(doc, indent=2, sort_keys=True))
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(header)
        for r in rows or []:
            w.writerow(r)
        sys.stdout.write(buf.getvalue())
    else:
        print(text)


NF_HEADER = ["n", "group", "s", "t", "lambda", "symmetric", "method"]


def _nf_doc(nf: NearFactorization, method: str = "") -> dict:
    G = nf.group
    return {
        "group": G.name,
        "n": G.order,
        "s": nf.s,
        "t": nf.t,
        "lambda": nf.lam,
        "symmetric": nf.symmetric,
        "method": method,
        "S": [list(G.coords(x)) for x in nf.S],
        "T": [list(G.coords(x)) for x in nf.T],
    }


def _nf_row(nf: NearFactorization, method: str = "") -> list:
    return [nf.n, nf.group.name, nf.s, nf.t, nf.lam, "yes" if nf.symmetric else "no", method]


def _seed_doc(seed: SeedDesign) -> dict:
    G = seed.group
    return {
        "kind": seed.kind,
        "group": G.name,
        "params": list(seed.params),
        "symmetric": seed.symmetric,
        "source": seed.source,
        "D": [list(G.coords(x)) for x in seed.D],
    }


def _group(text: str) -> Group:
    try:
        return parse_group(text)
    except GroupSyntaxError as exc:
        raise UsageError(str(exc)) from None


def _set(G: Group, text: str) -> tuple[int, ...]:
    try:
        return G.parse_set(text)
    except ValueError as exc:
        raise UsageError(f"bad set literal {text!r}: {exc}") from None


# -- subcommands ----------------------------------------------------------------------


def cmd_verify(args) -> int:
    G = _group(args.group)
    S, T = _set(G, args.s), _set(G, args.t)
    lam = check_nf(G, S, T)
    if lam is None:
        _emit(args, "not a near-factorization", {"group": G.name, "near_factorization": False}, [], NF_HEADER)
        return EXIT_NEGATIVE
    nf = NearFactorization(G, S, T, lam)
    _emit(args, f"lambda = {lam}", {**_nf_doc(nf, "verify"), "near_factorization": True}, [_nf_row(nf, "verify")], NF_HEADER)
    return EXIT_OK


def cmd_mate(args) -> int:
    G = _group(args.group)
    S = _set(G, args.s)
    try:
        res = mate(G, S)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not res.found:
        _emit(args, "no mate", {"group": G.name, "S": [list(G.coords(x)) for x in S], "found": False}, [], NF_HEADER)
        return EXIT_NEGATIVE
    nf = NearFactorization(G, S, res.T, res.lam)
    text = f"T = {G.format_set(nf.T)}\nlambda = {nf.lam}"
    doc = {**_nf_doc(nf, "mate"), "found": True, "prime": res.prime, "fallback": res.fallback}
    _emit(args, text, doc, [_nf_row(nf, "mate")], NF_HEADER)
    return EXIT_OK


def _feasible_lambdas(G: Group, s: int) -> list[int]:
    n = G.order
    out = []
    for t in range(1, n):
        if (s * t) % (n - 1) == 0:
            lam = s * t // (n - 1)
            if check_all(G, s, t, lam).feasible:
                out.append(lam)
    return sorted(set(out))


def cmd_search(args) -> int:
    G = _group(args.group)
    if not 1 <= args.size <= G.order - 1:
        raise UsageError(f"--size must lie in [1, {G.order - 1}]")
    workers = args.workers or default_workers()
    cfg = SearchConfig(
        size=args.size,
        lam=args.lam,
        symmetric_only=args.symmetric,
        workers=workers,
        budget=args.budget,
        stop_after=args.stop_after,
        checkpoint=args.checkpoint,
    )
    out = search(G, cfg)
    lams = [args.lam] if args.lam is not None else sorted(set(_feasible_lambdas(G, args.size)) | {nf.lam for nf in out.found})
    status = "exhausted" if out.exhausted else "not exhausted"
    lines = [nf.describe() for nf in out.found]
    for lam in lams:
        k = len(out.with_lambda(lam))
        lines.append(f"{status}; {k} near-factorization{'s' if k != 1 else ''} with lambda={lam}")
    lines.append(f"({out.candidates_examined} candidates, {out.survivors} canonical, {out.elapsed:.2f}s)")
    rows = [_nf_row(nf, "search") for nf in out.found]
    _emit(args, "\n".join(lines), out.to_json(), rows, NF_HEADER)
    wanted = out.with_lambda(args.lam) if args.lam is not None else out.found
    return EXIT_OK if wanted else EXIT_NEGATIVE


def _construct_nf(args) -> tuple[object, NearFactorization | None, str]:
    kind = args.construction
    if kind == "trivial":
        G = _group(args.group)
        g = G.parse_element(args.element) if args.element else 0
        return None, trivial_nf(G, g), kind
    if kind == "debruijn":
        return None, debruijn_nf(args.n, args.s, args.t), kind
    if kind in ("ds", "pds"):
        G = _group(args.group)
        seed = SeedDesign(kind.upper(), G, _set(G, args.d))
        return seed, ds_to_nf(seed) if kind == "ds" else pds_to_nf(seed), kind
    if kind == "product":
        G1, G2 = _group(args.group1), _group(args.group2)
        nf1 = NearFactorization(G1, _set(G1, args.s1), _set(G1, args.t1))
        nf2 = NearFactorization(G2, _set(G2, args.s2), _set(G2, args.t2))
        return None, product_halfset(nf1, nf2), kind
    if kind == "iterated":
        orders = [int(x) for x in args.orders.split(",")]
        return None, iterated_halfset(orders), kind
    if kind == "paley-ds":
        seed = paley_ds(args.q)
        return seed, ds_to_nf(seed), kind
    if kind == "paley-pds":
        seed = paley_pds(args.q)
        return seed, pds_to_nf(seed), kind
    if kind == "twinprime":
        seed = twin_prime_ds(args.q)
        return seed, ds_to_nf(seed), kind
    if kind == "singer":
        seed = singer_ds(args.d)
        return seed, ds_to_nf(seed), kind
    raise UsageError(f"unknown construction {kind}")  # pragma: no cover


def cmd_construct(args) -> int:
    try:
        seed, nf, kind = _construct_nf(args)
    except (ConstructionError, NotANearFactorization, ValueError) as exc:
        raise UsageError(str(exc)) from None
    text = []
    doc: dict = {"construction": kind}
    if seed is not None:
        text.append(seed.describe())
        doc["design"] = _seed_doc(seed)
    text.append(nf.describe())
    doc["nf"] = _nf_doc(nf, kind)
    _emit(args, "\n".join(text), doc, [_nf_row(nf, kind)], NF_HEADER)
    return EXIT_OK


def cmd_filters(args) -> int:
    G = _group(args.group)
    try:
        rep = check_all(G, args.s, args.t, args.lam)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = [[name, v, why] for name, (v, why) in rep.verdicts.items()]
    _emit(args, rep.to_text(), rep.to_json(), rows, ["rule", "verdict", "reason"])
    return EXIT_OK if rep.feasible else EXIT_NEGATIVE


def cmd_tables(args) -> int:
    workers = args.workers or default_workers()
    results = reproduce_tables(args.which, args.max_order, workers=workers, budget=args.budget)
    if args.format == "json":
        print(json.dumps([r.to_json() for r in results], indent=2, sort_keys=True))
    else:
        sys.stdout.write(format_rows(results, "csv" if args.format == "csv" else "text", args.which))
    bad = [r for r in results if r.status == "undecided"]
    return EXIT_OK if not bad else EXIT_NEGATIVE


def cmd_catalog(args) -> int:
    if args.action == "list":
        if args.path:
            res = load(args.path)
            records, errors = res.records, res.errors
        else:
            records, errors = load_builtin(), []
        rows = []
        lines = []
        for r in records:
            p = ",".join(f"{k}={v}" for k, v in r.params.items())
            lines.append(f"{r.id or '-':<24} {r.kind:<4} {r.group.name:<14} {p:<28} symmetric={'yes' if r.symmetric else 'no'}")
            rows.append([r.id, r.kind, r.group.name, json.dumps(r.params), r.symmetric, r.method])
        for i, msg in errors:
            lines.append(f"record {i}: REJECTED: {msg}")
        doc = {"records": [r.to_json() for r in records], "errors": [{"index": i, "error": m} for i, m in errors]}
        _emit(args, "\n".join(lines), doc, rows, ["id", "kind", "group", "params", "symmetric", "method"])
        return EXIT_OK if not errors else EXIT_NEGATIVE
    if args.action == "import":
        if not args.group or not args.file:
            raise UsageError("catalog import needs --group and --file")
        try:
            seeds = import_ds_list(args.file, args.group)
        except DSListError as exc:
            _emit(args, "\n".join(exc.problems), {"errors": exc.problems}, [[p] for p in exc.problems], ["error"])
            return EXIT_NEGATIVE
        recs = [record_from_seed(s, "ingested", args.file) for s in seeds]
        if args.out:
            existing = load(args.out).records if args.append else []
            save(existing + recs, args.out)
        lines = [s.describe() + ("  [reversible]" if s.symmetric else "") for s in seeds]
        _emit(args, "\n".join(lines), {"records": [r.to_json() for r in recs]},
              [[s.group.name, *s.params, s.symmetric] for s in seeds], ["group", "v", "k", "lambda", "symmetric"])
        return EXIT_OK
    if args.action == "export":
        if args.path:
            res = load(args.path)
            records = res.records
        else:
            records = load_builtin()
        if args.format == "json":
            print(json.dumps({"version": 1, "records": [r.to_json() for r in records]}, indent=2))
        else:
            sys.stdout.write(export_csv(records))
        return EXIT_OK
    raise UsageError(f"unknown catalog action {args.action}")  # pragma: no cover


# -- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand's defaults from overwriting options given
    # before the subcommand name
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv"], default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="nearfact", description="Near-factorizations of finite abelian groups.",
                                parents=[common])
    p.add_argument("--version", action="version", version=f"nearfact {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="check S + T = lambda (G - e)")
    v.add_argument("--group", required=True)
    v.add_argument("--s", required=True)
    v.add_argument("--t", required=True)
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("mate", parents=[common], help="compute the mate of S")
    m.add_argument("--group", required=True)
    m.add_argument("--s", required=True)
    m.set_defaults(func=cmd_mate)

    s = sub.add_parser("search", parents=[common], help="exhaustive search over |S| = size")
    s.add_argument("--group", required=True)
    s.add_argument("--size", type=int, required=True)
    s.add_argument("--lambda", dest="lam", type=int)
    s.add_argument("--symmetric", action="store_true")
    s.add_argument("--workers", type=int, default=0, help="default: $NF_WORKERS or 1")
    s.add_argument("--budget", type=int)
    s.add_argument("--stop-after", type=int)
    s.add_argument("--checkpoint")
    s.set_defaults(func=cmd_search)

    c = sub.add_parser("construct", parents=[common], help="build a verified NF")
    csub = c.add_subparsers(dest="construction", required=True)
    x = csub.add_parser("trivial", parents=[common])
    x.add_argument("--group", required=True)
    x.add_argument("--element")
    x = csub.add_parser("debruijn", parents=[common])
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--s", type=int, required=True)
    x.add_argument("--t", type=int, required=True)
    for name in ("ds", "pds"):
        x = csub.add_parser(name, parents=[common])
        x.add_argument("--group", required=True)
        x.add_argument("--d", required=True)
    x = csub.add_parser("product", parents=[common])
    for arg in ("--group1", "--s1", "--t1", "--group2", "--s2", "--t2"):
        x.add_argument(arg, required=True)
    x = csub.add_parser("iterated", parents=[common])
    x.add_argument("--orders", required=True, help="comma-separated odd orders, e.g. 5,3")
    for name in ("paley-ds", "paley-pds", "twinprime"):
        x = csub.add_parser(name, parents=[common])
        x.add_argument("--q", type=int, required=True)
    x = csub.add_parser("singer", parents=[common])
    x.add_argument("--d", type=int, required=True)
    c.set_defaults(func=cmd_construct)

    f = sub.add_parser("filters", parents=[common], help="necessary conditions report")
    f.add_argument("--group", required=True)
    f.add_argument("--s", type=int, required=True)
    f.add_argument("--t", type=int, required=True)
    f.add_argument("--lambda", dest="lam", type=int, required=True)
    f.set_defaults(func=cmd_filters)

    t = sub.add_parser("tables", parents=[common], help="reproduce the existence tables")
    t.add_argument("--which", type=int, choices=[1, 2, 3], required=True)
    t.add_argument("--max-order", type=int, default=35)
    t.add_argument("--workers", type=int, default=0)
    t.add_argument("--budget", type=int, default=2_000_000, help="candidates per search")
    t.set_defaults(func=cmd_tables)

    k = sub.add_parser("catalog", parents=[common], help="list, import or export catalogs")
    k.add_argument("action", choices=["list", "import", "export"])
    k.add_argument("--path", help="catalog file (default: the builtin catalog)")
    k.add_argument("--group")
    k.add_argument("--file", help="DS list to import")
    k.add_argument("--out", help="catalog file to write imported records to")
    k.add_argument("--append", action="store_true")
    k.set_defaults(func=cmd_catalog)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    # parent-parser actions are shared objects, so defaults are filled here
    # rather than through set_defaults (which would leak into subcommands)
    vars(args).setdefault("format", "text")
    vars(args).setdefault("verbose", False)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, CatalogError, GroupSyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - mapped to the internal-error exit code
        logging.getLogger(__name__).debug("internal error", exc_info=True)
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
