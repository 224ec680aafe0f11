"""Command line front end.

Exit codes: 0 success / all checks passed, 1 a verification failed,
2 usage error.  Data goes to stdout, diagnostics to stderr; output is
byte-identical across runs for a fixed configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import compver, diagram, krhfk, skein


def _diagram_from(args):
    return diagram.parse_diagram(args.word, args.strands,
                                 marked=getattr(args, "mark", None))


def cmd_homfly(args) -> int:
    D = _diagram_from(args)
    res = skein.homfly(D)
    value = res.prime() if args.prime else res.P_H
    if args.sln is not None:
        poly = skein.sl_n_specialize(res, args.sln, primed=args.prime)
        text = poly.text()
        obj = {"schema": 1, "word": args.word, "strands": args.strands,
               "sln": args.sln, "primed": args.prime, "value": text}
    else:
        text = value.text()
        obj = {"schema": 1, "word": args.word, "strands": args.strands,
               "primed": args.prime, "writhe": res.writhe, "value": text}
    print(json.dumps(obj, sort_keys=True) if args.format == "json" else text)
    return 0


_TABLE_BUILDERS = {
    "ch": lambda D, n, qmax: krhfk.hh_table(D, qmax),
    "cn": lambda D, n, qmax: krhfk.hpm_table(D, n, qmax),
}


def cmd_complex(args) -> int:
    D = _diagram_from(args)
    cycle = (frozenset(int(x) for x in args.cycle.split(","))
             if args.cycle else None)
    if args.kind in _TABLE_BUILDERS:
        table = _TABLE_BUILDERS[args.kind](D, args.n, args.qmax)
    elif args.kind == "cf":
        table = None
        for b in krhfk.build_CF_graded(D):
            if cycle is not None and b.cycle.edges != cycle:
                continue
            t = b.complex.homology_dims(args.qmax).shift(*b.shift)
            table = t if table is None else table.add(t)
    elif args.kind == "cfn":
        table = None
        for b in krhfk.build_CFn_graded(D, args.n):
            if cycle is not None and b.cycle.edges != cycle:
                continue
            t = b.deformed.two_step_homology(args.qmax).shift(*b.shift)
            table = t if table is None else table.add(t)
    else:
        raise ValueError(args.kind)
    if table is None:
        print("no matching cycle", file=sys.stderr)
        return 2
    if args.hmin is not None or args.hmax is not None:
        lo = args.hmin if args.hmin is not None else -(10 ** 9)
        hi = args.hmax if args.hmax is not None else 10 ** 9
        table.entries = {k: v for k, v in table.entries.items()
                         if lo <= k[1] <= hi}
    if args.format == "json":
        print(json.dumps(table.to_json_obj(), sort_keys=True))
    else:
        sys.stdout.write(table.to_tsv())
    return 0


_CHECKS = {
    "jaeger": lambda D, a: compver.jaeger_check(D),
    "destab": lambda D, a: compver.destab_check(D),
    "sl1": lambda D, a: compver.sl1_check(D, a.qmax),
    "thm21": lambda D, a: compver.thm21_check(D, a.qmax),
    "filterediso": lambda D, a: compver.filterediso_check(D, a.qmax),
    "cfn": lambda D, a: compver.cfn_total_check(D, a.n, a.qmax),
    "wagner": lambda D, a: compver.wagner_bigraded_check(D, a.m, a.n, a.qmax),
    "singular-comp": lambda D, a: compver.singular_comp_check(
        D, a.m, a.n, a.qmax),
}


def cmd_verify(args) -> int:
    if args.check == "suite":
        reports = compver.run_suite(args.qmax, jobs=args.jobs)
        ok = all(r.passed for r in reports)
        if args.format == "json":
            print(json.dumps({"schema": 1, "passed": ok,
                              "reports": [r.to_json_obj() for r in reports]},
                             sort_keys=True))
        else:
            for r in reports:
                print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name} "
                      f"{r.target}")
            print(f"suite: {'PASS' if ok else 'FAIL'} "
                  f"({sum(r.passed for r in reports)}/{len(reports)})")
        return 0 if ok else 1
    if args.check not in _CHECKS:
        print(f"unknown check {args.check!r}", file=sys.stderr)
        return 2
    D = _diagram_from(args)
    report = _CHECKS[args.check](D, args)
    if args.format == "json":
        print(json.dumps(report.to_json_obj(), sort_keys=True))
    else:
        print(report.text())
    return 0 if report.passed else 1


def cmd_batch(args) -> int:
    try:
        with open(args.manifest) as fh:
            entries = json.load(fh)
        if not isinstance(entries, list):
            raise ValueError("manifest must be a JSON array")
    except (OSError, ValueError) as exc:
        print(f"malformed manifest: {exc}", file=sys.stderr)
        return 2
    results = []
    ok = True
    for k, job in enumerate(entries):
        try:
            res = _run_job(job)
        except Exception as exc:
            res = {"passed": False, "error": str(exc)}
        res["index"] = k
        ok = ok and res.get("passed", False)
        results.append(res)
    print(json.dumps({"schema": 1, "passed": ok, "count": len(results),
                      "results": results}, sort_keys=True))
    return 0 if ok else 1


def _run_job(job: dict) -> dict:
    kind = job.get("check", "homfly")
    word = job.get("word", "")
    strands = int(job.get("strands", 1))
    qmax = int(job.get("qmax", compver.DEFAULT_QMAX))
    mark = job.get("mark")
    D = diagram.parse_diagram(word, strands,
                              marked=mark if mark is None else int(mark))
    if kind == "homfly":
        res = skein.homfly(D)
        text = (res.prime() if job.get("prime") else res.P_H).text()
        passed = True
        if "expect" in job:
            passed = text == job["expect"]
        return {"check": kind, "word": word, "value": text, "passed": passed}
    ns = argparse.Namespace(qmax=qmax, n=int(job.get("n", 1)),
                            m=int(job.get("m", 1)))
    if kind not in _CHECKS:
        raise ValueError(f"unknown check {kind!r}")
    report = _CHECKS[kind](D, ns)
    return report.to_json_obj() | {"passed": report.passed}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="braidhom",
        description="singular braid homology and composition products")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, word=True):
        if word:
            p.add_argument("word")
            p.add_argument("--strands", type=int, required=True)
            p.add_argument("--mark", type=int, default=None)
        p.add_argument("--qmax", type=int, default=compver.DEFAULT_QMAX)
        p.add_argument("--format", choices=("text", "json", "tsv"),
                       default="text")

    p = sub.add_parser("homfly", help="HOMFLY-PT of a braid closure")
    common(p)
    p.add_argument("--prime", action="store_true")
    p.add_argument("--sln", type=int, default=None)
    p.set_defaults(fn=cmd_homfly)

    p = sub.add_parser("complex", help="homology dimension tables")
    p.add_argument("kind", choices=("ch", "cn", "cf", "cfn"))
    common(p)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--cycle", default=None,
                   help="select one cycle by its edge ids, e.g. 0,3")
    p.add_argument("--hmin", type=int, default=None)
    p.add_argument("--hmax", type=int, default=None)
    p.set_defaults(fn=cmd_complex)

    p = sub.add_parser("verify", help="run one check or the whole suite")
    p.add_argument("check")
    p.add_argument("word", nargs="?", default="")
    p.add_argument("--strands", type=int, default=1)
    p.add_argument("--mark", type=int, default=None)
    p.add_argument("--qmax", type=int, default=compver.DEFAULT_QMAX)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("batch", help="run a JSON manifest of jobs")
    p.add_argument("manifest")
    p.set_defaults(fn=cmd_batch)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (diagram.DiagramError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
