"""``abclosure`` command line.

Exit status: 0 on success / membership / pass, 1 on rejection / fail / a false
answer, 2 on usage errors (bad flags, bad word specifications).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import closure as cl
from . import subshift as sub
from . import verify as vf
from .grammar import SpecSyntaxError, build, parse_spec
from .words import AbelianIndex, factor_complexities, stabilized_index

EXIT_OK, EXIT_REJECT, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _word(text: str):
    try:
        return build(text)
    except SpecSyntaxError as e:
        raise UsageError(f"bad word specification {text!r}: {e}") from None
    except ValueError as e:
        raise UsageError(f"invalid word {text!r}: {e}") from None


def _table(rows, header) -> str:
    rows = [[str(c) for c in r] for r in rows]
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    fmt = "  ".join(f"{{:>{w}}}" for w in widths)
    return "\n".join([fmt.format(*header)] + [fmt.format(*r) for r in rows])


# ---------------------------------------------------------------------------
# commands; each returns (exit status, output text)

def cmd_generate(a):
    x = _word(a.spec)
    text = x.render(a.n)
    if a.format == "json":
        return EXIT_OK, _dump({"schema": 1, "word": x.name, "n": a.n, "prefix": text})
    if a.format == "csv":
        return EXIT_OK, _csv([[x.name, a.n, text]], ["word", "n", "prefix"])
    return EXIT_OK, text


def cmd_complexity(a):
    x = _word(a.spec)
    if a.factor:
        N = a.N or max(8192, 16 * a.L)
        values = factor_complexities(x, a.L, N)
        rows = [(n, int(values[n])) for n in range(1, a.L + 1)]
        kind, window, stab = "factor", N, None
    else:
        idx = AbelianIndex.build(x, a.L, a.N) if a.N else stabilized_index(x, a.L)
        rows = [(n, len(idx.keys[n])) for n in range(1, a.L + 1)]
        kind, window, stab = "abelian", idx.window, idx.stabilized
    if a.format == "json":
        return EXIT_OK, _dump({"schema": 1, "word": x.name, "kind": kind, "window": window,
                               "stabilized": stab, "values": [{"n": n, "value": v} for n, v in rows]})
    if a.format == "csv":
        return EXIT_OK, _csv(rows, ["n", kind])
    return EXIT_OK, f"# {kind} complexity of {x.name}, window {window}\n" + _table(rows, ["n", kind])


def cmd_corridor(a):
    x = _word(a.spec)
    idx = AbelianIndex.build(x, a.L, a.N) if a.N else stabilized_index(x, a.L)
    letters = [a.letter] if a.letter else list(x.alphabet.names)
    for c in letters:
        if c not in x.alphabet.names:
            raise UsageError(f"letter {c!r} not in alphabet {list(x.alphabet.names)}")
    rows = [(n, c, lo, hi) for n, c, lo, hi in idx.profile_rows() if c in letters]
    if a.format == "json":
        return EXIT_OK, _dump({"schema": 1, "word": x.name, "window": idx.window, "stabilized": idx.stabilized,
                               "corridor": [{"n": n, "letter": c, "min": lo, "max": hi}
                                            for n, c, lo, hi in rows]})
    if a.format == "csv":
        return EXIT_OK, _csv(rows, ["n", "letter", "min", "max"])
    return EXIT_OK, f"# corridor of {x.name}, window {idx.window}\n" + _table(rows, ["n", "letter", "min", "max"])


def cmd_member(a):
    y, x = _word(a.y), _word(a.x)
    if a.L > a.N:
        raise UsageError("-L must not exceed -N")
    try:
        if a.method == "corridor":
            v = cl.corridor_member(y, x, a.L, a.N)
        else:
            v = cl.abelian_member(y, x, a.L, a.N)
    except cl.AlphabetMismatch as e:
        raise UsageError(str(e)) from None
    status = EXIT_OK if v.member else EXIT_REJECT
    if a.format == "json":
        return status, v.to_json()
    if a.format == "csv":
        w = v.witness
        return status, _csv([[v.query, v.result, v.L, v.window, w.factor if w else "", w.length if w else ""]],
                            ["query", "result", "L", "window", "witness", "witness_length"])
    return status, str(v)


def cmd_census(a):
    z = _word(a.spec)
    try:
        r = cl.periodic_census(z, a.N)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if a.format == "json":
        return EXIT_OK, _dump(r.to_dict())
    if a.format == "csv":
        return EXIT_OK, _csv([[s] for s in r.representatives], ["representative"])
    lines = [f"# periodic words in the closure of {r.word}: period {r.period}, n0 {r.n0}, "
             f"{r.candidates} candidate orbits"]
    lines += [f"({s})^w" for s in r.representatives]
    return EXIT_OK, "\n".join(lines)


def cmd_hl_exists(a):
    x = _word(a.spec)
    spec = getattr(x, "spec", None)
    from .generators import TernaryRotationSpec
    if not isinstance(spec, TernaryRotationSpec):
        raise UsageError("hl-exists needs a ternary(...) specification")
    try:
        r = cl.exists_hl_factor(a.kind, spec, a.m)
    except ValueError as e:
        raise UsageError(str(e)) from None
    status = EXIT_OK if r.value else EXIT_REJECT
    if a.format == "json":
        return status, _dump({**r.to_dict(), "word": x.name})
    if a.format == "csv":
        return status, _csv([[a.kind, a.m, str(r.value).lower(), r.branch]], ["kind", "m", "result", "branch"])
    return status, f"{a.kind} factor of length {a.m}: {str(r.value).lower()} (branch {r.branch})"


def _forbidden(source: str) -> sub.ForbiddenSet:
    if source in sub.FIXTURES:
        return sub.FIXTURES[source]()
    p = Path(source)
    if not p.exists():
        raise UsageError(f"unknown fixture or file {source!r}; fixtures: {', '.join(sub.FIXTURES)}")
    try:
        return sub.parse_forbidden(p.read_text(), name=p.stem)
    except ValueError as e:
        raise UsageError(f"{source}: {e}") from None


def cmd_subshift(a):
    F = _forbidden(a.source)
    act = a.action
    fmt = a.format

    def need_word():
        if a.word is None:
            raise UsageError(f"subshift {act} needs a word")
        bad = set(a.word) - set(F.alphabet)
        if bad:
            raise UsageError(f"letters {sorted(bad)} not in alphabet {list(F.alphabet)}")
        return a.word

    if act == "legal":
        w = need_word()
        ok = sub.legal(w, F)
        out = _dump({"schema": 1, "word": w, "legal": ok}) if fmt == "json" else f"{w}: {'legal' if ok else 'illegal'}"
        return (EXIT_OK if ok else EXIT_REJECT), out
    if act == "abelian-legal":
        w = need_word()
        H = a.horizon or max(len(w), a.L)
        v = sub.abelian_legal(w, F, H)
        if fmt == "json":
            return (EXIT_OK if v else EXIT_REJECT), _dump({"schema": 1, "word": w, "abelian_legal": v.value,
                                                           "horizon": H, "witness": v.witness})
        return (EXIT_OK if v else EXIT_REJECT), (
            f"{w}: {'abelian-legal' if v else 'not abelian-legal'} at horizon {H}"
            + (f" (factor {v.witness})" if v.witness else ""))
    if act == "language":
        bl = sub.bounded_language(F, a.L, a.horizon)
        if fmt == "json":
            return EXIT_OK, _dump(bl.to_dict())
        rows = [(n, w, str(w in bl.bi_extendable[n]).lower()) for n in range(1, a.L + 1) for w in bl.words[n]]
        if fmt == "csv":
            return EXIT_OK, _csv(rows, ["n", "word", "bi_extendable"])
        return EXIT_OK, "\n".join(f"n={n}: {bl.count(n)} legal, {len(bl.bi_extendable[n])} bi-extendable"
                                  for n in range(1, a.L + 1))
    if act == "minimal-forbidden":
        ws = sorted(sub.minimal_forbidden(F, a.L, abelian=a.abelian, horizon=a.horizon), key=lambda w: (len(w), w))
        if fmt == "json":
            return EXIT_OK, _dump({"schema": 1, "L": a.L, "abelian": a.abelian, "words": ws})
        if fmt == "csv":
            return EXIT_OK, _csv([[w] for w in ws], ["word"])
        return EXIT_OK, "\n".join(ws) if ws else "(none)"
    if act == "sft-report":
        r = sub.sft_counterexample_report(a.n, F)
    elif act == "binary-report":
        r = sub.binary_sft_counterexample_report(a.n)
    elif act == "nonsofic":
        ws = sub.nonsofic_witness(a.L)
        ws_sorted = sorted(ws, key=lambda w: (len(w), w))
        ok = all((w[1:-1].count("a") != w[1:-1].count("b")) for w in ws) and \
            len(ws) == sum(sub.unbalanced_count(n) for n in range(a.L + 1))
        r = sub.Report("nonsofic-witness", ok, {"L": a.L, "count": len(ws), "words": ws_sorted})
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(act)
    status = EXIT_OK if r.ok else EXIT_REJECT
    if fmt == "json":
        return status, r.to_json()
    if fmt == "csv":
        return status, _csv([[k, v] for k, v in sorted(r.to_dict().items()) if not isinstance(v, list)],
                            ["field", "value"])
    lines = [f"{r.name}: {'ok' if r.ok else 'FAILED'}"]
    lines += [f"  {k}: {v if not isinstance(v, list) else ' '.join(map(str, v))}" for k, v in sorted(r.fields.items())]
    return status, "\n".join(lines)


def cmd_verify(a):
    try:
        results = vf.run_suite(a.suite, a.workers)
    except ValueError as e:
        raise UsageError(str(e)) from None
    ok = all(r.passed for r in results)
    if a.format == "json":
        out = _dump({"schema": 1, "suite": a.suite, "passed": ok,
                     "criteria": [{"number": r.number, "title": r.title, "passed": r.passed,
                                   "details": r.details} for r in results]})
    elif a.format == "csv":
        out = _csv([[r.number, "pass" if r.passed else "fail", r.title] for r in results],
                   ["criterion", "result", "title"])
    else:
        out = vf.render_results(results).rstrip("\n")
    return (EXIT_OK if ok else EXIT_REJECT), out


# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _positive(s):
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p = _Parser(prog="abclosure", description="Abelian closures of infinite words at finite scale.")
    sp = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sp.add_parser("generate", parents=[fmt], help="print a prefix of a word")
    q.add_argument("spec")
    q.add_argument("-n", type=_positive, required=True)
    q.set_defaults(func=cmd_generate)

    q = sp.add_parser("complexity", parents=[fmt], help="abelian or factor complexity table")
    q.add_argument("spec")
    g = q.add_mutually_exclusive_group()
    g.add_argument("--abelian", action="store_true", default=True)
    g.add_argument("--factor", action="store_true")
    q.add_argument("-L", type=_positive, required=True)
    q.add_argument("-N", type=_positive, default=None, help="window (default: stabilized)")
    q.set_defaults(func=cmd_complexity)

    q = sp.add_parser("corridor", parents=[fmt], help="per-length letter-count range")
    q.add_argument("spec")
    q.add_argument("--letter")
    q.add_argument("-L", type=_positive, required=True)
    q.add_argument("-N", type=_positive, default=None)
    q.set_defaults(func=cmd_corridor)

    q = sp.add_parser("member", parents=[fmt], help="is y in the abelian closure of x (up to L)?")
    q.add_argument("y")
    q.add_argument("x")
    q.add_argument("-L", type=_positive, required=True)
    q.add_argument("-N", type=_positive, default=4096)
    q.add_argument("--method", choices=("abelian", "corridor"), default="abelian")
    q.set_defaults(func=cmd_member)

    q = sp.add_parser("census", parents=[fmt], help="periodic words in the closure of a periodic word")
    q.add_argument("spec")
    q.add_argument("-N", type=_positive, default=1000)
    q.set_defaults(func=cmd_census)

    q = sp.add_parser("hl-exists", parents=[fmt], help="heavy/light factor existence for a ternary coding")
    q.add_argument("spec")
    q.add_argument("--kind", choices=cl.HL_KINDS, required=True)
    q.add_argument("-m", type=_positive, required=True)
    q.set_defaults(func=cmd_hl_exists)

    q = sp.add_parser("subshift", parents=[fmt], help="forbidden-factor subshift fixtures")
    q.add_argument("source", help=f"fixture ({', '.join(sub.FIXTURES)}) or forbidden-set file")
    q.add_argument("action", choices=("legal", "abelian-legal", "language", "minimal-forbidden",
                                      "sft-report", "binary-report", "nonsofic"))
    q.add_argument("word", nargs="?")
    q.add_argument("-L", type=_positive, default=6)
    q.add_argument("-n", type=_positive, default=4)
    q.add_argument("--horizon", type=_positive, default=None)
    q.add_argument("--abelian", action="store_true")
    q.set_defaults(func=cmd_subshift)

    q = sp.add_parser("verify", parents=[fmt], help="run the acceptance battery")
    q.add_argument("--suite", default="all", help="all, quick, or a list such as 1,5,12")
    q.add_argument("--workers", type=_positive, default=1)
    q.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        status, out = args.func(args)
    except UsageError as e:
        print(f"abclosure: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if out:
        print(out)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
