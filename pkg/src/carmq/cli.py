"""``carmq`` command line.

Exit codes: 0 success, 1 invalid arguments, 2 resumable interruption,
3 invariant violation (a failed identity, verification or cross-check).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Sequence

from . import dlog, equidist, identities, quotients, sequences, wieferich
from .errors import CarmqError, InvalidInputError, InvariantViolation
from .search import SearchInterrupted, SearchParams, search_range
from .verify import SCOPES, verify_suite

EXIT_OK, EXIT_INVALID, EXIT_RESUMABLE, EXIT_INVARIANT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _csv(header: list[str], rows: list[list]) -> None:
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)


def _emit(args, text: str, obj: dict, header: list[str], rows: list[list]) -> None:
    if args.format == "json":
        print(_dump(obj))
    elif args.format == "csv":
        _csv(header, rows)
    else:
        print(text)


def cmd_lambda(args) -> int:
    m = args.m
    if m < 1:
        raise InvalidInputError("m must be >= 1")
    lam = quotients.carmichael_lambda(m)
    phi = 1 if m == 1 else quotients.modulus_context(m).phi
    _emit(args, str(lam), {"m": str(m), "lambda": str(lam), "phi": str(phi)},
          ["m", "lambda", "phi"], [[m, lam, phi]])
    return EXIT_OK


def _quotient(args, kind: str, m: int) -> int:
    qv = quotients.quotient_value(kind, m, args.a, levels=tuple(args.k), exact=args.exact)
    lines = [str(v) if len(qv.residues) == 1 else f"k={k}: {v}" for k, v in sorted(qv.residues.items())]
    if qv.exact is not None:
        lines.append(f"exact={qv.exact}")
    _emit(args, "\n".join(lines), qv.to_json(), ["kind", "m", "a", "k", "residue"],
          [[kind, m, args.a, k, v] for k, v in sorted(qv.residues.items())])
    return EXIT_OK


def cmd_identity(args) -> int:
    lhs, rhs = identities.expression_pair(args.which, args.m, args.a)
    ok = lhs == rhs
    verdict = "PASS" if ok else "FAIL"
    rhs_label = "C_m(a)" if args.which == "bernoulli" else "C_m(a) mod m"
    _emit(
        args,
        f"{args.which}: {lhs}\n{rhs_label}: {rhs}\n{verdict}",
        {"which": args.which, "m": str(args.m), "a": str(args.a),
         "expression": str(lhs), "direct": str(rhs), "passed": ok},
        ["which", "m", "a", "expression", "direct", "passed"],
        [[args.which, args.m, args.a, lhs, rhs, ok]],
    )
    return EXIT_OK if ok else EXIT_INVARIANT


def _record_rows(rec: wieferich.WieferichRecord) -> list[list]:
    return [[rec.m, rec.a, rec.is_cw, ev.p, ev.alpha, ev.e, ev.sigma] for ev in rec.per_prime_evidence]


_RECORD_HEADER = ["m", "a", "is_cw", "p", "alpha", "e", "sigma"]


def cmd_cw(args) -> int:
    ctx = quotients.modulus_context(args.m)
    rec = wieferich.is_carmichael_wieferich(ctx, args.a, args.mode)
    other = wieferich.is_carmichael_wieferich(ctx, args.a, "direct" if args.mode == "criterion" else "criterion")
    if rec.is_cw != other.is_cw:
        raise InvariantViolation(f"criterion and direct modes disagree for m={args.m}, a={args.a}")
    lines = [f"is_cw={'true' if rec.is_cw else 'false'}"]
    for ev in rec.per_prime_evidence:
        mark = "ok" if ev.satisfied else "short"
        lines.append(f"  p={ev.p} alpha={ev.alpha} e={ev.e} sigma={ev.sigma} {mark}")
    _emit(args, "\n".join(lines), rec.to_json(), _RECORD_HEADER, _record_rows(rec))
    return EXIT_OK


def cmd_search(args) -> int:
    params = SearchParams(args.m_from, args.m_to, args.a_from, args.a_to, args.mode, args.chunk_size,
                          args.composite_only)
    out = open(args.out, "w") if args.out else sys.stdout
    status = EXIT_OK
    try:
        writer = csv.writer(out, lineterminator="\n") if args.format == "csv" else None
        if writer:
            writer.writerow(_RECORD_HEADER)
        try:
            for rec in search_range(params, jobs=args.jobs, checkpoint=args.checkpoint):
                if writer:
                    writer.writerows(_record_rows(rec))
                else:
                    out.write(_dump(rec.to_json()) + "\n")
                out.flush()
        except SearchInterrupted as exc:
            print(f"carmq: {exc}", file=sys.stderr)
            status = EXIT_RESUMABLE
    finally:
        if out is not sys.stdout:
            out.close()
    return status


def cmd_period(args) -> int:
    ctx = quotients.modulus_context(args.m)
    rep = sequences.predicted_period(ctx)
    obj = rep.to_json()
    status = EXIT_OK
    if args.verify:
        got_a = sequences.bruteforce_period(ctx, "a")
        got_b = sequences.bruteforce_period(ctx, "b")
        match = got_a == rep.total and got_b == rep.b_total
        obj["verify"] = {"a": str(got_a), "b": str(got_b), "result": "MATCH" if match else "MISMATCH"}
        status = EXIT_OK if match else EXIT_INVARIANT
    if args.format == "csv":
        _csv(["m", "p", "r", "w", "T"], [[rep.m, *c] for c in rep.components])
    else:
        print(_dump(obj))
        if args.verify and args.format == "text":
            print(obj["verify"]["result"])
    return status


def cmd_charsum(args) -> int:
    spec = equidist.CharacterSpec(args.m, args.a)
    rep = equidist.exponential_sum(spec, args.start, args.length)
    obj = rep.to_json()
    text = (
        f"sum = {obj['real']:.12g} {'+' if obj['imag'] >= 0 else '-'} {abs(obj['imag']):.12g}i\n"
        f"|sum| = {obj['abs']:.12g}{' (exactly 0)' if rep.exactly_zero else ''}\n"
        f"N^(1/2) m^(3/8) = {rep.burgess_scale:.12g}\n"
        f"ratio = {obj['ratio']:.6g}"
    )
    _emit(args, text, obj, list(obj), [list(obj.values())])
    return EXIT_OK


def cmd_dlog(args) -> int:
    inst = dlog.dlog_instance(args.p, args.g)
    qg = quotients.fermat_quotient_mod(args.p, inst.g)
    qu = quotients.fermat_quotient_mod(args.p, args.u)
    log = dlog.quotient_dlog(inst, args.u)
    obj = {"p": str(args.p), "g": str(inst.g), "Q_p(g)": str(qg), "Q_p(u)": str(qu),
           "u": str(args.u), "log_mod_p": str(log)}
    text = f"g = {inst.g}\nQ_p(g) = {qg}\nQ_p(u) = {qu}\nlog u mod p = {log}"
    _emit(args, text, obj, list(obj), [list(obj.values())])
    return EXIT_OK


def cmd_verify(args) -> int:
    failed = False
    rows = []
    for res in verify_suite(args.scope):
        failed |= not res.passed
        if args.format == "json":
            print(_dump(res.to_json()), flush=True)
        elif args.format == "csv":
            rows.append([res.scope, res.name, res.passed, _dump(res.counterexample)])
        else:
            line = f"{'PASS' if res.passed else 'FAIL'} [{res.scope}] {res.name} ({res.seconds:.2f}s)"
            if not res.passed:
                line += f" counterexample={_dump(res.counterexample)}"
            print(line, flush=True)
    if args.format == "csv":
        _csv(["scope", "name", "passed", "counterexample"], rows)
    return EXIT_INVARIANT if failed else EXIT_OK


def _default_jobs() -> int:
    raw = os.environ.get("CARMQ_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")

    parser = _Parser(prog="carmq", description="Carmichael quotient toolkit")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("lambda", parents=[common], help="Carmichael function lambda(m)")
    p.add_argument("m", type=int)
    p.set_defaults(func=cmd_lambda)

    for verb, kind, label in (("cq", "carmichael", "-m"), ("eq", "euler", "-m"), ("fq", "fermat", "-p")):
        p = sub.add_parser(verb, parents=[common], help=f"{kind} quotient")
        p.add_argument(label, dest="m", type=int, required=True)
        p.add_argument("-a", type=int, required=True)
        p.add_argument("-k", type=int, nargs="+", default=[1], help="residue levels mod m^k")
        p.add_argument("--exact", action="store_true", help="also print the exact integer")
        p.set_defaults(func=lambda args, kind=kind: _quotient(args, kind, args.m))

    p = sub.add_parser("identity", parents=[common], help="evaluate an expression for C_m(a)")
    p.add_argument("--which", choices=("lerch", "beta", "powersum", "s", "bernoulli"), required=True)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-a", type=int, required=True)
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("cw", parents=[common], help="Carmichael-Wieferich test")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-a", type=int, required=True)
    p.add_argument("--mode", choices=("criterion", "direct"), default="criterion")
    p.set_defaults(func=cmd_cw)

    p = sub.add_parser("search", parents=[common], help="search ranges for Carmichael-Wieferich pairs")
    p.add_argument("--m-from", type=int, required=True)
    p.add_argument("--m-to", type=int, required=True)
    p.add_argument("--a-from", type=int, default=1)
    p.add_argument("--a-to", type=int, required=True, help="capped at m^2 per modulus")
    p.add_argument("--mode", choices=("criterion", "direct"), default="criterion")
    p.add_argument("--chunk-size", type=int, default=16)
    p.add_argument("--composite-only", action="store_true")
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.add_argument("--checkpoint")
    p.add_argument("--out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("period", parents=[common], help="least period of the quotient sequences")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_period)

    p = sub.add_parser("charsum", parents=[common], help="character sum over M < n <= M + N")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-a", type=int, required=True)
    p.add_argument("--from", dest="start", type=int, default=0)
    p.add_argument("--len", dest="length", type=int, required=True)
    p.set_defaults(func=cmd_charsum)

    p = sub.add_parser("dlog", parents=[common], help="log_g(u) mod p via Fermat quotients")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-u", type=int, required=True)
    p.add_argument("--g", type=int)
    p.set_defaults(func=cmd_dlog)

    p = sub.add_parser("verify", parents=[common], help="run invariant sweeps")
    p.add_argument("scope", choices=(*SCOPES, "all"))
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("carmq: --jobs must be >= 1", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"carmq: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except InvalidInputError as exc:
        print(f"carmq: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CarmqError as exc:
        print(f"carmq: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
