"""Command-line front end.

Exit codes: 0 pass, 1 fail, 2 usage error, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Callable

from .denominators import analyze, bounded_check, classify, certified_case, verify_prop2
from .forms import form_cache, serre_derivative
from .hypergeom import C_n, closed_form_solution, lemma_valuation_check, pochhammer_ratio
from .mlde import MLDEParams, derive_params, frobenius_solve
from .rational import DEFAULT_PRIME_BOUND, ParameterError, format_rational, parse_rational
from .reproduce import reproduce
from .series import QExpansion
from .verdict import Verdict

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _progress_printer(every: int) -> Callable[[int, int], None] | None:
    if every <= 0:
        return None

    def report(n: int, total: int) -> None:
        if n % every == 0 or n == total:
            print(f"  coefficient {n}/{total}", file=sys.stderr, flush=True)

    return report


def _params(args) -> MLDEParams:
    if args.m1 is None or args.m2 is None:
        raise UsageError("--m1 and --m2 are required")
    try:
        m1, m2 = parse_rational(args.m1), parse_rational(args.m2)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None
    return derive_params(m1, m2)


def _components(sel: str) -> list[str]:
    return ["f1", "f2"] if sel == "both" else [sel]


def _root(component: str) -> str:
    return "m1" if component == "f1" else "m2"


def _dump(payload, args, text: str | None = None, table: list[list] | None = None) -> None:
    if args.format == "json":
        out = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in table or []:
            writer.writerow(row)
        out = buf.getvalue()
    else:
        out = (text if text is not None else json.dumps(payload, indent=2, sort_keys=True)) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _verdict_table(v: Verdict) -> list[list]:
    rows = [["description", "expected", "actual", "status"]]
    rows += [[c.description, c.expected, c.actual, c.status] for c in v.cases]
    return rows


def _verdict_text(v: Verdict) -> str:
    lines = [f"{v.suite}: {'PASS' if v.passed else ('INCONCLUSIVE' if v.inconclusive else 'FAIL')}"]
    for c in v.cases:
        lines.append(f"  [{c.status}] {c.description}: expected {c.expected}, got {c.actual}")
    return "\n".join(lines)


# -- commands -------------------------------------------------------------------


def cmd_derive(args) -> int:
    params = _params(args)
    payload = params.to_json()
    payload["classification"] = str(classify(params))
    text = "\n".join(f"{k} = {v}" for k, v in payload.items())
    _dump(payload, args, text, [list(payload), list(payload.values())])
    return EXIT_PASS


def _expand(params: MLDEParams, component: str, method: str, order: int, progress) -> QExpansion:
    if method == "frobenius":
        return frobenius_solve(params, _root(component), order, progress)
    return closed_form_solution(params, component, order)


def cmd_expand(args) -> int:
    params = _params(args)
    if args.order < 0:
        raise UsageError("--order must be >= 0")
    progress = _progress_printer(args.progress)
    methods = ["frobenius", "hypergeometric"] if args.method == "both" else [args.method]
    payload: dict = {"params": params.to_json(), "order": args.order, "components": {}}
    rows = [["component", "method", "index", "exponent", "numerator", "denominator"]]
    lines = []
    for comp in _components(args.component):
        entry = {}
        series = {m: _expand(params, comp, m, args.order, progress) for m in methods}
        for m, s in series.items():
            entry[m] = s.to_json()
            for n, c in enumerate(s.coefficients):
                rows.append([comp, m, n, format_rational(s.leading_exponent + n), c.numerator, c.denominator])
            lines.append(f"{comp} [{m}]: q^{s.leading_exponent} * (" + ", ".join(map(format_rational, s.coefficients[:8])) + (", ...)" if len(s) > 8 else ")"))
        if len(series) == 2:
            entry["agree"] = series["frobenius"] == series["hypergeometric"]
            lines.append(f"{comp}: methods agree = {entry['agree']}")
        payload["components"][comp] = entry
    _dump(payload, args, "\n".join(lines), rows)
    agree = [e.get("agree", True) for e in payload["components"].values()]
    return EXIT_PASS if all(agree) else EXIT_FAIL


def cmd_analyze(args) -> int:
    params = _params(args)
    progress = _progress_printer(args.progress)
    reports = []
    rows = [["component", "n", "denominator_factors", "progression_hits"]]
    lines = [str(classify(params))]
    root_comp = certified_case(params)[1]
    residues = args.residue if args.residue else [params.P % params.Q, -params.P % params.Q]
    for comp in _components(args.component):
        s = frobenius_solve(params, _root(comp), args.order, progress)
        rep = analyze(s, params.Q, residues, component=comp, params=params, bound=args.prime_bound)
        bc = bounded_check(s)
        data = rep.to_json()
        data["bounded_check"] = bc.to_json()
        reports.append(data)
        for e in rep.per_index:
            rows.append([comp, e.n, " ".join(f"{p}^{k}" for p, k in e.denominator_factors), " ".join(f"{p}:{v}" for p, v in e.progression_hits)])
        prog = rep.progression_primes()
        lines.append(
            f"{comp}{' (certified component)' if comp == root_comp else ''}: "
            f"{len(rep.first_occurrence)} denominator primes, {len(prog)} in residues {list(rep.residues)} mod {rep.modulus}; "
            f"bounded_check = {'bounded, M = ' + str(bc.clearing_constant) if bc.bounded else 'growing'}"
        )
    _dump({"reports": reports}, args, "\n".join(lines), rows)
    return EXIT_PASS


def _identities_suite(order: int) -> Verdict:
    forms = form_cache(order)
    v = Verdict(f"identities to order {order}")
    v.add("D_1(eta^2) = 0", True, serre_derivative(forms.eta(2), 1).is_zero)
    v.add("D_12(Delta) = 0", True, serre_derivative(forms.delta, 12).is_zero)
    e4cubed = forms.E4 * forms.E4 * forms.E4
    v.add("E4^3 - E6^2 = 1728 Delta", True, (e4cubed - forms.E6 * forms.E6 - forms.delta.scale(1728)).is_zero)
    v.add("j * Delta = E4^3", True, (forms.j * forms.delta - e4cubed).is_zero)
    v.add("j * j^-1 = 1", True, (forms.j * forms.j_inverse - 1).is_zero)
    v.add("eta^24 = Delta (pentagonal vs power)", True, forms.eta(24) == forms.delta)
    return v


def _cross_oracle_suite(params: MLDEParams, order: int, progress) -> Verdict:
    v = Verdict(f"cross-oracle m1={format_rational(params.m1)} m2={format_rational(params.m2)} order {order}")
    for comp in ("f1", "f2"):
        a = frobenius_solve(params, _root(comp), order, progress)
        b = closed_form_solution(params, comp, order)
        same = sum(x == y for x, y in zip(a.coefficients, b.coefficients))
        v.add(f"{comp}: frobenius == hypergeometric ({len(a)} coefficients)", len(a), same if len(a) == len(b) else -1)
    return v


def _closed_product_suite(params: MLDEParams, order: int) -> Verdict:
    v = Verdict(f"closed product P={params.P} Q={params.Q}")
    for branch in ("plus", "minus"):
        ok = all(C_n(params.P, params.Q, n, branch) == pochhammer_ratio(params, n, branch) for n in range(1, order + 1))
        v.add(f"{branch} branch, n <= {order}", True, ok)
    return v


def cmd_verify(args) -> int:
    suite = args.suite
    progress = _progress_printer(args.progress)
    if suite == "identities":
        verdict = _identities_suite(args.order)
    elif suite == "cross-oracle":
        verdict = _cross_oracle_suite(_params(args), args.order, progress)
    elif suite == "closed-product":
        verdict = _closed_product_suite(_params(args), args.order)
    elif suite == "lemma":
        if args.p is None or args.q is None:
            raise UsageError("--p and --q are required for the lemma suite")
        verdict = lemma_valuation_check(args.p, args.q, args.prime_bound)
    elif suite == "prop2":
        params = _params(args)
        verdict = verify_prop2(params, args.prime_bound, order=args.order if args.order_given else None)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown suite {suite}")
    _dump(verdict.to_json(), args, _verdict_text(verdict), _verdict_table(verdict))
    return verdict.exit_code


def cmd_reproduce_paper(args) -> int:
    report = reproduce(args.order, jobs=args.jobs, progress=_progress_printer(args.progress))
    payload = report.to_json()
    lines = []
    for a in report.assignments:
        tag = "MATCH" if a.matches else "no match"
        extra = f" after integer rescaling by {a.to_json()['rescaling']}" if a.matches and a.scale else ""
        lines.append(f"{a.component}, offset {a.offset}: {tag}{extra}")
    if report.chosen:
        lines.append(f"chosen: component {report.chosen.component}, index offset {report.chosen.offset}")
    lines.append(_verdict_text(report.sanity))
    lines.append("PASS" if report.passed else "FAIL")
    rows = [["component", "offset", "matches", "rescaling"]]
    rows += [[a.component, a.offset, a.matches, a.to_json()["rescaling"]] for a in report.assignments]
    _dump(payload, args, "\n".join(lines), rows)
    return EXIT_PASS if report.passed else EXIT_FAIL


# -- parser -------------------------------------------------------------------------


class _Order(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        namespace.order_given = True


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m1", help="first exponent, e.g. 3/10")
    common.add_argument("--m2", help="second exponent, e.g. 2/10")
    common.add_argument("--order", type=int, default=100, action=_Order)
    common.add_argument("--component", choices=["f1", "f2", "both"], default="both")
    common.add_argument("--method", choices=["frobenius", "hypergeometric", "both"], default="frobenius")
    common.add_argument("--prime-bound", type=int, default=DEFAULT_PRIME_BOUND)
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument("--progress", type=int, default=0, metavar="N", help="report every N coefficients on stderr")
    common.set_defaults(order_given=False)

    parser = argparse.ArgumentParser(prog="vvmfden", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("derive", parents=[common], help="parameter pack for (m1, m2)").set_defaults(func=cmd_derive)
    sub.add_parser("expand", parents=[common], help="q-expansions of the solutions").set_defaults(func=cmd_expand)
    p = sub.add_parser("analyze", parents=[common], help="denominator report")
    p.add_argument("--residue", type=int, action="append", help="progression residue mod Q (repeatable)")
    p.set_defaults(func=cmd_analyze)
    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", required=True, choices=["identities", "cross-oracle", "closed-product", "lemma", "prop2"])
    p.add_argument("--p", type=int, help="P for the lemma suite")
    p.add_argument("--q", type=int, help="Q for the lemma suite")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("reproduce-paper", parents=[common], help="denominators of coefficients 1000-1002 for (3/10, 2/10)")
    p.add_argument("--jobs", type=int, default=1, help="solve the two components in parallel when > 1")
    p.set_defaults(func=cmd_reproduce_paper, order=1002)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
