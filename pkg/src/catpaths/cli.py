"""Command-line front end.

    catpaths count --steps "H*,V*" --boundary affine:1:1 --order 5
    catpaths series --family tugger --order 8 --method all
    catpaths verify --suite bijection --steps "H*,V*,B*" --n 3
    catpaths asymptotics --family queen
    catpaths families

Exit codes: 0 pass, 1 a verification failed, 2 parse error, 3 precondition
failure.  JSON output is deterministic (sorted keys, coefficients as strings).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from sympy.polys.rings import PolyElement

from . import asymptotics as asy
from . import enumerate as en
from . import genfun as gf
from .rings import WeightRing
from .series import TruncSeries
from .steps import Boundary, DSLParseError, PreconditionFailed, StepSet, bishop_series

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_PRECONDITION = 0, 1, 2, 3
METHODS = ("dp", "pipeline", "closed-form", "quadratic")
SUITES = ("bijection", "lemma25", "corollary", "d-identity", "quadratic", "boundary2", "kernel")


class UsageError(ValueError):
    """Bad option combination; reported like a parse error."""


# -- formatting -------------------------------------------------------------------

def fmt_coeff(c) -> str:
    if isinstance(c, PolyElement):
        return str(c.as_expr()) if not c.is_ground else fmt_coeff(c.LC if c else 0)
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else str(c)
    if hasattr(c, "denominator") and c.denominator == 1:
        return str(int(c.numerator))
    return str(c)


# small integer metadata stays numeric; counts and coefficients become decimal strings
_NUMERIC_KEYS = frozenset({
    "schema", "order", "n", "M", "digits", "coefficients", "jobs",
    "first_difference", "first_nonzero", "mismatched_h",
})


def _jsonable(obj, key=None):
    if isinstance(obj, PolyElement):
        return fmt_coeff(obj)
    if isinstance(obj, dict):
        # children of a numeric key (e.g. the per-pair first differences) inherit it
        inherit = key in _NUMERIC_KEYS
        return {str(k): _jsonable(v, key if inherit else str(k)) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v, key) for v in obj]
    if isinstance(obj, (bool, type(None), str)):
        return obj
    if isinstance(obj, int) and key in _NUMERIC_KEYS:
        return obj
    return fmt_coeff(obj)


def dump_json(payload: dict) -> str:
    return json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n"


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def coeff_csv(coeffs) -> str:
    return _csv(((n, fmt_coeff(c)) for n, c in enumerate(coeffs)), ["n", "coefficient"])


def coeff_plain(coeffs) -> str:
    return ", ".join(fmt_coeff(c) for c in coeffs)


# -- option parsing -------------------------------------------------------------------

def parse_weights(text):
    """``rho,nu`` gives symbolic labels; ``rho=2,nu=1/2`` numeric values.

    Returns (labels, values) with values a dict of Fractions (possibly empty).
    """
    if not text:
        return (), {}
    labels, values = [], {}
    pos = 0
    for part in text.split(","):
        item = part.strip()
        if "=" in item:
            name, _, raw = item.partition("=")
            name = name.strip()
            try:
                values[name] = Fraction(raw.strip())
            except (ValueError, ZeroDivisionError):
                raise DSLParseError(f"bad weight value {raw.strip()!r}", text, pos + len(name) + 1) from None
        else:
            name = item
        if not name.isidentifier():
            raise DSLParseError(f"bad weight label {name!r}", text, pos)
        labels.append(name)
        pos += len(part) + 1
    return tuple(labels), values


def _weights_payload(text):
    labels, values = parse_weights(text)
    if not labels:
        return None
    return {"labels": list(labels), "values": {k: values[k] for k in sorted(values)}}


def _weights_for_steps(S: StepSet, labels, values):
    if not S.labels:
        if labels:
            raise UsageError("--weights given but the step set has no labels")
        return None
    unknown = set(labels) - set(S.labels)
    if unknown:
        raise UsageError(f"weight labels {sorted(unknown)} do not occur in the step set")
    R = WeightRing(S.labels)
    return {k: (R(values[k]) if k in values else R[k]) for k in S.labels}


def _specialize_series(series: TruncSeries, values):
    if not values:
        return series

    def sub(c):
        if isinstance(c, PolyElement):
            R = WeightRing(tuple(str(g) for g in c.ring.gens))
            return R.specialize(c, values)
        return c

    return series.map(sub)


def _family(args) -> gf.FamilySpec:
    labels, values = parse_weights(args.weights)
    try:
        f = gf.FamilySpec.parse(args.family, labels)
    except ValueError as exc:
        raise DSLParseError(str(exc), args.family, 0) from None
    f.stepset()  # validates the number of labels
    return f, values


def _stepset(args) -> StepSet:
    return StepSet.parse(args.steps)


def _boundary(args) -> Boundary:
    return Boundary.parse(args.boundary) if args.boundary else Boundary.catalan()


# -- commands ---------------------------------------------------------------------------

def cmd_count(args):
    S = _stepset(args)
    labels, values = parse_weights(args.weights)
    weights = _weights_for_steps(S, labels, values)
    N = args.order
    payload = {"schema": SCHEMA, "command": "count", "steps": str(S), "order": N}
    if args.boundary is None:
        table = en.count_unrestricted(S, N, weights=weights)
        payload["boundary"] = None
        payload["table"] = [[table[x, y] for y in range(N + 1)] for x in range(N + 1)]
        if args.output == "csv":
            return EXIT_OK, table.to_csv()
        if args.output == "plain":
            rows = [" ".join(fmt_coeff(table[x, y]) for x in range(N + 1)) for y in range(N + 1)]
            return EXIT_OK, "a[x, y], one row per y\n" + "\n".join(rows) + "\n"
        return EXIT_OK, dump_json(payload)
    b = _boundary(args)
    res = en.count_bounded(S, b, N, weights=weights)
    payload.update(boundary=str(b), p=res.p, d=res.d)
    if args.output == "csv":
        return EXIT_OK, coeff_csv(res.p)
    if args.output == "plain":
        return EXIT_OK, f"p: {coeff_plain(res.p)}\nd: {coeff_plain(res.d)}\n"
    return EXIT_OK, dump_json(payload)


def _series_by(method: str, f, S, N, weights):
    if method == "dp":
        if f is not None:
            return gf.dp_series(f, N)
        zero = Fraction(0) if weights is None else next(iter(weights.values())) * 0
        return TruncSeries([zero + c for c in en.count_bounded(S, Boundary.catalan(), N, weights=weights).p])
    if method == "pipeline":
        if f is not None:
            return gf.family_pipeline(f, N)
        return gf.pipeline_gf(S, N, weights=weights)
    if f is None:
        raise PreconditionFailed(f"method {method} needs --family")
    if method == "closed-form":
        return gf.closed_form(f, N)
    if method == "quadratic":
        return gf.newton_quadratic_branch(gf.quadratic_for(f), N)
    raise UsageError(f"unknown method {method}")


def _first_difference(a: TruncSeries, b: TruncSeries):
    for i, (x, y) in enumerate(zip(a.coeffs, b.coeffs)):
        if x != y:
            return i
    return None


def cmd_series(args):
    N = args.order
    if (args.family is None) == (args.steps is None):
        raise UsageError("give exactly one of --family and --steps")
    methods = METHODS if args.method == "all" else (args.method,)
    if args.family is not None:
        f, values = _family(args)
        S, weights, subject = f.stepset(), None, {"family": str(f)}
    else:
        f = None
        S = _stepset(args)
        labels, values = parse_weights(args.weights)
        weights = _weights_for_steps(S, labels, {})
        subject = {"steps": str(S)}
        if args.method == "all":
            methods = ("dp", "pipeline")
    rows = {}
    for m in methods:
        rows[m] = _specialize_series(_series_by(m, f, S, N, weights), values)
    base = rows[methods[0]]
    deltas = {f"{methods[0]}-vs-{m}": _first_difference(base, rows[m]) for m in methods[1:]}
    agree = all(v is None for v in deltas.values())
    code = EXIT_OK if agree else EXIT_FAIL
    if args.output == "csv":
        if len(methods) == 1:
            return code, coeff_csv(base.coeffs)
        body = [[n] + [fmt_coeff(rows[m][n]) for m in methods] for n in range(N + 1)]
        return code, _csv(body, ["n"] + [f"coefficient_{m}" for m in methods])
    if args.output == "plain":
        lines = [f"{m}: {coeff_plain(rows[m].coeffs)}" for m in methods]
        if len(methods) > 1:
            lines.append("agree: " + ("yes" if agree else "no"))
        return code, "\n".join(lines) + "\n"
    payload = {"schema": SCHEMA, "command": "series", "order": N, **subject,
               "methods": {m: list(rows[m].coeffs) for m in methods},
               "weights": _weights_payload(args.weights)}
    if len(methods) > 1:
        payload["first_difference"] = deltas
        payload["agree"] = agree
    return code, dump_json(payload)


# verification checks are plain functions of picklable arguments so that --jobs can fan them out

def _check_bijection(steps, boundary, n):
    r = en.verify_lemma_2_1(StepSet.parse(steps), Boundary.parse(boundary), n)
    return {"check": f"bijection n={n}", "passed": r.passed, "details": r.as_dict()}


def _check_lemma25(steps, boundary, n, M):
    r = en.verify_lemma_2_5(StepSet.parse(steps), Boundary.parse(boundary), n, M)
    return {"check": f"lemma25 n={n} M={M}", "passed": r.passed, "details": r.as_dict()}


def _check_corollary(steps, boundary, N):
    S, b = StepSet.parse(steps), Boundary.parse(boundary)
    lhs, rhs = en.corollary_2_2_sides(S, N, b)
    diff = next((i for i, (x, y) in enumerate(zip(lhs, rhs)) if x != y), None)
    return {"check": f"corollary order={N}", "passed": lhs == rhs, "details": {"first_difference": diff}}


def _check_d_identity(steps, N):
    ok = en.verify_d_identity(StepSet.parse(steps), N)
    return {"check": f"d-identity order={N}", "passed": ok, "details": {}}


def _check_quadratic(family, weights, N):
    f = gf.FamilySpec.parse(family, weights)
    P = gf.dp_series(f, N)
    res = gf.verify_quadratic(P, gf.quadratic_for(f))
    return {"check": f"quadratic {f} order={N}", "passed": res.is_zero(),
            "details": {"residual": list(res.coeffs), "first_nonzero": res.valuation()}}


def _check_boundary2(steps, N):
    sides = gf.boundary_2i1_sides(StepSet.parse(steps), N)
    return {"check": f"boundary2 order={N}", "passed": sides.residual.is_zero(),
            "details": {"p": list(sides.P.coeffs), "residual": list(sides.residual.coeffs)}}


def _check_kernel(steps, N, Hmax):
    S = StepSet.parse(steps)
    T = bishop_series(S, Boundary.catalan(), N)
    kd = gf.kernel_quantities(T, N)
    table = en.count_unrestricted(S, N)
    diags = gf.diagonals(table, Hmax)
    bad = [h for h in range(Hmax + 1) if kd.diagonal(h) != diags.D[h]]
    return {"check": f"kernel diagonals h<={Hmax} order={N}", "passed": not bad,
            "details": {"mismatched_h": bad}}


def _kernel_precondition(S: StepSet):
    from .steps import Kind

    kinds = {f.kind for f in S.families}
    rook = {Kind.ALL_HORIZONTAL, Kind.ALL_VERTICAL} <= kinds
    others_ok = all(f.kind in (Kind.ALL_HORIZONTAL, Kind.ALL_VERTICAL, Kind.BISHOPS) for f in S.families)
    if not (rook and others_ok) or S.labels:
        raise PreconditionFailed("the kernel route needs all rook steps plus bishop steps only, unweighted")


def _run(jobs, calls):
    if jobs and jobs > 1 and len(calls) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            futures = [ex.submit(fn, *a) for fn, a in calls]
            return [fut.result() for fut in futures]
    return [fn(*a) for fn, a in calls]


def cmd_verify(args):
    suite = args.suite
    N = args.order
    calls = []
    subject = {}
    if suite == "quadratic":
        if args.family is None:
            raise UsageError("--suite quadratic needs --family")
        f, _values = _family(args)
        gf.quadratic_for(f)
        calls.append((_check_quadratic, (f.name, f.weights, N)))
        subject["family"] = str(f)
    else:
        if args.steps is None and args.family is None:
            raise UsageError(f"--suite {suite} needs --steps or --family")
        S = gf.FamilySpec.parse(args.family).stepset() if args.family else _stepset(args)
        steps = str(S)
        b = _boundary(args)
        subject.update(steps=steps, boundary=str(b))
        if suite in ("bijection", "lemma25"):
            if args.n is None:
                raise UsageError(f"--suite {suite} needs --n")
            if suite == "bijection":
                en._require(S, b, all_horizontal=True)
                calls = [(_check_bijection, (steps, str(b), n)) for n in range(args.n + 1)]
            else:
                if args.M is None:
                    raise UsageError("--suite lemma25 needs --M")
                en._require(S, b, all_horizontal=False)
                calls = [(_check_lemma25, (steps, str(b), n, args.M)) for n in range(args.n + 1)]
        elif suite == "corollary":
            calls.append((_check_corollary, (steps, str(b), N)))
        elif suite == "d-identity":
            calls.append((_check_d_identity, (steps, N)))
        elif suite == "boundary2":
            calls.append((_check_boundary2, (steps, N)))
        elif suite == "kernel":
            _kernel_precondition(S)
            calls.append((_check_kernel, (steps, N, min(5, N))))
        else:
            raise UsageError(f"unknown suite {suite}")
    results = _run(args.jobs, calls)
    passed = all(r["passed"] for r in results)
    code = EXIT_OK if passed else EXIT_FAIL
    if args.output == "plain":
        lines = [f"{'PASS' if r['passed'] else 'FAIL'} {r['check']}" for r in results]
        return code, "\n".join(lines) + "\n"
    if args.output == "csv":
        return code, _csv(((r["check"], "pass" if r["passed"] else "fail") for r in results), ["check", "result"])
    payload = {"schema": SCHEMA, "command": "verify", "suite": suite, "order": N, **subject,
               "checks": results, "passed": passed}
    return code, dump_json(payload)


def cmd_asymptotics(args):
    if args.family is None:
        raise UsageError("asymptotics needs --family")
    f, values = _family(args)
    if f.weights:
        raise PreconditionFailed("asymptotics are computed for unweighted families only")
    q = gf.quadratic_for(f)
    try:
        report = asy.asymptotic_report(f.name, q, N=args.coefficients)
    except (asy.NoPositiveRoot, asy.NonSimpleRoot, asy.Q2VanishesFirst) as exc:
        raise PreconditionFailed(str(exc)) from None
    except asy.BranchSignMismatch as exc:
        return EXIT_FAIL, dump_json({"schema": SCHEMA, "family": f.name, "error": str(exc)})
    if args.output == "plain":
        keys = ("family", "gamma", "omega", "rho", "digits", "method")
        lines = [f"{k}: {report[k]}" for k in keys]
        cc = report["crosscheck_delta"]
        lines.append(f"ratio check ({cc['coefficients']} coefficients): gamma {cc['gamma']}, omega {cc['omega']}")
        return EXIT_OK, "\n".join(lines) + "\n"
    if args.output == "csv":
        rows = [(k, report[k]) for k in ("family", "gamma", "omega", "rho", "digits", "method")]
        return EXIT_OK, _csv(rows, ["field", "value"])
    return EXIT_OK, asy.report_json(report) + "\n"


def _family_row(name):
    f = gf.FamilySpec.parse(name)
    row = {"family": name, "steps": str(f.stepset())}
    try:
        q = gf.quadratic_for(f)
        row["quadratic"] = {"q2": list(q.q2), "q1": list(q.q1), "q0": list(q.q0)}
    except gf.NoKnownQuadratic:
        row["quadratic"] = None
    return row


def cmd_families(args):
    rows = _run(args.jobs, [(_family_row, (name,)) for name in gf.ACCEPTANCE_FAMILIES])
    if args.output == "plain":
        return EXIT_OK, "\n".join(f"{r['family']:<12} {r['steps']}" for r in rows) + "\n"
    if args.output == "csv":
        return EXIT_OK, _csv(((r["family"], r["steps"]) for r in rows), ["family", "steps"])
    return EXIT_OK, dump_json({"schema": SCHEMA, "command": "families", "families": rows})


COMMANDS = {
    "count": cmd_count,
    "series": cmd_series,
    "verify": cmd_verify,
    "asymptotics": cmd_asymptotics,
    "families": cmd_families,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "csv", "plain"), default="json")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for independent checks")

    p = argparse.ArgumentParser(prog="catpaths", description="Exact enumeration of lattice paths under a right boundary.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", parents=[common], help="count table or bounded counts p_n, d_n")
    c.add_argument("--steps", required=True, help='step set, e.g. "H*,V*,B{1,2}"')
    c.add_argument("--boundary", help="affine:SIGMA:DELTA or explicit:s0,s1,...; omit for the unrestricted table")
    c.add_argument("--order", type=int, default=20)
    c.add_argument("--weights", help="label values, e.g. rho=2; unassigned labels stay symbolic")

    s = sub.add_parser("series", parents=[common], help="coefficients of P(t)")
    s.add_argument("--family")
    s.add_argument("--steps")
    s.add_argument("--order", type=int, default=20)
    s.add_argument("--weights", help="labels (rho,nu) or values (rho=2,nu=1)")
    s.add_argument("--method", choices=METHODS + ("all",), default="pipeline")

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", required=True, choices=SUITES)
    v.add_argument("--steps")
    v.add_argument("--family")
    v.add_argument("--boundary")
    v.add_argument("--weights")
    v.add_argument("--order", type=int, default=20)
    v.add_argument("--n", type=int, help="largest n for the bijection suites")
    v.add_argument("--M", type=int, help="step length bound for lemma25")

    a = sub.add_parser("asymptotics", parents=[common], help="growth constant and amplitude")
    a.add_argument("--family", required=True)
    a.add_argument("--weights")
    a.add_argument("--coefficients", type=int, default=2000, help="coefficients used by the ratio cross-check")

    sub.add_parser("families", parents=[common], help="list the named families")
    return p


def run(argv=None):
    """Parse and execute; returns (exit code, stdout text, stderr text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_PARSE if exc.code else EXIT_OK), "", ""
    for opt in ("order", "n", "M", "coefficients"):
        val = getattr(args, opt, None)
        if val is not None and val < 0:
            return EXIT_PARSE, "", f"error: --{opt} must be nonnegative\n"
    try:
        code, out = COMMANDS[args.command](args)
    except DSLParseError as exc:
        return EXIT_PARSE, "", f"parse error: {exc}\n"
    except UsageError as exc:
        return EXIT_PARSE, "", f"error: {exc}\n"
    except (PreconditionFailed, gf.NoKnownQuadratic, gf.NoKnownClosedForm) as exc:
        kind = type(exc).__name__
        return EXIT_PRECONDITION, "", f"precondition failed ({kind}): {exc}\n"
    return code, out, ""


def main(argv=None) -> int:
    code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
