"""Command-line front end.

Subcommands: ``gap`` (level/reachable/hole counts), ``hilbert`` (Hilbert
basis), ``mu`` (dilation invariants), and ``verify`` (engine-vs-formula
comparisons for the built-in families).  Instances are described by JSON,
given inline, as a file path, or on stdin.  Reports go to stdout, all
diagnostics to stderr.  Exit codes: 0 success/all checks pass, 1 invalid
input or failed checks, 2 budget exhausted, 3 bounded search exhausted.

``--threads`` and ``--arith`` are accepted for interface compatibility:
arithmetic is always exact arbitrary-precision and execution sequential,
so outputs are byte-identical across those settings.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import (
    BudgetExceeded,
    InvalidInput,
    LatgapError,
    NotFoundWithinBounds,
    NotPointed,
)
from .fibration import FiberSpec, build_fibration, make_pka, make_qab
from .graphs import edge_polytope, graph_from_json
from .monoid import (
    closure,
    facet_normality,
    hilbert_basis,
    is_normal_dilation,
    is_very_ample,
    mu_invariants,
)
from .polytope import LatticePolytope, ceil_div, dilate, points_at_degree, product
from . import oracle

MAX_INSTANCE_DEPTH = 8
BIG = 2 ** 53


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInput(message)


def _load_instance_data(source: str):
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith("{"):
        text = source
    else:
        try:
            with open(source, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InvalidInput(f"cannot read instance file: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"malformed instance JSON: {exc}") from exc


def parse_instance(data, depth: int = 0) -> LatticePolytope:
    """Build a polytope from a tagged-union instance description."""
    if depth > MAX_INSTANCE_DEPTH:
        raise InvalidInput(f"instance nesting deeper than {MAX_INSTANCE_DEPTH}")
    if not isinstance(data, dict) or "type" not in data:
        raise InvalidInput("instance must be an object with a 'type' field")
    kind = data["type"]
    try:
        if kind == "pka":
            return make_pka(int(data["k"]), int(data["a"]))
        if kind == "qab":
            return make_qab(int(data["a"]), int(data["b"]))
        if kind == "edge_polytope":
            return edge_polytope(graph_from_json(data["graph"]))
        if kind == "product":
            factors = data["factors"]
            if not isinstance(factors, list) or len(factors) < 2:
                raise InvalidInput("product needs a list of at least two factors")
            poly = parse_instance(factors[0], depth + 1)
            for spec in factors[1:]:
                poly = product(poly, parse_instance(spec, depth + 1))
            return poly
        if kind == "dilate":
            return dilate(parse_instance(data["inner"], depth + 1), int(data["s"]))
        if kind == "fibration":
            base = parse_instance(data["base"], depth + 1)
            heights = data["heights"]
            if len(heights) != len(base.vertices):
                raise InvalidInput(
                    "heights must align with the base's sorted vertex list")
            spec = FiberSpec(base=base, heights={
                v: (int(lo), int(hi))
                for v, (lo, hi) in zip(base.vertices, heights)})
            return build_fibration(spec)
        if kind == "explicit":
            return LatticePolytope(data["vertices"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed {kind!r} instance: {exc}") from exc
    raise InvalidInput(f"unknown instance type {kind!r}")


def default_max_degree(p: LatticePolytope) -> int:
    hint = p.degree_hint or 0
    return max(hint, p.dim + 3)


def _encode_int(value: int):
    return value if -BIG < value < BIG else str(value)


def _encode_points(points):
    """Point lists for JSON; coordinates beyond 2^53 become strings."""
    big = any(not -BIG < c < BIG for pt in points for c in pt)
    if big:
        return [[str(c) for c in pt] for pt in points], True
    return [list(pt) for pt in points], False


def _put_points(report: dict, key: str, points):
    payload, big = _encode_points(points)
    report[key] = payload
    if big:
        report[key + "#big"] = True


def _resolve_budget(args) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("LATGAP_BUDGET")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise InvalidInput(f"LATGAP_BUDGET must be an integer: {env!r}") from exc
    return None


def _emit(text: str):
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def cmd_gap(args) -> int:
    data = _load_instance_data(args.instance)
    p = parse_instance(data)
    budget = _resolve_budget(args)
    D = args.max_degree if args.max_degree is not None else default_max_degree(p)
    ledger = closure(p, D, args.engine, budget=budget)
    rows = [{"degree": d,
             "level": _encode_int(ledger.level_count(d)),
             "reachable": _encode_int(ledger.reachable_count(d)),
             "gap": _encode_int(ledger.gap(d))}
            for d in range(D + 1)]
    if args.format == "tsv":
        lines = ["degree\tlevel\treachable\tgap"]
        lines += [f"{r['degree']}\t{r['level']}\t{r['reachable']}\t{r['gap']}"
                  for r in rows]
        if args.holes:
            lines.append("")
            lines.append("degree\thole")
            for d in range(D + 1):
                for pt in ledger.holes(d):
                    lines.append(f"{pt[0]}\t{','.join(str(c) for c in pt[1:])}")
        _emit("\n".join(lines))
        return 0
    report = {
        "command": "gap",
        "instance": data,
        "engine": ledger.engine,
        "max_degree": D,
        "gap_vector": [_encode_int(ledger.gap(d)) for d in range(D + 1)],
        "rows": rows,
    }
    if args.holes:
        holes = {}
        for d in range(D + 1):
            pts = ledger.holes(d)
            if pts:
                payload, big = _encode_points(pts)
                holes[str(d)] = payload
                if big:
                    holes[str(d) + "#big"] = True
        report["holes"] = holes
    _emit(json.dumps(report, indent=2))
    return 0


def cmd_hilbert(args) -> int:
    data = _load_instance_data(args.instance)
    p = parse_instance(data)
    budget = _resolve_budget(args)
    D = args.max_degree if args.max_degree is not None else default_max_degree(p)
    rep = hilbert_basis(p, D, args.engine, budget=budget)
    if args.format == "tsv":
        lines = ["degree\telement"]
        lines += [f"{pt[0]}\t{','.join(str(c) for c in pt[1:])}"
                  for pt in rep.elements]
        _emit("\n".join(lines))
        return 0
    report = {
        "command": "hilbert",
        "instance": data,
        "max_degree_searched": rep.max_degree_searched,
        "complete": rep.complete,
        "count": len(rep.elements),
        "max_basis_degree": rep.max_degree,
    }
    _put_points(report, "elements", rep.elements)
    _emit(json.dumps(report, indent=2))
    return 0


def cmd_mu(args) -> int:
    data = _load_instance_data(args.instance)
    p = parse_instance(data)
    budget = _resolve_budget(args)
    D = args.max_degree if args.max_degree is not None else default_max_degree(p)
    rep = mu_invariants(p, D, args.max_dilation, args.depth, args.engine,
                        budget=budget)
    report = {
        "command": "mu",
        "instance": data,
        "mu_hilb": rep.mu_hilb,
        "mu_hilb_lower": rep.mu_hilb_lower,
        "mu_midp": rep.mu_midp,
        "mu_idp": rep.mu_idp,
        "basis_complete": rep.basis_complete,
        "dilation_normal": {str(s): v for s, v in sorted(rep.dilation_normal.items())},
        "bounds": {
            "max_degree": rep.bounds["max_degree"],
            "max_dilation": rep.bounds["max_dilation"],
            "depth": rep.bounds["depth"],
            "effective_depths": {str(s): v for s, v in
                                 sorted(rep.bounds["effective_depths"].items())},
        },
    }
    _emit(json.dumps(report, indent=2))
    return 0


# ---------------------------------------------------------------------------
# verify

class Checks:
    def __init__(self):
        self.items = []

    def add(self, name: str, ok: bool, detail: str):
        self.items.append({"name": name, "pass": bool(ok), "detail": detail})

    @property
    def all_pass(self) -> bool:
        return all(item["pass"] for item in self.items)

    def emit(self, fmt: str, target: str) -> int:
        if fmt == "json":
            _emit(json.dumps({"command": "verify", "target": target,
                              "checks": self.items, "all_pass": self.all_pass},
                             indent=2))
        else:
            for item in self.items:
                verdict = "PASS" if item["pass"] else "FAIL"
                _emit(f"{verdict} {item['name']}: {item['detail']}")
            n = len(self.items)
            bad = sum(1 for i in self.items if not i["pass"])
            _emit(f"ALL {n} CHECKS PASSED" if not bad else f"{bad}/{n} CHECKS FAILED")
        return 0 if self.all_pass else 1


def verify_pka(args) -> int:
    k, a = args.k, args.a
    p = make_pka(k, a)
    budget = _resolve_budget(args)
    D = args.max_degree if args.max_degree is not None else a + 2
    checks = Checks()
    ledger = closure(p, D, args.engine, budget=budget)
    expected = oracle.gap_formula_pka(k, a, D)
    got = ledger.gap_vector()
    checks.add("gap_vector", got == expected, f"engine {list(got)} vs formula {list(expected)}")
    mismatch = [d for d in range(D + 1)
                if ledger.holes(d) != oracle.holes_pka(k, a, d)]
    total = sum(len(ledger.holes(d)) for d in range(D + 1))
    checks.add("hole_sets", not mismatch,
               f"{total} holes, degrees compared 0..{D}" if not mismatch
               else f"mismatch at degrees {mismatch}")
    rep = hilbert_basis(p, D, args.engine, budget=budget)
    expected_basis = oracle.hilbert_basis_pka(k, a)
    checks.add("hilbert_basis", rep.elements == expected_basis,
               f"{len(rep.elements)} elements, max degree {rep.max_degree}")
    return checks.emit(args.format, "pka")


def _parse_window(text, D):
    if text is None:
        return 0, D
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError as exc:
        raise InvalidInput(f"bad degree window {text!r}; expected LO..HI") from exc
    if not 0 <= lo <= hi:
        raise InvalidInput("degree window must satisfy 0 <= LO <= HI")
    return lo, hi


def verify_qab(args) -> int:
    a, b = args.a, args.b
    p = make_qab(a, b)
    budget = _resolve_budget(args)
    D = args.max_degree if args.max_degree is not None else 7 * a + 3
    lo, hi = _parse_window(args.degrees, D)
    D = max(D, hi)
    checks = Checks()
    formula = oracle.gap_formula_qab(a, b, D)
    ledger = closure(p, D, args.engine, budget=budget)
    got = ledger.gap_vector()
    window_ok = all(got[d] == formula[d] for d in range(lo, hi + 1))
    checks.add("gap_vector", window_ok,
               f"degrees {lo}..{hi}: engine {list(got[lo:hi + 1])} "
               f"vs formula {list(formula[lo:hi + 1])}")
    mismatch = [d for d in range(lo, hi + 1)
                if ledger.holes(d) != oracle.holes_qab(a, b, d)]
    checks.add("hole_sets", not mismatch,
               f"degrees compared {lo}..{hi}" if not mismatch
               else f"mismatch at degrees {mismatch}")
    peak = 4 * a + 2
    if lo <= peak - 1 and peak + 1 <= hi:
        dips = got[peak - 1] > got[peak] < got[peak + 1]
        checks.add("non_unimodal", dips,
                   f"gap[{peak - 1}]={got[peak - 1]} > gap[{peak}]={got[peak]}"
                   f" < gap[{peak + 1}]={got[peak + 1]}")
    return checks.emit(args.format, "qab")


def verify_corollary(args) -> int:
    k = args.k
    p = make_pka(k, k + 2)
    budget = _resolve_budget(args)
    D = args.max_degree if args.max_degree is not None else k + 4
    S, M = args.max_dilation, args.depth
    checks = Checks()
    for s in range(1, S + 1):
        eff = max(M, ceil_div(D, s))
        got = is_normal_dilation(p, s, eff, args.engine, budget=budget)
        want = oracle.corollary_pka_predicates(k, s).normal
        checks.add(f"dilation_s{s}", got == want,
                   f"engine normal={got}, predicted {want} (depth {eff})")
    rep = mu_invariants(p, D, S, M, args.engine, budget=budget)
    pred = oracle.corollary_pka_predicates(k, 1)
    triple = (rep.mu_hilb, rep.mu_midp, rep.mu_idp)
    expected = (pred.mu_hilb, pred.mu_midp, pred.mu_idp)
    checks.add("mu_triple", triple == expected,
               f"engine {triple} vs predicted {expected}")
    return checks.emit(args.format, "corollary")


def verify_product(args) -> int:
    budget = _resolve_budget(args)
    p = make_pka(args.k1, args.a1)
    q = make_pka(args.k2, args.a2)
    r = product(p, q)
    D = args.max_degree if args.max_degree is not None else 5
    checks = Checks()
    led_p = closure(p, D, budget=budget)
    led_q = closure(q, D, budget=budget)
    led_r = closure(r, D, budget=budget)
    pred = oracle.product_identities(led_p, led_q)
    ok = all(led_r.level_count(d) == pred[d].level
             and led_r.reachable_count(d) == pred[d].reachable
             for d in range(D + 1))
    checks.add("counts_multiply", ok,
               f"levels {[led_r.level_count(d) for d in range(D + 1)]}")
    direct_D = min(D, 2)
    direct = closure(r, direct_D, "generic", budget=budget)
    ok = all(direct.level_count(d) == led_r.level_count(d)
             and direct.reachable_count(d) == led_r.reachable_count(d)
             for d in range(direct_D + 1))
    checks.add("direct_cross_check", ok,
               f"direct enumeration agrees up to degree {direct_D}")
    support = {d for d in range(D + 1) if led_r.gap(d)}
    expected_support = (
        {d for d, v in enumerate(oracle.gap_formula_pka(args.k1, args.a1, D)) if v}
        | {d for d, v in enumerate(oracle.gap_formula_pka(args.k2, args.a2, D)) if v})
    checks.add("gap_support", support == expected_support,
               f"gaps at degrees {sorted(support)}, predicted {sorted(expected_support)}")
    idp1 = oracle.corollary_pka_predicates(args.k1, 1).mu_idp
    idp2 = oracle.corollary_pka_predicates(args.k2, 1).mu_idp
    S = max(idp1, idp2) + 1
    rep = mu_invariants(r, D, S, args.depth, budget=budget)
    checks.add("mu_idp_product", rep.mu_idp == max(idp1, idp2),
               f"engine mu_idp={rep.mu_idp}, factors give {max(idp1, idp2)}")
    return checks.emit(args.format, "product")


def verify_normal_facets(args) -> int:
    data = _load_instance_data(args.instance)
    p = parse_instance(data)
    budget = _resolve_budget(args)
    D = args.max_degree if args.max_degree is not None else 4
    results = facet_normality(p, D, budget=budget)
    checks = Checks()
    normal_count = sum(1 for f in results if f.normal)
    if args.expect == "all-normal":
        checks.add("facets_all_normal", normal_count == len(results),
                   f"{normal_count}/{len(results)} facets normal up to degree {D}")
    else:
        checks.add("some_facet_non_normal", normal_count < len(results),
                   f"{len(results) - normal_count}/{len(results)} facets "
                   f"non-normal up to degree {D}")
    return checks.emit(args.format, "normal-facets")


def verify_very_ample(args) -> int:
    data = _load_instance_data(args.instance)
    p = parse_instance(data)
    budget = _resolve_budget(args)
    rep = is_very_ample(p, args.bound, budget=budget)
    checks = Checks()
    detail = (f"no non-generated vertex-cone point up to level {args.bound}"
              if rep.very_ample else
              f"witness {rep.witness_point} at vertex {rep.witness_vertex}")
    checks.add("very_ample", rep.very_ample, detail)
    return checks.emit(args.format, "very-ample")


# ---------------------------------------------------------------------------
# argument wiring

def _add_common(parser, *, formats=("json", "tsv")):
    parser.add_argument("--max-degree", "-D", type=int, default=None,
                        help="degree bound (default: instance-derived)")
    parser.add_argument("--engine", choices=("generic", "fiber", "auto"),
                        default="auto")
    parser.add_argument("--threads", type=int, default=1,
                        help="accepted for compatibility; execution is sequential")
    parser.add_argument("--arith", choices=("checked64", "big"), default="big",
                        help="accepted for compatibility; arithmetic is always exact")
    parser.add_argument("--format", choices=formats, default=formats[0])
    parser.add_argument("--budget", type=int, default=None,
                        help="point budget (default 5*10^7; env LATGAP_BUDGET)")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="latgap",
                  description="Exact lattice-point monoid computations for "
                              "lattice polytopes.")
    sub = top.add_subparsers(dest="command", required=True)

    gap = sub.add_parser("gap", help="level counts, reachable counts, holes")
    gap.add_argument("instance", help="JSON instance: inline, file path, or -")
    gap.add_argument("--holes", action="store_true",
                     help="include explicit hole points")
    _add_common(gap)
    gap.set_defaults(func=cmd_gap)

    hil = sub.add_parser("hilbert", help="Hilbert basis up to a degree bound")
    hil.add_argument("instance")
    _add_common(hil)
    hil.set_defaults(func=cmd_hilbert)

    mu = sub.add_parser("mu", help="dilation invariants")
    mu.add_argument("instance")
    mu.add_argument("--max-dilation", "-S", type=int, default=4)
    mu.add_argument("--depth", "-M", type=int, default=3)
    _add_common(mu)
    mu.set_defaults(func=cmd_mu)

    ver = sub.add_parser("verify", help="engine vs closed-form comparisons")
    vsub = ver.add_subparsers(dest="target", required=True)

    vp = vsub.add_parser("pka", help="fibered even-cycle family")
    vp.add_argument("--k", type=int, required=True)
    vp.add_argument("--a", type=int, required=True)
    _add_common(vp, formats=("text", "json"))
    vp.set_defaults(func=verify_pka)

    vq = vsub.add_parser("qab", help="fibered octahedron family")
    vq.add_argument("--a", type=int, required=True)
    vq.add_argument("--b", type=int, required=True)
    vq.add_argument("--degrees", default=None, help="restrict checks to LO..HI")
    _add_common(vq, formats=("text", "json"))
    vq.set_defaults(func=verify_qab)

    vc = vsub.add_parser("corollary", help="dilation normality pattern")
    vc.add_argument("--k", type=int, required=True)
    vc.add_argument("--max-dilation", "-S", type=int, default=4)
    vc.add_argument("--depth", "-M", type=int, default=3)
    _add_common(vc, formats=("text", "json"))
    vc.set_defaults(func=verify_corollary)

    vpr = vsub.add_parser("product", help="product count and invariant laws")
    vpr.add_argument("--k1", type=int, required=True)
    vpr.add_argument("--a1", type=int, required=True)
    vpr.add_argument("--k2", type=int, required=True)
    vpr.add_argument("--a2", type=int, required=True)
    vpr.add_argument("--depth", "-M", type=int, default=3)
    _add_common(vpr, formats=("text", "json"))
    vpr.set_defaults(func=verify_product)

    vf = vsub.add_parser("normal-facets", help="per-facet normality")
    vf.add_argument("--instance", required=True)
    vf.add_argument("--expect", choices=("all-normal", "non-normal-exists"),
                    default="all-normal")
    _add_common(vf, formats=("text", "json"))
    vf.set_defaults(func=verify_normal_facets)

    va = vsub.add_parser("very-ample", help="bounded very-ampleness")
    va.add_argument("--instance", required=True)
    va.add_argument("--bound", "-L", type=int, required=True)
    _add_common(va, formats=("text", "json"))
    va.set_defaults(func=verify_very_ample)

    return top


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.threads < 1:
            raise InvalidInput("--threads must be >= 1")
        return args.func(args)
    except (InvalidInput, NotPointed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 2
    except NotFoundWithinBounds as exc:
        print(f"not found within bounds: {exc}", file=sys.stderr)
        return 3
    except LatgapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
