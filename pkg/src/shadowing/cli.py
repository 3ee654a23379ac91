"""Command-line front end: file I/O, batch runs, and report generation.

Subcommands: validate, decide, property, oracle, induce, factor-check,
experiment, table.  All thresholds are rationals written "p/q".  Exit
codes: 0 analysis complete (whatever the verdicts), 2 input error, 3
budget or cap exhausted, 4 a certificate failed re-validation.
"""

import argparse
import io
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .core import (FiniteMetricSystem, ThresholdPair, discrete_space,
                   line_space, SpaceValidationError, system_from_json,
                   system_to_json, threshold_grid, validate_space)
from .deciders import (BOUNDED_PROPERTIES, FIXED_THRESHOLD_PROPERTIES,
                       THRESHOLD_FREE_PROPERTIES, NotSurjectiveError,
                       decide_limit_shadowing, decide_orbital_limit_shadowing,
                       decide_strong_orbital_shadowing, _fixed_decider,
                       property_level, revalidate)
from .induced import (CapExceeded, FactorMapError, FactorMapSpec,
                      check_mittag_leffler, hyperspace_system, product_system,
                      require_valid_factor_map, standard_inverse_limit,
                      symmetric_product, tower_limit)
from .lifting import (LIFTING_VARIANTS, PROPERTY_TO_LIFTING, lifting_property,
                      verify_preservation)
from .oracle import ORACLE_PROPERTIES, certified_horizon_hint, oracle
from .pwl import (EXAMPLE_IDS, ExampleParameterError, cubic_tent_map,
                  generate_example, rotation_defect_search,
                  rotation_limit_profile, symmetric_shadow_run, tent_map,
                  validate_pseudo_orbit_spec)
from .rationals import RationalFormatError, format_rational, parse_rational
from .verdicts import BudgetError

VERSION = "1.0.0"

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_CERTIFICATE = 4

ALL_EXACT_PROPERTIES = FIXED_THRESHOLD_PROPERTIES + THRESHOLD_FREE_PROPERTIES

DECIDE_COLUMNS = ("system_id", "property", "eps", "delta", "verdict",
                  "witness_or_cex", "states_explored", "runtime_ms")


class CertificateFailure(RuntimeError):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: tuple = ()
    eps: Fraction = None
    delta: Fraction = None
    horizon: int = None
    out: str = None
    seed: int = 0
    verify_certificates: bool = False
    no_timing: bool = False
    extra: dict = field(default_factory=dict)


@dataclass
class BatchReport:
    rows: list
    summary: dict
    version: str = VERSION
    config_echo: dict = field(default_factory=dict)

    def to_csv(self):
        buf = io.StringIO()
        buf.write("# version=%s %s\n"
                  % (self.version,
                     " ".join("%s=%s" % (k, self.config_echo[k])
                              for k in sorted(self.config_echo))))
        if self.rows:
            cols = list(self.rows[0])
            buf.write(",".join(cols) + "\n")
            for row in self.rows:
                buf.write(",".join(_csv_field(row[c]) for c in cols) + "\n")
        for k in sorted(self.summary):
            buf.write("# %s=%s\n" % (k, self.summary[k]))
        return buf.getvalue()


# ---------------------------------------------------------------------------
# formatting helpers


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, dict):
        return {str(_jsonable(k)): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_jsonable(v) for v in obj)
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return obj
    return str(obj)


def _payload(obj):
    return json.dumps(_jsonable(obj), sort_keys=True, separators=(",", ":"))


def _csv_field(value):
    s = value if isinstance(value, str) else _payload(value)
    if any(c in s for c in ',"\n'):
        s = '"' + s.replace('"', '""') + '"'
    return s


def _verdict_str(holds):
    return {True: "true", False: "false", None: "unknown"}[holds]


def _rational(text):
    try:
        return parse_rational(text)
    except RationalFormatError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _load_system(path):
    with open(path) as fh:
        obj = json.load(fh)
    name = os.path.splitext(os.path.basename(path))[0]
    return system_from_json(obj, name=name)


def _emit(out, text):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _decide_row(system, prop, tp, horizon, no_timing):
    t0 = time.perf_counter()
    if prop in THRESHOLD_FREE_PROPERTIES:
        v = decide_limit_shadowing(system) if prop == "limit" \
            else decide_orbital_limit_shadowing(system)
    elif prop in BOUNDED_PROPERTIES:
        v = decide_strong_orbital_shadowing(system, tp, horizon or 2 * system.n)
    else:
        v = _fixed_decider(prop)(system, tp)
    ms = 0 if no_timing else int((time.perf_counter() - t0) * 1000)
    row = {
        "system_id": system.name,
        "property": prop,
        "eps": format_rational(tp.eps) if tp else "-",
        "delta": format_rational(tp.delta) if tp else "-",
        "verdict": _verdict_str(v.holds),
        "witness_or_cex": _payload(v.witness if v.holds else v.counterexample),
        "states_explored": v.states_explored,
        "runtime_ms": ms,
    }
    return row, v


# ---------------------------------------------------------------------------
# subcommands


def cmd_validate(args):
    with open(args.system) as fh:
        obj = json.load(fh)
    try:
        system = system_from_json(obj)
    except SpaceValidationError as exc:
        print("invalid: %s" % exc)
        return EXIT_INPUT
    problems = validate_space(system.space)
    if problems:
        for p in problems:
            print("violation: %s" % p)
        return EXIT_INPUT
    print("valid: %d points, surjective=%s"
          % (system.n, str(system.is_surjective()).lower()))
    return EXIT_OK


def cmd_decide(args):
    system = _load_system(args.system)
    prop = args.property
    tp = None
    if prop not in THRESHOLD_FREE_PROPERTIES:
        if args.eps is None or args.delta is None:
            raise ValueError("property %r needs --eps and --delta" % prop)
        tp = ThresholdPair(args.eps, args.delta)
    row, v = _decide_row(system, prop, tp, args.horizon, args.no_timing)
    lines = ",".join(DECIDE_COLUMNS) + "\n" + \
        ",".join(_csv_field(row[c]) for c in DECIDE_COLUMNS) + "\n"
    _emit(args.out, lines)
    if args.verify_certificates and prop not in BOUNDED_PROPERTIES:
        check_prop = prop
        if prop in THRESHOLD_FREE_PROPERTIES:
            return EXIT_OK  # witnessed by construction rules
        if not revalidate(system, tp, v, check_prop):
            print("certificate failed re-validation", file=sys.stderr)
            return EXIT_CERTIFICATE
    return EXIT_OK


def cmd_property(args):
    system = _load_system(args.system)
    holds, table = property_level(system, args.property)
    lines = ["system_id,property,eps,best_delta"]
    for eps in sorted(table):
        best = table[eps]
        lines.append("%s,%s,%s,%s" % (system.name, args.property,
                                      format_rational(eps),
                                      format_rational(best) if best else ""))
    lines.append("# property_verdict=%s" % _verdict_str(holds))
    _emit(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_oracle(args):
    system = _load_system(args.system)
    if args.property not in ORACLE_PROPERTIES:
        raise ValueError("oracle supports: %s" % ", ".join(ORACLE_PROPERTIES))
    tp = ThresholdPair(args.eps, args.delta)
    horizon = args.horizon or certified_horizon_hint(system)
    t0 = time.perf_counter()
    res = oracle(system, tp, args.property, horizon)
    ms = 0 if args.no_timing else int((time.perf_counter() - t0) * 1000)
    payload = {"certified": res.certified, "horizon": res.horizon}
    v = res.verdict
    payload["data"] = v.witness if v.holds else v.counterexample
    row = {
        "system_id": system.name, "property": args.property,
        "eps": format_rational(tp.eps), "delta": format_rational(tp.delta),
        "verdict": _verdict_str(v.holds), "witness_or_cex": _payload(payload),
        "states_explored": res.states, "runtime_ms": ms,
    }
    _emit(args.out, ",".join(DECIDE_COLUMNS) + "\n" +
          ",".join(_csv_field(row[c]) for c in DECIDE_COLUMNS) + "\n")
    return EXIT_OK


def cmd_induce(args):
    system = _load_system(args.system)
    kind = args.constructor
    if kind == "hyperspace":
        induced = hyperspace_system(system, cap=args.cap or 12)
    elif kind == "symmetric":
        induced = symmetric_product(system, args.n or 2)
    elif kind == "product-self":
        induced = product_system([system] * (args.n or 2))
    elif kind == "tower":
        tower = standard_inverse_limit(system, args.n or 2)
        induced = tower_limit(tower)
        if induced is None:
            raise ValueError("the tower limit is empty")
    else:
        raise ValueError("unknown constructor %r" % kind)
    _emit(args.out, json.dumps(system_to_json(induced), indent=2) + "\n")
    return EXIT_OK


def cmd_factor_check(args):
    with open(args.factor_map) as fh:
        obj = json.load(fh)
    base = os.path.dirname(os.path.abspath(args.factor_map))
    def resolve(p):
        return p if os.path.isabs(p) else os.path.join(base, p)
    dom = _load_system(resolve(obj["domain"]))
    cod = _load_system(resolve(obj["codomain"]))
    spec = FactorMapSpec(dom, cod, tuple(obj["phi"]))
    require_valid_factor_map(spec)
    props = [args.property] if args.property != "all" else list(PROPERTY_TO_LIFTING)
    cols = DECIDE_COLUMNS + ("implication_domain_lift_to_codomain",
                             "implication_codomain_to_lift")
    lines = [",".join(cols)]
    bad = False
    for prop in props:
        t0 = time.perf_counter()
        rep = verify_preservation(spec, prop)
        ms = 0 if args.no_timing else int((time.perf_counter() - t0) * 1000)
        imp1 = not (rep["domain_has"] and rep["lifting_has"]
                    and not rep["codomain_has"])
        imp2 = not (rep["codomain_has"] and not rep["lifting_has"])
        bad = bad or rep["violations"]
        row = {
            "system_id": "%s->%s" % (dom.name, cod.name),
            "property": prop, "eps": "-", "delta": "-",
            "verdict": _verdict_str(rep["lifting_has"]),
            "witness_or_cex": _payload({
                "variant": rep["lifting_variant"],
                "domain_has": rep["domain_has"],
                "codomain_has": rep["codomain_has"],
                "violations": rep["violations"]}),
            "states_explored": 0, "runtime_ms": ms,
            "implication_domain_lift_to_codomain": str(imp1).lower(),
            "implication_codomain_to_lift": str(imp2).lower(),
        }
        lines.append(",".join(_csv_field(row[c]) for c in cols))
    _emit(args.out, "\n".join(lines) + "\n")
    return EXIT_CERTIFICATE if bad else EXIT_OK


# ---------------------------------------------------------------------------
# experiments


def _experiment_trace(spec):
    lines = ["step,state,defect,set_size"]
    for i, st in enumerate(spec.states):
        defect = spec.defects[i - 1] if i > 0 else Fraction(0)
        size = len(st) if isinstance(st, tuple) else 1
        lines.append("%d,%s,%s,%d" % (i, _csv_field(_payload(st)),
                                      format_rational(defect), size))
    return lines


def run_experiment(example_id, params, resolution=None, emit_plot_data=None,
                   pattern_budget=1000000):
    spec = generate_example(example_id, params)
    ok, problems = validate_pseudo_orbit_spec(spec)
    if not ok:
        raise CertificateFailure("generated spec failed self-validation: %s"
                                 % "; ".join(problems))
    lines = _experiment_trace(spec)
    eps = Fraction(spec.params.get("eps", params.get("eps", Fraction(1, 12))))
    verdict = {}
    if example_id == "tent-F3-shadowing":
        res = symmetric_shadow_run(tent_map(), spec.states, eps,
                                   spec.report.get("n", 3),
                                   pattern_budget=pattern_budget)
        verdict = {"shadowable": res["shadowable"],
                   "certificate": res.get("certificate"),
                   "patterns": res["patterns_total"]}
    elif example_id == "tent-F3-limit":
        warm = int(params.get("warmup", 100))
        window = int(params.get("window", 100))
        stride = int(params.get("stride", window))
        starts = list(range(warm, len(spec.states) - window, stride)) or [0]
        all_empty = True
        details = {}
        for s in starts:
            res = symmetric_shadow_run(tent_map(), spec.states[s:s + window],
                                       eps, 3, pattern_budget=pattern_budget)
            details[s] = not res["shadowable"]
            all_empty = all_empty and not res["shadowable"]
        verdict = {"all_windows_unshadowable": all_empty, "windows": details}
    elif example_id == "cubic-tent-hyper-eventual":
        warm = int(params.get("warmup", 0))
        window = int(params.get("window", min(60, len(spec.states))))
        g = cubic_tent_map(spec.params["resolution"])
        res = symmetric_shadow_run(g, spec.states[warm:warm + window], eps, 3,
                                   pattern_budget=pattern_budget)
        verdict = {"window_start": warm, "window": window,
                   "shadowable": res["shadowable"],
                   "certificate": res.get("certificate"),
                   "interpolation_error": spec.report["interpolation_error"]}
    elif example_id in ("rotation-hyper-orbital", "rotation-product-orbital"):
        res = rotation_defect_search(spec, eps, resolution or Fraction(1, 1000))
        verdict = res
    elif example_id in ("rotation-hyper-orbital-limit",
                        "rotation-product-orbital-limit"):
        warm = int(params.get("warmup", len(spec.states) // 4))
        verdict = rotation_limit_profile(spec, warmup=warm)
    elif example_id == "nonsurjective-product-h":
        verdict = dict(spec.report)
    lines.append("# verdict=%s" % _payload(verdict))
    lines.append("# report=%s" % _payload(spec.report))
    if emit_plot_data:
        with open(emit_plot_data, "w") as fh:
            fh.write("step,defect\n")
            for i, d in enumerate(spec.defects):
                fh.write("%d,%s\n" % (i, format_rational(d)))
    return spec, verdict, "\n".join(lines) + "\n"


def cmd_experiment(args):
    params = {}
    for key in ("eps", "delta"):
        v = getattr(args, key)
        if v is not None:
            params[key] = v
    if args.horizon is not None:
        params["horizon"] = args.horizon
    if args.n is not None:
        params["n"] = args.n
    if args.resolution is not None and args.example in ("cubic-tent-hyper-eventual",):
        params["resolution"] = args.resolution
    spec, verdict, text = run_experiment(
        args.example, params, resolution=args.resolution,
        emit_plot_data=args.emit_plot_data,
        pattern_budget=args.pattern_budget)
    _emit(args.out, text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# batch table


def random_systems(count, max_size, seed):
    """Uniform random maps over the line and discrete metrics; both
    families exercised because the metric geometry changes the delta-graph
    structure."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(2, max_size)
        fmap = tuple(rng.randrange(n) for _ in range(n))
        kind = "line" if rng.random() < 0.5 else "discrete"
        space = line_space(n) if kind == "line" else discrete_space(n)
        out.append(FiniteMetricSystem(space, fmap,
                                      name="rnd%03d-%s-%d" % (i, kind, n)))
    return out


def replicate_table(systems, hyperspace_cap=10, lifting_max_points=3,
                    lifting_properties=None, verify=False):
    """Check every decidable check-mark cell of the preservation table on
    each input system, plus the lifting theorems on the self-product
    projection.  Check-mark cells are implications (property upstairs
    forces property on the induced system); cross cells are existential
    and witnessed by the generated continuous examples instead."""
    if lifting_properties is None:
        lifting_properties = list(PROPERTY_TO_LIFTING)
    rows = []
    violations = []

    def record(system_id, construction, prop, holds):
        rows.append({"system_id": system_id, "construction": construction,
                     "property": prop, "verdict": _verdict_str(holds)})

    for system in systems:
        base = {}
        for p in ALL_EXACT_PROPERTIES:
            if p == "inverse" and not system.is_surjective():
                rows.append({"system_id": system.name, "construction": "base",
                             "property": p, "verdict": "n/a"})
                continue
            base[p] = property_level(system, p)[0]
            record(system.name, "base", p, base[p])
        base.setdefault("inverse", None)
        induced = {}
        if (1 << system.n) - 1 <= hyperspace_cap:
            induced["hyperspace"] = hyperspace_system(system, cap=system.n)
        try:
            induced["F2"] = symmetric_product(system, 2, cap=hyperspace_cap * 4)
        except CapExceeded:
            pass
        if system.n * system.n <= 9:
            induced["product"] = product_system([system, system])
        tower = standard_inverse_limit(system, 2)
        lim = tower_limit(tower)
        ml = all(check_mittag_leffler(tower))
        if lim is not None:
            induced["tower"] = lim
        checks = []
        for cname, isys in induced.items():
            iprops = {p: property_level(isys, p)[0]
                      for p in ("shadowing", "h-shadowing", "eventual", "weak2")}
            for p, holds in iprops.items():
                record(system.name, cname, p, holds)
            checks.append(("weak2-universal", cname, iprops["weak2"]))
            if base["shadowing"]:
                if cname in ("hyperspace", "F2", "product"):
                    checks.append(("shadowing-into-" + cname, cname,
                                   iprops["shadowing"]))
                if cname == "tower" and ml and system.is_surjective():
                    checks.append(("shadowing-into-tower", cname,
                                   iprops["shadowing"]))
            if base["eventual"]:
                if cname == "product" or (cname == "tower" and ml
                                          and system.is_surjective()):
                    checks.append(("eventual-into-" + cname, cname,
                                   iprops["eventual"]))
            if base["h-shadowing"]:
                if cname == "F2":
                    checks.append(("h-shadowing-into-F2", cname,
                                   iprops["h-shadowing"]))
                if cname == "product" and system.is_surjective():
                    checks.append(("h-shadowing-into-product", cname,
                                   iprops["h-shadowing"]))
        for label, cname, ok in checks:
            rows.append({"system_id": system.name, "construction": cname,
                         "property": label, "verdict": "pass" if ok else "FAIL"})
            if not ok:
                violations.append("%s: %s" % (system.name, label))
        if "product" in induced and system.n <= lifting_max_points:
            prod = induced["product"]
            phi = tuple(i // system.n for i in range(prod.n))
            spec = FactorMapSpec(prod, system, phi)
            for prop in lifting_properties:
                rep = verify_preservation(spec, prop)
                ok = not rep["violations"]
                rows.append({"system_id": system.name,
                             "construction": "projection",
                             "property": "lifting-" + prop,
                             "verdict": "pass" if ok else "FAIL"})
                if not ok:
                    violations.extend(rep["violations"])
    summary = {"systems": len(systems), "violations": len(violations)}
    if violations:
        summary["violation_detail"] = "; ".join(violations)
    return BatchReport(rows=rows, summary=summary)


def cmd_table(args):
    systems = [_load_system(p) for p in args.systems]
    if args.random:
        systems += random_systems(args.random, args.max_size, args.seed)
    report = replicate_table(systems, hyperspace_cap=args.cap or 10,
                             lifting_properties=(
                                 None if args.all_lifting else
                                 ["shadowing", "limit", "orbital-limit"]))
    report.config_echo = {"seed": args.seed, "random": args.random,
                          "max_size": args.max_size}
    _emit(args.out, report.to_csv())
    return EXIT_CERTIFICATE if report.summary["violations"] else EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser():
    parser = argparse.ArgumentParser(
        prog="shadowing",
        description="Exact deciders for shadowing variants on finite "
                    "rational metric systems, induced-system constructors, "
                    "and the piecewise-linear counterexample engine.",
        epilog="Verdict CSV columns: %s. Rationals are written p/q. "
               "Exit codes: 0 analysis complete, 2 input error, 3 budget "
               "exhausted, 4 certificate failure."
               % ",".join(DECIDE_COLUMNS))
    parser.add_argument("--version", action="version", version=VERSION)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a system JSON file")
    p.add_argument("system")

    p = sub.add_parser("decide", help="decide one property at fixed thresholds")
    p.add_argument("property",
                   choices=FIXED_THRESHOLD_PROPERTIES +
                   THRESHOLD_FREE_PROPERTIES + BOUNDED_PROPERTIES)
    p.add_argument("system")
    p.add_argument("--eps", type=_rational)
    p.add_argument("--delta", type=_rational)
    p.add_argument("--horizon", type=int)
    p.add_argument("--out")
    p.add_argument("--verify-certificates", action="store_true")
    p.add_argument("--no-timing", action="store_true")

    p = sub.add_parser("property", help="for-all-eps-exists-delta scan")
    p.add_argument("property", choices=ALL_EXACT_PROPERTIES)
    p.add_argument("system")
    p.add_argument("--out")

    p = sub.add_parser("oracle", help="independent bounded-horizon search")
    p.add_argument("property", choices=ORACLE_PROPERTIES)
    p.add_argument("system")
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--delta", type=_rational, required=True)
    p.add_argument("--horizon", type=int)
    p.add_argument("--out")
    p.add_argument("--no-timing", action="store_true")

    p = sub.add_parser("induce", help="emit an induced system as JSON")
    p.add_argument("constructor",
                   choices=("hyperspace", "symmetric", "product-self", "tower"))
    p.add_argument("system")
    p.add_argument("--n", type=int)
    p.add_argument("--cap", type=int)
    p.add_argument("--out")

    p = sub.add_parser("factor-check", help="preservation theorems on a factor map")
    p.add_argument("property", choices=tuple(PROPERTY_TO_LIFTING) + ("all",))
    p.add_argument("factor_map", help='JSON {"domain": file, "codomain": file,'
                                      ' "phi": [indices]}')
    p.add_argument("--out")
    p.add_argument("--no-timing", action="store_true")

    p = sub.add_parser("experiment", help="run a generated counterexample")
    p.add_argument("example", choices=EXAMPLE_IDS)
    p.add_argument("--eps", type=_rational)
    p.add_argument("--delta", type=_rational)
    p.add_argument("--horizon", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--resolution", type=_rational)
    p.add_argument("--pattern-budget", type=int, default=1000000)
    p.add_argument("--emit-plot-data")
    p.add_argument("--out")

    p = sub.add_parser("table", help="replicate the preservation table")
    p.add_argument("systems", nargs="*")
    p.add_argument("--random", type=int, default=0,
                   help="append this many seeded random systems")
    p.add_argument("--max-size", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int)
    p.add_argument("--all-lifting", action="store_true",
                   help="verify every lifting theorem, not just the fast ones")
    p.add_argument("--out")
    return parser


COMMANDS = {
    "validate": cmd_validate,
    "decide": cmd_decide,
    "property": cmd_property,
    "oracle": cmd_oracle,
    "induce": cmd_induce,
    "factor-check": cmd_factor_check,
    "experiment": cmd_experiment,
    "table": cmd_table,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (json.JSONDecodeError, FileNotFoundError, SpaceValidationError,
            RationalFormatError, FactorMapError, ExampleParameterError,
            NotSurjectiveError, KeyError, ValueError) as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except (BudgetError, CapExceeded) as exc:
        print("budget exhausted: %s" % exc, file=sys.stderr)
        return EXIT_BUDGET
    except CertificateFailure as exc:
        print("certificate failure: %s" % exc, file=sys.stderr)
        return EXIT_CERTIFICATE


if __name__ == "__main__":
    sys.exit(main())
