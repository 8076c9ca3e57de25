"""Command-line front end: ``varsel [-s SCENARIO] COMMAND [options]``.

Every command prints one JSON report with the keys ``task``, ``inputs``,
``verdicts``, ``witnesses``, ``values`` and ``paper_anchor`` (the name of the
result the verdict rests on).  Exit status: 0 computed, 1 scenario or
precondition error, 2 internal inconsistency (oracle mismatch, failed
expectation, inconsistent duality report).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .duality import HypothesisError, bv_duality, duality_report, int_dom_Ih_membership
from .integrand import eval_Ih
from .intervals import hausdorff
from .measure import MeasureError
from .oracle import oracle_limits, oracle_mli
from .plq import PLQError
from .scenario import Scenario, ScenarioError, load_scenario
from .setmap import (
    SetMapError,
    check_essential_selection,
    continuous_selection,
    essential_selection_counterexample,
    inner_limit,
    is_fully_lsc,
    is_inner_semicontinuous,
    is_outer_mu_regular,
    is_outer_semicontinuous,
    michael_density,
    michael_representation,
    mu_inner_limit,
    outer_limit,
)

DEFAULT_SCENARIO = Path(__file__).with_name("data") / "golden.json"

ANCHORS = {
    "limits": "set-valued inner and outer limits; inner limit in measure",
    "check:isc": "inner semicontinuity (preimages of open sets are open)",
    "check:osc": "outer semicontinuity (outer limit inside the value)",
    "check:fully-lsc": "full lower semicontinuity",
    "check:outer-regular": "outer regularity in measure (essential selections are selections)",
    "selection": "continuous selections of inner semicontinuous convex-valued maps",
    "selection:michael": "Michael representation (dense family of continuous selections)",
    "selection:counterexample": "necessity of outer regularity in measure",
    "conjugate": "Legendre-Fenchel conjugate",
    "recession": "recession function (support function of the closed domain)",
    "eval-ih": "integral functional of a normal integrand",
    "membership": "interior of the domain of the integral functional (sup norm)",
    "duality": "conjugate of an integral functional on continuous functions",
    "bv-duality": "conjugate of an integral functional on left-continuous BV functions",
    "oracle": "definitional limit formulas on sampled grids",
}


class Inconsistency(RuntimeError):
    pass


def _num(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _top(args: dict) -> str:
    return args.get("topology", "standard")


def _ts(gamma, args):
    t = args.get("t")
    if t is None:
        return list(gamma.grid)
    return [float(v) for v in (t if isinstance(t, list) else [t])]


def cmd_limits(sc: Scenario, args: dict) -> dict:
    gamma = sc.setmap(args["map"])
    top = _top(args)
    mu = sc.measure(args["measure"]) if args.get("measure") else None
    rows = []
    for t in _ts(gamma, args):
        row = {"t": t, "li": inner_limit(gamma, t, top).to_json(), "ls": outer_limit(gamma, t, top).to_json()}
        if mu is not None:
            row["mli"] = mu_inner_limit(gamma, t, mu, top).to_json()
        rows.append(row)
    return {"values": {"limits": rows}, "anchor": ANCHORS["limits"]}


def cmd_check(sc: Scenario, args: dict) -> dict:
    gamma = sc.setmap(args["map"])
    kind = args["kind"]
    top = _top(args)
    if kind == "isc":
        rep = is_inner_semicontinuous(gamma, top)
    elif kind == "osc":
        rep = is_outer_semicontinuous(gamma, top)
    elif kind == "fully-lsc":
        rep = is_fully_lsc(gamma)
    elif kind == "outer-regular":
        if not args.get("measure"):
            raise ScenarioError("outer-regular check needs --measure")
        rep = is_outer_mu_regular(gamma, sc.measure(args["measure"]), top)
    else:
        raise ScenarioError(f"unknown check kind {kind!r}")
    return {
        "verdicts": {"verdict": rep.verdict, "property": kind},
        "witnesses": [v.to_json() for v in rep.violations],
        "anchor": ANCHORS[f"check:{kind}"],
    }


def cmd_selection(sc: Scenario, args: dict) -> dict:
    gamma = sc.setmap(args["map"])
    if args.get("michael") is not None:
        sels = michael_representation(gamma, int(args["michael"]))
        return {
            "values": {"selections": [s.to_json() for s in sels], "density": michael_density(gamma, sels) if sels else None},
            "anchor": ANCHORS["selection:michael"],
        }
    if args.get("counterexample"):
        if not args.get("measure"):
            raise ScenarioError("counterexample needs --measure")
        mu = sc.measure(args["measure"])
        y = essential_selection_counterexample(gamma, mu, _top(args))
        verdicts = {"counterexample_exists": y is not None}
        values = {}
        if y is not None:
            chk = check_essential_selection(gamma, y, mu)
            verdicts["classification"] = chk.kind
            values = {"selection": y.to_json(), "violation_set": chk.to_json()}
        return {"verdicts": verdicts, "values": values, "anchor": ANCHORS["selection:counterexample"]}
    anchor = args.get("anchor")
    if anchor is not None:
        anchor = tuple(float(v) for v in anchor)
    y = continuous_selection(gamma, anchor)
    verdicts = {}
    if args.get("measure"):
        verdicts["classification"] = check_essential_selection(gamma, y, sc.measure(args["measure"])).kind
    else:
        from .measure import lebesgue

        verdicts["classification"] = check_essential_selection(gamma, y, lebesgue()).kind
    return {"verdicts": verdicts, "values": {"selection": y.to_json()}, "anchor": ANCHORS["selection"]}


def _plq_arg(sc: Scenario, args: dict):
    if args.get("plq"):
        return sc.plq(args["plq"])
    if args.get("integrand") and args.get("t") is not None:
        return sc.integrand(args["integrand"]).at(float(args["t"]))
    raise ScenarioError("need --plq NAME or --integrand NAME --t T")


def cmd_conjugate(sc: Scenario, args: dict) -> dict:
    f = _plq_arg(sc, args)
    return {"values": {"result": f.conjugate().to_json()}, "anchor": ANCHORS["conjugate"]}


def cmd_recession(sc: Scenario, args: dict) -> dict:
    f = _plq_arg(sc, args)
    if args.get("of_conjugate"):
        f = f.conjugate()
    return {"values": {"result": f.recession().to_json()}, "anchor": ANCHORS["recession"]}


def cmd_eval_ih(sc: Scenario, args: dict) -> dict:
    val = eval_Ih(sc.integrand(args["integrand"]), sc.function(args["function"]), sc.measure(args["measure"]))
    return {"values": {"I_h": _num(val)}, "anchor": ANCHORS["eval-ih"]}


def cmd_membership(sc: Scenario, args: dict) -> dict:
    m = int_dom_Ih_membership(sc.integrand(args["integrand"]), sc.function(args["function"]), sc.measure(args["measure"]))
    js = m.to_json()
    return {
        "verdicts": {k: js[k] for k in ("inside", "pointwise_inside", "equivalence_holds")},
        "values": {"radius": js["radius"], "pointwise_radius": js["pointwise_radius"]},
        "anchor": ANCHORS["membership"],
    }


def _duality(sc: Scenario, args: dict, fn, anchor: str) -> dict:
    h = sc.integrand(args["integrand"])
    theta = sc.signed_measure(args["theta"])
    mu = sc.measure(args["measure"])
    rep = fn(h, theta, mu, int(args.get("levels", 8)))
    js = rep.to_json()
    values = {k: js[k] for k in ("J", "estimates", "gap") if k in js}
    if "exact_sup" in js:
        values["exact_sup"] = js["exact_sup"]
    out = {
        "verdicts": {"regular": rep.regularity_verdict, "consistent": rep.consistent, "certified_gap": rep.certified_gap},
        "witnesses": [js["witness"]] if "witness" in js else [],
        "values": values,
        "anchor": anchor,
    }
    if not rep.consistent:
        out["inconsistent"] = "duality report is inconsistent with the regularity verdict"
    return out


def cmd_duality(sc, args):
    return _duality(sc, args, duality_report, ANCHORS["duality"])


def cmd_bv_duality(sc, args):
    return _duality(sc, args, bv_duality, ANCHORS["bv-duality"])


def cmd_oracle(sc: Scenario, args: dict) -> dict:
    gamma = sc.setmap(args["map"])
    kind = args.get("kind", "li")
    top = _top(args)
    step = float(args.get("step", 2.0**-10))
    mu = sc.measure(args["measure"]) if args.get("measure") else None
    if kind == "mli" and mu is None:
        raise ScenarioError("oracle mli needs --measure")
    rows, worst = [], 0.0
    for t in _ts(gamma, args):
        if kind == "mli":
            got = oracle_mli(gamma, t, mu, top, step, args.get("depth"))
        else:
            got = oracle_limits(gamma, t, kind, top, step)
        row = {"t": t, "set": got.to_json()}
        if args.get("compare"):
            exact = {
                "li": lambda: inner_limit(gamma, t, top),
                "ls": lambda: outer_limit(gamma, t, top),
                "mli": lambda: mu_inner_limit(gamma, t, mu, top),
            }[kind]()
            d = hausdorff(exact, got)
            row["exact"] = exact.to_json()
            row["hausdorff"] = _num(d)
            worst = max(worst, d)
        rows.append(row)
    out = {"values": {"step": step, "sets": rows}, "anchor": ANCHORS["oracle"]}
    if args.get("compare"):
        ok = worst <= 2 * step
        out["verdicts"] = {"within_bound": ok}
        out["values"]["max_hausdorff"] = _num(worst)
        if not ok:
            out["inconsistent"] = f"oracle and exact limits differ by {worst} > 2*step"
    return out


COMMANDS = {
    "limits": cmd_limits,
    "check": cmd_check,
    "selection": cmd_selection,
    "conjugate": cmd_conjugate,
    "recession": cmd_recession,
    "eval-ih": cmd_eval_ih,
    "membership": cmd_membership,
    "duality": cmd_duality,
    "bv-duality": cmd_bv_duality,
    "oracle": cmd_oracle,
}

KNOWN_ERRORS = (ScenarioError, SetMapError, MeasureError, PLQError, HypothesisError, KeyError, ValueError)


def execute(sc: Scenario, command: str, args: dict) -> tuple[dict, bool]:
    """Run one command; returns ``(report, consistent)``."""
    if command not in COMMANDS:
        raise ScenarioError(f"unknown command {command!r}")
    body = COMMANDS[command](sc, args)
    inputs = {k: v for k, v in sorted(args.items()) if k not in ("command", "expect") and v is not None and v is not False}
    report = {
        "task": command,
        "inputs": inputs,
        "verdicts": body.get("verdicts", {}),
        "witnesses": body.get("witnesses", []),
        "values": body.get("values", {}),
        "paper_anchor": body["anchor"],
    }
    problem = body.get("inconsistent")
    if problem:
        report["problem"] = problem
    return report, problem is None


def _lookup(doc, path: str):
    cur = doc
    for part in path.split("."):
        if isinstance(cur, list):
            cur = cur[int(part)]
        elif isinstance(cur, dict):
            if part not in cur:
                raise KeyError(path)
            cur = cur[part]
        else:
            raise KeyError(path)
    return cur


def check_expectations(report: dict, expect: dict) -> list[str]:
    """Failed expectation messages (empty when everything matches)."""
    failures = []
    for path, want in expect.items():
        try:
            got = _lookup(report, path)
        except (KeyError, IndexError, ValueError):
            failures.append(f"{path}: missing")
            continue
        if isinstance(want, dict) and "approx" in want:
            ok = isinstance(got, (int, float)) and abs(got - want["approx"]) <= want.get("tol", 1e-9)
        elif isinstance(want, dict) and ("min" in want or "max" in want):
            ok = isinstance(got, (int, float)) and want.get("min", -math.inf) <= got <= want.get("max", math.inf)
        else:
            ok = got == want
        if not ok:
            failures.append(f"{path}: expected {want!r}, got {got!r}")
    return failures


def run_tasks(sc: Scenario) -> tuple[list[dict], bool]:
    reports, ok = [], True
    for i, task in enumerate(sc.tasks):
        args = dict(task)
        command = args.pop("command")
        report, consistent = execute(sc, command, args)
        report["index"] = i
        if "expect" in task:
            fails = check_expectations(report, task["expect"])
            report["expectations"] = {"passed": not fails, "failures": fails}
            consistent = consistent and not fails
        ok = ok and consistent
        reports.append(report)
    return reports, ok


def _pair(text: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected t,x")
    return [float(parts[0]), float(parts[1])]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="varsel", description=__doc__.splitlines()[0])
    p.add_argument("-s", "--scenario", default=str(DEFAULT_SCENARIO), help="scenario JSON (default: bundled corpus)")
    p.add_argument("-o", "--out", help="also write the report to this file")
    sub = p.add_subparsers(dest="command", required=True)

    def topo(q):
        q.add_argument("--topology", choices=["standard", "left"], default="standard")

    q = sub.add_parser("limits", help="li / ls / mli at t or at every breakpoint")
    q.add_argument("--map", required=True)
    q.add_argument("--t", type=float)
    q.add_argument("--measure")
    topo(q)

    q = sub.add_parser("check", help="regularity checks")
    q.add_argument("--map", required=True)
    q.add_argument("--kind", required=True, choices=["isc", "osc", "fully-lsc", "outer-regular"])
    q.add_argument("--measure")
    topo(q)

    q = sub.add_parser("selection", help="continuous selections")
    q.add_argument("--map", required=True)
    g = q.add_mutually_exclusive_group()
    g.add_argument("--anchor", type=_pair, help="t,x")
    g.add_argument("--michael", type=int, metavar="N")
    g.add_argument("--counterexample", action="store_true")
    q.add_argument("--measure")
    topo(q)

    for name in ("conjugate", "recession"):
        q = sub.add_parser(name)
        q.add_argument("--plq")
        q.add_argument("--integrand")
        q.add_argument("--t", type=float)
        if name == "recession":
            q.add_argument("--of-conjugate", dest="of_conjugate", action="store_true")

    for name in ("eval-ih", "membership"):
        q = sub.add_parser(name)
        q.add_argument("--integrand", required=True)
        q.add_argument("--function", required=True)
        q.add_argument("--measure", required=True)

    for name in ("duality", "bv-duality"):
        q = sub.add_parser(name)
        q.add_argument("--integrand", required=True)
        q.add_argument("--theta", required=True)
        q.add_argument("--measure", required=True)
        q.add_argument("--levels", type=int, default=8)

    q = sub.add_parser("oracle", help="sampled limit formulas")
    q.add_argument("--map", required=True)
    q.add_argument("--t", type=float)
    q.add_argument("--kind", choices=["li", "ls", "mli"], default="li")
    q.add_argument("--measure")
    q.add_argument("--step", type=float, default=2.0**-10)
    q.add_argument("--depth", type=int)
    q.add_argument("--compare", action="store_true")
    topo(q)

    sub.add_parser("run", help="run every task in the scenario and check expectations")
    return p


def _emit(doc, out):
    text = json.dumps(doc, sort_keys=True, indent=1)
    print(text)
    if out:
        Path(out).write_text(text + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    args = {k: v for k, v in vars(ns).items() if k not in ("scenario", "out", "command")}
    try:
        sc = load_scenario(ns.scenario)
        if ns.command == "run":
            reports, ok = run_tasks(sc)
            _emit(reports, ns.out)
        else:
            report, ok = execute(sc, ns.command, args)
            _emit(report, ns.out)
    except KNOWN_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        print(f"varsel: error: {msg}", file=sys.stderr)
        return 1
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
