"""Builders for the bundled scenario corpus (``data/golden.json``).

Run ``python3 -m varsel.golden`` to regenerate the file; the test-suite
checks that the file and the builders agree.
"""

from __future__ import annotations

import json
from pathlib import Path

from .functions import PiecewiseFunction
from .integrand import NormalIntegrand
from .intervals import IntervalUnion
from .measure import Measure, SignedMeasure
from .oracle import staircase_truncation
from .plq import PLQFunction
from .setmap import Component, PiecewiseSetMap

PATH = Path(__file__).with_name("data") / "golden.json"
INF = float("inf")


def shrink_map(r1: float = 1.0, r2: float = 2.0, s: float = 0.5) -> PiecewiseSetMap:
    """Closed ball of radius ``r2`` everywhere except radius ``r1`` at ``s``."""
    return PiecewiseSetMap.from_steps([0.0, s, 1.0], [(-r2, r2)] * 2, [(-r2, r2), (-r1, r1), (-r2, r2)])


def measures() -> dict:
    return {
        "lebesgue": Measure([0, 1], [1]),
        "lebPlusAtom": Measure([0, 1], [1], [(0.5, 1)]),
        "lebPlusAtom03": Measure([0, 1], [1], [(0.3, 1)]),
        "lebPlusHeavyAtom": Measure([0, 1], [1], [(0.5, 2)]),
        "twoDensities": Measure([0, 0.5, 1], [1, 2], [(0.7, 0.5)]),
    }


def signed_measures() -> dict:
    return {
        "zero": SignedMeasure([0, 1], [0]),
        "unitDensity": SignedMeasure([0, 1], [1]),
        "dirac05": SignedMeasure([0, 1], [0], [(0.5, 1)]),
        "dirac03": SignedMeasure([0, 1], [0], [(0.3, 1)]),
        "mixed": SignedMeasure([0, 0.5, 1], [2, -1], [(0.25, 1), (0.7, -0.3)]),
    }


def setmaps() -> dict:
    out = {
        "shrinkMap": shrink_map(),
        "solidBall": PiecewiseSetMap.constant(-2, 2),
        "grow": PiecewiseSetMap.from_steps([0, 0.5, 1], [(-1, 1)] * 2, [(-1, 1), (-2, 2), (-1, 1)]),
        "jump": PiecewiseSetMap.from_steps([0, 0.5, 1], [(0, 1), (2, 3)], [(0, 1), (0, 3), (2, 3)]),
        "jumpOsc": PiecewiseSetMap.from_steps([0, 0.5, 1], [(0, 1), (2, 3)], [(0, 1), (2, 3), (2, 3)]),
        "unitBox": PiecewiseSetMap.constant(0, 1),
        "tube": PiecewiseSetMap((0.0, 1.0), [[Component(0.0, 1.0, 1.0, 1.0)]]),
        "slopedPair": PiecewiseSetMap(
            (0.0, 0.5, 1.0),
            [[Component(0.0, 0.5, 1.0, 0.5)], [Component(0.5, -0.5, 1.5, -0.5)]],
        ),
        "halfLine": PiecewiseSetMap((0.0, 1.0), [[Component(0.0, 0.0, INF, 0.0)]]),
    }
    for n in (6, 8, 10):
        out[f"staircase{n}"] = staircase_truncation(n)
    return out


def plqs() -> dict:
    return {
        "quad": PLQFunction.quadratic(),
        "ind1": PLQFunction.indicator(-1.0, 1.0),
        "ind2": PLQFunction.indicator(-2.0, 2.0),
        "abs": PLQFunction.support(-1.0, 1.0),
        "ind1PlusSquare": PLQFunction((-1.0, 1.0), [(2.0, 0.0, 0.0)]),
        "huberish": PLQFunction((-INF, -1.0, 1.0, INF), [(0.0, -1.0, -0.5), (1.0, 0.0, 0.0), (0.0, 1.0, -0.5)]),
    }


def integrands() -> dict:
    p = plqs()
    q, d1, d2 = p["quad"], p["ind1"], p["ind2"]
    f = PLQFunction((-1.0, 1.0), [(1.0, 0.0, 0.0)])
    g = PLQFunction((-2.0, 0.0, 2.0), [(0.0, -1.0, 0.0), (2.0, 0.0, 0.0)])
    return {
        "regularDom": NormalIntegrand.constant(d2),
        "shrinkDom": NormalIntegrand([0, 0.5, 1], [d2, d2], [d2, d1, d2]),
        "quadratic": NormalIntegrand.constant(q),
        "ind1": NormalIntegrand.constant(d1),
        "mixedPLQ": NormalIntegrand([0, 0.4, 1], [f, g], [f, f, g]),
        "bvLeftIrregular": NormalIntegrand([0, 0.3, 1], [d2, d1], [d2, d1, d1]),
        "bvLeftRegular": NormalIntegrand([0, 0.3, 1], [d1, d2], [d1, d1, d2]),
    }


def functions() -> dict:
    return {
        "zero": PiecewiseFunction.constant(0.0),
        "two": PiecewiseFunction.constant(2.0),
        "onePointFive": PiecewiseFunction.constant(1.5),
        "identity": PiecewiseFunction([0, 1], [0, 1]),
        "double": PiecewiseFunction([0, 1], [0, 2]),
    }


def _approx(x, tol=1e-9):
    return {"approx": x, "tol": tol}


def tasks() -> list:
    return [
        # limit operators
        {"command": "limits", "map": "jump", "t": 0.5, "expect": {"values.limits.0.li": [], "values.limits.0.ls": [[0.0, 3.0]]}},
        {"command": "limits", "map": "jump", "t": 0.5, "topology": "left", "expect": {"values.limits.0.li": [[0.0, 1.0]]}},
        {"command": "limits", "map": "shrinkMap", "t": 0.5, "measure": "lebesgue", "expect": {"values.limits.0.mli": [[-2.0, 2.0]]}},
        {"command": "limits", "map": "shrinkMap", "t": 0.5, "measure": "lebPlusAtom", "expect": {"values.limits.0.mli": [[-1.0, 1.0]]}},
        # regularity of the two-radius example
        {"command": "check", "map": "shrinkMap", "kind": "isc", "expect": {"verdicts.verdict": True}},
        {"command": "check", "map": "shrinkMap", "kind": "outer-regular", "measure": "lebPlusAtom", "expect": {"verdicts.verdict": True}},
        {"command": "check", "map": "shrinkMap", "kind": "outer-regular", "measure": "lebesgue",
         "expect": {"verdicts.verdict": False, "witnesses.0.t": 0.5, "witnesses.0.x": 2.0}},
        {"command": "check", "map": "shrinkMap", "kind": "fully-lsc", "expect": {"verdicts.verdict": False, "witnesses.0.x": 1.5}},
        {"command": "check", "map": "solidBall", "kind": "fully-lsc", "expect": {"verdicts.verdict": True}},
        {"command": "check", "map": "grow", "kind": "isc", "expect": {"verdicts.verdict": False, "witnesses.0.x": 2.0}},
        {"command": "check", "map": "jumpOsc", "kind": "osc", "expect": {"verdicts.verdict": False, "witnesses.0.t": 0.5}},
        {"command": "check", "map": "jump", "kind": "osc", "expect": {"verdicts.verdict": True}},
        # selections
        {"command": "selection", "map": "tube", "expect": {"values.selection.values": [0.5, 1.5]}},
        {"command": "selection", "map": "shrinkMap", "anchor": [0.5, 1.0], "expect": {"verdicts.classification": "selection"}},
        {"command": "selection", "map": "shrinkMap", "counterexample": True, "measure": "lebesgue",
         "expect": {"verdicts.classification": "essential_only"}},
        {"command": "selection", "map": "shrinkMap", "counterexample": True, "measure": "lebPlusAtom",
         "expect": {"verdicts.counterexample_exists": False}},
        {"command": "selection", "map": "unitBox", "michael": 3, "expect": {"values.density": _approx(0.25)}},
        # PLQ transforms
        {"command": "conjugate", "plq": "quad", "expect": {"values.result": plqs()["quad"].to_json()}},
        {"command": "conjugate", "plq": "ind1", "expect": {"values.result": plqs()["abs"].to_json()}},
        {"command": "conjugate", "plq": "abs", "expect": {"values.result": plqs()["ind1"].to_json()}},
        {"command": "recession", "plq": "abs", "expect": {"values.result": plqs()["abs"].to_json()}},
        {"command": "recession", "plq": "quad", "expect": {"values.result": PLQFunction.indicator(0.0, 0.0).to_json()}},
        {"command": "recession", "plq": "ind1PlusSquare", "of_conjugate": True, "expect": {"values.result": plqs()["abs"].to_json()}},
        # integral functional
        {"command": "eval-ih", "integrand": "quadratic", "function": "identity", "measure": "lebesgue", "expect": {"values.I_h": _approx(1 / 6)}},
        {"command": "eval-ih", "integrand": "quadratic", "function": "identity", "measure": "lebPlusHeavyAtom", "expect": {"values.I_h": _approx(5 / 12)}},
        {"command": "eval-ih", "integrand": "ind1", "function": "double", "measure": "lebesgue", "expect": {"values.I_h": "inf"}},
        {"command": "membership", "integrand": "shrinkDom", "function": "onePointFive", "measure": "lebesgue",
         "expect": {"verdicts.inside": True, "values.radius": _approx(0.5), "verdicts.pointwise_inside": False}},
        # duality over continuous functions
        {"command": "duality", "integrand": "regularDom", "theta": "dirac05", "measure": "lebesgue", "levels": 8,
         "expect": {"values.J": _approx(2.0), "values.gap": _approx(0.0, 1e-3), "verdicts.regular": True, "verdicts.consistent": True}},
        {"command": "duality", "integrand": "shrinkDom", "theta": "dirac05", "measure": "lebesgue", "levels": 8,
         "expect": {"values.J": _approx(1.0), "values.estimates.-1": {"min": 1.99}, "verdicts.regular": False, "verdicts.certified_gap": True}},
        {"command": "duality", "integrand": "quadratic", "theta": "unitDensity", "measure": "lebesgue", "levels": 8,
         "expect": {"values.J": _approx(0.5), "values.gap": _approx(0.0, 1e-6)}},
        {"command": "duality", "integrand": "regularDom", "theta": "zero", "measure": "lebesgue", "levels": 3,
         "expect": {"values.J": _approx(0.0), "values.estimates.-1": _approx(0.0)}},
        {"command": "duality", "integrand": "mixedPLQ", "theta": "mixed", "measure": "twoDensities", "levels": 8,
         "expect": {"values.J": _approx(1.7), "values.gap": _approx(0.0, 1e-3), "verdicts.regular": True}},
        # duality over BV
        {"command": "bv-duality", "integrand": "bvLeftIrregular", "theta": "dirac03", "measure": "lebesgue", "levels": 8,
         "expect": {"values.J": _approx(1.0), "values.exact_sup": _approx(2.0), "values.estimates.-1": {"min": 1.99},
                    "verdicts.regular": False, "verdicts.consistent": True}},
        {"command": "bv-duality", "integrand": "bvLeftRegular", "theta": "dirac03", "measure": "lebesgue", "levels": 8,
         "expect": {"values.J": _approx(1.0), "values.exact_sup": _approx(1.0), "values.estimates.-1": _approx(1.0, 1e-3),
                    "verdicts.regular": True, "verdicts.consistent": True}},
        {"command": "bv-duality", "integrand": "mixedPLQ", "theta": "mixed", "measure": "twoDensities", "levels": 8,
         "expect": {"verdicts.consistent": True}},
        {"command": "bv-duality", "integrand": "regularDom", "theta": "zero", "measure": "lebesgue", "levels": 2,
         "expect": {"values.J": _approx(0.0), "values.exact_sup": _approx(0.0)}},
        # oracle cross-checks
        {"command": "oracle", "map": "jump", "t": 0.5, "kind": "li", "compare": True, "expect": {"verdicts.within_bound": True}},
        {"command": "oracle", "map": "shrinkMap", "t": 0.5, "kind": "mli", "measure": "lebesgue", "compare": True,
         "expect": {"verdicts.within_bound": True}},
        {"command": "oracle", "map": "slopedPair", "kind": "ls", "compare": True, "step": 2.0**-10, "expect": {"verdicts.within_bound": True}},
        {"command": "oracle", "map": "staircase6", "t": 0.0, "kind": "mli", "measure": "lebesgue", "step": 2.0**-12, "compare": True,
         "expect": {"verdicts.within_bound": True}},
    ]


def build() -> dict:
    return {
        "version": 1,
        "measures": {k: v.to_json() for k, v in measures().items()},
        "signed_measures": {k: v.to_json() for k, v in signed_measures().items()},
        "setmaps": {k: v.to_json() for k, v in setmaps().items()},
        "plqs": {k: v.to_json() for k, v in plqs().items()},
        "integrands": {k: v.to_json() for k, v in integrands().items()},
        "functions": {k: v.to_json() for k, v in functions().items()},
        "tasks": tasks(),
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def write(path: Path = PATH) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(build()))


if __name__ == "__main__":
    write()
    print(f"wrote {PATH}")
