"""Scenario documents: named inputs plus a task list, as one JSON object."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .functions import PiecewiseFunction
from .integrand import NormalIntegrand
from .measure import Measure, MeasureError, SignedMeasure, require_base
from .plq import PLQError, PLQFunction
from .setmap import PiecewiseSetMap, SetMapError

__all__ = ["Scenario", "ScenarioError", "load_scenario"]

VERSION = 1


class ScenarioError(ValueError):
    pass


@dataclass
class Scenario:
    measures: dict = field(default_factory=dict)
    signed_measures: dict = field(default_factory=dict)
    setmaps: dict = field(default_factory=dict)
    plqs: dict = field(default_factory=dict)
    integrands: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)
    tasks: list = field(default_factory=list)

    def _get(self, table: str, name: str):
        pool = getattr(self, table)
        if name not in pool:
            raise ScenarioError(f"unknown {table[:-1].replace('_', ' ')} {name!r}")
        return pool[name]

    def measure(self, name: str) -> Measure:
        return self._get("measures", name)

    def signed_measure(self, name: str) -> SignedMeasure:
        if name in self.signed_measures:
            return self.signed_measures[name]
        if name in self.measures:
            return self.measures[name]
        raise ScenarioError(f"unknown signed measure {name!r}")

    def setmap(self, name: str) -> PiecewiseSetMap:
        return self._get("setmaps", name)

    def plq(self, name: str) -> PLQFunction:
        return self._get("plqs", name)

    def integrand(self, name: str) -> NormalIntegrand:
        return self._get("integrands", name)

    def function(self, name: str) -> PiecewiseFunction:
        return self._get("functions", name)

    @classmethod
    def from_dict(cls, doc: dict) -> "Scenario":
        if not isinstance(doc, dict):
            raise ScenarioError("scenario must be a JSON object")
        if doc.get("version") != VERSION:
            raise ScenarioError(f"unsupported scenario version {doc.get('version')!r} (expected {VERSION})")
        sc = cls()
        try:
            for name, m in doc.get("measures", {}).items():
                sc.measures[name] = Measure.from_json(m)
                require_base(sc.measures[name])
            for name, m in doc.get("signed_measures", {}).items():
                sc.signed_measures[name] = SignedMeasure.from_json(m)
            for name, g in doc.get("setmaps", {}).items():
                sc.setmaps[name] = PiecewiseSetMap.from_json(g)
            for name, f in doc.get("plqs", {}).items():
                sc.plqs[name] = PLQFunction.from_json(f)
            for name, h in doc.get("integrands", {}).items():
                sc.integrands[name] = NormalIntegrand.from_json(h, sc.plqs)
            for name, y in doc.get("functions", {}).items():
                sc.functions[name] = PiecewiseFunction.from_json(y)
        except (MeasureError, SetMapError, PLQError, KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"{type(exc).__name__}: {exc}") from exc
        tasks = doc.get("tasks", [])
        if not isinstance(tasks, list) or any(not isinstance(t, dict) or "command" not in t for t in tasks):
            raise ScenarioError("tasks must be a list of objects with a 'command' field")
        sc.tasks = tasks
        return sc


def load_scenario(path) -> Scenario:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario {path} is not valid JSON: {exc}") from exc
    return Scenario.from_dict(doc)
