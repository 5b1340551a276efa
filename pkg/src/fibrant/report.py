"""Axiom reports and counterexample serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .modules import Module, ModuleMorphism


def _scalar(x):
    if isinstance(x, Fraction):
        return str(x)
    return int(x)


def serialize_matrix(m) -> list:
    return [[_scalar(x) for x in row] for row in m.data]


def serialize_module(m: Module) -> dict:
    return {
        "name": m.name,
        "dims": list(m.dims),
        "arrows": {a.label: serialize_matrix(mat) for a, mat in zip(m.algebra.arrows, m.maps)},
    }


def serialize_morphism(f: ModuleMorphism) -> dict:
    return {
        "source": serialize_module(f.source),
        "target": serialize_module(f.target),
        "maps": [serialize_matrix(m) for m in f.maps],
    }


def serialize(item) -> object:
    if isinstance(item, ModuleMorphism):
        return serialize_morphism(item)
    if isinstance(item, Module):
        return serialize_module(item)
    if isinstance(item, dict):
        return {k: serialize(v) for k, v in item.items()}
    if isinstance(item, (list, tuple)):
        return [serialize(v) for v in item]
    if isinstance(item, Fraction):
        return str(item)
    return item


@dataclass
class AxiomReport:
    axiom: str
    checked: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    max_recorded: int = 3

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def tick(self, n: int = 1) -> None:
        self.checked += n

    def fail(self, **record) -> None:
        self.failures.append(record)

    def text(self) -> str:
        lines = [f"AXIOM {self.axiom} {self.status} checked={self.checked} failures={len(self.failures)}"]
        for note in self.notes:
            lines.append(f"  note: {note}")
        for rec in self.failures[:self.max_recorded]:
            lines.append("```counterexample")
            lines.append(json.dumps(serialize(rec), sort_keys=True))
            lines.append("```")
        return "\n".join(lines)

    def __str__(self):
        return self.text()


def render(reports) -> str:
    return "\n".join(r.text() for r in reports)


def all_passed(reports) -> bool:
    return all(r.passed for r in reports)
