"""Additive quotients A/add(u) and the homotopy category."""

from __future__ import annotations

from dataclasses import dataclass

from .additive import factor_ideal_basis
from .fwfs import ModelStructure, Sample
from .matrix import solve_vectors
from .modules import Module, ModuleMorphism, from_zero, hom_basis, identity
from .report import AxiomReport


@dataclass(frozen=True)
class QuotientHom:
    ambient_basis: tuple
    ideal_basis: tuple
    quotient_dim: int
    representatives: tuple = ()


def quotient_hom(x: Module, y: Module, u: Module) -> QuotientHom:
    ambient = hom_basis(x, y)
    ideal = factor_ideal_basis(x, u, y)
    reps = []
    if ambient and len(ideal) < len(ambient):
        from .matrix import independent_subset
        vecs = [h.flat() for h in ideal] + [h.flat() for h in ambient]
        idx = independent_subset(x.algebra.field, vecs, len(vecs[0]))
        reps = [ambient[i - len(ideal)] for i in idx if i >= len(ideal)]
    return QuotientHom(tuple(ambient), tuple(ideal), len(ambient) - len(ideal), tuple(reps))


def _one_sided(field, candidates, ideal, compose, target) -> bool:
    vecs = [compose(h).flat() for h in candidates] + [h.flat() for h in ideal]
    return solve_vectors(field, vecs, target.flat()) is not None


def quotient_iso_check(f: ModuleMorphism, u: Module) -> bool:
    """Whether f becomes invertible modulo maps factoring through add(u)."""
    x, y = f.source, f.target
    back = hom_basis(y, x)
    fld = f.field
    left = _one_sided(fld, back, factor_ideal_basis(x, u, x), lambda g: g @ f, identity(x))
    if not left:
        return False
    return _one_sided(fld, back, factor_ideal_basis(y, u, y), lambda g: f @ g, identity(y))


def cofibrant_replacement(ms: ModelStructure, x: Module) -> ModuleMorphism:
    """q: Qx -> x in TFib with Qx cofibrant, from factoring 0 -> x."""
    if ms.cofibrant.contains(x):
        return identity(x)
    j, q = ms.factor_cofib_tfib(from_zero(x))
    return q


def ho_hom(ms: ModelStructure, x: Module, y: Module) -> QuotientHom:
    if ms.kind != "fibrant":
        raise ValueError("homotopy hom is computed for fibrant structures")
    qx = cofibrant_replacement(ms, x).source
    qy = cofibrant_replacement(ms, y).source
    return quotient_hom(qx, qy, ms.tc_generator)


def check_weq_quotient_criterion(ms: ModelStructure, sample: Sample) -> AxiomReport:
    """Weq agrees with invertibility in the quotient by the trivially
    cofibrant-fibrant objects, for maps between cofibrant-fibrant objects."""
    rep = AxiomReport("weq-is-quotient-iso")
    u = ms.tc_generator
    for f in sample.morphisms:
        if not (ms.cofibrant.contains(f.source) and ms.cofibrant.contains(f.target)
                and ms.fibrant.contains(f.source) and ms.fibrant.contains(f.target)):
            continue
        rep.tick()
        w = ms.weq.decide(f)
        q = quotient_iso_check(f, u)
        if w != q:
            rep.fail(morphism=f, weq=w, quotient_iso=q)
    return rep
