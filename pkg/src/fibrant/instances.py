"""Concrete structures on mod A: W-structures, tilting ω-structures, duals."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, partial
from typing import Callable, Optional

from .additive import (ObjectClass, _factor_through_epi, add_membership, co_hom_epic_check,
                       coresolution_membership, is_split_epi, left_approximation)
from .algebra import AlgebraError, AlgebraPresentation
from .fwfs import CWFS, FWFS, ModelStructure, MorphismClass, Sample
from .homology import (ext_dim, injective_indecomposables, projective_cover,
                       projective_indecomposables, regular_module, simple_module)
from .matrix import independent_subset
from .modules import (Module, ModuleMorphism, cokernel, column_morphism, direct_sum, dualize,
                      hom_basis, kernel, linear_combination, power, pushout, row_morphism,
                      zero_module, zero_morphism)


class InstanceError(ValueError):
    pass


def _sum_of(mods, algebra):
    mods = [m for m in mods if not m.is_zero()]
    if not mods:
        return zero_module(algebra)
    return direct_sum(mods, algebra)[0]


# --------------------------------------------------------------------------
# W-structures


@lru_cache(maxsize=100_000)
def _w_cofib(m, f):
    return co_hom_epic_check(f, m)


@lru_cache(maxsize=100_000)
def _w_tfib(m, f):
    return f.is_epi() and add_membership(kernel(f)[0], m) and is_split_epi(f)


@lru_cache(maxsize=100_000)
def _w_factor(m, f):
    s = left_approximation(f.source, m, reduced=True)
    tgt, _, projs = direct_sum([f.target, s.target])
    return column_morphism([f, s], tgt), projs[0]


def build_w_structure(a: AlgebraPresentation, m: Module, name: str = "") -> FWFS:
    """CoFib = Hom(-, add m)-epic, TFib = split epis with kernel in add m."""
    if m.algebra != a:
        raise AlgebraError("generator lives over a different algebra")

    cofib = partial(_w_cofib, m)
    tfib = partial(_w_tfib, m)
    factor = partial(_w_factor, m)

    return FWFS(MorphismClass(cofib, f"Hom(-,add {m.name})-epic"),
                MorphismClass(tfib, f"split epi with kernel in add {m.name}"),
                m, factor, algebra=a, name=name or f"W-structure add({m.name})",
                trivial_generator=m, meta={"kind": "w"})


def injective_generator(a: AlgebraPresentation) -> Module:
    return _sum_of(injective_indecomposables(a), a).renamed("I")


def build_injective_w_structure(a: AlgebraPresentation) -> FWFS:
    s = build_w_structure(a, injective_generator(a), name="injective W-structure")
    s.meta["kind"] = "injective-w"
    return s


# --------------------------------------------------------------------------
# tilting ω-structures


@dataclass
class OmegaData:
    x_class: ObjectClass
    y_class: ObjectClass
    omega_generator: Module
    preenvelope_oracle: Callable[[Module], ModuleMorphism]
    precover_oracle: Callable[[Module], ModuleMorphism]


def tilting_check(a: AlgebraPresentation, t: Module) -> list[str]:
    """Reasons why t fails to be a tilting module (empty when it is one)."""
    problems = []
    if not a.is_hereditary():
        problems.append("algebra is not hereditary")
        return problems
    if ext_dim(1, t, t) != 0:
        problems.append("Ext^1(T, T) != 0")
    if not coresolution_membership(regular_module(a), t):
        problems.append("regular module has no add(T)-coresolution of length 1")
    return problems


def _universal_extension(t: Module, k: Module):
    """0 -> k -> E -> t^e -> 0 built from a basis of Ext^1(t, k)."""
    cover = projective_cover(t)
    omega, iota = kernel(cover)
    fld = t.algebra.field
    restricted = [(h @ iota).flat() for h in hom_basis(cover.source, k)]
    cands = hom_basis(omega, k)
    if not cands:
        return None
    vecs = restricted + [h.flat() for h in cands]
    idx = independent_subset(fld, vecs, len(vecs[0])) if vecs[0] else []
    ext_basis = [cands[i - len(restricted)] for i in idx if i >= len(restricted)]
    if not ext_basis:
        return None
    e = len(ext_basis)
    om_e, _, om_projs = power(omega, e)
    p_e, p_injs, _ = power(cover.source, e)
    iota_e = zero_morphism(om_e, p_e)
    for i in range(e):
        iota_e = iota_e + p_injs[i] @ iota @ om_projs[i]
    phi = row_morphism(ext_basis, om_e)
    return pushout(iota_e, phi)


@lru_cache(maxsize=100_000)
def _y_preenvelope(t: Module, k: Module) -> ModuleMorphism:
    """A mono k -> E with E in T^perp and cokernel in add t."""
    if ext_dim(1, t, k) == 0:
        from .modules import identity
        return identity(k)
    out = _universal_extension(t, k)
    if out is None:
        raise InstanceError("no universal extension found")
    e, _, k_to_e = out
    return k_to_e


@lru_cache(maxsize=100_000)
def _x_precover(t: Module, b: Module) -> ModuleMorphism:
    """An epi X -> b with X in the cotorsion partner of T^perp and kernel in T^perp."""
    pi = projective_cover(b)
    omega, iota = kernel(pi)
    j = _y_preenvelope(t, omega)
    # X is the pushout of pi.source <- omega -> E; the map to b is induced by (pi, 0)
    s, injs, _ = direct_sum([pi.source, j.target])
    d = injs[0] @ iota - injs[1] @ j
    c, q = cokernel(d)
    return _factor_through_epi(q, row_morphism([pi, zero_morphism(j.target, b)], s))


@lru_cache(maxsize=100_000)
def _tilt_cofib(t, f):
    return f.is_mono() and coresolution_membership(cokernel(f)[0], t)


@lru_cache(maxsize=100_000)
def _tilt_tfib(t, f):
    return f.is_epi() and ext_dim(1, t, kernel(f)[0]) == 0


@lru_cache(maxsize=100_000)
def _tilt_factor(t, f):
    """A -> E -> B: E is the pushout of A ⊕ X_B <- K -> Y^K."""
    p = _x_precover(t, f.target)
    src, injs, _ = direct_sum([f.source, p.source])
    fp = row_morphism([f, p], src)
    k, iota = kernel(fp)
    j = _y_preenvelope(t, k)
    s2, i2, _ = direct_sum([src, j.target])
    d = i2[0] @ iota - i2[1] @ j
    c, q = cokernel(d)
    to_q = q @ i2[0]
    back = _factor_through_epi(q, row_morphism([fp, zero_morphism(j.target, f.target)], s2))
    return to_q @ injs[0], back


def build_tilting_omega_structure(a: AlgebraPresentation, t: Module) -> FWFS:
    problems = tilting_check(a, t)
    if problems:
        raise InstanceError(f"{t.name or 'module'} is not tilting: " + "; ".join(problems))
    x_class = ObjectClass.coresolution(t, label="X")
    y_class = ObjectClass.ext_orthogonal(t, 1, label="Y")

    cofib = partial(_tilt_cofib, t)
    tfib = partial(_tilt_tfib, t)
    preenvelope = partial(_y_preenvelope, t)
    precover = partial(_x_precover, t)
    factor = partial(_tilt_factor, t)

    s = FWFS(MorphismClass(cofib, "mono with cokernel in X"),
             MorphismClass(tfib, "epi with kernel in Y"),
             t, factor, algebra=a, name=f"tilting ω-structure T={t.name}",
             meta={"kind": "tilting-omega"})
    s.meta["omega"] = OmegaData(x_class, y_class, t, preenvelope, precover)
    return s


# --------------------------------------------------------------------------
# duality


def build_dual_structure(s):
    """Transport along D = Hom_k(-, k) to the opposite algebra.

    A fibrantly weak factorization system (L, R) becomes the cofibrantly weak
    system (D R, D L) and vice versa.
    """
    left, right = s.left, s.right
    new_left = MorphismClass(lambda g: right.decide(dualize(g)), f"D({right.description})")
    new_right = MorphismClass(lambda g: left.decide(dualize(g)), f"D({left.description})")

    def factor(g):
        j, q = s.factor(dualize(g))
        return dualize(q), dualize(j)

    gen = dualize(s.generator)
    triv = dualize(s.trivial_generator) if s.trivial_generator is not None else None
    tests = tuple(dualize(m) for m in s.test_objects)
    meta = dict(s.meta)
    meta["dual_of"] = s
    meta["kind"] = f"dual({s.meta.get('kind', '?')})"
    alg = s.algebra.opposite()
    name = f"D[{s.name}]"
    if s.kind == "fibrant":
        return CWFS(new_left, new_right, gen, factor, algebra=alg, name=name,
                    trivial_generator=triv, test_objects=tests, meta=meta)
    return FWFS(new_left, new_right, gen, factor, algebra=alg, name=name,
                trivial_generator=triv, test_objects=tests, meta=meta)


# --------------------------------------------------------------------------
# relationships between the object classes


def probe_objects(a: AlgebraPresentation, extra=()) -> list[Module]:
    mods = list(projective_indecomposables(a)) + list(injective_indecomposables(a))
    mods += [simple_module(a, v) for v in range(a.vertex_count)] + list(extra)
    out = []
    for m in mods:
        if not m.is_zero() and m not in out:
            out.append(m)
    return out


def _same_on(probe, p, q) -> bool:
    return all(p(m) == q(m) for m in probe)


def relationship_report(ms: ModelStructure, kind: str, sample: Sample) -> dict:
    """Compare ω, 𝒲, projectives and injectives and the induced classes.

    Returns a dict with boolean findings and a ``lines`` entry for printing.
    """
    a = ms.algebra
    probe = probe_objects(a, [m for m in sample.objects if len(m.summands()) <= 1])
    proj = _sum_of(projective_indecomposables(a), a)
    inj = _sum_of(injective_indecomposables(a), a)
    in_p = lambda m: add_membership(m, proj)
    in_i = lambda m: add_membership(m, inj)
    in_w = ms.trivial.contains
    if ms.tc_generator is not None:
        in_omega = lambda m: add_membership(m, ms.tc_generator)
    else:
        in_omega = lambda m: ms.cofibrant.contains(m) and ms.trivial.contains(m)

    morphs = sample.morphisms
    cofib_mono = all(ms.cofib.decide(f) == f.is_mono() for f in morphs)
    cofib_mono_cofibrant = all(
        ms.cofib.decide(f) == (f.is_mono() and ms.cofibrant.contains(cokernel(f)[0])) for f in morphs)
    fib_epi = all(ms.fib.decide(f) == f.is_epi() for f in morphs)
    omega_is_p = _same_on(probe, in_omega, in_p)
    w_is_i = _same_on(probe, in_w, in_i)
    frob = omega_is_p and _same_on(probe, in_omega, in_w) and _same_on(probe, in_p, in_i)
    all_cofibrant = all(ms.cofibrant.contains(m) for m in probe)

    out = {
        "kind": kind,
        "omega_equals_projectives": omega_is_p,
        "trivial_equals_injectives": w_is_i,
        "frobenius": frob,
        "cofib_equals_monos": cofib_mono,
        "cofib_equals_monos_with_cofibrant_cokernel": cofib_mono_cofibrant,
        "fib_equals_epis": fib_epi,
        "exact": cofib_mono_cofibrant and fib_epi,
        "all_cofibrant": all_cofibrant,
        "trivial_objects": [m.name for m in probe if in_w(m)],
        "cofibrant_objects": [m.name for m in probe if ms.cofibrant.contains(m)],
        "ext_witnesses": [],
    }
    # injectives that fail to be Ext-orthogonal to everything
    for i in injective_indecomposables(a):
        for x in probe:
            try:
                e = ext_dim(1, i, x)
            except Exception:
                continue
            if e:
                out["ext_witnesses"].append((_display(i, a), _display(x, a), e))
    lines = [f"RELATIONSHIP {kind}"]
    for key in ("omega_equals_projectives", "trivial_equals_injectives", "frobenius",
                "cofib_equals_monos", "cofib_equals_monos_with_cofibrant_cokernel",
                "fib_equals_epis", "exact", "all_cofibrant"):
        lines.append(f"  {key} = {'yes' if out[key] else 'no'}")
    lines.append("  trivial objects among probes: " + ", ".join(out["trivial_objects"]))
    lines.append("  cofibrant objects among probes: " + ", ".join(out["cofibrant_objects"]))
    for i, x, e in out["ext_witnesses"]:
        lines.append(f"  ext_dim(1, {i}, {x}) = {e} with {i} injective")
    if out["ext_witnesses"]:
        lines.append("  (injectives, mod A) is not a cotorsion pair")
    if kind in ("w", "injective-w"):
        lines.append("  check: CoFib = monos iff W = add(injectives): "
                     + ("consistent" if cofib_mono == w_is_i else "INCONSISTENT"))
    lines.append("  check: exact iff omega = add(projectives): "
                 + ("consistent" if out["exact"] == omega_is_p else "INCONSISTENT"))
    out["consistent"] = (out["exact"] == omega_is_p
                         and (kind not in ("w", "injective-w") or cofib_mono == w_is_i))
    out["lines"] = lines
    return out


def _display(m: Module, a: AlgebraPresentation) -> str:
    """Prefer the simple/projective name when m coincides with one."""
    for v in range(a.vertex_count):
        s = simple_module(a, v)
        if s.dims == m.dims and s.maps == m.maps:
            return s.name
    return m.name or "?"
