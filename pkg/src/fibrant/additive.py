"""Split morphisms, lifting problems, factor ideals and approximations."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from .matrix import echelon, solve, solve_vectors
from .modules import (Module, ModuleError, ModuleMorphism, cokernel, direct_sum, hom_basis,
                      identity, kernel, linear_combination, morphism_from_flat, power,
                      span_basis, zero_module, zero_morphism)


@dataclass(frozen=True)
class SplitData:
    """Witnesses of a split exact sequence 0 -> A -f-> B -g-> C -> 0."""

    forward: ModuleMorphism        # f: A -> B
    retraction: ModuleMorphism     # f': B -> A
    cokernel_part: ModuleMorphism  # g: B -> C
    section: ModuleMorphism        # g': C -> B

    def identities_hold(self) -> bool:
        f, f2, g, g2 = self.forward, self.retraction, self.cokernel_part, self.section
        return (f2 @ f == identity(f.source)
                and g @ g2 == identity(g.target)
                and f @ f2 + g2 @ g == identity(f.target))

    def comparison(self) -> ModuleMorphism:
        """The isomorphism (f', g)ᵀ: B -> A ⊕ C."""
        s, injs, _ = direct_sum([self.forward.source, self.cokernel_part.target])
        return injs[0] @ self.retraction + injs[1] @ self.cokernel_part

    def comparison_inverse(self) -> ModuleMorphism:
        """(f, g'): A ⊕ C -> B."""
        s, _, projs = direct_sum([self.forward.source, self.cokernel_part.target])
        return self.forward @ projs[0] + self.section @ projs[1]


def _factor_through_epi(g: ModuleMorphism, h: ModuleMorphism) -> ModuleMorphism:
    """The unique x with x ∘ g = h, for g epi and h killing ker g."""
    maps = []
    for gv, hv in zip(g.maps, h.maps):
        x = solve(gv.transpose(), hv.transpose())
        if x is None:
            raise ModuleError("morphism does not factor through the epimorphism")
        maps.append(x.transpose())
    return ModuleMorphism(g.target, h.target, maps, check=False)


def _factor_through_mono(f: ModuleMorphism, h: ModuleMorphism) -> ModuleMorphism:
    """The unique x with f ∘ x = h, for f mono and im h inside im f."""
    maps = []
    for fv, hv in zip(f.maps, h.maps):
        x = solve(fv, hv)
        if x is None:
            raise ModuleError("morphism does not factor through the monomorphism")
        maps.append(x)
    return ModuleMorphism(h.source, f.source, maps, check=False)


def retraction_of(f: ModuleMorphism) -> Optional[ModuleMorphism]:
    if not f.is_mono():
        return None
    basis = hom_basis(f.target, f.source)
    coeffs = solve_vectors(f.field, [(h @ f).flat() for h in basis], identity(f.source).flat())
    if coeffs is None:
        return None
    return linear_combination(coeffs, basis, f.target, f.source)


def section_of(g: ModuleMorphism) -> Optional[ModuleMorphism]:
    if not g.is_epi():
        return None
    basis = hom_basis(g.target, g.source)
    coeffs = solve_vectors(g.field, [(g @ h).flat() for h in basis], identity(g.target).flat())
    if coeffs is None:
        return None
    return linear_combination(coeffs, basis, g.target, g.source)


def split_mono_check(f: ModuleMorphism) -> Optional[SplitData]:
    r = retraction_of(f)
    if r is None:
        return None
    c, g = cokernel(f)
    rest = identity(f.target) - f @ r
    g2 = _factor_through_epi(g, rest)
    return SplitData(f, r, g, g2)


def split_epi_check(g: ModuleMorphism) -> Optional[SplitData]:
    s = section_of(g)
    if s is None:
        return None
    k, f = kernel(g)
    rest = identity(g.source) - s @ g
    f2 = _factor_through_mono(f, rest)
    return SplitData(f, f2, g, s)


@lru_cache(maxsize=100_000)
def is_split_mono(f: ModuleMorphism) -> bool:
    return retraction_of(f) is not None


@lru_cache(maxsize=100_000)
def is_split_epi(g: ModuleMorphism) -> bool:
    return section_of(g) is not None


# --------------------------------------------------------------------------
# factor ideals and add-closures


def factor_ideal_basis(x: Module, u: Module, y: Module) -> list[ModuleMorphism]:
    """Basis of Hom(x, add u, y): span of g∘f over Hom(x,u) × Hom(u,y)."""
    if u.is_zero():
        return []
    composites = [g @ f for f in hom_basis(x, u) for g in hom_basis(u, y)]
    return span_basis(composites)


@lru_cache(maxsize=100_000)
def add_membership(x: Module, u: Module) -> bool:
    """Whether x is a direct summand of some u^n."""
    if x.is_zero():
        return True
    if u.is_zero():
        return False
    # cheap necessary condition: support of x within support of u
    if any(dx and not du for dx, du in zip(x.dims, u.dims)):
        return False
    # every map x -> u factors through the left approximation, so x is a
    # summand of u^d exactly when that approximation splits
    ell = left_approximation(x, u, reduced=True)
    if ell.target.is_zero():
        return False
    return retraction_of(ell) is not None


@lru_cache(maxsize=100_000)
def right_approximation(u: Module, b: Module, reduced: bool = False) -> ModuleMorphism:
    """The evaluation map u^d -> b through which every map from add u factors.

    With ``reduced`` only generators of Hom(u, b) as a right End(u)-module are
    used, which gives a smaller (still right) approximation.
    """
    basis = hom_basis(u, b)
    if reduced and basis:
        basis = _module_generators(basis, hom_basis(u, u), right=True)
    if not basis:
        return zero_morphism(zero_module(b.algebra), b)
    src, _, projs = power(u, len(basis))
    out = zero_morphism(src, b)
    for h, p in zip(basis, projs):
        out = out + h @ p
    return out


@lru_cache(maxsize=100_000)
def left_approximation(b: Module, u: Module, reduced: bool = False) -> ModuleMorphism:
    """The coevaluation map b -> u^d through which every map into add u factors."""
    basis = hom_basis(b, u)
    if reduced and basis:
        basis = _module_generators(basis, hom_basis(u, u), right=False)
    if not basis:
        return zero_morphism(b, zero_module(b.algebra))
    tgt, injs, _ = power(u, len(basis))
    out = zero_morphism(b, tgt)
    for h, i in zip(basis, injs):
        out = out + i @ h
    return out


def _module_generators(basis, endos, right: bool):
    # greedy: keep h unless it lies in the span of {g∘e} (right) / {e∘g} (left)
    field = basis[0].field

    def orbit(h):
        return [((h @ e) if right else (e @ h)).flat() for e in endos]

    # elements with the largest orbit first, so fewer generators get picked
    from .matrix import rank_of_rows
    n = len(basis[0].flat())
    basis = sorted(basis, key=lambda h: -rank_of_rows(field, orbit(h), n))
    chosen = []
    span = []
    for h in basis:
        if span and solve_vectors(field, span, h.flat()) is not None:
            continue
        chosen.append(h)
        span.extend(orbit(h))
    return chosen


@lru_cache(maxsize=100_000)
def hom_epic_check(u: Module, f: ModuleMorphism) -> bool:
    """Whether Hom(u, f): Hom(u, source) -> Hom(u, target) is onto."""
    target_dim = len(hom_basis(u, f.target))
    if target_dim == 0:
        return True
    images = [(f @ h).flat() for h in hom_basis(u, f.source)]
    if len(images) < target_dim:
        return False
    return len(echelon(f.field, images, len(images[0]), full=False, monic=False)[1]) == target_dim


@lru_cache(maxsize=100_000)
def co_hom_epic_check(f: ModuleMorphism, u: Module) -> bool:
    """Whether Hom(f, u): Hom(target, u) -> Hom(source, u) is onto."""
    target_dim = len(hom_basis(f.source, u))
    if target_dim == 0:
        return True
    images = [(h @ f).flat() for h in hom_basis(f.target, u)]
    if len(images) < target_dim:
        return False
    return len(echelon(f.field, images, len(images[0]), full=False, monic=False)[1]) == target_dim


# --------------------------------------------------------------------------
# lifting


@dataclass(frozen=True)
class LiftingProblem:
    """A commutative square right ∘ top = bottom ∘ left; we seek B -> C."""

    top: ModuleMorphism     # u: A -> C
    left: ModuleMorphism    # f: A -> B
    right: ModuleMorphism   # g: C -> D
    bottom: ModuleMorphism  # v: B -> D

    def __post_init__(self):
        u, f, g, v = self.top, self.left, self.right, self.bottom
        if not (u.source == f.source and u.target == g.source
                and v.source == f.target and v.target == g.target):
            raise ModuleError("lifting problem has mismatched corners")
        if g @ u != v @ f:
            raise ModuleError("lifting problem square does not commute")


def solve_lifting(p: LiftingProblem) -> Optional[ModuleMorphism]:
    """Some h with h ∘ left = top and right ∘ h = bottom, or None."""
    b, c = p.left.target, p.right.source
    basis = hom_basis(b, c)
    target = p.top.flat() + p.bottom.flat()
    vectors = [(h @ p.left).flat() + (p.right @ h).flat() for h in basis]
    if not target:
        return linear_combination([], [], b, c)
    coeffs = solve_vectors(p.left.field, vectors, target)
    if coeffs is None:
        return None
    return linear_combination(coeffs, basis, b, c)


def verify_retract(g: ModuleMorphism, f: ModuleMorphism, phi1: ModuleMorphism, psi1: ModuleMorphism,
                   phi2: ModuleMorphism, psi2: ModuleMorphism) -> bool:
    """Check that g: A' -> B' is a retract of f: A -> B via the given witnesses."""
    shapes = [
        (phi1, g.source, f.source), (psi1, f.source, g.source),
        (phi2, g.target, f.target), (psi2, f.target, g.target),
    ]
    for m, s, t in shapes:
        if m.source != s or m.target != t:
            raise ModuleError("retract witnesses have the wrong shape")
    return (f @ phi1 == phi2 @ g
            and g @ psi1 == psi2 @ f
            and psi1 @ phi1 == identity(g.source)
            and psi2 @ phi2 == identity(g.target))


# --------------------------------------------------------------------------
# object classes


class ObjectClass:
    """A decidable class of modules, closed under sums and summands."""

    KINDS = ("add", "ext-orthogonal", "coresolution", "explicit", "all", "zero")

    def __init__(self, kind: str, generator: Optional[Module] = None, max_degree: int = 1,
                 predicate: Optional[Callable[[Module], bool]] = None, label: str = ""):
        if kind not in self.KINDS:
            raise ValueError(f"unknown object class kind {kind!r}")
        self.kind = kind
        self.generator = generator
        self.max_degree = max_degree
        self.predicate = predicate
        self.label = label or kind

    @classmethod
    def add_closure(cls, generator: Module, label: str = "") -> "ObjectClass":
        return cls("add", generator=generator, label=label or f"add({generator.name or '?'})")

    @classmethod
    def ext_orthogonal(cls, test: Module, max_degree: int = 1, label: str = "") -> "ObjectClass":
        return cls("ext-orthogonal", generator=test, max_degree=max_degree,
                   label=label or f"{test.name or '?'}^perp")

    @classmethod
    def coresolution(cls, generator: Module, label: str = "") -> "ObjectClass":
        return cls("coresolution", generator=generator,
                   label=label or f"coresolved by add({generator.name or '?'})")

    @classmethod
    def explicit(cls, predicate: Callable[[Module], bool], label: str = "explicit") -> "ObjectClass":
        return cls("explicit", predicate=predicate, label=label)

    @classmethod
    def everything(cls) -> "ObjectClass":
        return cls("all", label="all")

    @classmethod
    def zero_only(cls) -> "ObjectClass":
        return cls("zero", label="0")

    def contains(self, m: Module) -> bool:
        if self.kind == "all":
            return True
        if self.kind == "zero":
            return m.is_zero()
        if self.kind == "add":
            return add_membership(m, self.generator)
        if self.kind == "ext-orthogonal":
            from .homology import ext_dim
            return all(ext_dim(i, self.generator, m) == 0 for i in range(1, self.max_degree + 1))
        if self.kind == "coresolution":
            return coresolution_membership(m, self.generator)
        return bool(self.predicate(m))

    __contains__ = contains

    def __call__(self, m: Module) -> bool:
        return self.contains(m)

    def __repr__(self):
        return f"ObjectClass({self.label})"


@lru_cache(maxsize=100_000)
def coresolution_membership(x: Module, t: Module) -> bool:
    """x admits 0 -> x -> T0 -> T1 -> 0 with Ti in add t (pd t <= 1 case).

    Decided on the left add-t-approximation: it must be mono with cokernel
    in add t.
    """
    if x.is_zero():
        return True
    ell = left_approximation(x, t, reduced=True)
    if not ell.is_mono():
        return False
    return add_membership(cokernel(ell)[0], t)
