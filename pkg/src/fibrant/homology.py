"""Indecomposable projectives/injectives, minimal resolutions and Ext."""

from __future__ import annotations

from functools import lru_cache

from .algebra import AlgebraError, AlgebraPresentation
from .matrix import Matrix, echelon, rank
from .modules import (Module, ModuleMorphism, direct_sum, dualize, hom_basis, identity, kernel,
                      zero_module, zero_morphism)


class ResolutionError(RuntimeError):
    pass


DEFAULT_RESOLUTION_BOUND = 8


def projective_indecomposable(a: AlgebraPresentation, v: int) -> Module:
    """P_v = e_v-paths out of v modulo relations, arrows acting by extension."""
    f = a.field
    n = a.vertex_count
    bases = [a.basis_paths(v, w) for w in range(n)]
    maps = []
    for arrow in a.arrows:
        s, t = arrow.source, arrow.target
        arrow_index = a.arrows.index(arrow)
        cols = [a.reduce(v, t, [(1, p + (arrow_index,))]) for p in bases[s]]
        rows = len(bases[t])
        maps.append(Matrix.from_columns(f, cols, rows))
    return Module(a, [len(b) for b in bases], maps, name=f"P{v + 1}", check=False)


@lru_cache(maxsize=None)
def projective_indecomposables(a: AlgebraPresentation) -> tuple[Module, ...]:
    a.check_admissible()
    return tuple(projective_indecomposable(a, v) for v in range(a.vertex_count))


@lru_cache(maxsize=None)
def injective_indecomposables(a: AlgebraPresentation) -> tuple[Module, ...]:
    """I_v = D(P_v over the opposite algebra)."""
    op = projective_indecomposables(a.opposite())
    return tuple(dualize(p).renamed(f"I{v + 1}") for v, p in enumerate(op))


def simple_module(a: AlgebraPresentation, v: int) -> Module:
    f = a.field
    dims = [1 if w == v else 0 for w in range(a.vertex_count)]
    maps = [Matrix.zeros(f, dims[ar.target], dims[ar.source]) for ar in a.arrows]
    return Module(a, dims, maps, name=f"S{v + 1}")


def regular_module(a: AlgebraPresentation) -> Module:
    return direct_sum(list(projective_indecomposables(a)), a)[0]


# --------------------------------------------------------------------------
# tops and projective covers


def radical_basis(m: Module, v: int) -> Matrix:
    """Columns spanning rad(M)_v = sum of images of arrows into v."""
    f = m.algebra.field
    cols = []
    for i, ar in enumerate(m.algebra.arrows):
        if ar.target == v:
            cols.extend(m.maps[i].columns())
    if not cols:
        return Matrix.zeros(f, m.dims[v], 0)
    return Matrix.from_columns(f, [cols[i] for i in _pivot_columns(f, cols, m.dims[v])], m.dims[v])


def _pivot_columns(field, cols, length):
    if not cols or length == 0:
        return []
    rows = tuple(zip(*cols))
    return echelon(field, rows, len(cols), full=False, monic=False)[1]


def top_generators(m: Module) -> list[tuple[int, tuple]]:
    """(vertex, vector) pairs lifting a basis of top(M) = M / rad M."""
    f = m.algebra.field
    out = []
    for v in range(len(m.dims)):
        d = m.dims[v]
        if d == 0:
            continue
        rad = radical_basis(m, v)
        rad_cols = rad.columns()
        unit = [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
        chosen = _pivot_columns(f, rad_cols + unit, d)
        for idx in chosen:
            if idx >= len(rad_cols):
                out.append((v, unit[idx - len(rad_cols)]))
    return out


def map_from_projective(p_index_module: Module, v: int, m: Module, vec) -> ModuleMorphism:
    """The morphism P_v -> M sending e_v to ``vec`` in M_v."""
    a = m.algebra
    f = a.field
    maps = []
    for w in range(a.vertex_count):
        cols = []
        for path in a.basis_paths(v, w):
            img = m.path_map(path, v)
            cols.append(tuple(f.normalize(sum(img.data[i][j] * vec[j] for j in range(len(vec))))
                              for i in range(m.dims[w])))
        maps.append(Matrix.from_columns(f, cols, m.dims[w]))
    return ModuleMorphism(p_index_module, m, maps, check=False)


def projective_cover(m: Module) -> ModuleMorphism:
    """Minimal epimorphism P(M) -> M from a sum of indecomposable projectives."""
    a = m.algebra
    projs = projective_indecomposables(a)
    gens = top_generators(m)
    if not gens:
        return zero_morphism(zero_module(a), m)
    pieces = [map_from_projective(projs[v], v, m, vec) for v, vec in gens]
    total, _, prs = direct_sum([p.source for p in pieces], a)
    out = zero_morphism(total, m)
    for g, pr in zip(pieces, prs):
        out = out + g @ pr
    return out


class Resolution:
    """A minimal projective resolution ... -> P_1 -> P_0 -> M, computed lazily."""

    def __init__(self, m: Module, bound: int = DEFAULT_RESOLUTION_BOUND):
        self.module = m
        self.bound = bound
        cover = projective_cover(m)
        self.terms = [cover.source]
        self.differentials: list[ModuleMorphism] = []  # d_i: P_i -> P_{i-1}, i >= 1
        self.augmentation = cover
        self._syzygy = kernel(cover)
        self.finished = self._syzygy[0].is_zero()

    def extend_to(self, n: int) -> None:
        """Make P_0..P_n available (P_i = 0 once the resolution stops)."""
        while len(self.terms) <= n:
            if self.finished:
                self.terms.append(zero_module(self.module.algebra))
                self.differentials.append(zero_morphism(self.terms[-1], self.terms[-2]))
                continue
            if len(self.terms) > self.bound and not self.module.algebra.is_hereditary():
                raise ResolutionError(
                    f"resolution of {self.module!r} has not terminated within {self.bound} steps")
            k, iota = self._syzygy
            cover = projective_cover(k)
            self.terms.append(cover.source)
            self.differentials.append(iota @ cover)
            self._syzygy = kernel(cover)
            self.finished = self._syzygy[0].is_zero()

    def term(self, i: int) -> Module:
        self.extend_to(i)
        return self.terms[i]

    def differential(self, i: int) -> ModuleMorphism:
        self.extend_to(i)
        return self.differentials[i - 1]

    def length(self) -> int:
        """Projective dimension, when it is reached within the bound."""
        i = 0
        while True:
            self.extend_to(i + 1)
            if self.terms[i + 1].is_zero():
                return i
            i += 1


@lru_cache(maxsize=4096)
def resolution(m: Module, bound: int = DEFAULT_RESOLUTION_BOUND) -> Resolution:
    return Resolution(m, bound)


def _precompose_rank(d: ModuleMorphism, n: Module) -> int:
    """rank of Hom(target d, N) -> Hom(source d, N), φ -> φ∘d."""
    basis = hom_basis(d.target, n)
    if not basis:
        return 0
    vecs = [(phi @ d).flat() for phi in basis]
    if not vecs[0]:
        return 0
    return len(echelon(n.algebra.field, vecs, len(vecs[0]), full=False, monic=False)[1])


@lru_cache(maxsize=100_000)
def ext_dim(i: int, m: Module, n: Module, bound: int = DEFAULT_RESOLUTION_BOUND) -> int:
    """dim Ext^i(M, N) as cohomology of Hom(P_•, N) at position i."""
    if i < 1:
        raise ValueError("ext_dim needs i >= 1")
    if m.algebra != n.algebra:
        raise AlgebraError("algebra mismatch")
    res = resolution(m, bound)
    res.extend_to(i + 1)
    p_i = res.term(i)
    if p_i.is_zero():
        return 0
    dim_hom = len(hom_basis(p_i, n))
    into = _precompose_rank(res.differential(i), n)
    out_of = _precompose_rank(res.differential(i + 1), n)
    # ker(d_{i+1}^*) / im(d_i^*)
    return dim_hom - out_of - into


def is_projective(m: Module) -> bool:
    return projective_cover(m).is_iso()


def is_injective(m: Module) -> bool:
    return is_projective(dualize(m))
