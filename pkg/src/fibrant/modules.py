"""Representations of a bound quiver and the morphisms between them."""

from __future__ import annotations

from functools import lru_cache
from typing import Optional, Sequence

from .algebra import AlgebraPresentation
from .matrix import DimensionError, Matrix, echelon, independent_subset, kernel_basis, rank, solve


class ModuleError(ValueError):
    pass


class Module:
    """A representation: a vector space per vertex and a matrix per arrow.

    Arrow maps have shape ``(dim target, dim source)``.  Modules built by
    :func:`direct_sum` remember their summands in ``parts``; Hom spaces are
    then assembled block by block.
    """

    __slots__ = ("algebra", "dims", "maps", "parts", "name", "_hash")

    def __init__(self, algebra: AlgebraPresentation, dims: Sequence[int], maps: Sequence[Matrix],
                 name: str = "", parts: tuple = (), check: bool = True):
        self.algebra = algebra
        self.dims = tuple(dims)
        self.maps = tuple(maps)
        self.parts = parts
        self.name = name
        self._hash = None
        if check:
            self.validate()

    def validate(self) -> None:
        alg = self.algebra
        if len(self.dims) != alg.vertex_count:
            raise ModuleError(f"expected {alg.vertex_count} dimensions, got {len(self.dims)}")
        if any(d < 0 for d in self.dims):
            raise ModuleError("negative dimension")
        if len(self.maps) != len(alg.arrows):
            raise ModuleError(f"expected {len(alg.arrows)} arrow maps, got {len(self.maps)}")
        for a, m in zip(alg.arrows, self.maps):
            if m.shape != (self.dims[a.target], self.dims[a.source]):
                raise ModuleError(f"arrow {a.label}: matrix shape {m.shape} does not match "
                                  f"({self.dims[a.target]}, {self.dims[a.source]})")
            if m.field != alg.field:
                raise ModuleError(f"arrow {a.label}: matrix over the wrong field")
        for rel in alg.relations:
            if not self.evaluate(rel).is_zero():
                raise ModuleError(f"relation {alg.relation_word(rel)} is violated"
                                  + (f" by module {self.name}" if self.name else ""))

    def path_map(self, path, start: int) -> Matrix:
        m = Matrix.identity(self.algebra.field, self.dims[start])
        for i in path:
            m = self.maps[i] @ m
        return m

    def evaluate(self, rel) -> Matrix:
        q = self.algebra.quiver
        s = q.path_source(rel[0][1])
        t = q.path_target(rel[0][1])
        acc = Matrix.zeros(self.algebra.field, self.dims[t], self.dims[s])
        for c, p in rel:
            acc = acc + self.path_map(p, s).scale(c)
        return acc

    @property
    def dimension(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return not any(self.dims)

    def _key(self):
        return (self.dims, self.maps, self.parts)

    def __eq__(self, other):
        if not isinstance(other, Module):
            return NotImplemented
        return self is other or (self.algebra == other.algebra and self._key() == other._key())

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        label = self.name or "Module"
        return f"<{label} dims={self.dims}>"

    def summands(self) -> tuple["Module", ...]:
        return self.parts or (self,)

    def renamed(self, name: str) -> "Module":
        return Module(self.algebra, self.dims, self.maps, name, self.parts, check=False)


class ModuleMorphism:
    """A family of vertex matrices intertwining the arrow actions."""

    __slots__ = ("source", "target", "maps", "_hash", "_flat")

    def __init__(self, source: Module, target: Module, maps: Sequence[Matrix], check: bool = True):
        self.source = source
        self.target = target
        self.maps = tuple(maps)
        self._hash = None
        self._flat = None
        if check:
            self.validate()

    def validate(self) -> None:
        s, t = self.source, self.target
        if s.algebra != t.algebra:
            raise ModuleError("algebra mismatch")
        if len(self.maps) != len(s.dims):
            raise ModuleError("wrong number of vertex maps")
        for v, m in enumerate(self.maps):
            if m.shape != (t.dims[v], s.dims[v]):
                raise ModuleError(f"vertex {v}: shape {m.shape}, expected {(t.dims[v], s.dims[v])}")
        for i, a in enumerate(s.algebra.arrows):
            if t.maps[i] @ self.maps[a.source] != self.maps[a.target] @ s.maps[i]:
                raise ModuleError(f"maps do not intertwine arrow {a.label}")

    @property
    def field(self):
        return self.source.algebra.field

    def flat(self) -> tuple:
        """Coordinates in the ambient space of vertex matrices (row-major)."""
        if self._flat is None:
            self._flat = tuple(x for m in self.maps for r in m.data for x in r)
        return self._flat

    def __matmul__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        # self ∘ other
        if other.target != self.source:
            raise ModuleError("morphisms are not composable")
        return ModuleMorphism(other.source, self.target,
                              [g @ f for g, f in zip(self.maps, other.maps)], check=False)

    def __add__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        if (self.source, self.target) != (other.source, other.target):
            raise ModuleError("cannot add morphisms with different endpoints")
        return ModuleMorphism(self.source, self.target,
                              [f + g for f, g in zip(self.maps, other.maps)], check=False)

    def __neg__(self) -> "ModuleMorphism":
        return ModuleMorphism(self.source, self.target, [-f for f in self.maps], check=False)

    def __sub__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        return self + (-other)

    def scale(self, c) -> "ModuleMorphism":
        return ModuleMorphism(self.source, self.target, [f.scale(c) for f in self.maps], check=False)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.maps)

    def is_mono(self) -> bool:
        return all(rank(m) == m.cols for m in self.maps)

    def is_epi(self) -> bool:
        return all(rank(m) == m.rows for m in self.maps)

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and self.is_mono()

    def __eq__(self, other):
        if not isinstance(other, ModuleMorphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.maps == other.maps)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.source, self.target, self.maps))
        return self._hash

    def __repr__(self):
        return f"<morphism {self.source!r} -> {self.target!r}>"


# --------------------------------------------------------------------------
# constructors


def zero_module(algebra: AlgebraPresentation) -> Module:
    f = algebra.field
    return Module(algebra, (0,) * algebra.vertex_count,
                  [Matrix.zeros(f, 0, 0) for _ in algebra.arrows], name="0", check=False)


def identity(m: Module) -> ModuleMorphism:
    f = m.algebra.field
    return ModuleMorphism(m, m, [Matrix.identity(f, d) for d in m.dims], check=False)


def zero_morphism(m: Module, n: Module) -> ModuleMorphism:
    f = m.algebra.field
    return ModuleMorphism(m, n, [Matrix.zeros(f, n.dims[v], m.dims[v]) for v in range(len(m.dims))],
                          check=False)


def from_zero(m: Module) -> ModuleMorphism:
    return zero_morphism(zero_module(m.algebra), m)


def to_zero(m: Module) -> ModuleMorphism:
    return zero_morphism(m, zero_module(m.algebra))


def linear_combination(coeffs, morphisms: Sequence[ModuleMorphism], source: Module,
                       target: Module) -> ModuleMorphism:
    out = zero_morphism(source, target)
    for c, h in zip(coeffs, morphisms):
        if c:
            out = out + h.scale(c)
    return out


def morphism_from_flat(source: Module, target: Module, flat: Sequence) -> ModuleMorphism:
    f = source.algebra.field
    maps = []
    k = 0
    for v in range(len(source.dims)):
        r, c = target.dims[v], source.dims[v]
        data = tuple(tuple(flat[k + i * c:k + (i + 1) * c]) for i in range(r))
        maps.append(Matrix(f, r, c, data))
        k += r * c
    return ModuleMorphism(source, target, maps, check=False)


def flat_length(source: Module, target: Module) -> int:
    return sum(a * b for a, b in zip(source.dims, target.dims))


# --------------------------------------------------------------------------
# direct sums


def _offsets(parts: Sequence[Module], vertex_count: int) -> list[list[int]]:
    offs = []
    acc = [0] * vertex_count
    for p in parts:
        offs.append(list(acc))
        acc = [a + d for a, d in zip(acc, p.dims)]
    return offs


def direct_sum(parts: Sequence[Module], algebra: Optional[AlgebraPresentation] = None):
    """Block-diagonal sum with canonical injections and projections.

    Returns ``(S, injections, projections)`` with ``sum inj_i proj_i = id_S``.
    """
    parts = list(parts)
    if not parts:
        if algebra is None:
            raise ModuleError("direct_sum([]) needs the algebra")
        z = zero_module(algebra)
        return z, [], []
    alg = parts[0].algebra
    for p in parts:
        if p.algebra != alg:
            raise ModuleError("algebra mismatch")
    if len(parts) == 1:
        m = parts[0]
        return m, [identity(m)], [identity(m)]
    f = alg.field
    dims = [sum(p.dims[v] for p in parts) for v in range(alg.vertex_count)]
    maps = [Matrix.block_diagonal(f, [p.maps[i] for p in parts]) for i in range(len(alg.arrows))]
    flat_parts = tuple(s for p in parts for s in p.summands())
    name = " ⊕ ".join(p.name or "?" for p in parts) if all(p.name for p in parts) else ""
    total = Module(alg, dims, maps, name=name, parts=flat_parts, check=False)
    offs = _offsets(parts, alg.vertex_count)
    injs, projs = [], []
    for p, off in zip(parts, offs):
        inj, proj = [], []
        for v in range(alg.vertex_count):
            d, n = p.dims[v], dims[v]
            inj.append(Matrix(f, n, d, tuple(
                tuple(1 if i == off[v] + j else 0 for j in range(d)) for i in range(n))))
            proj.append(Matrix(f, d, n, tuple(
                tuple(1 if j == off[v] + i else 0 for j in range(n)) for i in range(d))))
        injs.append(ModuleMorphism(p, total, inj, check=False))
        projs.append(ModuleMorphism(total, p, proj, check=False))
    return total, injs, projs


def power(m: Module, n: int) -> tuple[Module, list, list]:
    return direct_sum([m] * n, m.algebra)


def row_morphism(maps: Sequence[ModuleMorphism], source: Optional[Module] = None):
    """(f_1, ..., f_n): ⊕ A_i -> B from f_i: A_i -> B."""
    if source is None:
        source, _, projs = direct_sum([g.source for g in maps], maps[0].target.algebra if maps else None)
    else:
        _, _, projs = _sum_structure(source, [g.source for g in maps])
    target = maps[0].target
    out = zero_morphism(source, target)
    for g, p in zip(maps, projs):
        out = out + g @ p
    return out


def column_morphism(maps: Sequence[ModuleMorphism], target: Optional[Module] = None):
    """(f_1, ..., f_n)ᵀ: A -> ⊕ B_i from f_i: A -> B_i."""
    if target is None:
        target, injs, _ = direct_sum([g.target for g in maps])
    else:
        _, injs, _ = _sum_structure(target, [g.target for g in maps])
    src = maps[0].source
    out = zero_morphism(src, target)
    for g, i in zip(maps, injs):
        out = out + i @ g
    return out


def _sum_structure(total: Module, parts: Sequence[Module]):
    s, injs, projs = direct_sum(parts)
    if s != total:
        raise ModuleError("module is not the direct sum of the given parts")
    return s, injs, projs


def direct_sum_morphism(fs: Sequence[ModuleMorphism]) -> ModuleMorphism:
    """f_1 ⊕ ... ⊕ f_n between the sums of sources and targets."""
    src, _, sprojs = direct_sum([f.source for f in fs])
    tgt, tinjs, _ = direct_sum([f.target for f in fs])
    out = zero_morphism(src, tgt)
    for f, p, i in zip(fs, sprojs, tinjs):
        out = out + i @ f @ p
    return out


# --------------------------------------------------------------------------
# Hom spaces


def _hom_system(m: Module, n: Module) -> Matrix:
    """Coefficient matrix of the intertwining equations on flat unknowns."""
    alg = m.algebra
    f = alg.field
    nv = alg.vertex_count
    offs = []
    k = 0
    for v in range(nv):
        offs.append(k)
        k += n.dims[v] * m.dims[v]
    rows = []
    for i, a in enumerate(alg.arrows):
        v, w = a.source, a.target
        Na, Ma = n.maps[i].data, m.maps[i].data
        dv_m, dw_m = m.dims[v], m.dims[w]
        dw_n, dv_n = n.dims[w], n.dims[v]
        # entry (r, c) of N_a X_v - X_w M_a, X_v is dv_n x dv_m
        for r in range(dw_n):
            for c in range(dv_m):
                row = [0] * k
                for kk in range(dv_n):
                    x = Na[r][kk]
                    if x:
                        row[offs[v] + kk * dv_m + c] += x
                for kk in range(dw_m):
                    x = Ma[kk][c]
                    if x:
                        row[offs[w] + r * dw_m + kk] -= x
                if any(row):
                    rows.append([f.normalize(x) for x in row])
    return Matrix(f, len(rows), k, tuple(tuple(r) for r in rows))


@lru_cache(maxsize=200_000)
def _hom_basis_cached(m: Module, n: Module) -> tuple[ModuleMorphism, ...]:
    if len(m.summands()) > 1 or len(n.summands()) > 1:
        return _hom_basis_blocks(m, n)
    k = flat_length(m, n)
    if k == 0:
        return ()
    system = _hom_system(m, n)
    ker = kernel_basis(system)
    return tuple(morphism_from_flat(m, n, ker.column(j)) for j in range(ker.cols))


def _hom_basis_blocks(m: Module, n: Module) -> tuple[ModuleMorphism, ...]:
    alg = m.algebra
    f = alg.field
    mp, np_ = m.summands(), n.summands()
    moff = _offsets(mp, alg.vertex_count)
    noff = _offsets(np_, alg.vertex_count)
    out = []
    for i, a in enumerate(mp):
        for j, b in enumerate(np_):
            for h in _hom_basis_cached(a, b):
                maps = []
                for v in range(alg.vertex_count):
                    rows = [[0] * m.dims[v] for _ in range(n.dims[v])]
                    hv = h.maps[v].data
                    for r in range(b.dims[v]):
                        row = rows[noff[j][v] + r]
                        for c in range(a.dims[v]):
                            row[moff[i][v] + c] = hv[r][c]
                    maps.append(Matrix(f, n.dims[v], m.dims[v], tuple(tuple(r) for r in rows)))
                out.append(ModuleMorphism(m, n, maps, check=False))
    return tuple(out)


def hom_basis(m: Module, n: Module) -> list[ModuleMorphism]:
    """A basis of Hom(m, n), deterministic for fixed inputs."""
    if m.algebra != n.algebra:
        raise ModuleError("algebra mismatch")
    return list(_hom_basis_cached(m, n))


def hom_dim(m: Module, n: Module) -> int:
    return len(_hom_basis_cached(m, n))


def span_basis(morphisms: Sequence[ModuleMorphism]) -> list[ModuleMorphism]:
    """A maximal independent subset (greedy, in order)."""
    if not morphisms:
        return []
    field = morphisms[0].field
    vecs = [h.flat() for h in morphisms]
    idx = independent_subset(field, vecs, len(vecs[0]))
    return [morphisms[i] for i in idx]


def span_rank(morphisms: Sequence[ModuleMorphism]) -> int:
    if not morphisms:
        return 0
    field = morphisms[0].field
    vecs = [h.flat() for h in morphisms]
    if not vecs[0]:
        return 0
    return len(echelon(field, vecs, len(vecs[0]), full=False, monic=False)[1])


def coordinates(target: ModuleMorphism, spanning: Sequence[ModuleMorphism]) -> Optional[list]:
    """Coefficients expressing ``target`` in ``spanning``, or None."""
    from .matrix import solve_vectors
    return solve_vectors(target.field, [h.flat() for h in spanning], target.flat())


# --------------------------------------------------------------------------
# kernels and cokernels


@lru_cache(maxsize=100_000)
def kernel(f: ModuleMorphism) -> tuple[Module, ModuleMorphism]:
    """(K, ι) with ι: K -> source a mono and f ∘ ι = 0."""
    src = f.source
    alg = src.algebra
    fld = alg.field
    bases = [kernel_basis(m) for m in f.maps]
    dims = [b.cols for b in bases]
    maps = []
    for i, a in enumerate(alg.arrows):
        img = src.maps[i] @ bases[a.source]
        x = solve(bases[a.target], img)
        if x is None:
            raise ModuleError("kernel not closed under arrows; f is not a module map")
        maps.append(x)
    k = Module(alg, dims, maps, check=False)
    return k, ModuleMorphism(k, src, bases, check=False)


@lru_cache(maxsize=100_000)
def cokernel(f: ModuleMorphism) -> tuple[Module, ModuleMorphism]:
    """(C, π) with π: target -> C an epi and π ∘ f = 0."""
    tgt = f.target
    alg = tgt.algebra
    fld = alg.field
    projs = [kernel_basis(m.transpose()).transpose() for m in f.maps]
    dims = [p.rows for p in projs]
    maps = []
    for i, a in enumerate(alg.arrows):
        rhs = projs[a.target] @ tgt.maps[i]
        x = solve(projs[a.source].transpose(), rhs.transpose())
        if x is None:
            raise ModuleError("cokernel arrow map undefined; f is not a module map")
        maps.append(x.transpose())
    c = Module(alg, dims, maps, check=False)
    return c, ModuleMorphism(tgt, c, projs, check=False)


def image(f: ModuleMorphism) -> tuple[Module, ModuleMorphism]:
    k, iota = kernel(cokernel(f)[1])
    return k, iota


def pushout(f: ModuleMorphism, g: ModuleMorphism):
    """Pushout of Y <-f- X -g-> Z; returns (P, Y -> P, Z -> P)."""
    s, injs, _ = direct_sum([f.target, g.target])
    d = injs[0] @ f - injs[1] @ g
    p, pi = cokernel(d)
    return p, pi @ injs[0], pi @ injs[1]


def pullback(f: ModuleMorphism, g: ModuleMorphism):
    """Pullback of Y -f-> X <-g- Z; returns (P, P -> Y, P -> Z)."""
    s, _, projs = direct_sum([f.source, g.source])
    d = f @ projs[0] - g @ projs[1]
    k, iota = kernel(d)
    return k, projs[0] @ iota, projs[1] @ iota


# --------------------------------------------------------------------------
# duality


def dualize(x):
    """k-duality D = Hom_k(-, k) between kQ/I-modules and (kQ/I)^op-modules.

    On modules the vertex spaces are dualized (arrow matrices transposed,
    arrows reversed); on morphisms the direction flips and matrices transpose.
    """
    if isinstance(x, ModuleMorphism):
        return ModuleMorphism(dualize(x.target), dualize(x.source),
                              [m.transpose() for m in x.maps], check=False)
    if isinstance(x, Module):
        alg = x.algebra.opposite()
        parts = tuple(dualize(p) for p in x.parts) if x.parts else ()
        name = f"D({x.name})" if x.name and not x.name.startswith("D(") else (
            x.name[2:-1] if x.name.startswith("D(") else "")
        return Module(alg, x.dims, [m.transpose() for m in x.maps], name=name, parts=parts, check=False)
    raise TypeError(f"cannot dualize {type(x).__name__}")
