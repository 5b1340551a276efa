"""Bound quiver algebras kQ/I presented by arrows and relations.

Paths are tuples of arrow indices in traversal order: ``(a, b)`` walks ``a``
first and then ``b``.  A relation is a tuple of ``(coefficient, path)`` terms
whose paths share their start and end vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field as dc_field
from functools import cached_property
from itertools import product
from typing import Optional

from .matrix import QQ, echelon


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    source: int
    target: int
    label: str


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        if self.vertex_count < 0:
            raise AlgebraError("negative vertex count")
        labels = set()
        for a in self.arrows:
            if not (0 <= a.source < self.vertex_count and 0 <= a.target < self.vertex_count):
                raise AlgebraError(f"arrow {a.label} has endpoint out of range")
            if a.label in labels:
                raise AlgebraError(f"duplicate arrow label {a.label}")
            labels.add(a.label)

    def arrow_index(self, label: str) -> int:
        for i, a in enumerate(self.arrows):
            if a.label == label:
                return i
        raise AlgebraError(f"unknown arrow {label!r}")

    def path_source(self, path, start: Optional[int] = None) -> int:
        return self.arrows[path[0]].source if path else start

    def path_target(self, path, start: Optional[int] = None) -> int:
        return self.arrows[path[-1]].target if path else start

    def is_path(self, path) -> bool:
        return all(self.arrows[a].target == self.arrows[b].source for a, b in zip(path, path[1:]))

    def is_acyclic(self) -> bool:
        indeg = [0] * self.vertex_count
        out = [[] for _ in range(self.vertex_count)]
        for a in self.arrows:
            indeg[a.target] += 1
            out[a.source].append(a.target)
        stack = [v for v in range(self.vertex_count) if indeg[v] == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for w in out[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    stack.append(w)
        return seen == self.vertex_count

    def opposite(self) -> "Quiver":
        return Quiver(self.vertex_count, tuple(Arrow(a.target, a.source, a.label) for a in self.arrows))

    def paths_of_length(self, n: int, start: Optional[int] = None) -> list[tuple[int, ...]]:
        if n == 0:
            return [()]
        paths = [(i,) for i, a in enumerate(self.arrows) if start is None or a.source == start]
        for _ in range(n - 1):
            paths = [p + (i,) for p in paths for i, a in enumerate(self.arrows)
                     if a.source == self.arrows[p[-1]].target]
        return paths


@dataclass(frozen=True)
class AlgebraPresentation:
    """A finite-dimensional algebra kQ/I given by generators of I."""

    quiver: Quiver
    relations: tuple[tuple[tuple[object, tuple[int, ...]], ...], ...] = ()
    field: object = QQ
    bound: int = dc_field(default=12, compare=False)

    def __post_init__(self):
        q = self.quiver
        for rel in self.relations:
            if not rel:
                raise AlgebraError("empty relation")
            ends = set()
            for _, path in rel:
                if not path:
                    raise AlgebraError("relations must involve paths of positive length")
                if not q.is_path(path):
                    raise AlgebraError(f"{self.path_word(path)} is not a path")
                ends.add((q.path_source(path), q.path_target(path)))
            if len(ends) != 1:
                raise AlgebraError(f"relation {self.relation_word(rel)} mixes non-parallel paths")

    @property
    def vertex_count(self) -> int:
        return self.quiver.vertex_count

    @property
    def arrows(self) -> tuple[Arrow, ...]:
        return self.quiver.arrows

    def is_hereditary(self) -> bool:
        return not self.relations and self.quiver.is_acyclic()

    def opposite(self) -> "AlgebraPresentation":
        rels = tuple(tuple((c, tuple(reversed(p))) for c, p in rel) for rel in self.relations)
        return AlgebraPresentation(self.quiver.opposite(), rels, self.field, self.bound)

    def path_word(self, path) -> str:
        return "*".join(self.arrows[i].label for i in path)

    def relation_word(self, rel) -> str:
        parts = []
        for c, p in rel:
            parts.append(f"{c} {self.path_word(p)}" if c != 1 else self.path_word(p))
        return " + ".join(parts)

    # -- the quotient kQ/I

    @cached_property
    def _quotient(self):
        """Nilpotency length and per-(start, end) normal forms of kQ/I."""
        q = self.quiver
        f = self.field
        rels = [[(f.coerce(c), p) for c, p in rel] for rel in self.relations]

        def ideal_elements(weight):
            # q_path . rel . p_path with len(p)+len(q)+min rel length <= weight
            out = []
            for rel in rels:
                s = q.path_source(rel[0][1])
                t = q.path_target(rel[0][1])
                m = min(len(p) for _, p in rel)
                for lp in range(weight - m + 1):
                    for lq in range(weight - m - lp + 1):
                        before = [p for p in q.paths_of_length(lp) if q.path_target(p, s) == s] if lp else [()]
                        after = q.paths_of_length(lq, t) if lq else [()]
                        for pb, pa in product(before, after):
                            out.append([(c, pb + path + pa) for c, path in rel])
            return out

        for n0 in range(1, self.bound + 1):
            long_paths = q.paths_of_length(n0)
            if not long_paths:
                break
            elems = ideal_elements(n0)
            ok = True
            for path in long_paths:
                if not _in_span_mod_longer(f, path, elems, n0):
                    ok = False
                    break
            if ok:
                break
        else:
            raise AlgebraError(f"presentation is not admissible within length bound {self.bound}")

        # paths of length < n0 grouped by endpoints, then reduce by truncated ideal
        elems = ideal_elements(n0)
        spaces = {}
        for v in range(q.vertex_count):
            for w in range(q.vertex_count):
                spaces[v, w] = []
        for n in range(n0):
            for p in q.paths_of_length(n):
                if n == 0:
                    continue
                spaces[q.path_source(p), q.path_target(p)].append(p)
        for v in range(q.vertex_count):
            spaces[v, v].insert(0, ())
        forms = {}
        for (v, w), paths in spaces.items():
            # order: longest paths first so that normal words are the short ones
            order = sorted(paths, key=lambda p: (-len(p), p))
            index = {p: i for i, p in enumerate(order)}
            rows = []
            for e in elems:
                if not e:
                    continue
                p0 = e[0][1]
                if (q.path_source(p0), q.path_target(p0)) != (v, w):
                    continue
                row = [0] * len(order)
                for c, p in e:
                    if len(p) < n0:
                        row[index[p]] = f.normalize(row[index[p]] + c)
                rows.append(row)
            red, piv = echelon(f, rows, len(order))
            normal = [p for i, p in enumerate(order) if i not in set(piv)]
            forms[v, w] = _NormalForm(f, order, index, red, piv, normal, n0)
        return n0, forms

    @property
    def nilpotency(self) -> int:
        return self._quotient[0]

    def basis_paths(self, v: int, w: int) -> list[tuple[int, ...]]:
        """Normal words spanning e_w (kQ/I) e_v: paths from v to w."""
        return list(self._quotient[1][v, w].normal)

    def reduce(self, v: int, w: int, terms) -> list:
        """Coordinates of sum c*path (paths v->w) in the normal-word basis."""
        return self._quotient[1][v, w].reduce(terms)

    def dimension(self) -> int:
        n = self.vertex_count
        return sum(len(self.basis_paths(v, w)) for v in range(n) for w in range(n))

    def check_admissible(self) -> None:
        self._quotient


def _in_span_mod_longer(f, path, elems, n0) -> bool:
    # truncate every element to paths of length exactly n0 (shorter terms make
    # the element useless for this test only if they are nonzero)
    coords = {}
    rows = []
    for e in elems:
        row = {}
        bad = False
        for c, p in e:
            if len(p) < n0:
                bad = True
                break
            if len(p) == n0:
                row[p] = f.normalize(row.get(p, 0) + c)
        if bad or not any(row.values()):
            continue
        rows.append(row)
        for p in row:
            coords.setdefault(p, len(coords))
    if path not in coords:
        return False
    n = len(coords)
    mat = [[r.get(p, 0) for p in coords] for r in rows]
    base = len(echelon(f, mat, n, full=False, monic=False)[1])
    target = [0] * n
    target[coords[path]] = 1
    return len(echelon(f, mat + [target], n, full=False, monic=False)[1]) == base


@dataclass
class _NormalForm:
    field: object
    order: list
    index: dict
    red: list
    piv: list
    normal: list
    n0: int

    def reduce(self, terms) -> list:
        f = self.field
        vec = [0] * len(self.order)
        for c, p in terms:
            if len(p) >= self.n0:
                continue
            i = self.index[p]
            vec[i] = f.normalize(vec[i] + f.coerce(c))
        for row, c in zip(self.red, self.piv):
            a = vec[c]
            if a:
                vec = [f.normalize(x - a * y) for x, y in zip(vec, row)]
        pivset = set(self.piv)
        return [vec[i] for i, p in enumerate(self.order) if i not in pivset]
