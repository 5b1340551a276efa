"""Text configuration: algebra, modules, morphisms, instance and session.

Example::

    [session]
    field = rational
    seed = 12648430

    [quiver]
    vertices = 2
    a: 0 -> 1

    [modules]
    T = P1 + S1

    [instance]
    kind = tilting-omega
    generator = T
    test_objects = P1, S1, S2

Vertices are numbered from 0; the generated names P1, I1, S1 refer to
vertex 0.  Modules are either expressions (``P1``, ``I2``, ``S1``,
``regular``, ``injectives``, ``X + Y``) or explicit ``dims (..)`` entries with
``NAME.arrow = [[..]]`` matrices.  Morphisms are ``basis(X, Y, i)``,
``id(X)``, ``zero(X, Y)`` or explicit ``X -> Y`` with ``NAME@v = [[..]]``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

SESSION_KEYS = ("field", "seed", "sum_bound", "random_per_pair", "resolution_bound")
SESSION_DEFAULTS = {"field": "rational", "seed": 0xC0FFEE, "sum_bound": 2,
                    "random_per_pair": 5, "resolution_bound": 8}
INSTANCE_KEYS = ("kind", "base", "generator", "test_objects", "trivial_generator")
INSTANCE_KINDS = ("w", "injective-w", "tilting-omega", "dual")
SECTIONS = ("session", "quiver", "relations", "modules", "morphisms", "instance")

_NAME = r"[A-Za-z_][A-Za-z0-9_']*"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ModuleSpec:
    name: str
    expr: Optional[str] = None            # normalized expression text
    dims: Optional[tuple] = None          # explicit dimension vector
    maps: tuple = ()                      # ((arrow label, matrix rows), ...)


@dataclass(frozen=True)
class MorphismSpec:
    name: str
    expr: Optional[str] = None
    source: Optional[str] = None
    target: Optional[str] = None
    maps: tuple = ()                      # ((vertex, matrix rows), ...)


@dataclass
class Config:
    session: dict = field(default_factory=lambda: dict(SESSION_DEFAULTS))
    vertices: int = 0
    arrows: list = field(default_factory=list)       # (label, source, target)
    relations: list = field(default_factory=list)    # tuple of (coeff, (labels...))
    modules: list = field(default_factory=list)      # ModuleSpec
    morphisms: list = field(default_factory=list)    # MorphismSpec
    instance: dict = field(default_factory=dict)


# --------------------------------------------------------------------------
# scalars and matrices


def parse_scalar(tok: str) -> Fraction | int:
    tok = tok.strip()
    try:
        x = Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"bad scalar {tok!r}")
    return x.numerator if x.denominator == 1 else x


def format_scalar(x) -> str:
    return str(x)


def parse_matrix(text: str) -> tuple:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ConfigError(f"bad matrix {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return ()
    rows = re.findall(r"\[([^\[\]]*)\]", inner)
    rest = re.sub(r"\[[^\[\]]*\]", "", inner).replace(",", "").strip()
    if rest:
        raise ConfigError(f"bad matrix {text!r}")
    out = []
    for r in rows:
        r = r.strip()
        out.append(tuple(parse_scalar(t) for t in r.split(",")) if r else ())
    if len({len(r) for r in out}) > 1:
        raise ConfigError(f"ragged matrix {text!r}")
    return tuple(out)


def format_matrix(rows) -> str:
    return "[" + ", ".join("[" + ", ".join(format_scalar(x) for x in r) + "]" for r in rows) + "]"


# --------------------------------------------------------------------------
# relations


def parse_relation(text: str, labels) -> tuple:
    """``a*b - 2 c*d`` -> ((1, ('a','b')), (-2, ('c','d')))."""
    s = text.replace(" ", "")
    if not s:
        raise ConfigError("empty relation")
    if s[0] not in "+-":
        s = "+" + s
    terms = re.findall(r"([+-])([^+-]+)", s)
    if "".join(a + b for a, b in terms) != s:
        raise ConfigError(f"bad relation {text!r}")
    out = []
    for sign, body in terms:
        m = re.fullmatch(r"((?:\d+(?:/\d+)?)?)(.*)", body)
        coeff_txt, word = m.group(1), m.group(2)
        # labels start with a letter, so a leading number is always the coefficient
        coeff = parse_scalar(coeff_txt) if coeff_txt else 1
        if sign == "-":
            coeff = -coeff
        word = word.lstrip("*")
        path = tuple(word.split("*")) if word else ()
        for lab in path:
            if lab not in labels:
                raise ConfigError(f"relation {text!r} uses unknown arrow {lab!r}")
        if not path:
            raise ConfigError(f"relation {text!r} has a term without a path")
        out.append((coeff, path))
    return tuple(out)


def format_relation(rel) -> str:
    parts = []
    for i, (c, path) in enumerate(rel):
        word = "*".join(path)
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        body = word if mag == 1 else f"{format_scalar(mag)} {word}"
        if i == 0:
            parts.append(("-" if sign == "-" else "") + body)
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


# --------------------------------------------------------------------------
# parsing


def _norm_expr(expr: str) -> str:
    expr = expr.strip()
    if "+" in expr and "(" not in expr:
        return " + ".join(p.strip() for p in expr.split("+"))
    m = re.fullmatch(r"(\w+)\s*\((.*)\)", expr)
    if m:
        args = [a.strip() for a in m.group(2).split(",")] if m.group(2).strip() else []
        return f"{m.group(1)}({', '.join(args)})"
    return expr


def parse(text: str) -> Config:
    cfg = Config()
    section = None
    seen = set()
    mods: dict = {}
    mod_order: list = []
    mor: dict = {}
    mor_order: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"line {lineno}"
        m = re.fullmatch(r"\[(\w+)\]", line)
        if m:
            section = m.group(1)
            if section not in SECTIONS:
                raise ConfigError(f"{where}: unknown section [{section}]")
            if section in seen:
                raise ConfigError(f"{where}: duplicate section [{section}]")
            seen.add(section)
            continue
        if section is None:
            raise ConfigError(f"{where}: content outside a section")
        try:
            if section == "session":
                _parse_session(cfg, line)
            elif section == "quiver":
                _parse_quiver(cfg, line)
            elif section == "relations":
                cfg.relations.append(parse_relation(line, {a[0] for a in cfg.arrows}))
            elif section == "modules":
                _parse_module_line(line, mods, mod_order, {a[0] for a in cfg.arrows})
            elif section == "morphisms":
                _parse_morphism_line(line, mor, mor_order)
            elif section == "instance":
                _parse_instance(cfg, line)
        except ConfigError as e:
            raise ConfigError(f"{where}: {e}") from None
    cfg.modules = [_freeze_module(mods[n]) for n in mod_order]
    cfg.morphisms = [_freeze_morphism(mor[n]) for n in mor_order]
    return cfg


def _kv(line):
    if "=" not in line:
        raise ConfigError(f"expected key = value, got {line!r}")
    k, v = line.split("=", 1)
    return k.strip(), v.strip().strip('"')


def _parse_session(cfg, line):
    k, v = _kv(line)
    if k not in SESSION_KEYS:
        raise ConfigError(f"unknown session key {k!r}")
    if k == "field":
        if v not in ("rational", "Q", "QQ"):
            try:
                p = int(v)
            except ValueError:
                raise ConfigError(f"field must be 'rational' or a prime, got {v!r}")
            from .matrix import PrimeField
            try:
                PrimeField(p)
            except ValueError as e:
                raise ConfigError(str(e))
            v = str(p)
        else:
            v = "rational"
        cfg.session[k] = v
        return
    try:
        n = int(v, 0)
    except ValueError:
        raise ConfigError(f"{k} must be an integer")
    if k != "seed" and n < 1:
        raise ConfigError(f"{k} must be >= 1")
    cfg.session[k] = n


def _parse_quiver(cfg, line):
    m = re.fullmatch(r"vertices\s*=\s*(\d+)", line)
    if m:
        cfg.vertices = int(m.group(1))
        return
    m = re.fullmatch(rf"({_NAME})\s*:\s*(\d+)\s*->\s*(\d+)", line)
    if not m:
        raise ConfigError(f"bad quiver line {line!r}")
    lab, s, t = m.group(1), int(m.group(2)), int(m.group(3))
    if not (s < cfg.vertices and t < cfg.vertices):
        raise ConfigError(f"arrow {lab} has endpoint out of range")
    if any(a[0] == lab for a in cfg.arrows):
        raise ConfigError(f"duplicate arrow {lab}")
    cfg.arrows.append((lab, s, t))


def _parse_module_line(line, mods, order, labels):
    m = re.fullmatch(rf"({_NAME})\.({_NAME})\s*=\s*(.+)", line)
    if m:
        name, lab, mat = m.groups()
        if name not in mods or mods[name]["dims"] is None:
            raise ConfigError(f"arrow matrix for undeclared explicit module {name}")
        if lab not in labels:
            raise ConfigError(f"unknown arrow {lab!r} for module {name}")
        mods[name]["maps"][lab] = parse_matrix(mat)
        return
    m = re.fullmatch(rf"({_NAME})\s*=\s*(.+)", line)
    if not m:
        raise ConfigError(f"bad module line {line!r}")
    name, rhs = m.groups()
    if name in mods:
        raise ConfigError(f"duplicate module {name}")
    order.append(name)
    d = re.fullmatch(r"dims\s*\(([^)]*)\)", rhs)
    if d:
        dims = tuple(int(x) for x in d.group(1).replace(",", " ").split())
        mods[name] = {"name": name, "dims": dims, "maps": {}, "expr": None}
    else:
        mods[name] = {"name": name, "dims": None, "maps": {}, "expr": _norm_expr(rhs)}


def _parse_morphism_line(line, mor, order):
    m = re.fullmatch(rf"({_NAME})@(\d+)\s*=\s*(.+)", line)
    if m:
        name, v, mat = m.groups()
        if name not in mor or mor[name]["source"] is None:
            raise ConfigError(f"vertex matrix for undeclared explicit morphism {name}")
        mor[name]["maps"][int(v)] = parse_matrix(mat)
        return
    m = re.fullmatch(rf"({_NAME})\s*=\s*(.+)", line)
    if not m:
        raise ConfigError(f"bad morphism line {line!r}")
    name, rhs = m.groups()
    if name in mor:
        raise ConfigError(f"duplicate morphism {name}")
    order.append(name)
    e = re.fullmatch(rf"({_NAME})\s*->\s*({_NAME})", rhs)
    if e:
        mor[name] = {"name": name, "source": e.group(1), "target": e.group(2), "maps": {},
                     "expr": None}
    else:
        mor[name] = {"name": name, "source": None, "target": None, "maps": {},
                     "expr": _norm_expr(rhs)}


def _parse_instance(cfg, line):
    k, v = _kv(line)
    if k not in INSTANCE_KEYS:
        raise ConfigError(f"unknown instance key {k!r}")
    if k == "test_objects":
        cfg.instance[k] = tuple(x.strip() for x in v.split(",") if x.strip())
        return
    if k in ("kind", "base") and v not in INSTANCE_KINDS:
        raise ConfigError(f"unknown instance kind {v!r}")
    cfg.instance[k] = v


def _freeze_module(d) -> ModuleSpec:
    return ModuleSpec(d["name"], d["expr"], d["dims"], tuple(d["maps"].items()))


def _freeze_morphism(d) -> MorphismSpec:
    return MorphismSpec(d["name"], d["expr"], d["source"], d["target"],
                        tuple(sorted(d["maps"].items())))


# --------------------------------------------------------------------------
# printing


def dump(cfg: Config) -> str:
    out = ["[session]"]
    for k in SESSION_KEYS:
        out.append(f"{k} = {cfg.session.get(k, SESSION_DEFAULTS[k])}")
    out += ["", "[quiver]", f"vertices = {cfg.vertices}"]
    out += [f"{lab}: {s} -> {t}" for lab, s, t in cfg.arrows]
    if cfg.relations:
        out += ["", "[relations]"] + [format_relation(r) for r in cfg.relations]
    if cfg.modules:
        out += ["", "[modules]"]
        for m in cfg.modules:
            if m.expr is not None:
                out.append(f"{m.name} = {m.expr}")
            else:
                out.append(f"{m.name} = dims ({', '.join(str(d) for d in m.dims)})")
                out += [f"{m.name}.{lab} = {format_matrix(rows)}" for lab, rows in m.maps]
    if cfg.morphisms:
        out += ["", "[morphisms]"]
        for f in cfg.morphisms:
            if f.expr is not None:
                out.append(f"{f.name} = {f.expr}")
            else:
                out.append(f"{f.name} = {f.source} -> {f.target}")
                out += [f"{f.name}@{v} = {format_matrix(rows)}" for v, rows in f.maps]
    if cfg.instance:
        out += ["", "[instance]"]
        for k in INSTANCE_KEYS:
            if k in cfg.instance:
                v = cfg.instance[k]
                out.append(f"{k} = {', '.join(v) if k == 'test_objects' else v}")
    return "\n".join(out) + "\n"
