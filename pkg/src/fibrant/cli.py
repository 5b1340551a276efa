"""Command-line front end.

    python -m fibrant.cli --config FILE verify
    python -m fibrant.cli --config FILE classify NAME
    python -m fibrant.cli --config FILE ho-hom X Y
    python -m fibrant.cli --config FILE dual

Exit status: 0 when every check passes, 1 on a failed check, 2 on a
configuration error.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, field
from typing import Optional

from .additive import (add_membership, right_approximation, split_epi_check, split_mono_check)
from .algebra import AlgebraError, AlgebraPresentation, Arrow, Quiver
from .config import Config, ConfigError, dump, parse
from .fwfs import build_sample, derive_structure, verify_fwfs, weq_witness
from .homology import (ResolutionError, injective_indecomposables, projective_indecomposables,
                       regular_module, simple_module)
from .instances import (InstanceError, build_dual_structure, build_injective_w_structure,
                        build_tilting_omega_structure, build_w_structure, relationship_report)
from .matrix import Matrix, field_from_spec
from .modules import (Module, ModuleError, ModuleMorphism, direct_sum, hom_basis, identity,
                      kernel, zero_morphism)
from .quotient import check_weq_quotient_criterion, ho_hom
from .report import AxiomReport, serialize_matrix
from .verifier import (check_correspondence, check_intersections, check_lifting_characterization,
                       check_split_lemma, model_axiom_reports)

EXIT_OK, EXIT_FAIL, EXIT_PARSE = 0, 1, 2


@dataclass
class SessionConfig:
    field: str = "rational"
    seed: int = 0xC0FFEE
    sum_bound: int = 2
    random_per_pair: int = 5
    resolution_bound: int = 8

    def __post_init__(self):
        for k in ("sum_bound", "random_per_pair", "resolution_bound"):
            if getattr(self, k) < 1:
                raise ConfigError(f"{k} must be >= 1")
        field_from_spec(self.field)


@dataclass
class Session:
    config: Config
    settings: SessionConfig
    algebra: AlgebraPresentation
    modules: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    structure: object = None
    sample: object = None


# --------------------------------------------------------------------------
# building


def build_algebra(cfg: Config, fld) -> AlgebraPresentation:
    labels = [a[0] for a in cfg.arrows]
    q = Quiver(cfg.vertices, tuple(Arrow(s, t, lab) for lab, s, t in cfg.arrows))
    rels = tuple(tuple((c, tuple(labels.index(x) for x in path)) for c, path in rel)
                 for rel in cfg.relations)
    return AlgebraPresentation(q, rels, fld)


def _builtin(alg, name):
    m = re.fullmatch(r"([PIS])(\d+)", name)
    if m:
        v = int(m.group(2)) - 1
        if not 0 <= v < alg.vertex_count:
            raise ConfigError(f"{name}: vertex out of range")
        kind = m.group(1)
        if kind == "P":
            return projective_indecomposables(alg)[v]
        if kind == "I":
            return injective_indecomposables(alg)[v]
        return simple_module(alg, v)
    if name == "regular":
        return regular_module(alg).renamed("A")
    if name == "injectives":
        return direct_sum(list(injective_indecomposables(alg)), alg)[0].renamed("I")
    return None


def resolve_module(session: Session, text: str) -> Module:
    text = text.strip()
    if "+" in text:
        parts = [resolve_module(session, p) for p in text.split("+")]
        return direct_sum(parts, session.algebra)[0]
    if text in session.modules:
        return session.modules[text]
    m = _builtin(session.algebra, text)
    if m is None:
        raise ConfigError(f"unknown module {text!r}")
    return m


def _matrix(fld, rows, r, c, what):
    if not rows and r == 0:
        return Matrix.zeros(fld, 0, c)
    if len(rows) != r or any(len(x) != c for x in rows):
        raise ConfigError(f"{what}: expected a {r}x{c} matrix")
    return Matrix.from_rows(fld, rows, c)


def build_session(cfg: Config, field_override: Optional[str] = None,
                  seed_override: Optional[int] = None) -> Session:
    s = dict(cfg.session)
    if field_override is not None:
        s["field"] = field_override
    if seed_override is not None:
        s["seed"] = seed_override
    try:
        settings = SessionConfig(**s)
    except ValueError as e:
        raise ConfigError(str(e))
    fld = field_from_spec(settings.field)
    try:
        alg = build_algebra(cfg, fld)
        alg.check_admissible()
    except AlgebraError as e:
        raise ConfigError(str(e))
    session = Session(cfg, settings, alg)
    labels = [a.label for a in alg.arrows]
    for spec in cfg.modules:
        if spec.expr is not None:
            mod = resolve_module(session, spec.expr).renamed(spec.name)
        else:
            if len(spec.dims) != alg.vertex_count:
                raise ConfigError(f"module {spec.name}: dimension vector has wrong length")
            given = dict(spec.maps)
            maps = []
            for lab, a in zip(labels, alg.arrows):
                r, c = spec.dims[a.target], spec.dims[a.source]
                maps.append(_matrix(fld, given.get(lab, ()), r, c, f"{spec.name}.{lab}")
                            if lab in given else Matrix.zeros(fld, r, c))
            try:
                mod = Module(alg, spec.dims, maps, name=spec.name)
            except ModuleError as e:
                raise ConfigError(str(e))
        session.modules[spec.name] = mod
    for spec in cfg.morphisms:
        session.morphisms[spec.name] = _build_morphism(session, spec)
    _build_instance(session)
    return session


def _build_morphism(session, spec) -> ModuleMorphism:
    fld = session.algebra.field
    if spec.expr is None:
        x, y = resolve_module(session, spec.source), resolve_module(session, spec.target)
        given = dict(spec.maps)
        maps = [_matrix(fld, given[v], y.dims[v], x.dims[v], f"{spec.name}@{v}")
                if v in given else Matrix.zeros(fld, y.dims[v], x.dims[v])
                for v in range(session.algebra.vertex_count)]
        try:
            return ModuleMorphism(x, y, maps)
        except ModuleError as e:
            raise ConfigError(f"morphism {spec.name}: {e}")
    m = re.fullmatch(r"(\w+)\((.*)\)", spec.expr)
    if not m:
        raise ConfigError(f"morphism {spec.name}: cannot read {spec.expr!r}")
    fn, args = m.group(1), [a.strip() for a in m.group(2).split(",")]
    if fn == "id" and len(args) == 1:
        return identity(resolve_module(session, args[0]))
    if fn == "zero" and len(args) == 2:
        return zero_morphism(resolve_module(session, args[0]), resolve_module(session, args[1]))
    if fn == "basis" and len(args) == 3:
        x, y = resolve_module(session, args[0]), resolve_module(session, args[1])
        basis = hom_basis(x, y)
        i = int(args[2])
        if not 0 <= i < len(basis):
            raise ConfigError(f"morphism {spec.name}: Hom has dimension {len(basis)}")
        return basis[i]
    raise ConfigError(f"morphism {spec.name}: cannot read {spec.expr!r}")


def _structure_for(session, kind, gen):
    alg = session.algebra
    if kind == "w":
        if gen is None:
            raise ConfigError("instance kind w needs a generator")
        return build_w_structure(alg, gen)
    if kind == "injective-w":
        return build_injective_w_structure(alg)
    if kind == "tilting-omega":
        if gen is None:
            raise ConfigError("instance kind tilting-omega needs a generator")
        try:
            return build_tilting_omega_structure(alg, gen)
        except InstanceError as e:
            raise ConfigError(str(e))
    raise ConfigError(f"unknown instance kind {kind!r}")


def _build_instance(session: Session) -> None:
    inst = session.config.instance
    if not inst:
        return
    kind = inst.get("kind")
    gen = resolve_module(session, inst["generator"]) if "generator" in inst else None
    tests = [resolve_module(session, n) for n in inst.get("test_objects", ())]
    if kind == "dual":
        base = _structure_for(session, inst.get("base", "w"), gen)
        if "trivial_generator" in inst:
            base.trivial_generator = resolve_module(session, inst["trivial_generator"])
        base.test_objects = tuple(tests)
        s = build_dual_structure(base)
    else:
        s = _structure_for(session, kind, gen)
        if "trivial_generator" in inst:
            s.trivial_generator = resolve_module(session, inst["trivial_generator"])
        s.test_objects = tuple(tests)
    session.structure = s
    st = session.settings
    objs = list(s.test_objects) or [s.generator]
    session.sample = build_sample(objs, s.algebra, generator=s.generator, seed=st.seed,
                                  sum_bound=st.sum_bound, random_per_pair=st.random_per_pair)


# --------------------------------------------------------------------------
# commands


def _header(session) -> list[str]:
    s = session.structure
    return [f"INSTANCE {s.name}",
            f"KIND {s.kind} ({s.meta.get('kind', '?')})",
            f"FIELD {session.algebra.field}",
            f"SEED {session.settings.seed}",
            f"SAMPLE objects={len(session.sample.objects)} morphisms={len(session.sample.morphisms)}"]


def verification_reports(session) -> tuple[list, list]:
    """(axiom reports, extra text lines) for the configured instance."""
    s, smp = session.structure, session.sample
    reports = list(verify_fwfs(s, smp))
    ms = derive_structure(s)
    reports += model_axiom_reports(ms, smp)
    reports += [check_correspondence(s, smp), check_split_lemma(ms, smp), check_intersections(ms, smp)]
    lines = []
    if ms.kind == "fibrant":
        reports += [check_lifting_characterization(ms, smp), check_weq_quotient_criterion(ms, smp)]
        kind = s.meta.get("kind", "?")
        rel = relationship_report(ms, kind, smp)
        lines += rel["lines"]
        r = AxiomReport("relationship-consistency", checked=1)
        if not rel["consistent"]:
            r.fail(report=rel["lines"])
        reports.append(r)
    return reports, lines


def cmd_verify(session, out) -> int:
    reports, lines = verification_reports(session)
    text = _header(session) + [r.text() for r in reports] + lines
    ok = all(r.passed for r in reports)
    text.append(f"RESULT {'PASS' if ok else 'FAIL'}")
    out.write("\n".join(text) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def _fmt(m) -> str:
    return str(serialize_matrix(m))


def cmd_classify(session, name, out) -> int:
    if name not in session.morphisms:
        raise ConfigError(f"unknown morphism {name!r}")
    f = session.morphisms[name]
    ms = derive_structure(session.structure)
    lines = [f"MORPHISM {name}: {f.source.name or '?'} -> {f.target.name or '?'}"]
    for cls in ("cofib", "fib", "weq", "tcofib", "tfib"):
        lines.append(f"  {cls} = {'yes' if getattr(ms, cls).decide(f) else 'no'}")
    lines.append(f"  mono = {'yes' if f.is_mono() else 'no'}  epi = {'yes' if f.is_epi() else 'no'}")
    sm = split_mono_check(f)
    if sm is not None:
        lines.append("  retraction: " + " ".join(_fmt(m) for m in sm.retraction.maps))
    se = split_epi_check(f)
    if se is not None:
        lines.append("  section: " + " ".join(_fmt(m) for m in se.section.maps))
    if ms.kind == "fibrant":
        u = ms.tc_generator
        t = right_approximation(u, f.target, reduced=True)
        d = 0 if t.source.is_zero() else len(t.source.summands()) // len(u.summands())
        lines.append(f"  approximation: {u.name or '?'}^{d} -> {f.target.name or '?'}")
        w = weq_witness(ms.tfib, u, f)
        k = kernel(w)[0]
        lines.append(f"  (f,t) kernel dims = {tuple(k.dims)}; (f,t) in tfib = "
                     f"{'yes' if ms.tfib.decide(w) else 'no'}")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_ho_hom(session, x, y, out) -> int:
    ms = derive_structure(session.structure)
    if ms.kind != "fibrant":
        raise ConfigError("ho-hom needs a fibrant structure")
    mx, my = resolve_module(session, x), resolve_module(session, y)
    q = ho_hom(ms, mx, my)
    lines = [f"HO-HOM {x} {y}", f"  ambient dim = {len(q.ambient_basis)}",
             f"  ideal dim = {len(q.ideal_basis)}", f"  quotient dim = {q.quotient_dim}"]
    for h in q.representatives:
        lines.append("  representative: " + " ".join(_fmt(m) for m in h.maps))
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_dual(session, out) -> int:
    d = build_dual_structure(session.structure)
    smp = session.sample.dualized()
    reports = list(verify_fwfs(d, smp))
    ms = derive_structure(d)
    reports += model_axiom_reports(ms, smp)
    reports += [check_correspondence(d, smp), check_split_lemma(ms, smp), check_intersections(ms, smp)]
    dd = build_dual_structure(d)
    inv = AxiomReport("double-dual")
    for f in session.sample.morphisms:
        inv.tick()
        s = session.structure
        if dd.left.decide(f) != s.left.decide(f) or dd.right.decide(f) != s.right.decide(f):
            inv.fail(morphism=f)
    reports.append(inv)
    ok = all(r.passed for r in reports)
    text = [f"DUAL OF {session.structure.name}", f"KIND {d.kind}"]
    text += [r.text() for r in reports] + [f"RESULT {'PASS' if ok else 'FAIL'}"]
    out.write("\n".join(text) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fibrant", description=__doc__.split("\n\n")[0])
    p.add_argument("--config", required=True, help="configuration file")
    p.add_argument("--seed", type=int, help="override the sampling seed")
    p.add_argument("--field", help="'rational' or a prime p")
    p.add_argument("--report", help="write the report to this path")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("verify")
    c = sub.add_parser("classify")
    c.add_argument("name")
    h = sub.add_parser("ho-hom")
    h.add_argument("x")
    h.add_argument("y")
    sub.add_parser("dual")
    sub.add_parser("print")
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    out = sys.stdout
    try:
        with open(args.config) as fh:
            cfg = parse(fh.read())
        if args.command == "print":
            out.write(dump(cfg))
            return EXIT_OK
        session = build_session(cfg, args.field, args.seed)
        if session.structure is None:
            raise ConfigError("configuration has no [instance] section")
        import io
        buf = io.StringIO()
        if args.command == "verify":
            code = cmd_verify(session, buf)
        elif args.command == "classify":
            code = cmd_classify(session, args.name, buf)
        elif args.command == "ho-hom":
            code = cmd_ho_hom(session, args.x, args.y, buf)
        else:
            code = cmd_dual(session, buf)
    except (ConfigError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except ResolutionError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL
    text = buf.getvalue()
    out.write(text)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
