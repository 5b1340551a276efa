"""Sample-based checks of the model-structure axioms and derived identities."""

from __future__ import annotations

from .additive import co_hom_epic_check, hom_epic_check, is_split_epi, is_split_mono
from .fwfs import (FWFS, CWFS, ModelStructure, MorphismClass, Sample, _derive_fibrant,
                   _derive_cofibrant, accept_all, generated_retracts, lifting_holds, reject_all,
                   weq_witness)
from .modules import from_zero, identity, to_zero
from .report import AxiomReport

CLASS_NAMES = ("cofib", "fib", "weq", "tcofib", "tfib")


def check_two_out_of_three(ms: ModelStructure, sample: Sample) -> AxiomReport:
    rep = AxiomReport("two-out-of-three")
    weq = ms.weq.decide
    for f, g in sample.composable_pairs(salt="2of3"):
        rep.tick()
        vals = (weq(f), weq(g), weq(g @ f))
        if sum(vals) == 2:
            rep.fail(first=f, second=g, weq=list(vals))
    return rep


def _trivial_left(ms, f):
    return ms.tcofib.decide(f) or (ms.cofib.decide(f) and ms.weq.decide(f))


def _trivial_right(ms, f):
    return ms.tfib.decide(f) or (ms.fib.decide(f) and ms.weq.decide(f))


def check_lifting_axiom(ms: ModelStructure, sample: Sample) -> list[AxiomReport]:
    """Two records: trivial cofibrations against fibrations and cofibrations
    against trivial fibrations. A morphism counts as trivial when either the
    trivial class or the intersection with Weq accepts it."""
    out = []
    morphs = sample.morphisms
    cof = [f for f in morphs if ms.cofib.decide(f) or ms.tcofib.decide(f)]
    fib = [f for f in morphs if ms.fib.decide(f) or ms.tfib.decide(f)]
    specs = (
        ("lifting(trivial-cofibration, fibration)",
         [f for f in cof if _trivial_left(ms, f)], fib),
        ("lifting(cofibration, trivial-fibration)",
         cof, [f for f in fib if _trivial_right(ms, f)]),
    )
    for name, ls, rs in specs:
        rep = AxiomReport(name)
        for l, r in sample.pairs(ls, rs, salt=name):
            rep.tick()
            ok, square = lifting_holds(l, r)
            if not ok:
                rep.fail(left=l, right=r, square=None if square is None else {
                    "top": square.top, "bottom": square.bottom})
        out.append(rep)
    return out


def check_retract_axiom(ms: ModelStructure, sample: Sample) -> AxiomReport:
    rep = AxiomReport("model-retract")
    classes = (("cofib", ms.cofib), ("fib", ms.fib), ("weq", ms.weq))
    for g, f, *_ in generated_retracts(sample):
        for name, cls in classes:
            rep.tick()
            if cls.decide(f) and not cls.decide(g):
                rep.fail(cls=name, retract=g, morphism=f)
    return rep


def check_factorization_axiom(ms: ModelStructure, sample: Sample) -> AxiomReport:
    rep = AxiomReport("model-factorization")
    for f in sample.morphisms:
        rep.tick()
        j, q = ms.factor_tcofib_fib(f)
        if (q @ j != f or not ms.tcofib.decide(j) or not ms.cofib.decide(j)
                or not ms.weq.decide(j) or not ms.fib.decide(q)):
            rep.fail(kind="tcofib-fib", morphism=f, first=j, second=q)
        j, q = ms.factor_cofib_tfib(f)
        if (q @ j != f or not ms.cofib.decide(j) or not ms.tfib.decide(q)
                or not ms.fib.decide(q) or not ms.weq.decide(q)):
            rep.fail(kind="cofib-tfib", morphism=f, first=j, second=q)
    return rep


def model_axiom_reports(ms: ModelStructure, sample: Sample) -> list[AxiomReport]:
    return [check_two_out_of_three(ms, sample), *check_lifting_axiom(ms, sample),
            check_retract_axiom(ms, sample), check_factorization_axiom(ms, sample)]


def extract_system(ms: ModelStructure):
    """The weak factorization system underlying a model structure."""
    if ms.kind == "fibrant":
        tfib = MorphismClass(lambda f: ms.fib.decide(f) and ms.weq.decide(f), "Fib∩Weq")
        return FWFS(ms.cofib, tfib, ms.tc_generator, ms.factor_cofib_tfib,
                    algebra=ms.algebra, trivial_generator=ms.tf_generator)
    tcofib = MorphismClass(lambda f: ms.cofib.decide(f) and ms.weq.decide(f), "CoFib∩Weq")
    return CWFS(tcofib, ms.fib, ms.tf_generator, ms.factor_tcofib_fib,
                algebra=ms.algebra, trivial_generator=ms.tc_generator)


def check_correspondence(s, sample: Sample) -> AxiomReport:
    """Both round trips between systems and model structures, extensionally."""
    from .fwfs import derive_structure
    rep = AxiomReport("correspondence")
    ms = derive_structure(s)
    back = extract_system(ms)
    again = derive_structure(back)
    for f in sample.morphisms:
        rep.tick()
        if back.left.decide(f) != s.left.decide(f) or back.right.decide(f) != s.right.decide(f):
            rep.fail(direction="system->structure->system", morphism=f)
        for name in ("cofib", "fib", "weq", "tcofib", "tfib"):
            if getattr(again, name).decide(f) != getattr(ms, name).decide(f):
                rep.fail(direction="structure->system->structure", cls=name, morphism=f)
    return rep


def check_split_lemma(ms: ModelStructure, sample: Sample) -> AxiomReport:
    rep = AxiomReport("split-lemma")
    tf, tc = ms.tf_generator, ms.tc_generator
    if tf is None:
        rep.notes.append("no generator for trivially fibrant objects; part (1) skipped")
    if tc is None:
        rep.notes.append("no generator for trivially cofibrant objects; part (2) skipped")
    for f in sample.morphisms:
        if ms.cofib.decide(f) and tf is not None:
            rep.tick()
            if not co_hom_epic_check(f, tf):
                rep.fail(part=1, morphism=f)
        if ms.fib.decide(f) and tc is not None:
            rep.tick()
            if not hom_epic_check(tc, f):
                rep.fail(part=2, morphism=f)
        if ms.tcofib.decide(f) and ms.fibrant.contains(f.source):
            rep.tick()
            if not is_split_mono(f):
                rep.fail(part=3, morphism=f)
        if ms.tfib.decide(f) and ms.cofibrant.contains(f.target):
            rep.tick()
            if not is_split_epi(f):
                rep.fail(part=4, morphism=f)
    return rep


def check_intersections(ms: ModelStructure, sample: Sample) -> AxiomReport:
    """TCoFib = CoFib ∩ Weq and TFib = Fib ∩ Weq on the sample."""
    rep = AxiomReport("trivial-intersections")
    for f in sample.morphisms:
        rep.tick()
        if ms.tcofib.decide(f) != (ms.cofib.decide(f) and ms.weq.decide(f)):
            rep.fail(identity="TCoFib=CoFib∩Weq", morphism=f)
        if ms.tfib.decide(f) != (ms.fib.decide(f) and ms.weq.decide(f)):
            rep.fail(identity="TFib=Fib∩Weq", morphism=f)
    return rep


def check_lifting_characterization(ms: ModelStructure, sample: Sample) -> AxiomReport:
    """Fib = RLP(TCoFib) and TCoFib = LLP(Fib) on the sample (fibrant case).

    Witness families: the sampled trivial cofibrations plus 0 -> U for the
    generator U; the sampled fibrations plus A -> 0 and the (f, t) map built
    from the morphism itself.
    """
    rep = AxiomReport("lifting-characterization")
    if ms.kind != "fibrant":
        rep.notes.append("cofibrant structure: checked through its dual")
        return rep
    u = ms.tc_generator
    tcofibs = [f for f in sample.morphisms if ms.tcofib.decide(f)]
    fibs = [f for f in sample.morphisms if ms.fib.decide(f)]
    rng = sample.rng("rlp")
    k = 12
    for f in sample.morphisms:
        rep.tick()
        family = [from_zero(u)] + (rng.sample(tcofibs, k) if len(tcofibs) > k else tcofibs)
        rlp = all(lifting_holds(l, f)[0] for l in family)
        if rlp != ms.fib.decide(f):
            rep.fail(cls="fib", morphism=f, rlp=rlp)
        family = [to_zero(f.source), weq_witness(ms.tfib, u, f)] + (
            rng.sample(fibs, k) if len(fibs) > k else fibs)
        llp = all(lifting_holds(f, r)[0] for r in family)
        if llp != ms.tcofib.decide(f):
            rep.fail(cls="tcofib", morphism=f, llp=llp)
    return rep


def check_weq_sum_invariance(ms: ModelStructure, sample: Sample, budget: int = 60) -> AxiomReport:
    from .modules import direct_sum_morphism
    rep = AxiomReport("weq-sum-invariance")
    objs = [m for m in sample.objects if not m.is_zero()][:3]
    for f in sample.morphisms[:budget]:
        for m in objs:
            rep.tick()
            if ms.weq.decide(f) != ms.weq.decide(direct_sum_morphism([f, identity(m)])):
                rep.fail(morphism=f, summand=m)
    return rep


# --------------------------------------------------------------------------
# mutation sensitivity


def mutate(ms: ModelStructure, name: str, mode: str) -> ModelStructure:
    """A copy with one class decider replaced by accept-all or reject-all."""
    if name not in CLASS_NAMES:
        raise ValueError(f"unknown class {name}")
    if mode == "accept":
        cls = accept_all(f"corrupted {name}")
    elif mode == "reject":
        cls = reject_all(f"corrupted {name}")
    else:
        raise ValueError(f"unknown mutation {mode}")
    return ms.replace(**{name: cls})


def mutation_reports(ms: ModelStructure, sample: Sample) -> dict:
    """(class, mode) -> list of failing axiom names."""
    out = {}
    for name in CLASS_NAMES:
        for mode in ("accept", "reject"):
            m = mutate(ms, name, mode)
            out[name, mode] = [r.axiom for r in model_axiom_reports(m, sample) if not r.passed]
    return out
