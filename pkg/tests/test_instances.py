import pytest
from hypothesis import given, settings, strategies as st

from fibrant.additive import add_membership, is_split_epi
from fibrant.algebra import AlgebraPresentation, Arrow, Quiver
from fibrant.fwfs import build_sample, derive_structure, verify_fwfs
from fibrant.homology import (ext_dim, injective_indecomposables, projective_indecomposables,
                              regular_module, simple_module)
from fibrant.instances import (InstanceError, build_dual_structure, build_injective_w_structure,
                               build_tilting_omega_structure, build_w_structure,
                               injective_generator, probe_objects, relationship_report,
                               tilting_check)
from fibrant.modules import (cokernel, direct_sum, dualize, hom_basis, identity, kernel,
                             zero_module, zero_morphism)
from fibrant.verifier import model_axiom_reports


def test_w_structure_zero_generator(kA2):
    alg = kA2["alg"]
    ms = derive_structure(build_w_structure(alg, zero_module(alg)))
    top = hom_basis(kA2["P1"], kA2["S1"])[0]
    soc = hom_basis(kA2["S2"], kA2["P1"])[0]
    for f in (top, soc):
        assert ms.cofib.decide(f)
        assert not ms.tfib.decide(f) and not ms.weq.decide(f)
    assert ms.weq.decide(identity(kA2["T"])) and ms.tfib.decide(identity(kA2["T"]))


def test_w_structure_frobenius(frob, frob_w):
    assert add_membership(injective_generator(frob["alg"]), frob["A"])
    ms = frob_w["ms"]
    assert ms.trivial(frob["A"]) and not ms.trivial(frob["k"])


def test_w_structure_non_injective_generator(kA2):
    s = build_w_structure(kA2["alg"], kA2["P1"])
    sample = build_sample([kA2["P1"], kA2["S1"], kA2["S2"]], s.algebra, generator=s.generator,
                          sum_bound=1, min_morphisms=60)
    assert all(r.passed for r in verify_fwfs(s, sample))
    ms = derive_structure(s)
    assert ms.trivial(kA2["P1"]) and not ms.trivial(kA2["P2"])


def test_injective_w_generator(kA2, inj_w):
    u = inj_w["s"].generator
    assert add_membership(direct_sum([kA2["S1"], kA2["P1"]])[0], u)
    assert add_membership(u, direct_sum([kA2["S1"], kA2["P1"]])[0])


def test_self_injective_comparison(frob):
    a = frob["alg"]
    inj = build_injective_w_structure(a).generator
    assert add_membership(inj, frob["A"]) and add_membership(frob["A"], inj)


def test_semisimple_everything_trivial():
    alg = AlgebraPresentation(Quiver(2, ()))
    ms = derive_structure(build_injective_w_structure(alg))
    s1, s2 = simple_module(alg, 0), simple_module(alg, 1)
    for m in (s1, s2):
        assert ms.trivial(m)
    assert ms.weq.decide(zero_morphism(s1, s2))
    assert ms.weq.decide(zero_morphism(s1, s1))


def test_tilting_classes(kA2, tilt):
    omega = tilt["s"].meta["omega"]
    y = omega.y_class
    assert y(kA2["P1"]) and y(kA2["S1"]) and not y(kA2["S2"])
    for m in ("P1", "P2", "S1", "S2"):
        assert omega.x_class(kA2[m])
    assert ext_dim(1, kA2["S1"], kA2["S2"]) == 1


def test_tilting_oracles(kA2, tilt):
    omega = tilt["s"].meta["omega"]
    for m in ("P1", "P2", "S1", "S2", "T"):
        j = omega.preenvelope_oracle(kA2[m])
        assert j.is_mono() and omega.y_class(j.target) and omega.x_class(cokernel(j)[0])
        p = omega.precover_oracle(kA2[m])
        assert p.is_epi() and omega.x_class(p.source) and omega.y_class(kernel(p)[0])


def test_non_tilting_raises(kA2):
    assert tilting_check(kA2["alg"], kA2["S2"])
    with pytest.raises(InstanceError, match="not tilting"):
        build_tilting_omega_structure(kA2["alg"], kA2["S2"])
    with pytest.raises(InstanceError):
        build_tilting_omega_structure(kA2["alg"], kA2["S1"])


def test_non_hereditary_raises(frob):
    with pytest.raises(InstanceError, match="hereditary"):
        build_tilting_omega_structure(frob["alg"], frob["A"])


def test_regular_module_is_tilting(kA2):
    alg = kA2["alg"]
    s = build_tilting_omega_structure(alg, regular_module(alg))
    ms = derive_structure(s)
    # projective cotorsion pair: cofibrant = projectives, everything trivial
    assert ms.cofibrant(kA2["P1"]) and ms.cofibrant(kA2["P2"])
    assert not ms.cofibrant(kA2["S1"])
    for m in ("P1", "S1", "S2"):
        assert ms.trivial(kA2[m])


def test_relationship_frobenius(frob_w):
    r = relationship_report(frob_w["ms"], "w", frob_w["sample"])
    assert r["frobenius"] and r["cofib_equals_monos"] and r["fib_equals_epis"]
    assert r["omega_equals_projectives"] and r["trivial_equals_injectives"]
    assert r["consistent"]


def test_relationship_injective_w(inj_w):
    r = relationship_report(inj_w["ms"], "injective-w", inj_w["sample"])
    assert ("S1", "S2", 1) in r["ext_witnesses"]
    assert not r["exact"] and not r["frobenius"]
    assert r["cofib_equals_monos"] and r["trivial_equals_injectives"]
    assert r["consistent"]
    assert "  (injectives, mod A) is not a cotorsion pair" in r["lines"]


def test_relationship_tilting(tilt):
    r = relationship_report(tilt["ms"], "tilting-omega", tilt["sample"])
    assert not r["omega_equals_projectives"] and not r["exact"]
    assert r["all_cofibrant"] and r["consistent"]


def test_dual_of_frobenius(frob, frob_w):
    d = build_dual_structure(frob_w["s"])
    assert d.kind == "cofibrant" and d.algebra == frob["alg"]
    ms, dms = frob_w["ms"], derive_structure(d)
    # the algebra is self-dual, so the two structures agree up to transport
    for f in frob_w["sample"].morphisms[:120]:
        g = dualize(f)
        assert dms.cofib.decide(g) == ms.fib.decide(f)
        assert dms.fib.decide(g) == ms.cofib.decide(f)
        assert dms.weq.decide(g) == ms.weq.decide(f)


def test_dual_of_injective_w(kA2, inj_w):
    d = build_dual_structure(inj_w["s"])
    op = kA2["alg"].opposite()
    projs = direct_sum(list(projective_indecomposables(op)))[0]
    assert add_membership(d.generator, projs) and add_membership(projs, d.generator)
    sample = inj_w["sample"].dualized()
    reports = verify_fwfs(d, sample)
    assert [r.axiom for r in reports][-2:] == ["left-cancellation", "covariant-finiteness"]
    assert all(r.passed for r in reports)
    assert all(r.passed for r in model_axiom_reports(derive_structure(d), sample))


def test_double_dual(tilt):
    dd = build_dual_structure(build_dual_structure(tilt["s"]))
    assert dd.kind == "fibrant" and dd.algebra == tilt["s"].algebra
    for f in tilt["sample"].morphisms[:150]:
        assert dd.left.decide(f) == tilt["s"].left.decide(f)
        assert dd.right.decide(f) == tilt["s"].right.decide(f)


def test_probe_objects(kA2):
    probe = probe_objects(kA2["alg"])
    # P1 = I2, S1 = I1 and S2 = P2 collapse
    assert sorted(m.dims for m in probe) == [(0, 1), (1, 0), (1, 1)]
    assert len(set(probe)) == len(probe)


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_cotorsion_orthogonality(tilt, data):
    omega = tilt["s"].meta["omega"]
    objs = [m for m in tilt["sample"].objects if not m.is_zero()]
    x = data.draw(st.sampled_from([m for m in objs if omega.x_class(m)]))
    y = data.draw(st.sampled_from([m for m in objs if omega.y_class(m)]))
    assert ext_dim(1, x, y) == 0


@settings(max_examples=20, deadline=None)
@given(st.data())
def test_w_instance_every_object_bifibrant(frob_w, data):
    ms = frob_w["ms"]
    m = data.draw(st.sampled_from(frob_w["sample"].objects))
    assert ms.cofibrant(m) and ms.fibrant(m)
    assert ms.trivial(m) == add_membership(m, ms.tc_generator)
