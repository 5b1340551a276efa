import os
import sys

import pytest

from fibrant.algebra import AlgebraPresentation, Arrow, Quiver
from fibrant.homology import projective_indecomposables, regular_module, simple_module
from fibrant.modules import direct_sum

sys.path.insert(0, os.path.dirname(__file__))

CONFIGS = os.path.join(os.path.dirname(os.path.dirname(__file__)), "configs")


def a2():
    return AlgebraPresentation(Quiver(2, (Arrow(0, 1, "a"),)))


def dual_numbers():
    return AlgebraPresentation(Quiver(1, (Arrow(0, 0, "x"),)), (((1, (0, 0)),),))


@pytest.fixture(scope="session")
def kA2():
    alg = a2()
    p1, p2 = projective_indecomposables(alg)
    s1, s2 = simple_module(alg, 0), simple_module(alg, 1)
    t = direct_sum([p1, s1])[0].renamed("T")
    return {"alg": alg, "P1": p1, "P2": p2, "S1": s1, "S2": s2, "T": t}


@pytest.fixture(scope="session")
def frob():
    alg = dual_numbers()
    return {"alg": alg, "A": regular_module(alg).renamed("A"), "k": simple_module(alg, 0).renamed("k")}


@pytest.fixture
def config_path():
    return lambda name: os.path.join(CONFIGS, name)


def _bundle(s, tests):
    from fibrant.fwfs import build_sample, derive_structure
    sample = build_sample(tests, s.algebra, generator=s.generator)
    return {"s": s, "ms": derive_structure(s), "sample": sample}


@pytest.fixture(scope="session")
def frob_w(frob):
    from fibrant.instances import build_w_structure
    return _bundle(build_w_structure(frob["alg"], frob["A"]), [frob["k"], frob["A"]])


@pytest.fixture(scope="session")
def tilt(kA2):
    from fibrant.instances import build_tilting_omega_structure
    s = build_tilting_omega_structure(kA2["alg"], kA2["T"])
    return _bundle(s, [kA2["P1"], kA2["S1"], kA2["S2"]])


@pytest.fixture(scope="session")
def inj_w(kA2):
    from fibrant.instances import build_injective_w_structure
    s = build_injective_w_structure(kA2["alg"])
    return _bundle(s, [kA2["P1"], kA2["S1"], kA2["S2"]])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
