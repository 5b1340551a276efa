import os

import pytest

from fibrant.cli import EXIT_FAIL, EXIT_OK, EXIT_PARSE, main
from fibrant.config import dump, parse

from conftest import CONFIGS

SHIPPED = sorted(f for f in os.listdir(CONFIGS) if f.endswith(".cfg"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_shipped_configs_exist():
    assert {"frobenius.cfg", "tilting_a2.cfg", "injective_a2.cfg",
            "dual_injective_a2.cfg"} <= set(SHIPPED)


@pytest.mark.parametrize("name", SHIPPED)
def test_round_trip(name):
    with open(os.path.join(CONFIGS, name)) as fh:
        cfg = parse(fh.read())
    text = dump(cfg)
    again = parse(text)
    assert again == cfg
    assert dump(again) == text


def test_print_command(capsys, config_path):
    code, out, _ = run(capsys, "--config", config_path("frobenius.cfg"), "print")
    assert code == EXIT_OK and "[instance]" in out


@pytest.mark.parametrize("name", ["frobenius.cfg", "tilting_a2.cfg"])
def test_verify_exit_zero_and_deterministic(capsys, config_path, name, tmp_path):
    report = tmp_path / "r.txt"
    code, out, _ = run(capsys, "--config", config_path(name), "--report", str(report), "verify")
    assert code == EXIT_OK, out
    assert "FAIL" not in out and "RESULT PASS" in out
    assert report.read_text() == out
    code2, out2, _ = run(capsys, "--config", config_path(name), "verify")
    assert out2.encode() == out.encode()


def test_seed_override_changes_header(capsys, config_path):
    code, out, _ = run(capsys, "--config", config_path("frobenius.cfg"), "--seed", "7", "verify")
    assert code == EXIT_OK and "SEED 7" in out


def test_prime_field(capsys, config_path):
    code, out, _ = run(capsys, "--config", config_path("frobenius.cfg"), "--field", "5",
                       "ho-hom", "k", "k")
    assert code == EXIT_OK and "quotient dim = 1" in out


def test_classify_identity(capsys, config_path):
    code, out, _ = run(capsys, "--config", config_path("frobenius.cfg"), "classify", "id_k")
    assert code == EXIT_OK
    for cls in ("cofib", "fib", "weq", "tcofib", "tfib"):
        assert f"  {cls} = yes" in out


def test_classify_top_map_tilting(capsys, config_path):
    code, out, _ = run(capsys, "--config", config_path("tilting_a2.cfg"), "classify", "top")
    assert code == EXIT_OK
    assert "  weq = yes" in out and "  cofib = no" in out
    # Hom(T, P1) -> Hom(T, S1) is not onto: S1 is a summand of T with no map to P1
    assert "  fib = no" in out


def test_classify_zero_frobenius(capsys, config_path):
    code, out, _ = run(capsys, "--config", config_path("frobenius.cfg"), "classify", "zero_k")
    assert code == EXIT_OK and "  weq = no" in out


@pytest.mark.parametrize("cfg,x,y,dim", [
    ("tilting_a2.cfg", "S2", "S2", 1),
    ("tilting_a2.cfg", "P1", "S2", 0),
    ("frobenius.cfg", "k", "k", 1),
])
def test_ho_hom(capsys, config_path, cfg, x, y, dim):
    code, out, _ = run(capsys, "--config", config_path(cfg), "ho-hom", x, y)
    assert code == EXIT_OK and f"quotient dim = {dim}" in out


def test_dual(capsys, config_path):
    code, out, _ = run(capsys, "--config", config_path("injective_a2.cfg"), "dual")
    assert code == EXIT_OK, out
    assert "left-cancellation PASS" in out


def test_dual_config_verifies(capsys, config_path):
    code, out, _ = run(capsys, "--config", config_path("dual_injective_a2.cfg"), "verify")
    assert code == EXIT_OK, out
    assert "KIND cofibrant" in out


def test_relation_violation_exit_2(capsys, config_path, tmp_path):
    text = open(config_path("frobenius.cfg")).read().replace(
        "k = S1", "k = dims (1)\nk.x = [[1]]")
    bad = tmp_path / "bad.cfg"
    bad.write_text(text)
    code, _, err = run(capsys, "--config", str(bad), "verify")
    assert code == EXIT_PARSE and "x*x" in err


def test_parse_errors_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("[quiver]\nvertices = two\n")
    code, _, err = run(capsys, "--config", str(bad), "verify")
    assert code == EXIT_PARSE and "line 2" in err
    code, _, err = run(capsys, "--config", str(tmp_path / "missing.cfg"), "verify")
    assert code == EXIT_PARSE


def test_unknown_names_exit_2(capsys, config_path):
    code, _, err = run(capsys, "--config", config_path("tilting_a2.cfg"), "classify", "nope")
    assert code == EXIT_PARSE and "nope" in err
    code, _, err = run(capsys, "--config", config_path("tilting_a2.cfg"), "ho-hom", "Q", "S2")
    assert code == EXIT_PARSE


def test_non_tilting_config_exit_2(capsys, config_path, tmp_path):
    text = open(config_path("tilting_a2.cfg")).read().replace("generator = T", "generator = S2")
    bad = tmp_path / "bad.cfg"
    bad.write_text(text)
    code, _, err = run(capsys, "--config", str(bad), "verify")
    assert code == EXIT_PARSE and "tilting" in err


def test_exit_codes_distinct():
    assert (EXIT_OK, EXIT_FAIL, EXIT_PARSE) == (0, 1, 2)


def test_missing_instance_exit_2(capsys, tmp_path):
    cfg = tmp_path / "plain.cfg"
    cfg.write_text("[quiver]\nvertices = 2\na: 0 -> 1\n\n[modules]\nM = dims (1, 1)\nM.a = [[1]]\n")
    for cmd in (["verify"], ["ho-hom", "M", "M"], ["classify", "x"], ["dual"]):
        code, _, err = run(capsys, "--config", str(cfg), *cmd)
        assert code == EXIT_PARSE and "instance" in err
    code, out, _ = run(capsys, "--config", str(cfg), "print")
    assert code == EXIT_OK and "M.a = [[1]]" in out
