import json
import subprocess
import sys

import pytest

from signlab.cli import GRAMMAR_HELP, main, parse_params
from signlab.errors import SignLabError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -------------------------------------------------------------- exit codes


def test_verify_falsified_exits_two(capsys):
    code, out, _ = run(capsys, "verify", "--fn", "builtin:power-sign:1:2", "--n", "3")
    doc = json.loads(out)
    assert code == 2 and doc["outcome"] == "Falsified" and doc["schemaVersion"] == 1
    assert doc["witness"]["strategy"] == "beta-gate"


def test_verify_preserver_exits_zero(capsys):
    code, out, _ = run(capsys, "verify", "--fn", "builtin:scaled-identity:2", "--n", "3",
                       "--budget", "5000")
    assert code == 0 and json.loads(out)["outcome"] == "NotFalsified"


def test_input_error_exits_one(capsys):
    code, out, err = run(capsys, "verify", "--fn", "z +* 1")
    assert code == 1 and out == "" and "error" in err
    for bad in ("annulus:x:2", "interval:1", "disc"):
        code, _, err = run(capsys, "verify", "--fn", "z", "--domain", bad)
        assert code == 1 and "error" in err


def test_bad_flag_prints_grammar(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--bogus"])
    assert exc.value.code == 1
    assert GRAMMAR_HELP in capsys.readouterr().err


def test_sorted_keys_and_byte_identical_output(capsys):
    argv = ["verify", "--fn", "re(z) + 1i*im(z)*sgn(re(z))", "--domain", "complex-plane",
            "--seed", "7"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    doc = json.loads(a)
    assert list(doc) == sorted(doc)


def test_text_format(capsys):
    code, out, _ = run(capsys, "domain-flags", "--domain", "real-line", "--format", "text")
    assert code == 0 and "flags:" in out and "schemaVersion: 1" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "signlab", "domain-flags", "--domain", "positive-reals"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["flags"]["psdType"] is True


# -------------------------------------------------------------- replay


def test_output_file_and_replay(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "--fn", "builtin:power-sign:1:2.5", "--n", "4", "-o", str(path))
    assert code == 2 and json.loads(path.read_text()) == json.loads(out)
    code, out, _ = run(capsys, "verify", "--replay", str(path))
    assert code == 0 and json.loads(out)["replay"]["ok"] is True

    doc = json.loads(path.read_text())
    doc["witness"]["matrix"][0][0] = 9.0
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "--replay", str(path))
    assert code == 1 and json.loads(out)["replay"]["ok"] is False


def test_replay_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "verify", "--replay", str(tmp_path / "nope.json"))
    assert code == 1 and "error" in err


def test_injective_variant_flag(capsys):
    code, out, _ = run(capsys, "verify", "--variant", "injective", "--fn", "builtin:scaled-identity:1",
                       "--domain", "complex-plane", "--n", "2", "--budget", "4000")
    assert code == 0 and json.loads(out)["outcome"] == "NotFalsified"


# -------------------------------------------------------------- other verbs


def test_witness_verb(capsys):
    code, out, _ = run(capsys, "witness", "beta-gate", "--params", "x=0.6")
    doc = json.loads(out)
    assert code == 0 and doc["schemaVersion"] == 1
    assert doc["verdict"]["kind"] == "PositiveDefinite"  # det = 1 - 2*0.36 > 0
    code, out, _ = run(capsys, "witness", "fitzgerald-horn", "--params", "n=3,eps=0.1,beta=0.5")
    doc = json.loads(out)
    assert doc["extras"]["fhStatus"] and doc["extras"]["epsFound"] is not None
    code, _, err = run(capsys, "witness", "no-such-thing")
    assert code == 1


def test_classify_verb(capsys):
    code, out, _ = run(capsys, "classify", "--fn", "builtin:power-sign:2:3", "--samples", "2000")
    c = json.loads(out)["classification"]
    assert code == 0
    assert c["alphaHat"] == pytest.approx(2) and c["betaHat"] == pytest.approx(3)


def test_monotone_verb(capsys):
    code, out, _ = run(capsys, "monotone", "--fn", "builtin:fh-power:2", "--n", "2")
    assert code == 2 and json.loads(out)["outcome"] == "Falsified"
    code, _, _ = run(capsys, "monotone", "--fn", "builtin:affine:2:1", "--n", "2", "--budget", "5000")
    assert code == 0


def test_fq_enumerate_verb(capsys):
    code, out, _ = run(capsys, "fq-enumerate", "--p", "5", "--n", "3")
    doc = json.loads(out)
    assert code == 0 and doc["count"] == 2 and doc["equalsPositiveMultiplesOfAutomorphisms"]
    code, out, _ = run(capsys, "fq-enumerate", "--p", "2", "--k", "2", "--n", "2")
    doc = json.loads(out)
    assert doc["count"] == 6 and doc["equalsBijectiveMonomials"] and not doc["outOfTheorem"]
    code, _, err = run(capsys, "fq-enumerate", "--p", "11", "--n", "2")
    assert code == 1 and "error" in err


def test_domain_flags_verb(capsys):
    code, out, _ = run(capsys, "domain-flags", "--domain", "annulus:0.5:2")
    doc = json.loads(out)
    assert code == 0 and doc["flags"]["psdType"] is False
    assert doc["nonnegativePart"][0]["lo"] == 0.5


def test_graph_verify_verb(capsys, tmp_path):
    g = tmp_path / "c4.txt"
    g.write_text("4\n1 2\n2 3\n3 4\n4 1\n")
    code, out, _ = run(capsys, "graph-verify", "--fn", "re(z) + 1i*im(z)*sgn(re(z))",
                       "--domain", "complex-plane", "--graph", str(g))
    doc = json.loads(out)
    assert code == 2 and doc["witness"]["strategy"] == "cycle-witness"
    code, _, _ = run(capsys, "graph-verify", "--fn", "z", "--graph", "4\n1 2\n3 4\n")
    assert code == 1


def test_parse_params():
    assert parse_params("n=3, eps=0.5,v=1;2, z=1+2i, tag=abc") == {
        "n": 3, "eps": 0.5, "v": "1;2", "z": 1 + 2j, "tag": "abc"}
    with pytest.raises(SignLabError):
        parse_params("n")
