import json
import subprocess
import sys
from importlib import resources

from rankshare.cli import main

FX = resources.files("rankshare") / "fixtures"


def fx(name):
    return str(FX / name)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


EX1 = (fx("example1.json"), fx("example1_p0.json"), fx("example1_p.json"))
EX3 = (fx("example3.json"), fx("example3_p0.json"), fx("example3_p.json"))


def test_analyze_examples(capsys):
    code, out = run_json(capsys, "analyze", fx("example1.json"))
    assert code == 0
    assert (out["dim"], out["mrd"], out["qmatroid"]) == (6, False, False)
    code, out = run_json(capsys, "analyze", fx("example3.json"))
    assert (out["dim"], out["qmatroid"]) == (4, True)


def test_analyze_text_format(capsys):
    code, out, _ = run(capsys, "--format", "text", "analyze", fx("example3.json"))
    assert code == 0 and "qmatroid: true" in out
    code2, out2, _ = run(capsys, "analyze", fx("example3.json"), "--format", "text")
    assert out2 == out


def test_analyze_malformed(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "analyze", str(bad))
    assert code == 2 and err
    missing = tmp_path / "missing.json"
    assert run(capsys, "analyze", str(missing))[0] == 2
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"q": 2, "n": 2, "m": 2, "basis": [[[1, 2], [0, 0]]]}))
    assert run(capsys, "analyze", str(wrong))[0] == 2


def test_port_example2(capsys):
    code, out = run_json(capsys, "port", *EX1)
    assert code == 0
    assert len(out["gamma_min"]) == 5
    assert out["alpha_max"] == [[]]
    assert out["perfect"] is False
    assert out["classification"] == "qpolymatroid"


def test_port_example3_with_checks(capsys):
    code, out = run_json(capsys, "port", *EX3, "--checks")
    assert code == 0
    assert out["perfect"] is True and len(out["gamma_min"]) == 3
    assert out["checks"]["duality"] == "pass"
    assert out["checks"]["gamma_min_theorem"] == "pass"
    assert set(out["checks"].values()) <= {"pass", "skipped"}


def test_port_expand(capsys):
    code, out = run_json(capsys, "port", *EX3, "--expand")
    assert len(out["gamma"]) + len(out["alpha"]) == 16


def test_port_bad_complement(capsys):
    code, _, err = run(capsys, "port", fx("example1.json"), fx("example1_p0.json"), fx("example1_p0.json"))
    assert code == 2 and "complementary" in err


def test_share(capsys):
    code, out = run_json(capsys, "share", *EX1, fx("example1_secret.json"))
    assert code == 0
    assert out["secret"] == [[0, 0, 1, 1, 1, 0]]
    assert len(out["shares"]) == 7
    by_holder = {json.dumps(s["holder"]): s["value"] for s in out["shares"]}
    assert by_holder["[[0, 0, 1, 0]]"] == [[1, 0, 0, 0, 1, 0]]


def test_share_infeasible_secret(capsys, tmp_path):
    bad = tmp_path / "s.json"
    bad.write_text(json.dumps({"q": 2, "rows": [[1, 1, 1, 1, 1, 1]]}))
    assert run(capsys, "share", *EX1, str(bad))[0] == 2


def test_reconstruct_coalitions(capsys):
    secret = fx("example1_secret.json")
    code, out = run_json(
        capsys, "reconstruct", *EX1, secret, "--coalition", fx("example1_p1.json"), "--coalition", fx("example1_p2.json")
    )
    assert code == 0 and out["secret"] == [[0, 0, 1, 1, 1, 0]] and out["candidates"] == 1
    code, out = run_json(capsys, "reconstruct", *EX1, secret, "--coalition", fx("example1_p1.json"))
    assert out["secret"] is None and out["candidates"] == 2
    code, out = run_json(capsys, "reconstruct", *EX1, secret)
    assert out["candidates"] == 32


def test_reconstruct_from_share_file(capsys, tmp_path):
    shares = tmp_path / "shares.json"
    shares.write_text(json.dumps([
        {"holder": [[0, 0, 1, 0]], "value": [[1, 0, 0, 0, 1, 0]]},
        {"holder": [[0, 0, 1, 1]], "value": [[1, 1, 0, 0, 0, 0]]},
    ]))
    code, out = run_json(capsys, "reconstruct", *EX1, "--shares", str(shares))
    assert code == 0 and out["secret"] == [[0, 0, 1, 1, 1, 0]]
    shares.write_text(json.dumps([
        {"holder": [[0, 0, 1, 0]], "value": [[1, 0, 0, 0, 1, 0]]},
        {"holder": [[0, 0, 1, 0]], "value": [[0, 0, 0, 0, 1, 0]]},
    ]))
    code, _, err = run(capsys, "reconstruct", *EX1, "--shares", str(shares))
    assert code == 2 and "inconsistent" in err


def test_entropy(capsys):
    code, out = run_json(
        capsys, "entropy", fx("example1.json"), "--subspace", fx("example1_p1.json"), "--given", fx("example1_p2.json")
    )
    assert code == 0
    e = out["entropies"][0]
    assert e["entropy"] == e["predicted"] == "5.000000000000"


def test_enumerate(capsys):
    code, out = run_json(capsys, "enumerate", "--q", "2", "--n", "3")
    assert code == 0 and out["count"] == 16
    code, out = run_json(capsys, "enumerate", "--q", "3", "--n", "3", "--k", "1")
    assert out["count"] == 13


def test_guard_exceeded(capsys):
    assert run(capsys, "enumerate", "--q", "2", "--n", "4", "--max-enum", "10")[0] == 3
    assert run(capsys, "--max-codewords", "4", "entropy", fx("example1.json"))[0] == 3


def test_verify_axioms_and_ports(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "axioms", "--trials", "3", "--format", "text")
    assert code == 0 and "FAIL" not in out
    code, out, _ = run(capsys, "verify", "--suite", "ports", "--trials", "2", "--format", "text")
    assert code == 0 and "PASS example2 Gamma_min" in out


def test_verify_corrupted_rank_table(capsys, tmp_path):
    from rankshare.codes import induced_qpolymatroid
    from rankshare.serialize import fixture_code

    M = induced_qpolymatroid(fixture_code("example1.json"))
    ranks = M.to_json()
    ranks[5]["rank"] = {"num": 3, "den": 1}
    table = tmp_path / "ranks.json"
    table.write_text(json.dumps({"p": 2, "e": 1, "n": 4, "ranks": ranks}))
    code, out, _ = run(capsys, "verify", "--rank-table", str(table), "--format", "text")
    assert code == 1 and "R1 at" in out
    ranks = M.to_json()
    table.write_text(json.dumps({"p": 2, "e": 1, "n": 4, "ranks": ranks}))
    assert run(capsys, "verify", "--rank-table", str(table))[0] == 0


def test_output_is_deterministic(capsys):
    a = run(capsys, "--seed", "7", "share", *EX1, fx("example1_secret.json"))
    b = run(capsys, "share", *EX1, fx("example1_secret.json"), "--seed", "7")
    assert a == b
    c = run(capsys, "verify", "--suite", "axioms", "--trials", "2", "--seed", "3")
    d = run(capsys, "verify", "--suite", "axioms", "--trials", "2", "--seed", "3")
    assert c == d


def test_bad_arguments(capsys):
    assert run(capsys, "analyze")[0] == 2
    assert run(capsys, "--seed", "-1", "analyze", fx("example1.json"))[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "rankshare", "analyze", fx("example3.json")], capture_output=True, text=True
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["dim"] == 4
