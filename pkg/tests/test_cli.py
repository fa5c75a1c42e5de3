import json
import subprocess
import sys

import pytest

from superjac.cli import main


def run(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


def run_json(capsys, argv):
    code, out = run(capsys, argv + ["--json"])
    return code, json.loads(out)


def test_genus(capsys) -> None:
    code, doc = run_json(capsys, ["genus", "--m", "3", "--r", "5"])
    assert code == 0
    assert doc == {"m": 3, "r": 5, "d": 1, "genus": 4}

    code, doc = run_json(capsys,
                         ["genus", "--m", "2", "--f", "0,24,-50,35,-10,1"])
    assert (code, doc["r"], doc["genus"]) == (0, 5, 2)


def test_delta_structure(capsys) -> None:
    code, doc = run_json(capsys, ["delta-structure", "--m", "3", "--r", "4"])
    assert code == 0
    assert doc["factors"] == [3, 3, 3]


def test_torsion_test_contract(capsys) -> None:
    code, doc = run_json(capsys, ["torsion-test", "--p", "2", "--q", "7"])
    assert code == 0
    assert doc["has_torsion"] is False
    assert doc["ord"] == 3

    code, doc = run_json(capsys, ["torsion-test", "--p", "2", "--q", "5"])
    assert code == 0
    assert doc["has_torsion"] is True
    assert doc["ord"] == 4


def test_proof_replay(capsys) -> None:
    code, doc = run_json(capsys, ["proof-replay", "--m", "2", "--f",
                                  "0,24,-50,35,-10,1", "--field", "11"])
    assert code == 0
    assert doc["verdict"] == "pass"
    assert all(c["pass"] for c in doc["checks"])
    assert doc["genus"] == 2


def test_proof_replay_extends_base(capsys) -> None:
    # x^4 + 1 splits over GF(25), not GF(5)
    code, doc = run_json(capsys, ["proof-replay", "--m", "3", "--f",
                                  "1,0,0,0,1", "--field", "5"])
    assert code == 0
    assert doc["verdict"] == "pass"


def test_principal(capsys) -> None:
    base = ["principal", "--m", "2", "--f", "0,24,-50,35,-10,1"]
    code, doc = run_json(capsys, base + ["--coeffs", "2,0,0,0"])
    assert (code, doc["principal"], doc["cross_checked"]) == (0, True, False)

    code, doc = run_json(capsys,
                         base + ["--coeffs", "1,0,0,0", "--field", "11"])
    assert (code, doc["principal"], doc["cross_checked"]) == (0, False, True)


def test_gauss(capsys) -> None:
    code, doc = run_json(capsys, ["gauss", "--p", "5", "--q", "2",
                                  "--a", "1"])
    assert code == 0
    assert doc["norm_is_p_to_n"] is True
    assert doc["ring"] == "Z[zeta_10]"

    code, doc = run_json(capsys, ["gauss", "--p", "7", "--q", "3",
                                  "--a", "2", "--n", "2"])
    assert (code, doc["norm_is_p_to_n"]) == (0, True)


def test_count_routes(capsys) -> None:
    code, doc = run_json(capsys, ["count", "--p", "3", "--q", "2",
                                  "--a", "1", "--n", "3"])
    assert code == 0
    assert doc["routes"]["naive"] == doc["routes"]["charsum"] == [7, 7, 28]
    assert doc["agree"] is True

    # charsum needs q | p - 1; route=both degrades to naive only
    code, doc = run_json(capsys, ["count", "--p", "3", "--q", "5",
                                  "--a", "1", "--n", "2"])
    assert code == 0
    assert doc["routes"]["charsum"] is None
    assert doc["agree"] is None

    code, _ = run(capsys, ["count", "--p", "3", "--q", "5", "--a", "1",
                           "--n", "2", "--route", "charsum"])
    assert code == 2


def test_zeta_both_routes(capsys) -> None:
    # charsum route: 3 - 1 is divisible by q = 2
    code, doc = run_json(capsys, ["zeta", "--p", "3", "--q", "2",
                                  "--a", "1"])
    # P(1) = 7 matches the known class number of this curve
    assert (code, doc["coeffs"]) == (0, [1, 3, 3])

    # counts route: 7 does not divide 2 - 1
    code, doc = run_json(capsys, ["zeta", "--p", "2", "--q", "7",
                                  "--a", "1"])
    assert (code, doc["coeffs"]) == (0, [1, 0, 0, 2, 0, 0, 8])


def test_jacobian_order(capsys) -> None:
    code, doc = run_json(capsys, ["jacobian-order", "--p", "2", "--q", "7",
                                  "--a", "1", "--ext", "3"])
    assert (code, doc["order"]) == (0, 1331)


def test_power_law(capsys) -> None:
    code, doc = run_json(capsys, ["power-law", "--p", "2", "--q", "5"])
    assert code == 0
    assert doc["ok"] is True
    assert doc["power_law_at"] == [1, 2, 4]


def test_picard(capsys) -> None:
    code, doc = run_json(capsys, ["picard", "--m", "3", "--f", "1,1,1",
                                  "--p", "2"])
    assert code == 0
    assert doc["order"] == 3
    assert doc["invariant_factors"] == [3]

    code, doc = run_json(capsys, ["picard", "--m", "3", "--f", "1,1,1",
                                  "--p", "2", "--ext", "2"])
    assert (code, doc["invariant_factors"]) == (0, [3, 3])


def test_conjecture_test(capsys) -> None:
    code, doc = run_json(capsys, ["conjecture-test", "--p", "2", "--q", "3",
                                  "--a", "1"])
    assert code == 0
    assert doc["verdict"] == "consistent"


def test_rank_certify(capsys) -> None:
    code, doc = run_json(capsys, ["rank-certify", "--p", "3", "--q", "2",
                                  "--k", "10"])
    assert code == 0
    assert doc["conclusion"]["rank_lower_bound"] == 2
    assert doc["evidence"]["q_divides"] is False

    code, doc = run_json(capsys, ["rank-certify", "--p", "5", "--q", "2",
                                  "--k", "10"])
    assert code == 1
    assert doc["error"] == "hypothesis-failed"
    assert "conclusion" not in doc


def test_find_prime(capsys) -> None:
    code, doc = run_json(capsys, ["find-prime", "--m", "2", "--roots",
                                  "0,1,2", "--k", "10"])
    assert (code, doc["prime"]) == (0, 5)

    code, doc = run_json(capsys, ["find-prime", "--m", "2", "--roots",
                                  "0,1,2", "--k", "4"])
    assert (code, doc["prime"]) == (0, None)


def test_budget_exit_code(capsys) -> None:
    code, doc = run_json(capsys, ["count", "--p", "5", "--q", "2", "--a",
                                  "1", "--n", "4", "--route", "naive",
                                  "--budget", "10"])
    assert code == 3
    assert doc["error"] == "budget-exceeded"


def test_usage_exit_codes(capsys) -> None:
    code, _ = run(capsys, ["zeta", "--p", "4", "--q", "3", "--a", "1"])
    assert code == 2  # 4 is not prime

    with pytest.raises(SystemExit) as exc:
        main(["zeta", "--p", "2"])  # missing required flags
    assert exc.value.code == 2
    capsys.readouterr()


def test_json_deterministic(capsys) -> None:
    argv = ["proof-replay", "--m", "2", "--f", "0,24,-50,35,-10,1",
            "--field", "11", "--seed", "3", "--json"]
    _, first = run(capsys, argv)
    _, second = run(capsys, argv)
    assert first == second


def test_cache_roundtrip(tmp_path, capsys) -> None:
    argv = ["zeta", "--p", "2", "--q", "7", "--a", "1", "--json",
            "--cache-dir", str(tmp_path)]
    _, first = run(capsys, argv)
    assert len(list(tmp_path.rglob("*.json"))) == 1
    _, second = run(capsys, argv)
    assert first == second
    _, third = run(capsys, argv + ["--verify-cache"])
    assert first == third


def test_cache_verify_detects_tampering(tmp_path, capsys) -> None:
    argv = ["zeta", "--p", "2", "--q", "7", "--a", "1", "--json",
            "--cache-dir", str(tmp_path)]
    run(capsys, argv)
    path = next(tmp_path.rglob("*.json"))
    doc = json.loads(path.read_text())
    doc["result"][1]["genus"] = 99
    path.write_text(json.dumps(doc))

    code, doc = run_json(capsys, argv + ["--verify-cache"])
    assert code == 1
    assert doc["error"] == "CacheMismatch"


def test_failures_are_not_cached(tmp_path, capsys) -> None:
    argv = ["count", "--p", "5", "--q", "2", "--a", "1", "--n", "4",
            "--route", "naive", "--budget", "10",
            "--cache-dir", str(tmp_path)]
    code, _ = run(capsys, argv)
    assert code == 3
    assert not list(tmp_path.rglob("*.json"))


def test_plain_output_lines(capsys) -> None:
    code, out = run(capsys, ["delta-structure", "--m", "3", "--r", "4"])
    assert code == 0
    assert "factors: [3, 3, 3]" in out


def test_console_script() -> None:
    proc = subprocess.run(
        [sys.executable, "-m", "superjac", "genus", "--m", "2", "--r", "5",
         "--json"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["genus"] == 2
