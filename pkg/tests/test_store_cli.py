import json
import random
import subprocess
import sys

import pytest

from oracles import SYNTHETIC_RULES
from wkit.cli import EXIT_CAPABILITY, EXIT_INPUT, EXIT_INVALID, EXIT_MISMATCH, EXIT_OK, evaluate_descriptor, main
from wkit.invariants import Provenance, descriptor
from wkit.lattice import NodalPairLattice
from wkit.real import catalog
from wkit.reductions import table1_descriptor
from wkit.store import BundledData, CacheFile, InvariantLedger, RunReport
from wkit.wnumbers import Memo, WPhi, WState, evaluate, load_rule_spec, vector_pairs


@pytest.fixture(scope="module")
def bundled():
    return BundledData.load()


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- bundled data and ledger -----------------------------------------------


def test_bundled_table(bundled):
    assert [c.w1 for c in bundled.table1] == [112, 36, 12, 12, 4, 8, 16]
    assert [c.gw1 for c in bundled.table1] == [12300, 1740, 204, 204, 204, 204, 204]
    assert [c.model for c in bundled.table1] == catalog()
    assert len(bundled.table1_ledger()) == 7


def test_ledger_round_trips(bundled):
    ledger = bundled.table1_ledger()
    ledger.put("deg=2|custom", 10**40, Provenance.REDUCTION)
    assert InvariantLedger.from_json(ledger.to_json()) == ledger
    assert InvariantLedger.from_csv(ledger.to_csv()) == ledger
    assert '"10000000000000000000000000000000000000000"' in ledger.to_json()


def test_ledger_file(tmp_path, bundled):
    path = tmp_path / "oracle.csv"
    path.write_text(bundled.table1_ledger().to_csv())
    assert InvariantLedger.load(path) == bundled.table1_ledger()
    with pytest.raises(Exception, match="does not exist"):
        InvariantLedger.load(tmp_path / "missing.json")


def test_run_report_round_trip():
    rng = random.Random(1)
    for _ in range(50):
        rep = RunReport(
            descriptor=f"deg=2|D={rng.randint(0, 99)}",
            value=rng.choice([None, rng.randint(-10**30, 10**30)]),
            provenance=rng.choice([None, "ORACLE", "CLOSED_FORM"]),
            flags={"nef": rng.choice([True, False, None]), "big": True},
            timing=rng.random(),
            cache={"hits": rng.randint(0, 9)},
            issues=["x"] * rng.randint(0, 2),
        )
        again = RunReport.from_json(rep.to_json())
        assert again == rep
        assert again.to_json() == rep.to_json()


# -- cache -----------------------------------------------------------------


def test_cache_file(tmp_path):
    cache = CacheFile(tmp_path)
    cache.append([("a", 1), ("b", 10**25)], "h1")
    cache.append([("a", 2)], "h2")
    assert cache.load("h1") == {"a": 1, "b": 10**25}
    assert cache.load("h2") == {"a": 2}
    assert cache.stats() == {"entries": 3, "rulesets": 2}
    assert cache.clear("h2") == 1
    assert cache.load("h2") == {}
    assert cache.clear() == 2


def test_cache_never_changes_results(tmp_path):
    rules = load_rule_spec(SYNTHETIC_RULES)
    pair = NodalPairLattice.standard()
    rng = random.Random(4)
    S = pair.base
    states = []
    for D in (-pair.K - pair.E, S.L - S.E(4) + S.E(1), 2 * S.E(1) + S.E(2), -pair.K - pair.E + S.E(1)):
        for a, b in vector_pairs(D.dot(pair.E)):
            states.append(WState(pair, D, a, b, WPhi.ZERO))
    reference = [evaluate(s, rules, use_memo=False) for s in states]
    cache = CacheFile(tmp_path)
    for _ in range(5):
        if rng.random() < 0.5:
            cache.clear()
        memo = Memo(cache.load(rules.hash), cache.sink(rules.hash))
        order = list(range(len(states)))
        rng.shuffle(order)
        got = {i: evaluate(states[i], rules, memo) for i in order}
        assert [got[i] for i in range(len(states))] == reference


# -- routing ---------------------------------------------------------------


def test_routing(bundled):
    cubic = bundled.model(3, "RP2+S2")
    S = cubic.lattice
    v = evaluate_descriptor(descriptor(cubic, -S.K, (0, 1)))
    assert (v.value, v.provenance) == (1, Provenance.CLOSED_FORM)
    v = evaluate_descriptor(descriptor(cubic, -2 * S.K - S.E(6), (0, 1), (1, 1), (4, 1), 0))
    assert v.value == 4
    desc = table1_descriptor(cubic)
    v = evaluate_descriptor(desc, oracle=bundled.table1_ledger())
    assert (v.value, v.provenance) == (36, Provenance.ORACLE)
    with pytest.raises(Exception, match="closed-form"):
        evaluate_descriptor(desc)


# -- command line ----------------------------------------------------------


def test_cli_check_example(capsys):
    code, out, _ = run(capsys, "check", "--degree", "3", "--D", "6;-2,-2,-2,-2,-2,-3", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert all(doc[f] is True for f in ("nef", "big", "f_hat_compatible", "genus_ok", "dimension_ok",
                                         "parity_congruence", "distribution_feasible"))
    code2, out2, _ = run(capsys, "check", "--degree", "3", "--D=-2K-E6", "--format", "json")
    assert code2 == EXIT_OK and json.loads(out2)["descriptor"] == doc["descriptor"]


def test_cli_check_failure(capsys):
    code, out, _ = run(capsys, "check", "--degree", "3", "--D", "0;1,0,0,0,0,0")
    assert code == EXIT_INVALID and "not nef" in out


def test_cli_eval_closed_form(capsys):
    code, out, _ = run(capsys, "eval", "--degree", "3", "--D=-K", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["value"] == "1" and doc["provenance"] == "CLOSED_FORM"
    assert RunReport.from_json(out).to_json() == RunReport.from_dict(doc).to_json()


def test_cli_eval_capability(capsys):
    code, out, _ = run(capsys, "eval", "--degree", "2", "--rx", "4S2", "--D=-2K")
    assert code == EXIT_CAPABILITY and "ruleset" in out


def test_cli_table1_oracle(capsys):
    code, out, _ = run(capsys, "table1")
    lines = out.strip().splitlines()
    assert code == EXIT_OK and len(lines) == 7
    assert all(line.startswith("PASS") for line in lines)


def test_cli_table1_mismatch(capsys, tmp_path, bundled):
    ledger = bundled.table1_ledger()
    key = table1_descriptor(bundled.table1[0].model).key()
    ledger.put(key, 113, Provenance.ORACLE)
    path = tmp_path / "bad.json"
    path.write_text(ledger.to_json())
    code, out, _ = run(capsys, "table1", "--oracle", str(path))
    assert code == EXIT_MISMATCH and out.startswith("FAIL")


def test_cli_table1_structural_rules(capsys):
    code, out, _ = run(capsys, "table1", "--ruleset", "structural", "--format", "json")
    assert code == EXIT_CAPABILITY
    assert all(r["status"] == "UNAVAILABLE" for r in json.loads(out)["table1"])


def test_cli_input_errors(capsys, tmp_path):
    assert run(capsys, "check", "--degree", "3", "--D", "6;x")[0] == EXIT_INPUT
    assert run(capsys, "check", "--degree", "2", "--D=-K")[0] == EXIT_INPUT
    assert run(capsys, "eval", "--degree", "3", "--D=-K", "--ruleset", str(tmp_path / "no.json"))[0] == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"ruleset_version": "x", "bogus": 1}))
    code, _, err = run(capsys, "table1", "--ruleset", str(bad))
    assert code == EXIT_INPUT and "schema" in err


def test_cli_surface_formats(capsys):
    code, out, _ = run(capsys, "surface", "--format", "csv")
    assert code == EXIT_OK and len(out.strip().splitlines()) == 8
    code, out, _ = run(capsys, "surface", "--degree", "3", "--format", "json")
    assert json.loads(out)["surfaces"][0]["minus_one_curves"] == 27


def test_cli_cache_env_override(capsys, tmp_path, monkeypatch):
    env_dir = tmp_path / "env"
    monkeypatch.setenv("WKIT_CACHE", str(env_dir))
    rules = tmp_path / "rules.json"
    rules.write_text(json.dumps(SYNTHETIC_RULES))
    code, out, _ = run(capsys, "table1", "--ruleset", str(rules), "--cache", str(tmp_path / "cli"))
    assert code == EXIT_MISMATCH
    assert (env_dir / "wkit-cache.jsonl").exists()
    assert not (tmp_path / "cli").exists()
    code, out, _ = run(capsys, "cache", "stats", "--format", "json")
    assert json.loads(out)["entries"] > 0
    code, out, _ = run(capsys, "cache", "clear", "--format", "json")
    assert json.loads(out)["removed"] > 0


def test_cli_asymptotics_with_oracle(capsys, tmp_path, bundled):
    code, out, _ = run(capsys, "asymptotics", "--degree", "2", "--rx", "4S2", "--kmax", "1", "--format", "json")
    assert code == EXIT_OK and json.loads(out)["rows"][0]["W"] == "1"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wkit", "surface"], capture_output=True, text=True)
    assert proc.returncode == 0 and "RP2#RP2" in proc.stdout
