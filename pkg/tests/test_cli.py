import io
import json

import pytest

from simerka.cli import EXIT_BUDGET, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, _ = call(*argv, "--json")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert len(lines) == 1  # a single object per invocation
    return json.loads(lines[0])


def test_reduce():
    assert call("reduce", "--form", "504,-1,5") == (0, "(5,1,504)\n", "")
    assert call_json("reduce", "--form", "504,-1,5") == {"form": ["5", "1", "504"]}


def test_compose_and_pow():
    assert call("compose", "--form", "5,1,504", "--form", "5,1,504")[1] == "(25,11,102)\n"
    assert call("pow", "--form", "5,1,504", "--exp", "135")[1] == "(1,1,2520)\n"
    assert call_json("pow", "--form", "5,1,504", "--exp", "-1") == {"form": ["5", "-1", "504"]}
    code, _, err = call("compose", "--form", "5,1,504")
    assert code == EXIT_USAGE and "two" in err


def test_order_pinned():
    assert call("order", "--disc", "-10079", "--form", "5,1,504")[1] == "135\n"
    assert call("order", "--disc", "-121271", "--form", "3,1,10106")[1] == "525\n"
    obj = call_json("order", "--form", "2,1,15159", "--multiple", "525")
    assert obj["order"] == "15"


def test_class():
    code, out, _ = call("class", "--disc", "-2184499")
    assert code == 0
    assert out.splitlines()[:2] == ["h = 275", "structure = 5 x 55"]
    obj = call_json("class", "--disc", "-2184499")
    assert obj["order"] == "275" and obj["elementary_divisors"] == ["5", "55"]
    assert obj["certificate"] == "enumerated"


def test_factor():
    obj = call_json("factor", "32137459", "--seed", "1")
    assert obj["factors"] == ["1511", "21269"]
    assert obj["complete"] is True
    assert any(s.get("form") == "(1511,1511,5695)" for s in obj["trace"])
    assert call("factor", "720")[1] == "720 = 2^4 * 3^2 * 5\n"


def test_carmichael():
    code, out, _ = call("carmichael", "--limit", "10000")
    assert code == 0
    assert out.split() == ["561", "1105", "1729", "2465", "2821", "6601", "8911"]


def test_sigma_demo():
    obj = call_json("sigma-demo")
    ns = [row["n"] for row in obj["solutions"]]
    assert "751530" in ns
    for row in obj["solutions"]:
        assert int(row["root"]) ** 2 == int(row["sigma_n3"])


def test_fermat_check():
    assert call("fermat-check", "114689", "12")[1] == "true\n"
    assert call_json("fermat-check", "167772161", "23")["divides"] is True
    assert call("fermat-check", "7", "3")[1] == "false\n"


def test_relations_json_schema():
    obj = call_json("relations", "--disc", "-10079", "--seed", "2")
    assert obj["disc"] == "-10079"
    assert all(isinstance(p, str) for p in obj["primes"])
    n = len(obj["primes"])
    assert obj["relations"] and all(len(r["exponents"]) == n for r in obj["relations"])


def test_exit_codes():
    # domain errors
    assert call("class", "--disc", "-21")[0] == EXIT_DOMAIN
    assert call("class", "--disc", "5")[0] == EXIT_DOMAIN
    assert call("order", "--form", "5,1,504", "--multiple", "134")[0] == EXIT_DOMAIN
    assert call("order", "--form", "5,1,504", "--disc", "-20", "--multiple", "135")[0] == EXIT_DOMAIN
    # budget exhaustion
    assert call("fermat-check", "3", "100", "--budget", "10")[0] == EXIT_BUDGET
    code, out, err = call("factor", "1000009800019", "--trial-bound", "10", "--time-limit", "0")
    assert code == EXIT_BUDGET and "budget" in err
    # usage errors
    assert call("reduce", "--form", "abc")[0] == EXIT_USAGE
    assert call("reduce", "--form", "1,3,1")[0] == EXIT_USAGE
    assert call("bogus")[0] == EXIT_USAGE
    assert call()[0] == EXIT_USAGE
    assert call("factor", "ten")[0] == EXIT_USAGE
    assert call("class", "--disc", "-20", "--workers", "0")[0] == EXIT_USAGE


def test_factor_budget_json_keeps_partial_result():
    code, out, _ = call("factor", "1000009800019", "--trial-bound", "10", "--time-limit", "0", "--json")
    assert code == EXIT_BUDGET
    obj = json.loads(out)
    assert obj["complete"] is False and obj["factors"] == ["1000009800019"]


@pytest.mark.parametrize(
    "argv",
    [
        ("class", "--disc", "-121271", "--seed", "4"),
        ("relations", "--disc", "-10079", "--seed", "9"),
        ("factor", "32137459", "--seed", "1"),
        ("order", "--disc", "-10079", "--form", "5,1,504", "--strategy", "small-powers"),
    ],
)
def test_byte_identical_reruns(argv):
    a = call(*argv, "--json")
    b = call(*argv, "--json")
    assert a == b and a[0] == 0


def test_workers_note():
    code, _, err = call("relations", "--disc", "-10079", "--workers", "2")
    assert code == 0 and "not reproducible" in err
    assert call("relations", "--disc", "-10079")[2] == ""


def test_relations_log(tmp_path):
    log = str(tmp_path / "rels.jsonl")
    code, _, _ = call("relations", "--disc", "-10079", "--relations-log", log)
    assert code == 0
    with open(log) as fh:
        first = [json.loads(line) for line in fh]
    assert first and all(r["disc"] == "-10079" for r in first)
    # class reloads the log and appends its own batches
    obj = call_json("class", "--disc", "-10079", "--relations-log", log)
    assert obj["order"] == "135"
    with open(log) as fh:
        second = [json.loads(line) for line in fh]
    assert second[: len(first)] == first and len(second) > len(first)
    assert obj["relations"] == len(second)
    # a log for another discriminant is refused
    assert call("class", "--disc", "-121271", "--relations-log", log)[0] == EXIT_DOMAIN
