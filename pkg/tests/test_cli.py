import io
import json
import subprocess
import sys

import pytest

from padic_iwasawa.cache import Cache
from padic_iwasawa.cli import main, padic_expansion


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_verify_single_check():
    code, text = run("verify", "--check", "main-theorem", "--p", "5", "--n", "0")
    assert code == 0 and "verified" in text


def test_verify_vacuous_exits_zero():
    code, text = run("verify", "--check", "main-theorem", "--p", "3", "--format", "records")
    assert code == 0
    (line,) = text.splitlines()
    assert json.loads(line)["status"] == "vacuous"


def test_verify_falsified_exits_one():
    code, _ = run("verify", "--check", "nu-membership", "--p", "5", "--n", "0")
    assert code == 1


def test_verify_undecidable_exits_two(monkeypatch):
    from padic_iwasawa.lab import registry
    monkeypatch.setitem(registry.REGISTRY, "fake",
                        registry.Check("fake", lambda p, N=None: ("undecidable-at-precision", {}, []),
                                       "x", "p"))
    code, _ = run("verify", "--check", "fake", "--p", "5")
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["verify"],
    ["verify", "--check", "no-such-check"],
    ["verify", "--check", "main-theorem", "--p", "5", "--n", "1", "--precision", "3"],
    ["verify", "--check", "main-theorem", "--d", "2"],
    ["verify", "--bogus-flag"],
    ["compute", "bernoulli", "--chi", "quadratic-mod-3"],
    ["compute", "bernoulli", "--k", "1", "--chi", "what"],
    ["compute", "lvalue", "--p", "5", "--chi", "trivial-mod-5"],
])
def test_usage_errors_exit_64(argv):
    with pytest.raises(SystemExit) as exc:
        code, _ = run(*argv)
        raise SystemExit(code)
    assert exc.value.code == 64


def test_records_are_stable():
    args = ("verify", "--check", "leopoldt-index", "--p", "3", "--format", "records")
    a, b = run(*args), run(*args)
    assert a == b
    assert all(json.loads(line)["status"] == "verified" for line in a[1].splitlines())


def test_compute_examples():
    assert run("compute", "hminus", "--p", "23", "--n", "0") == (0, "3\n")
    assert run("compute", "bernoulli", "--k", "1", "--chi", "quadratic-mod-3") == (0, "-1/3\n")
    code, text = run("compute", "index", "--lhs", "leopoldt", "--rhs", "scriptT-orbit",
                     "--p", "5", "--n", "1", "--theta", "quad")
    assert code == 0 and text.strip() == "5^5"
    code, text = run("compute", "eps", "--p", "3", "--n", "0")
    assert text.splitlines() == ["sigma_1: 1/3", "sigma_2: 2/3"]


def test_compute_lvalue_prints_expansion():
    code, text = run("compute", "lvalue", "--p", "5", "--chi", "quadratic-mod-5", "--precision", "6")
    assert code == 0 and "O(5^6)" in text


def test_compute_cache_roundtrip(tmp_path):
    d = str(tmp_path / "c")
    first = run("compute", "hminus", "--p", "29", "--n", "0", "--cache-dir", d, "--format", "records")
    cache = Cache(d)
    (path,) = cache.records()
    digest1 = json.loads(path.read_text())["digest"]
    second = run("compute", "hminus", "--p", "29", "--n", "0", "--cache-dir", d, "--format", "records")
    assert first == second and json.loads(first[1])["result"]["value"] == "8"
    assert json.loads(path.read_text())["digest"] == digest1


def test_cache_subcommand(tmp_path):
    d = str(tmp_path / "fresh")
    code, text = run("cache", "verify", "--cache-dir", d)
    assert code == 0 and text.splitlines()[0] == "0 records"
    run("verify", "--check", "restriction-defect", "--cache-dir", d)
    code, text = run("cache", "verify", "--cache-dir", d)
    assert code == 0 and "all digests valid" in text
    # tamper with one record
    path = Cache(d).records()[0]
    rec = json.loads(path.read_text())
    rec["payload"]["status"] = "verified!"
    path.write_text(json.dumps(rec))
    code, text = run("cache", "verify", "--cache-dir", d)
    assert code == 1 and "digest mismatch" in text and path.exists()
    code, text = run("cache", "verify", "--cache-dir", d, "--prune")
    assert "removed 1 records" in text and not path.exists()


def test_list_checks_and_anchor_map():
    code, text = run("list-checks")
    assert code == 0 and len(text.splitlines()) == 30
    code, text = run("list-checks", "--anchor-map")
    assert "p^{np^n}" in text


def test_parallel_matches_serial():
    args = ("verify", "--check", "restriction-defect", "--format", "records")
    assert run(*args) == run(*args, "--jobs", "2")


def test_padic_expansion():
    assert padic_expansion(3 + 2 * 5, 0, 5, 4) == "3 + 2*5 + O(5^4)"
    assert padic_expansion(1, 1, 5, 2) == "5^-1 + O(5^2)"


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "padic_iwasawa", "compute", "hminus", "--p", "3",
                        "--n", "0"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "1"
