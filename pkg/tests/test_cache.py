import json

import pytest

from padic_iwasawa.cache import (ENV_VAR, SCHEMA_VERSION, Cache, CacheError, default_dir, digest,
                                 make_key)


def test_default_dir_follows_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_VAR, str(tmp_path / "x"))
    assert default_dir() == tmp_path / "x"
    assert Cache().dir == tmp_path / "x"


def test_roundtrip_and_digest(tmp_path):
    c = Cache(tmp_path)
    payload = {"coeffs": ["1", "-3/5"], "n": "2"}
    rec = c.put("k", payload, 20)
    assert rec["digest"] == digest(payload) and rec["schema"] == SCHEMA_VERSION
    assert c.get("k") == payload
    assert c.get("missing") is None
    assert c.verify() == (1, [])


def test_keys_are_canonical():
    assert make_key("x", {"p": 5, "n": 1}) == make_key("x", {"n": 1, "p": 5})
    assert make_key("x", {"p": 5}) != make_key("y", {"p": 5})


def test_tampered_payload_is_detected_and_kept(tmp_path):
    c = Cache(tmp_path)
    c.put("k", {"v": "1"})
    (path,) = c.records()
    rec = json.loads(path.read_text())
    rec["payload"]["v"] = "2"
    path.write_text(json.dumps(rec))
    with pytest.raises(CacheError, match="digest"):
        c.get("k")
    count, problems = c.verify()
    assert count == 1 and len(problems) == 1
    assert path.exists()          # never deleted without an explicit prune
    assert c.prune() == 1 and not path.exists()


def test_schema_mismatch_rejected(tmp_path):
    c = Cache(tmp_path)
    c.put("k", {"v": "1"})
    (path,) = c.records()
    rec = json.loads(path.read_text())
    rec["schema"] = SCHEMA_VERSION + 1
    path.write_text(json.dumps(rec))
    with pytest.raises(CacheError, match="schema"):
        c.get("k")


def test_prune_keeps_good_records(tmp_path):
    c = Cache(tmp_path)
    c.put("a", {"v": "1"})
    c.put("b", {"v": "2"})
    assert c.prune() == 0
    assert c.prune(bad_only=False) == 2
