import csv
import json

import pytest

from locwords.cli import EXIT_CONFIG, EXIT_DOMAIN, EXIT_OK, EXIT_VERIFY, main
from locwords.serialize import digest, seal

PARITY = {"k": {"rule": "constant", "params": [2], "kind": "one-sided"},
          "coloring": {"rule": "residue", "modulus": 2, "codec": "integer"}}
Z5 = {"system": {"kind": "codec_rotation", "space": {"type": "cyclic", "m": 5}, "codec": "integer", "alpha": "1"},
      "base": {"rule": "diagonal", "k": {"rule": "abs", "kind": "one-sided"}, "length": 12},
      "levels": 1, "terms": 2, "target": "0", "budget": {"max_candidates": 1000000}}
IDENTITY = {"system": {"kind": "single_map", "space": {"type": "circle"}, "k": {"rule": "abs"},
                       "map": {"rule": "identity"}},
            "base": {"rule": "diagonal", "k": {"rule": "abs"}, "length": 4},
            "x": "1/3", "levels": 1, "terms": 2, "target": "0"}


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def search(capsys, tmp_path, command, cfg, seed=0, name="cert.json", extra=()):
    path = tmp_path / name
    code, _, err = run(capsys, command, json.dumps(cfg), "--seed", seed, "-o", path, *extra)
    assert code == EXIT_OK, err
    return path, json.loads(path.read_text())


class TestCodecCommands:
    def test_encode(self, capsys):
        assert run(capsys, "encode", "2")[:2] == (EXIT_OK, '{"entries":{"2":2,"3":1},"kind":"two-sided"}\n')
        assert run(capsys, "encode", "--codec", "natural", "--base", "2", "5")[1] == \
            '{"entries":{"1":1,"3":1},"kind":"one-sided"}\n'

    def test_decode(self, capsys):
        assert run(capsys, "decode", '{"-1": 1}')[1] == "-1/2\n"
        assert run(capsys, "decode", "--codec", "integer", '{"1": 1, "2": 1}')[1] == "-1\n"

    def test_round_trip_through_files(self, capsys, tmp_path):
        out = tmp_path / "w.json"
        assert run(capsys, "encode", "-o", out, "--", "-7/12")[0] == EXIT_OK
        assert run(capsys, "decode", out.read_text())[1] == "-7/12\n"

    def test_domain_errors(self, capsys):
        code, _, err = run(capsys, "encode", "0")
        assert code == EXIT_DOMAIN and err.startswith("ZeroInput")
        assert run(capsys, "decode", "--codec", "integer", '{"1": 5}')[0] == EXIT_DOMAIN


class TestSearchCommands:
    def test_parity_partition(self, capsys, tmp_path):
        path, cert = search(capsys, tmp_path, "verify-partition", PARITY)
        assert cert["status"] == "ok" and cert["digest"] == digest(cert)
        assert cert["schema"] == "locwords.partition-certificate/1"
        assert run(capsys, "verify-partition", "--check", path)[0] == EXIT_OK
        assert run(capsys, "check", path)[0] == EXIT_OK

    def test_constant_colouring_is_immediate(self, capsys, tmp_path):
        cfg = dict(PARITY, coloring={"rule": "constant"})
        _, cert = search(capsys, tmp_path, "verify-partition", cfg)
        assert cert["examined"] == 1

    def test_replay_is_byte_identical(self, capsys, tmp_path):
        a, _ = search(capsys, tmp_path, "find-recurrence", Z5, seed=7, name="a.json")
        b, _ = search(capsys, tmp_path, "find-recurrence", Z5, seed=7, name="b.json")
        assert a.read_bytes() == b.read_bytes()

    def test_identity_system(self, capsys, tmp_path):
        _, cert = search(capsys, tmp_path, "find-recurrence", IDENTITY)
        assert cert["witness"]["achieved"] == "0" and cert["witness"]["x0"] == "1/3"

    def test_z5_rotation_exact(self, capsys, tmp_path):
        path, cert = search(capsys, tmp_path, "find-recurrence", Z5)
        wit = cert["witness"]
        assert wit["achieved"] == "0" and len(wit["terms"]) >= 2
        assert run(capsys, "check", path)[0] == EXIT_OK

    def test_hindman(self, capsys, tmp_path):
        path = tmp_path / "h.json"
        assert run(capsys, "hindman", "--seed", 0, "--max-n", 12, "-o", path)[0] == EXIT_OK
        cert = json.loads(path.read_text())
        assert cert["witness"]["n_star"] == 9 and len(cert["witness"]["avoiding"]) == 8
        assert run(capsys, "check", path)[0] == EXIT_OK

    def test_csv(self, capsys, tmp_path):
        table = tmp_path / "res.csv"
        search(capsys, tmp_path, "find-recurrence", Z5, extra=("--emit-csv", table))
        rows = list(csv.reader(table.open()))
        assert rows[0][:3] == ["picks", "orbit_residual", "return_residual"]
        assert len(rows) > 1 and all(r[2] == "0" for r in rows[1:])

    def test_budget_from_environment(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("LOCWORDS_MAX_CANDIDATES", "3")
        cfg = {k: v for k, v in Z5.items() if k != "budget"}
        _, cert = search(capsys, tmp_path, "find-recurrence", cfg)
        assert cert["config"]["budget"]["max_candidates"] == 3
        assert cert["status"] == "exhausted" and cert["examined"] <= 3


class TestConfigErrors:
    def test_missing_seed(self, capsys):
        assert run(capsys, "verify-partition", json.dumps(PARITY))[0] == EXIT_CONFIG

    def test_schema_violation(self, capsys):
        assert run(capsys, "find-recurrence", '{"levels": 1}', "--seed", 0)[0] == EXIT_CONFIG

    def test_unreadable_config(self, capsys, tmp_path):
        assert run(capsys, "find-recurrence", tmp_path / "nope.json", "--seed", 0)[0] == EXIT_CONFIG


class TestCorruption:
    @pytest.fixture
    def cert_path(self, capsys, tmp_path):
        return search(capsys, tmp_path, "find-recurrence", Z5)[0]

    def rewrite(self, path, fn, reseal=True):
        cert = json.loads(path.read_text())
        fn(cert)
        path.write_text(json.dumps(seal(cert) if reseal else cert))

    def test_digest_mismatch(self, capsys, cert_path):
        self.rewrite(cert_path, lambda c: c.update(examined=c["examined"] + 1), reseal=False)
        assert run(capsys, "check", cert_path)[0] == EXIT_VERIFY

    def test_resealed_witness_change(self, capsys, cert_path):
        self.rewrite(cert_path, lambda c: c["witness"].update(x0=1))
        assert run(capsys, "check", cert_path)[0] == EXIT_VERIFY

    def test_wrong_subcommand(self, capsys, cert_path):
        assert run(capsys, "check-ip", "--check", cert_path)[0] == EXIT_VERIFY

    def test_not_json(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{ not json")
        assert run(capsys, "check", bad)[0] == EXIT_VERIFY
