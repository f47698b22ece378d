import json

import pytest

from spinchains.cli import SCHEMA, main


def write_config(tmp_path, doc):
    p = tmp_path / "config.json"
    p.write_text(json.dumps(doc))
    return str(p)


CLOSED = {
    "chain": {"rank": 2, "site": {"kind": "fundamental"}, "ell": 2,
              "boundary": {"kind": "closed"}},
    "samples": [[0.37, 0.11], [-0.62, 0.29], [1.13, -0.4]],
}


def run_cli(tmp_path, argv):
    out = tmp_path / "out.json"
    code = main(argv + ["--out", str(out)])
    return code, json.loads(out.read_text())


def test_verify_closed_gl2(tmp_path):
    cfg = write_config(tmp_path, CLOSED)
    code, doc = run_cli(tmp_path, ["verify", "--config", cfg, "--sweep-M"])
    assert code == 0
    assert doc["schema"] == SCHEMA
    assert doc["status"] == "ok"
    assert doc["results"]["completeness"] == {
        "tally": 4, "total_dim": 4, "complete": True}


def test_config_error_exit_2(tmp_path):
    bad = {"chain": {"rank": 2, "site": {"kind": "fundamental"}, "ell": 2,
                     "boundary": {"kind": "open", "M": 0, "xi": 1.0}}}
    cfg = write_config(tmp_path, bad)
    code, doc = run_cli(tmp_path, ["verify", "--config", cfg])
    assert code == 2
    assert doc["status"] == "config-error"
    assert "M out of range 1..N-1" in doc["error"]["message"]


def test_missing_config_file_exit_2(tmp_path):
    code = main(["verify", "--config", str(tmp_path / "nope.json"),
                 "--out", str(tmp_path / "o.json")])
    assert code == 2


def test_identities_exact_exit_0(tmp_path):
    cfg = write_config(tmp_path, CLOSED)
    code, doc = run_cli(tmp_path, ["identities", "--config", cfg, "--exact"])
    assert code == 0
    res = doc["results"]["residuals"]
    assert res["yang_baxter"] == 0
    assert res["rtt"] == 0
    assert res["commutativity"] < 1e-10


def test_spectrum_csv_and_precision(tmp_path):
    cfg = write_config(tmp_path, CLOSED)
    out = tmp_path / "out.json"
    csvp = tmp_path / "out.csv"
    code = main(["spectrum", "--config", cfg, "--out", str(out),
                 "--csv", str(csvp)])
    assert code == 0
    doc = json.loads(out.read_text())
    branches = doc["results"]["branches"]
    assert len(branches) == 4
    # round-trip: floats survive json exactly (repr round-trips doubles)
    doc2 = json.loads(json.dumps(doc))
    assert doc2 == doc
    assert csvp.read_text().startswith("lam_re,lam_im,branch")


def test_solve_bae_counts(tmp_path):
    cfg = dict(CLOSED)
    cfg["counts"] = [1]
    p = write_config(tmp_path, cfg)
    code, doc = run_cli(tmp_path, ["solve-bae", "--config", p])
    assert code == 0
    sols = doc["results"]["solutions"]
    assert len(sols) == 1
    (re, im), = sols[0]["roots"][0]
    assert abs(complex(re, im)) < 1e-10


def test_hamiltonian_document(tmp_path):
    cfg = write_config(tmp_path, CLOSED)
    code, doc = run_cli(tmp_path, ["hamiltonian", "--config", cfg])
    assert code == 0
    assert len(doc["results"]["matrix"]) == 4
    assert len(doc["results"]["spectrum"]) == 4


def test_rerun_bit_identical(tmp_path):
    cfg = write_config(tmp_path, CLOSED)
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        code = main(["verify", "--config", cfg, "--sweep-M", "--seed", "5",
                     "--out", str(out)])
        assert code == 0
        outs.append(out.read_text())
    assert outs[0] == outs[1]
