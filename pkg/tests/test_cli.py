import io
import json
import subprocess
import sys

import pytest

from prymlat.cli import run
from prymlat.lattice import canonical_correspondence
from prymlat.random_instances import surface_type_lattice


def call(argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    out = io.StringIO()
    code = run(argv, out)
    return code, out.getvalue()


def preset(name, *extra):
    code, text = call(["preset", name, *extra])
    assert code == 0
    return text


def test_cubic_m_piped_into_discriminant(monkeypatch):
    code, text = call(["discriminant"], preset("cubic-m"), monkeypatch)
    assert code == 0
    assert text.splitlines()[0] == "(Z/5)₊ ⊕ (Z/3)₋"


def test_surface_parity_error():
    assert call(["surface", "--h2", "5", "--r", "2"])[0] == 2
    assert call(["surface", "--h2", "7", "--free"])[0] == 2
    code, text = call(["surface", "--h2", "22", "--free", "--json"])
    assert code == 0 and json.loads(text)["decomposition"] == "Z[G]^10 ⊕ Z₋^2"


def test_bundle_h0():
    code, text = call(["bundle", "h0", "--degrees", "2,1,0,0", "--m", "2", "--k", "3"])
    assert code == 0 and text.strip() == "25"
    code, text = call(["bundle", "sym", "--degrees=-2,-1,0,0", "--m", "2"])
    assert text.strip() == "-4,-3,-2,-2,-2,-1,-1,0,0,0"


def test_chow_verbs():
    code, text = call(["chow", "parity", "--gamma", "0,0,0", "--lambda", "1", "--json"])
    rep = json.loads(text)
    assert code == 0 and rep["N"] == 3 and rep["verdict"] is True
    assert call(["chow", "parity", "--gamma", "1,2"])[0] == 2
    code, text = call(["chow", "chern", "--gamma", "1,1,1"])
    assert "c1: h - eta" in text


def test_unknown_verb_and_flag():
    assert call(["frobnicate"])[0] == 2
    assert call(["bundle", "h0", "--degrees", "1", "--bogus"])[0] == 2
    assert call(["bundle", "h0", "--degrees", "a,b"])[0] == 2


def test_decompose_and_cohomology(monkeypatch):
    lat = json.dumps({"sigma": [[0, 1, 0], [1, 0, 0], [0, 0, -1]]})
    code, text = call(["decompose"], lat, monkeypatch)
    assert code == 0 and text.splitlines()[0] == "Z[G] ⊕ Z₋"
    code, text = call(["cohomology", "--json", "--level", "6"], lat, monkeypatch)
    rep = json.loads(text)
    assert code == 0 and rep["H^1"] == "Z/2" and rep["H^2"] == "0" and rep["verdict"] is True


def test_bad_inputs(monkeypatch, tmp_path):
    assert call(["decompose"], "not json", monkeypatch)[0] == 2
    assert call(["decompose"], json.dumps({"sigma": [[1, 1], [0, 1]]}), monkeypatch)[0] == 2
    assert call(["decompose", str(tmp_path / "missing.json")])[0] == 2
    assert call(["prym"], json.dumps({"gram": [[0, 1], [1, 0]], "sigma": [[0, 1], [1, 0]],
                                      "sublattices": {"M": [[1, 0]]}}), monkeypatch)[0] == 2


def test_prym_and_modify(tmp_path):
    f = tmp_path / "hyp.json"
    f.write_text(json.dumps({"gram": [[0, 1], [1, 0]], "sigma": [[0, 1], [1, 0]]}))
    code, text = call(["prym", str(f), "--json"])
    rep = json.loads(text)
    assert code == 0 and rep["halved_gram"] == [[-1]]
    code, text = call(["modify", str(f), "--vector", "1,1", "--sign", "+", "--json"])
    assert code == 0 and json.loads(text)["gram"] == [[1, 2], [2, 1]]
    assert call(["modify", str(f), "--vector", "1", "--sign", "+"])[0] == 2


def test_verifiers_via_files(tmp_path):
    f = tmp_path / "amb.json"
    f.write_text(preset("cubic-ambient"))
    code, text = call(["brauer", str(f), "--level", "15", "--json"])
    rep = json.loads(text)
    assert code == 0 and rep["verdict"] is True and rep["K"] == "0"
    # the cubic ambient is Z[G]^2: the fixed-point shape with r = 2, never the free one
    code, text = call(["verify-rank", str(f), "--mode", "fixed", "--r", "2", "--json"])
    assert code == 0 and json.loads(text)["verdict"] is True
    code, _ = call(["verify-rank", str(f), "--mode", "free", "--json"])
    assert code == 2
    assert call(["verify-rank", str(f), "--mode", "fixed"])[0] == 2


def test_verify_correspondence_pass_and_fail(tmp_path):
    W = surface_type_lattice(2, 1, "fixed")
    lam, Phi, Psi = canonical_correspondence(W)
    data = {"lambda_x": lam.gram.tolist(), "W": W.to_dict(), "M": [],
            "Phi": Phi.tolist(), "Psi": Psi.tolist()}
    f = tmp_path / "corr.json"
    f.write_text(json.dumps(data))
    assert call(["verify-correspondence", str(f)])[0] == 0
    data["Phi"][0][0] += 1
    f.write_text(json.dumps(data))
    assert call(["verify-correspondence", str(f)])[0] == 1
    del data["Psi"]
    f.write_text(json.dumps(data))
    assert call(["verify-correspondence", str(f)])[0] == 2


def test_preset_reports():
    for argv in (["preset", "bd", "--report"], ["preset", "cubic-m", "--report"],
                 ["preset", "picard3", "--m", "3", "--d", "1", "--report"]):
        code, text = call(argv + ["--json"])
        assert code == 0, argv
    assert json.loads(call(["preset", "cubic-m", "--report", "--json"])[1])["g_squared"] == 21
    assert call(["preset", "picard3", "--m", "1"])[0] == 2


def test_machine_output_is_deterministic(tmp_path):
    f = tmp_path / "amb.json"
    f.write_text(preset("cubic-ambient"))
    first = call(["brauer", str(f), "--level", "9", "--json"])[1]
    second = call(["brauer", str(f), "--level", "9", "--json"])[1]
    assert first == second
    assert preset("bd") == preset("bd")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "prymlat", "bundle", "h0", "--degrees",
                           "2,1,0,0", "--m", "2", "--k", "3"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "25"


@pytest.mark.parametrize("argv", [["surface", "--h2", "6", "--r", "2"],
                                  ["chow", "class-s", "--gamma", "1,0,2", "--lambda", "3"]])
def test_text_output_nonempty(argv):
    code, text = call(argv)
    assert code == 0 and text.strip()
