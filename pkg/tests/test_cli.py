from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from zdmult import cli
from zdmult.algebra import act
from zdmult.catalog import quadratic
from zdmult.certificates import CertificateError, certificate, verify_certificate
from zdmult.specfile import (
    SpecError,
    canonical,
    catalog_spec,
    load_spec,
    make_spec,
    multiplication_of,
    parse_matrix,
    parse_vector,
    spec_hash,
    spec_of,
)


def _run(capsys, *argv):
    code = cli.run(list(argv))
    cap = capsys.readouterr()
    out = json.loads(cap.out) if cap.out.strip() else None
    return code, out, cap.err


@pytest.fixture
def specs(tmp_path, capsys):
    paths = {}
    for name in ("gauss", "sqrt2", "scaled1", "scaled2", "quaternion"):
        p = tmp_path / f"{name}.spec"
        p.write_text(json.dumps(catalog_spec(name)))
        paths[name] = str(p)
    return paths


# --- spec files -------------------------------------------------------------


def test_spec_round_trip_and_hash():
    for name in ("gauss", "golden", "quaternion", "scaled3"):
        doc = catalog_spec(name)
        m = multiplication_of(doc)
        assert multiplication_of(json.loads(json.dumps(doc))) == m
        assert spec_hash(doc) == spec_hash(json.loads(canonical(doc)))
    a = catalog_spec("gauss")
    b = dict(a, label="other")
    assert spec_hash(a) != spec_hash(b)


def test_spec_of_acted_multiplication():
    m = act(quadratic(0, 2), parse_matrix("[[1,1],[0,1]]"))
    doc = spec_of(m)
    assert doc["kind"] == "acted" and multiplication_of(doc).sc == m.sc


def test_spec_errors(tmp_path):
    with pytest.raises(SpecError):
        multiplication_of({"version": 1, "dim": 2, "kind": "raw"})
    with pytest.raises(SpecError, match="associative"):
        multiplication_of(make_spec("raw", {"tensor": [[[0, 1], [0, 0]], [[1, 0], [0, 0]]]}, 2))
    with pytest.raises(SpecError, match="dim"):
        multiplication_of(make_spec("quaternion", {}, 3))
    with pytest.raises(SpecError):
        load_spec(str(tmp_path / "missing.spec"))
    with pytest.raises(SpecError):
        parse_vector("[[1,2]]")


def test_number_syntax():
    assert parse_vector("1, -1/2, 3") == (1, parse_matrix("[[-1/2]]").rows[0][0], 3)
    assert parse_matrix("[[0,1],[1,0]]").rows == ((0, 1), (1, 0))
    with pytest.raises(SpecError):
        parse_matrix("[[1,2],[3]]")


# --- commands ---------------------------------------------------------------


def test_align_not_aligned(capsys, specs):
    code, out, err = _run(capsys, "align", specs["gauss"], specs["sqrt2"])
    assert code == 0
    assert out["kind"] == "alignment" and out["payload"]["verdict"] == "not-aligned"
    assert out["payload"]["intersection_rank"] == 1
    assert out["specs"]["A"]["sha256"] == spec_hash(catalog_spec("gauss"))
    assert "not aligned" in err


def test_align_aligned_with_catalog_names(capsys):
    code, out, _ = _run(capsys, "align", "scaled2", "scaled3")
    assert code == 0 and out["payload"]["verdict"] == "aligned"
    assert out["payload"]["v"] == [9] and out["payload"]["w"] == [4]


def test_preserves(capsys, specs):
    code, out, _ = _run(capsys, "preserves", specs["gauss"], "[[0,1],[1,0]]", "PS*")
    assert code == 0
    assert out["payload"]["preserves"] is True and "normalizer" in out["payload"]["reason"]


def test_construct_avoid_aligned_exit_3(capsys, specs):
    code, out, err = _run(capsys, "construct", "avoid", "--base", specs["scaled1"], "--avoid", specs["scaled2"],
                          "--G", "[1,2]")
    assert code == 3 and out["error"] == "hypothesis-violation"
    assert "aligned" in err


def test_search_exhaustion_exit_2(capsys, monkeypatch):
    monkeypatch.setenv("ZDMULT_SEARCH_RADIUS", "1")
    code, out, _ = _run(capsys, "construct", "thick", "--thick", "gauss", "--avoid", "sqrt2", "--stages", "3")
    assert code == 2 and out["error"] == "search-exhausted" and out["stage"] >= 1


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["align", "gauss"],
        ["bogus"],
        ["align", "gauss", "no-such-ring"],
        ["preserves", "gauss", "[[0,1],[1,0]]", "XYZ"],
        ["genpoly", "parse", "n + 1"],
        ["normalizer", "gauss", "[[1,0,0],[0,1,0],[0,0,1]]"],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    assert cli.run(argv) == 1
    assert "usage error" in capsys.readouterr().err


def test_ring_define_show_catalog(capsys, tmp_path):
    path = str(tmp_path / "g.spec")
    code, out, _ = _run(capsys, "ring", "define", "--kind", "polynomial", "--coeffs", "[1,0,1]", "--label", "G", "-o", path)
    assert code == 0 and out["proper"] is True
    code, out, _ = _run(capsys, "ring", "show", path)
    assert out["label"] == "G" and out["commutative"] and out["sha256"] == spec_hash(json.load(open(path)))
    code, out, _ = _run(capsys, "ring", "catalog")
    assert len(out["catalog"]) == 12
    assert cli.run(["ring", "define", "--kind", "scaled_z"]) == 1


def test_repr(capsys):
    code, out, _ = _run(capsys, "repr", "gauss", "[0,1]")
    assert out["left"] == [[0, -1], [1, 0]]


@pytest.mark.parametrize(
    "argv",
    [
        ["align", "gauss", "sqrt2"],
        ["align", "scaled1", "scaled3"],
        ["normalizer", "gauss", "[[0,1],[1,0]]"],
        ["normalizer", "sqrt2", "[[0,1],[1,0]]"],
        ["centralizer", "quaternion", "[[2,0,0,0],[0,2,0,0],[0,0,2,0],[0,0,0,2]]"],
        ["automorphism", "quaternion", "[[1,0,0,0],[0,0,1,0],[0,0,0,1],[0,1,0,0]]"],
        ["preserves", "quaternion", "[[1,0,0,0],[0,-1,0,0],[0,0,-1,0],[0,0,0,-1]]", "IP_2*"],
        ["construct", "avoid", "--base", "gauss", "--avoid", "sqrt2", "--cube", "1"],
        ["construct", "thick", "--thick", "gauss", "--avoid", "sqrt2", "--stages", "2"],
        ["construct", "ipstar-nonsyn", "--mults", "gauss", "sqrt2", "--stages", "2", "--window", "3"],
        ["construct", "ip-sep", "--A", "gauss", "--B", "sqrt3", "--n", "2"],
        ["construct", "ip-order", "--ring", "quaternion", "--n", "2"],
    ],
)
def test_certificates_verify(capsys, tmp_path, argv):
    path = str(tmp_path / "cert.json")
    code, cert, _ = _run(capsys, *argv, "-o", path)
    assert code == 0
    assert json.load(open(path)) == cert
    code, res, err = _run(capsys, "verify", path)
    assert code == 0 and res["verified"], res
    assert "verified" in err


def test_tampered_certificates_fail(capsys, tmp_path):
    _, cert, _ = _run(capsys, "align", "gauss", "sqrt2")
    bad = json.loads(json.dumps(cert))
    bad["specs"]["B"]["spec"]["payload"]["coefficients"] = [-3, 0, 1]
    res = verify_certificate(bad)
    assert not res["hashes_ok"] and not res["verified"]
    bad = json.loads(json.dumps(cert))
    bad["payload"]["intersection_rank"] = 2
    assert not verify_certificate(bad)["verified"]

    _, cert, _ = _run(capsys, "construct", "thick", "--thick", "gauss", "--avoid", "sqrt2", "--stages", "2")
    bad = json.loads(json.dumps(cert))
    bad["payload"]["stages"][1]["min_norm_sq"] = int(bad["payload"]["stages"][1]["min_norm_sq"]) - 1
    assert not verify_certificate(bad)["verified"]

    _, cert, _ = _run(capsys, "construct", "ip-sep", "--A", "scaled1", "--B", "scaled2", "--n", "2")
    bad = json.loads(json.dumps(cert))
    bad["payload"]["generators"] = [[1], [2]]
    assert not verify_certificate(bad)["verified"]

    with pytest.raises(CertificateError):
        verify_certificate({"format": "x"})
    with pytest.raises(CertificateError):
        verify_certificate(certificate("nope", {}, {}))
    p = tmp_path / "junk.json"
    p.write_text("{")
    assert cli.run(["verify", str(p)]) == 1


def test_check_commands(capsys, tmp_path):
    code, out, _ = _run(capsys, "check", "ipr", "--set", "v2:even", "--op", "scaled2", "--r", "2", "--box", "64")
    assert code == 0 and out["verdict"] == "refuted-on-window"
    sfile = tmp_path / "A.txt"
    sfile.write_text("".join(f"{n}\n" for n in range(-40, 41, 2)))
    code, out, _ = _run(capsys, "check", "syndetic", "--set", str(sfile), "--op", "additive",
                        "--shifts", "[0,1]", "--window", "30")
    assert code == 0 and out["verdict"] == "witnessed"
    code, out, _ = _run(capsys, "check", "density", "--set", str(sfile), "--op", "additive",
                        "--F", "[1,2,3,4]", "--box", "10")
    assert code == 0 and 0 <= out["approx"] <= 1
    code, out, _ = _run(capsys, "check", "thick", "--set", str(sfile), "--op", "additive", "--F", "[0,2,4]")
    assert out["verdict"] == "witnessed"


def test_genpoly_commands(capsys, tmp_path):
    code, out, _ = _run(capsys, "genpoly", "parse", "sqrt(2)*m*m*m*[root(5,4)*n*n + pi*n*m*[root(9,8)*n]]")
    assert code == 0 and out["depth"] == 3 and out["variables"] == ["n", "m"]
    code, out, _ = _run(capsys, "genpoly", "eval", "sqrt(2)*n", "169")
    assert code == 0 and Fraction(out["distance"]["upper"]) < Fraction(1, 100)
    members = tmp_path / "members.txt"
    code, out, _ = _run(capsys, "genpoly", "scan", "sqrt(2)*n", "--eps", "0.01", "--box", "1:1000", "-o", str(members))
    assert code == 0 and [169] in out["members"] and out["straddles"] == []
    assert "169" in members.read_text()
    code, out, _ = _run(capsys, "genpoly", "fs", "sqrt(2)*n", "--eps", "0.1", "--gens", "[12,29,70]")
    assert code == 0 and out["details"]["fs_size"] == 7
    code, out, _ = _run(capsys, "genpoly", "eval", "[sqrt(2)*n*n*n*n*n*n*n*n*n*n*n*n]*n", str(10 ** 30),
                        "--precision", "8", "--max-precision", "16")
    assert code == 2 and out["error"] == "straddle"


def test_json_flag_anywhere(capsys):
    cli.run(["align", "--json", "gauss", "sqrt2"])
    out = capsys.readouterr().out
    assert out.count("\n") == 1 and json.loads(out)["kind"] == "alignment"


@pytest.mark.parametrize(
    "argv",
    [
        ["align", "gauss", "sqrt2"],
        ["construct", "thick", "--thick", "gauss", "--avoid", "sqrt2", "--stages", "2"],
        ["check", "psstar", "--set", "v2:even", "--op", "scaled1", "--F", "[1,2]", "--N", "2"],
        ["genpoly", "scan", "pi*n*[sqrt(3)*n]", "--eps", "0.05", "--box=-50:50"],
    ],
)
def test_outputs_are_bit_identical(capsys, argv):
    runs = []
    for _ in range(2):
        cli.run(argv)
        runs.append(capsys.readouterr().out)
    assert runs[0] == runs[1] and runs[0]


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "zdmult.cli", "align", "scaled1", "scaled2", "--json"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["payload"]["verdict"] == "aligned"
