import json
from pathlib import Path

import pytest

from commensur.abelian import AbHom, FgAbGroup, commensurability
from commensur.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def d(name):
    return str(DATA / name)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestIa:
    def test_prop_example(self, capsys):
        assert run(capsys, "ia", d("z.json"), d("z_z2.json"))[:2] == (0, "2\n")

    def test_identical(self, capsys):
        assert run(capsys, "ia", d("z_z2.json"), d("z_z2.json"))[:2] == (0, "1\n")

    def test_rank_mismatch(self, capsys):
        assert run(capsys, "ia", d("z.json"), d("z2.json"))[0] == 2

    def test_finite_modules(self, capsys, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        a.write_text(json.dumps({"grp": {"rank": 0, "torsion": ["2"]}}))
        b.write_text(json.dumps({"rank": 0, "torsion": ["4"]}))
        assert run(capsys, "ia", str(a), str(b))[:2] == (0, "2\n")

    def test_missing_file(self, capsys):
        assert run(capsys, "ia", "no-such-file.json", d("z.json"))[0] == 1


class TestIe:
    def test_alpha_file(self, capsys):
        out = run(capsys, "ie", d("upper_triangular_regular.json"), "--alpha", d("alpha_diag_1_2.json"))
        assert out[:2] == (0, "2\n")

    def test_alpha_identity(self, capsys):
        ident = json.dumps([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]])
        assert run(capsys, "ie", d("upper_triangular_regular.json"), "--alpha", ident)[:2] == (0, "1\n")

    def test_rational_alpha(self, capsys):
        alpha = json.dumps([["1/2", "0", "0"], ["0", "3/2", "0"], ["0", "0", "3/2"]])
        assert run(capsys, "ie", d("upper_triangular_regular.json"), "--alpha", alpha)[:2] == (0, "3\n")

    def test_pair(self, capsys):
        assert run(capsys, "ie", d("c2_regular.json"), d("c2_trivial_plus_sign.json"))[:2] == (0, "2\n")
        assert run(capsys, "ie", d("c2_regular.json"), d("c2_trivial_plus_sign.json"),
                   "--phi", "1")[:2] == (0, "2\n")
        assert run(capsys, "ie", d("c2_trivial_plus_sign.json"), d("c2_regular.json"))[:2] == (0, "1/2\n")

    def test_not_in_commutant(self, capsys):
        swap = json.dumps([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
        assert run(capsys, "ie", d("upper_triangular_regular.json"), "--alpha", swap)[0] == 2

    def test_not_semisimple(self, capsys):
        assert run(capsys, "ie", d("upper_triangular_regular.json"), d("upper_triangular_regular.json"))[0] == 2

    def test_malformed(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert run(capsys, "ie", str(bad), "--alpha", "[[1]]")[0] == 1
        assert run(capsys, "ie", d("c2_regular.json"))[0] == 1


class TestCheck:
    def test_welldef(self, capsys):
        code, out, _ = run(capsys, "check", "welldef", "--group", "S3", "--trials", "100", "--seed", "42")
        assert code == 0
        assert "100/100 pass" in out
        assert out.startswith("# welldef cap=") and "seed=42" in out

    def test_check_exponent(self, capsys):
        code, out, _ = run(capsys, "check", "theorem-w", "--n", "2", "--q", "3")
        assert code == 0
        assert "M_2(F_3): exponent 2" in out and "1/1 pass" in out

    def test_multiplicativity(self, capsys):
        code, out, _ = run(capsys, "check", "multiplicativity", "--trials", "500", "--seed", "7")
        assert code == 0 and "500/500 pass" in out

    def test_check_unit_isogeny(self, capsys):
        code, out, _ = run(capsys, "check", "theorem-o", "--format", "json")
        res = json.loads(out)["result"]
        assert code == 0 and res["total"] >= 20 and not res["failures"]

    def test_deterministic(self, capsys):
        args = ("check", "welldef", "--group", "C3", "--trials", "20", "--seed", "5", "--format", "json")
        first = run(capsys, *args)[1]
        second = run(capsys, *args)[1]
        assert first == second
        payload = json.loads(first)
        assert payload["version"] == 1 and payload["seed"] == 5
        assert payload["result"]["config"] == {"cap": 65536, "group": "C3", "seed": 5, "trials": 20}

    def test_bad_option(self, capsys):
        assert run(capsys, "check", "nonsense")[0] == 1
        assert run(capsys, "check", "theorem-w", "--n", "2")[0] == 1

    def test_cap(self, capsys):
        assert run(capsys, "check", "theorem-w", "--n", "2", "--q", "3", "--cap", "10")[0] == 3


class TestFinring:
    def test_units(self, capsys):
        code, out, _ = run(capsys, "finring", "units", "--zmod", "8", "--format", "json")
        res = json.loads(out)["result"]
        assert code == 0 and res["count"] == 4 and res["elements"] == [["1"], ["3"], ["5"], ["7"]]

    def test_matrix_units(self, capsys):
        code, out, _ = run(capsys, "finring", "units", "--n", "2", "--q", "2")
        assert code == 0 and "count: 6" in out

    def test_radical(self, capsys):
        code, out, _ = run(capsys, "finring", "radical", "--zmod", "4", "--format", "json")
        assert json.loads(out)["result"]["elements"] == [["0"], ["2"]]

    def test_not_prime_power(self, capsys):
        assert run(capsys, "finring", "units", "--n", "2", "--q", "6")[0] == 2


class TestOracle:
    def test_aut_order(self, capsys, tmp_path):
        g = tmp_path / "g.json"
        g.write_text(json.dumps({"rank": 0, "torsion": ["2", "4"]}))
        code, out, _ = run(capsys, "oracle", "aut-order", str(g), "--format", "json")
        assert code == 0 and json.loads(out)["result"]["aut_order"] == 8

    def test_infinite(self, capsys):
        assert run(capsys, "oracle", "aut-order", d("z_z2.json"))[0] == 2

    def test_homs(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        a.write_text(json.dumps({"rank": 0, "torsion": ["2"]}))
        b.write_text(json.dumps({"rank": 0, "torsion": ["4"]}))
        code, out, _ = run(capsys, "oracle", "homs", str(a), str(b), "--format", "json")
        assert code == 0 and json.loads(out)["result"]["count"] == 2


def test_compose(capsys, tmp_path):
    z = FgAbGroup(1)
    c = commensurability(z, AbHom.identity(z), AbHom.scalar(z, 2))
    e = commensurability(z, AbHom.identity(z), AbHom.scalar(z, 3))
    p, q = tmp_path / "c.json", tmp_path / "d.json"
    p.write_text(json.dumps(c.to_json()))
    q.write_text(json.dumps(e.to_json()))
    code, out, _ = run(capsys, "compose", str(p), str(q), "--format", "json")
    res = json.loads(out)["result"]
    assert code == 0 and res["index"] == "6" and res["first_index"] == "2"


def test_console_script():
    import shutil
    import subprocess

    exe = shutil.which("commensur")
    if exe is None:
        pytest.skip("console script not installed")
    out = subprocess.run([exe, "ia", d("z.json"), d("z_z2.json")], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout == "2\n"
