import json

import pytest

from artifact import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestConfig:
    def test_dump_config(self, capsys):
        code, out, _ = run(capsys, "--dump-config")
        assert code == 0
        keys = dict(
            line.split(" = ", 1) for line in out.strip().splitlines()
        )
        assert keys["n"] == "2"
        assert "seed" in keys

    def test_config_roundtrip(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("n = 3\nsing_grid = 256\n")
        code, out, _ = run(capsys, "--config", str(cfg), "--dump-config")
        assert code == 0
        assert "n = 3" in out
        assert "sing_grid = 256" in out

    def test_bad_config_key(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("not_a_key = 1\n")
        code, _, err = run(capsys, "--config", str(cfg), "--dump-config")
        assert code == 1
        assert "unknown key" in err


class TestIti:
    def test_constant_h_empty_itinerary(self, capsys, tmp_path):
        spec = tmp_path / "c.spec"
        spec.write_text("kind = constant\nn = 2\nkappa = h\nsteps = 800\n")
        code, out, _ = run(capsys, "iti", str(spec))
        assert code == 0
        data = json.loads(out)
        assert data["itinerary"] == []
        assert data["word"] == "()"
        # endpoint is -1 = hat(eta) for n = 2
        scalar = [
            t for t in data["endpoint"]["terms"] if t["blade"] == []
        ][0]
        assert abs(scalar["coeff"] + 1.0) < 1e-6

    def test_section_spec(self, capsys, tmp_path):
        spec = tmp_path / "s.spec"
        spec.write_text(
            "kind = section\nn = 2\nsigma = aba\npoint = 1/3, -1/18\n"
        )
        code, out, _ = run(capsys, "iti", str(spec))
        assert code == 0
        data = json.loads(out)
        assert data["word"] == "[ba]a"

    def test_csv_traces(self, capsys, tmp_path):
        spec = tmp_path / "c.spec"
        spec.write_text("kind = constant\nn = 2\nkappa = h\nsteps = 400\n")
        csvfile = tmp_path / "m.csv"
        cfg = tmp_path / "run.cfg"
        cfg.write_text("sing_grid = 64\n")
        code, _, _ = run(
            capsys, "--config", str(cfg), "iti", str(spec), "--csv", str(csvfile)
        )
        assert code == 0
        lines = csvfile.read_text().strip().splitlines()
        assert lines[0] == "t,m_1,m_2"
        assert len(lines) == 66  # header + 65 samples

    def test_malformed_spec(self, capsys, tmp_path):
        spec = tmp_path / "bad.spec"
        spec.write_text("kind = nonsense\n")
        code, _, err = run(capsys, "iti", str(spec))
        assert code == 1
        assert "nonsense" in err

    def test_missing_file(self, capsys):
        code, _, _ = run(capsys, "iti", "/nonexistent/path.spec")
        assert code == 1


class TestSection:
    def test_aba_formulas(self, capsys):
        code, out, _ = run(capsys, "section", "aba")
        assert code == 0
        data = json.loads(out)
        assert data["discriminants"]["d_1"] == "-2*x2"
        assert data["discriminants"]["d_2"] == "x1**2 + 2*x2"

    def test_identity_letter(self, capsys):
        code, _, err = run(capsys, "section", "e")
        assert code == 1

    def test_family_grid(self, capsys, tmp_path):
        csvfile = tmp_path / "map.csv"
        code, _, _ = run(
            capsys,
            "section", "acb", "--n", "3",
            "--family", "betaprime", "--u", "2/5",
            "--grid", "6x6", "--radius", "1/5",
            "--csv", str(csvfile),
        )
        assert code == 0
        lines = csvfile.read_text().strip().splitlines()
        assert lines[0].startswith("x1,x2,u,itinerary")
        assert len(lines) == 37

    def test_family_grid_needs_u(self, capsys):
        code, _, err = run(
            capsys, "section", "acb", "--family", "betaprime", "--grid", "4x4"
        )
        assert code == 1
        assert "--u" in err


class TestPoset:
    def test_certificate_yes(self, capsys):
        code, out, _ = run(capsys, "poset", "aa", "[aba]")
        assert code == 0
        data = json.loads(out)
        assert data["status"] == "yes"

    def test_empty_word_isolated(self, capsys):
        code, out, _ = run(capsys, "poset", "()", "[aba]")
        assert code == 0
        assert json.loads(out)["status"] == "no"

    def test_below_writes_dot(self, capsys, tmp_path):
        dot = tmp_path / "h.dot"
        code, out, _ = run(
            capsys, "poset", "--below", "aba", "--hasse", str(dot)
        )
        assert code == 0
        data = json.loads(out)
        assert len(data["words"]) == 9
        text = dot.read_text()
        assert text.startswith("digraph hasse {")
        assert '"aa" -> "a[ba]";' in text


class TestGroup:
    def test_mult(self, capsys):
        code, out, _ = run(capsys, "group", "mult", "acb", "--n", "3")
        assert code == 0
        assert json.loads(out)["mult"] == [2, 1, 2]

    def test_rbullet(self, capsys):
        code, out, _ = run(capsys, "group", "rbullet", "3")
        assert code == 0
        assert json.loads(out)["rbullet"] == 4

    def test_qword(self, capsys):
        code, out, _ = run(capsys, "group", "qword", "abab", "--n", "2")
        assert code == 0
        data = json.loads(out)["qword"]
        assert data["terms"] == [
            {"blade": [], "coeff": {"p": "1", "q": "0"}}
        ]

    def test_bad_query_argument(self, capsys):
        code, _, _ = run(capsys, "group", "mult", "zzz")
        assert code == 1


class TestUsage:
    def test_no_subcommand(self, capsys):
        code, _, err = run(capsys)
        assert code == 1

    def test_unknown_flag(self, capsys):
        code, _, _ = run(capsys, "--definitely-not-a-flag")
        assert code == 1
