import json
import os

from foliated_blowup.session.cli import bundled_session, main


def write_script(tmp_path, name="worked_example_good"):
    path = tmp_path / f"{name}.fbs"
    path.write_text(bundled_session(name), encoding="utf-8")
    return str(path)


def test_check(tmp_path, capsys):
    path = write_script(tmp_path)
    assert main(["check", path]) == 0
    assert "12 statements" in capsys.readouterr().out


def test_check_reports_position(tmp_path, capsys):
    path = tmp_path / "bad.fbs"
    path.write_text('space 2 vars x y ring Z\ndistribution theta gens "d/dx"\nideal I gens "y"\n'
                    'blowup center="x,w" chart=x\n', encoding="utf-8")
    assert main(["check", str(path)]) == 2
    assert ":4:18:" in capsys.readouterr().err


def test_run_json(tmp_path):
    path = write_script(tmp_path)
    out = tmp_path / "report.json"
    assert main(["run", path, "--json", str(out)]) == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert len(data) == 12


def test_run_text(tmp_path, capsys):
    path = write_script(tmp_path, "worked_example_bad")
    assert main(["run", path, "--text"]) == 0
    assert "nilpotent linear part" in capsys.readouterr().out


def test_run_figures(tmp_path, capsys):
    path = write_script(tmp_path)
    figs = tmp_path / "figs"
    assert main(["run", path, "--json", str(tmp_path / "r.json"), "--figures", str(figs)]) == 0
    names = sorted(os.listdir(figs))
    assert names == ["worked_example_good-descent.png", "worked_example_good-ideal.png"]
    for n in names:
        assert (figs / n).read_bytes()[:4] == b"\x89PNG"


def test_golden(capsys):
    assert main(["golden"]) == 0
    out = capsys.readouterr().out
    assert "worked_example_good: match" in out
    assert "worked_example_bad: match" in out


def test_suite(tmp_path):
    out = tmp_path / "suite.json"
    assert main(["suite", "--json", str(out)]) == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert set(data) == {"golden", "preservation", "chain_identity", "descent", "flow_oracle",
                         "fitting_transform"}
