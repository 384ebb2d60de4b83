import json

import numpy as np
import pytest

from nonsep.cli import main
from nonsep.family import load_scene


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_gen(tmp_path, kind, *extra):
    path = tmp_path / f"{kind.replace(':', '_')}.json"
    assert main(["gen", kind, "-o", str(path), *extra]) == 0
    return path


def test_gen_kinds(tmp_path):
    assert load_scene(write_gen(tmp_path, "ring")).n == 5
    assert load_scene(write_gen(tmp_path, "ring:3")).n == 7
    assert load_scene(write_gen(tmp_path, "chain:4")).n == 4
    assert load_scene(write_gen(tmp_path, "counterexample3")).n == 3
    assert load_scene(write_gen(tmp_path, "tetrahedra")).dimension == 3
    assert load_scene(write_gen(tmp_path, "touching-chain", "--ratios", "1,2")).n == 2
    assert load_scene(write_gen(tmp_path, "random:5", "--ns", "--seed", "3")).n == 5


def test_gen_stdout_deterministic(capsys):
    _, a, _ = run(capsys, "gen", "random", "--seed", "9")
    _, b, _ = run(capsys, "gen", "random", "--seed", "9")
    assert a == b and json.loads(a)["members"]


def test_gen_bad_kind(capsys):
    code, _, err = run(capsys, "gen", "pentagon")
    assert code == 2 and "unknown kind" in err


def test_check_ns_and_separable(tmp_path, capsys):
    ce = write_gen(tmp_path, "counterexample3")
    code, out, _ = run(capsys, "check", str(ce))
    assert code == 0 and json.loads(out)["verdict"] is True
    sep = write_gen(tmp_path, "ring", "--drop", "1")
    code, out, _ = run(capsys, "check", str(sep))
    rec = json.loads(out)
    assert code == 1 and rec["verdict"] is False and rec["certificate"]["replays"] is True
    code, out, _ = run(capsys, "check", str(sep), "--mode", "oracle")
    assert code == 1


def test_check_other_modes(tmp_path, capsys):
    sq = write_gen(tmp_path, "touching-chain")
    assert run(capsys, "check", str(sq), "--mode", "0ip")[0] == 0
    tet = write_gen(tmp_path, "tetrahedra")
    assert run(capsys, "check", str(tet), "--mode", "ns")[0] == 0
    assert run(capsys, "check", str(tet), "--mode", "1ip3d")[0] in (0, 1)


def test_check_bad_input(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "check", str(bad))[0] == 2
    assert run(capsys, "check", str(tmp_path / "missing.json"))[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["check", str(bad), "--mode", "bogus"])
    assert exc.value.code == 2


def test_lambda(tmp_path, capsys):
    ce = write_gen(tmp_path, "counterexample3")
    code, out, _ = run(capsys, "lambda", str(ce))
    rec = json.loads(out)
    assert code == 0
    assert rec["lambda"] == pytest.approx(2 / 3 + 2 / (3 * np.sqrt(3)), abs=1e-9)


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "thm5", "--seed", "7", "--count", "5")
    assert code == 0 and out.startswith("thm5") and "PASS  5/5 cases" in out
    code, out, _ = run(capsys, "verify", "--suite", "lemma3", "--count", "5", "--inject-corrupt", "--json")
    assert code == 1 and json.loads(out)["passed"] is False


def test_extremal_incomplete_exits_one(capsys):
    code, out, _ = run(capsys, "extremal", "--starts", "1")
    assert code == 1 and "INCOMPLETE" in out


def test_search_writes_scene(tmp_path, capsys):
    path = tmp_path / "best.json"
    code, out, _ = run(capsys, "search", "--iterations", "200", "--seed", "1", "-o", str(path))
    rec = json.loads(out)
    assert code == 0 and rec["known_bracket"][1] == 2.0
    assert load_scene(path).n == 3


def test_render(tmp_path, capsys):
    ce = write_gen(tmp_path, "counterexample3")
    cov = tmp_path / "cov.json"
    main(["lambda", str(ce)])
    cov.write_text(capsys.readouterr().out)
    svg = tmp_path / "ce.svg"
    assert main(["render", str(ce), "--cover", str(cov), "--annotate", "-o", str(svg)]) == 0
    text = svg.read_text()
    assert text.count("<polygon") == 5 and 'id="cover"' in text

    sep = write_gen(tmp_path, "ring", "--drop", "0")
    cert = tmp_path / "cert.json"
    main(["check", str(sep)])
    cert.write_text(capsys.readouterr().out)
    code, out, _ = run(capsys, "render", str(sep), "--certificate", str(cert))
    assert code == 0 and 'id="gap"' in out

    tet = write_gen(tmp_path, "tetrahedra")
    assert run(capsys, "render", str(tet))[0] == 2
