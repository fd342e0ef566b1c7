import subprocess
import sys

import pytest

from loopkit.cli import main
from loopkit.core import format_table
from loopkit.library import decode_catalog

Z4 = "1 2 3 4\n2 3 4 1\n3 4 1 2\n4 1 2 3\n"
V4 = "1 2 3 4\n2 1 4 3\n3 4 1 2\n4 3 2 1\n"


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in (("z4", Z4), ("v4", V4), ("q2", "2 1\n1 2\n"), ("bad", "1 2\n1 2\n")):
        p = tmp_path / f"{name}.tab"
        p.write_text(text)
        paths[name] = str(p)
    space = tmp_path / "alpha.space"
    space.write_text("n 3\nalpha 1 2 3\n")
    paths["space"] = str(space)
    return paths


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_inspect(files, capsys):
    code, out, _ = run(["inspect", files["z4"]], capsys)
    assert code == 0
    assert "nilpotency class: 1" in out
    assert "  associative: yes" in out
    assert "  moufang: yes (deduced)" in out
    assert "mu: 0" in out


def test_inspect_is_deterministic(files, capsys):
    first = run(["inspect", files["z4"]], capsys)
    assert run(["inspect", files["z4"]], capsys) == first


def test_inspect_quasigroup(files, capsys):
    code, out, _ = run(["inspect", files["q2"]], capsys)
    assert code == 0 and "kind: quasigroup" in out and "moufang" not in out


def test_iso(files, capsys):
    code, out, _ = run(["iso", files["z4"], files["v4"]], capsys)
    assert code == 1 and out.strip() == "fail"
    code, out, _ = run(["iso", files["z4"], files["z4"]], capsys)
    assert code == 0 and "images: 1 " in out


def test_isotopy(files, capsys):
    code, out, _ = run(["isotopy", files["z4"], files["v4"]], capsys)
    assert code == 1 and out.strip() == "fail"
    code, out, _ = run(["isotopy", files["v4"], files["v4"]], capsys)
    assert code == 0 and out.startswith("alpha:")


def test_enumerate(tmp_path, capsys):
    cat, text = tmp_path / "five.lcat", tmp_path / "five.txt"
    code, out, _ = run(["enumerate", "5", "--out", str(cat), "--text", str(text)], capsys)
    assert code == 0 and out.strip() == "6 loops (5 nonassociative)"
    assert len(decode_catalog(cat.read_bytes())) == 6
    assert text.read_text().count("# loop") == 6


def test_enumerate_rejects_large_order(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["enumerate", "7"])
    assert exc.value.code == 2
    assert "N" in capsys.readouterr().err


def test_codeloop(files, tmp_path, capsys):
    out_file = tmp_path / "cl.tab"
    code, out, _ = run(["codeloop", files["space"], "--out", str(out_file)], capsys)
    assert code == 0
    assert "order: 16" in out and "moufang: yes" in out and "roundtrip: exact" in out
    assert len(out_file.read_text().splitlines()) == 16


def test_symmetrize(files, tmp_path, capsys):
    table = tmp_path / "cl.tab"
    run(["codeloop", files["space"], "--out", str(table)], capsys)
    code, out, _ = run(["symmetrize", str(table), "--subloop", "nucleus", "--h", "center"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "initial mu=1344"
    assert lines[1].startswith("step 1: flip (") and lines[3].endswith("mu=576")
    code, out, _ = run(["symmetrize", files["z4"], "--subloop", "1,3", "--h", "3"], capsys)
    assert code == 0 and out.splitlines()[0] == "initial mu=0"


def test_symmetrize_bad_flags(files, capsys):
    code, _, err = run(["symmetrize", files["z4"], "--subloop", "1,9", "--h", "3"], capsys)
    assert code == 2 and "--subloop" in err
    code, _, err = run(["symmetrize", files["z4"], "--subloop", "1,3", "--h", "2"], capsys)
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["symmetrize", files["z4"], "--subloop", "1,3"])
    assert exc.value.code == 2 and "--h" in capsys.readouterr().err


def test_convert(files, capsys):
    code, out, _ = run(["convert", files["q2"], "--as", "loop"], capsys)
    assert code == 0 and out == "1 2\n2 1\n"


def test_bad_input(files, capsys):
    code, _, err = run(["inspect", files["bad"]], capsys)
    assert code == 2 and "error" in err
    code, _, err = run(["inspect", "/nonexistent/file"], capsys)
    assert code == 2


def test_catalog(capsys):
    code, out, _ = run(["catalog", "get", "all-loops", "1", "1"], capsys)
    assert code == 0 and out == "1\n"
    code, out, _ = run(["catalog", "get", "all-loops", "4", "2"], capsys)
    assert code == 0 and len(out.splitlines()) == 4
    code, _, err = run(["catalog", "get", "all-loops", "6", "110"], capsys)
    assert code == 2 and "IndexOutOfRange" in err
    code, out, _ = run(["catalog", "list"], capsys)
    assert "all-loops" in out.split()


def test_convert_keeps_loop_tables(files, capsys):
    from loopkit.core import cyclic_group

    code, out, _ = run(["convert", files["z4"]], capsys)
    assert code == 0 and out == Z4 == format_table(cyclic_group(4).table)


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "loopkit", "iso", files["z4"], files["v4"]], capture_output=True, text=True
    )
    assert proc.returncode == 1 and proc.stdout.strip() == "fail"
