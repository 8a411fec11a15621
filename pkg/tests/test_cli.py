import subprocess
import sys

import pytest

from order_regular import RegularityKind, check, emit_matrix, parse_matrix
from order_regular.cli import main
from order_regular.constructions import construct_simple, embedded_blocks
from order_regular.search import SearchConfig, branch_search

K = RegularityKind


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def block_file(tmp_path):
    def write(name):
        path = tmp_path / f"{name}.txt"
        path.write_bytes(emit_matrix(embedded_blocks()[name].matrix))
        return str(path)

    return write


def test_verify_holds(capsys, block_file):
    code, out, _ = run(capsys, "verify", "--kind", "sor", block_file("sor33x8"))
    assert code == 0 and out == "HOLDS\n"


def test_verify_violated(capsys, block_file):
    code, out, err = run(capsys, "verify", "--kind", "sor", block_file("psor35x8"))
    assert code == 1 and out == "VIOLATED (6,9)\n"
    assert "secondary" in err


def test_verify_stdin(monkeypatch, capsys):
    import io

    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(b"0\n1\n")))
    code, out, _ = run(capsys, "verify", "-")
    assert code == 0 and out == "HOLDS\n"


def test_io_and_format_errors(capsys, tmp_path):
    code, _, err = run(capsys, "verify", str(tmp_path / "missing.txt"))
    assert code == 3 and err.count("\n") == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("01\n1\n")
    code, _, err = run(capsys, "verify", str(bad))
    assert code == 3 and "ragged" in err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--kind", "xor", "f"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    code, _, err = run(capsys, "construct", "--scheme", "main", "--levels", "2")
    assert code == 2 and "--block" in err
    code, _, err = run(capsys, "construct", "--scheme", "main", "--block", "nosuch", "--levels", "2")
    assert code == 2


def test_construct_matches_library(capsysbinary):
    code = main(["construct", "--scheme", "simple", "--levels", "4", "--verify"])
    out = capsysbinary.readouterr().out
    assert code == 0
    assert out == emit_matrix(construct_simple(4))


def test_construct_modified(capsysbinary):
    code = main(["construct", "--scheme", "modified", "--block", "psor35x8", "--levels", "2", "--verify"])
    captured = capsysbinary.readouterr()
    assert code == 0
    m = parse_matrix(captured.out)
    assert m.shape == (1225, 18)
    assert b"or: HOLDS" in captured.err


def test_construct_from_file(capsysbinary, block_file):
    code = main(["construct", "--scheme", "main", "--block", block_file("sor3x2"), "--levels", "3"])
    assert code == 0
    assert parse_matrix(capsysbinary.readouterr().out).shape == (27, 10)


def test_search_matches_library(capsysbinary):
    code = main(["search", "--n", "5", "--kind", "or*", "--seed", "4"])
    out = capsysbinary.readouterr().out
    assert code == 0
    lib = branch_search(SearchConfig(n=5, seed=4))
    assert out == emit_matrix(lib.best)


def test_search_target_not_found(capsys):
    code, out, err = run(capsys, "search", "--n", "4", "--target", "10")
    assert code == 1
    assert "exhausted=true" in err


def test_search_beam(capsysbinary):
    code = main(["search", "--n", "5", "--beam", "1000", "--target", "14"])
    assert code == 0
    assert check(parse_matrix(capsysbinary.readouterr().out), K.ORSTAR)


def test_exhaustive(capsys, tmp_path):
    journal = tmp_path / "j.txt"
    output = tmp_path / "best.txt"
    code, out, _ = run(capsys, "exhaustive", "--n", "5", "--split-depth", "3", "--resume", str(journal), "--output", str(output))
    assert code == 0 and out == "rows=14 exhausted=true\n"
    assert parse_matrix(output.read_text()).n_rows == 14
    code, out, _ = run(capsys, "exhaustive", "--n", "5", "--split-depth", "3", "--resume", str(journal))
    assert code == 0 and out == "rows=14 exhausted=true\n"


def test_exhaustive_workers_from_env(monkeypatch, capsys):
    monkeypatch.setenv("ORDER_REGULAR_WORKERS", "2")
    code, out, _ = run(capsys, "exhaustive", "--n", "4", "--split-depth", "3")
    assert code == 0 and out == "rows=9 exhausted=true\n"


def test_baf(capsysbinary):
    code = main(["baf", "--n", "6", "--d", "8", "--stall", "3", "--seed", "5"])
    captured = capsysbinary.readouterr()
    assert code == 0
    assert check(parse_matrix(captured.out), K.SORSTAR)
    assert b"trace=" in captured.err


def test_baf_rejects_or(capsys):
    code, _, err = run(capsys, "baf", "--n", "4", "--kind", "or*", "--d", "3", "--stall", "2")
    assert code == 2


def test_map(capsys, block_file, tmp_path):
    image = tmp_path / "map.ppm"
    code, out, err = run(capsys, "map", block_file("extremal5x3"), "--png", str(image))
    assert code == 0
    assert out.splitlines() == ["1", "B1", "BB1", "BB11"]
    assert image.read_bytes().startswith(b"P6\n")
    png = tmp_path / "map.png"
    code, _, _ = run(capsys, "map", block_file("extremal5x3"), "--png", str(png), "--scale", "3")
    assert code == 0 and png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_map_column_filter(capsys, block_file):
    code, _, err = run(capsys, "map", block_file("extremal5x3"), "--columns", "9")
    assert code == 2


def test_blocks(capsys):
    code, out, _ = run(capsys, "blocks")
    assert code == 0
    names = [line.split("\t")[0] for line in out.splitlines()]
    assert {"sor33x8", "psor35x8", "extremal5x3", "extremal8x4"} <= set(names)
    assert all(line.endswith("HOLDS") for line in out.splitlines())
    code, out, _ = run(capsys, "blocks", "sor3x2")
    assert out == "00\n11\n01\n"
    code, _, _ = run(capsys, "blocks", "nope")
    assert code == 2


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--block", "psor35x8", "--levels", "2")
    assert code == 0
    assert out.splitlines()[-1] == "asymptotic\tpsor35x8\t1.42694"
    code, out, _ = run(capsys, "bounds")
    assert out.splitlines()[-1].endswith("1.41421")


def test_module_entry_point_is_deterministic():
    cmd = [sys.executable, "-m", "order_regular", "search", "--n", "5", "--seed", "11"]
    a = subprocess.run(cmd, capture_output=True, check=True)
    b = subprocess.run(cmd, capture_output=True, check=True)
    assert a.stdout == b.stdout and a.stdout
