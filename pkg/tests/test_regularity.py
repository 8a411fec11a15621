import itertools
import random

import pytest
from hypothesis import given

from order_regular import BinaryMatrix, RegularityKind, check, parse_matrix
from order_regular.constructions import embedded_blocks
from order_regular.regularity import (
    Constraint,
    constraint_map,
    constraint_satisfied,
    from_star,
    max_rows_bound,
    or_star_bijection,
    reference_check,
    to_star,
    witness_masks,
)

from conftest import matrices, random_matrix

K = RegularityKind
ALL_KINDS = list(RegularityKind)


def test_kind_parsing():
    assert K.parse("SOR*") is K.SORSTAR
    assert K.parse("psorstar") is K.PSORSTAR
    assert K.ORSTAR.base is K.OR and K.PSOR.star is K.PSORSTAR
    with pytest.raises(ValueError):
        K.parse("xor")


def test_doubly_required_sets():
    m = 9
    sor = {(i, j) for i in range(1, m) for j in range(i + 1, m + 1) if K.SOR.doubly_required(i, j, m)}
    assert (1, 2) not in sor and (1, 3) in sor and (8, 9) not in sor
    psor = {(i, j) for i in range(1, m) for j in range(i + 1, m + 1) if K.PSOR.doubly_required(i, j, m)}
    assert psor == {(i, j) for i in range(2, m) for j in range(i + 2, m, 2)}
    assert not K.OR.doubly_required(1, 3, m)


def test_witness_patterns():
    # column 1 reads 0,1,1,1 (primary); column 2 reads 0,1,0,0 (secondary)
    m = BinaryMatrix.from_lists([[0, 0], [1, 1], [1, 0], [1, 0]])
    c = Constraint(1, 3)
    assert constraint_satisfied(m, c) == {1}
    assert constraint_satisfied(m, c, "secondary") == {2}
    prim, sec = witness_masks(m, c)
    assert prim == 0b10 and sec == 0b01
    with pytest.raises(ValueError):
        Constraint(2, 2)


def test_verdict_text():
    m = parse_matrix("00\n00\n")
    v = check(m)
    assert not v and str(v) == "VIOLATED (1,2)"
    assert str(check(parse_matrix("0\n1\n"))) == "HOLDS"


def test_first_violation_is_reported_in_scan_order():
    m = parse_matrix("000\n111\n000\n111\n")
    v = check(m)
    assert v.constraint == (1, 2)
    v = check(m, K.ORSTAR)
    assert v.constraint == (1, 2)


def test_empty_matrix_rejected():
    with pytest.raises(ValueError):
        check(BinaryMatrix(2))


@pytest.mark.parametrize(
    "name, holds, fails",
    [
        ("sor33x8", [K.OR, K.SOR, K.PSOR, K.ORSTAR, K.SORSTAR, K.PSORSTAR], []),
        ("psor35x8", [K.OR, K.PSOR, K.ORSTAR, K.PSORSTAR], [K.SOR]),
        ("extremal5x3", [K.OR, K.ORSTAR], []),
        ("extremal8x4", [K.OR, K.ORSTAR], []),
        ("or33x7", [K.OR, K.ORSTAR], []),
    ],
)
def test_fixture_verdicts(name, holds, fails):
    m = embedded_blocks()[name].matrix
    for kind in holds:
        assert check(m, kind), kind
        assert reference_check(m, kind), kind
    for kind in fails:
        assert not check(m, kind)
        assert not reference_check(m, kind)


def test_psor_block_sor_violation_location():
    m = embedded_blocks()["psor35x8"].matrix
    v = check(m, K.SOR)
    assert v.constraint == (6, 9) and "secondary" in v.reason


@pytest.mark.parametrize("n", [1, 2, 3])
def test_oracle_exhaustive_small(n):
    for m in range(1, 5):
        for rows in itertools.product(range(1 << n), repeat=m):
            a = BinaryMatrix(n, rows)
            for kind in ALL_KINDS:
                assert bool(check(a, kind)) == reference_check(a, kind), (rows, kind)


def test_oracle_random():
    rng = random.Random(11)
    for _ in range(1500):
        a = random_matrix(rng, 12, 6)
        for kind in ALL_KINDS:
            assert bool(check(a, kind)) == reference_check(a, kind)


def test_or_star_bijection(or_pool):
    for m in or_pool:
        s = to_star(m)
        assert check(s, K.ORSTAR)
        assert s.n_rows == m.n_rows + 1
        assert from_star(s) == m
        assert or_star_bijection(s, "from_star") == m


def test_from_star_yields_or(or_pool):
    for m in or_pool:
        star = to_star(m)
        assert check(from_star(star), K.OR)


@pytest.mark.parametrize("name", ["sor33x8", "sor3x2"])
def test_sor_duplicate_last_row_is_sor_star(name):
    m = embedded_blocks()[name].matrix
    assert check(m.append_row(m.rows[-1]), K.SORSTAR)


def test_to_star_rejects_non_or():
    with pytest.raises(ValueError):
        to_star(parse_matrix("0\n0\n"))
    with pytest.raises(ValueError):
        or_star_bijection(parse_matrix("0\n1\n"), "sideways")


def test_max_rows_bound():
    assert [max_rows_bound(n) for n in range(1, 5)] == [2, 3, 5, 9]


@given(matrices(max_rows=9, max_cols=5, min_rows=2))
def test_constraint_map_agrees_with_check(m):
    cmap = constraint_map(m)
    for kind in ALL_KINDS:
        assert bool(cmap.check(kind)) == bool(check(m, kind))
        assert cmap.check(kind).constraint == check(m, kind).constraint


def test_constraint_map_text_and_image():
    m = embedded_blocks()["extremal5x3"].matrix
    cmap = constraint_map(m)
    text = cmap.to_text()
    lines = text.splitlines()
    assert len(lines) == m.n_rows - 1
    assert [len(line) for line in lines] == list(range(1, m.n_rows))
    assert "." not in text
    ppm = cmap.to_ppm()
    assert ppm.startswith(b"P6\n4 4\n255\n")
    assert len(ppm) == len(b"P6\n4 4\n255\n") + 4 * 4 * 3


def test_constraint_map_column_filter():
    m = embedded_blocks()["extremal5x3"].matrix
    cmap = constraint_map(m)
    only_first = cmap.to_text(columns=0b100)
    assert set(only_first) <= {".", "1", "2", "B", "\n"}
    assert only_first.count(".") > 0
