import pytest
from hypothesis import given, strategies as st

from order_regular.matrix import (
    BinaryMatrix,
    MatrixFormatError,
    Pattern,
    apply_transform,
    canonical_transform,
    canonicalize,
    emit_matrix,
    from_columns,
    glue,
    hstack,
    is_canonical,
    negate_columns,
    pad_columns,
    parse_matrix,
    permute_columns,
    reverse,
    tilde,
    vstack,
)

from conftest import matrices


def test_row_integer_matches_text():
    m = parse_matrix("011\n100\n")
    assert m.rows == (0b011, 0b100)
    assert m.entry(1, 1) == 0 and m.entry(1, 3) == 1
    assert m.row_string(2) == "100"
    assert m.shape == (2, 3)


def test_parse_skips_comments_and_blanks():
    m = parse_matrix(b"# header\n\n01\r\n10\n\n")
    assert m.rows == (1, 2)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("01\n0\n", "ragged"),
        ("01\n0a\n", "illegal"),
        ("# only a comment\n", "zero columns"),
        ("", "zero columns"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(MatrixFormatError, match=fragment):
        parse_matrix(text)


def test_parse_width_limit():
    with pytest.raises(MatrixFormatError, match="exceeds"):
        parse_matrix("0" * 65 + "\n")
    with pytest.raises(MatrixFormatError):
        parse_matrix("0000\n", max_cols=3)


def test_emit_empty_and_lf():
    assert emit_matrix(BinaryMatrix(3)) == b""
    assert emit_matrix(BinaryMatrix(2, (1, 2))) == b"01\n10\n"


@given(matrices(max_rows=10, max_cols=10))
def test_round_trip(m):
    assert parse_matrix(emit_matrix(m)) == m


def test_rows_must_fit():
    with pytest.raises(ValueError):
        BinaryMatrix(2, (4,))
    with pytest.raises(ValueError):
        BinaryMatrix(0, ())


def test_from_lists_and_columns():
    m = BinaryMatrix.from_lists([[0, 1, 1], [1, 0, 1]])
    assert m.rows == (0b011, 0b101)
    assert m.columns() == [0b01, 0b10, 0b11]
    assert from_columns(m.columns(), 2) == m
    assert m.to_lists() == [[0, 1, 1], [1, 0, 1]]


def test_negate_and_tilde():
    m = parse_matrix("000\n011\n110\n")
    assert negate_columns(m, [1]).rows == (0b100, 0b111, 0b010)
    t = tilde(m)
    # first row of tilde(m) equals the last row of m
    assert t.rows[0] == m.rows[-1]
    assert tilde(t) == m


def test_glue_alternates_blocks():
    m = parse_matrix("00\n01\n11\n")
    g = glue(m, 3)
    assert g.n_rows == 9
    assert g.rows[:3] == m.rows
    assert g.rows[3:6] == tilde(m).rows
    assert g.rows[6:] == m.rows
    # block boundaries repeat the row
    assert g.rows[2] == g.rows[3] and g.rows[5] == g.rows[6]


def test_stacking():
    a = parse_matrix("01\n10\n")
    b = parse_matrix("1\n1\n")
    assert hstack([a, b]).rows == (0b011, 0b101)
    assert vstack([a, a]).n_rows == 4
    with pytest.raises(ValueError):
        vstack([a, b])


def test_pattern():
    top = parse_matrix("1\n")
    bottom = parse_matrix("0\n")
    assert Pattern(5, top, bottom).realize().rows == (1, 0, 1, 0, 1)
    assert Pattern(0, top, bottom).realize().n_rows == 0


def test_reverse_negates_even_rows():
    m = parse_matrix("001\n010\n100\n")
    r = reverse(m)
    assert r.rows == (0b100, 0b101, 0b001)


@given(matrices(max_rows=8, max_cols=6))
def test_reverse_twice_up_to_parity(m):
    twice = reverse(reverse(m))
    if m.n_rows % 2 == 1:
        assert twice == m
    else:
        assert twice == BinaryMatrix(m.n_cols, tuple(r ^ m.full_mask for r in m.rows))


@given(matrices(max_rows=8, max_cols=6, min_rows=2))
def test_canonical_form(m):
    c = canonicalize(m)
    assert is_canonical(c)
    assert c.rows[0] == 0
    assert canonicalize(c) == c
    neg, order = canonical_transform(m)
    assert apply_transform(m, neg, order) == c
    assert sorted(order) == list(range(1, m.n_cols + 1))


def test_permute_rejects_non_permutation():
    m = parse_matrix("01\n")
    with pytest.raises(ValueError):
        permute_columns(m, [1, 1])


def test_pad_columns():
    m = parse_matrix("1\n0\n")
    assert pad_columns(m, 3).rows == (0b100, 0)
    with pytest.raises(ValueError):
        pad_columns(m, 0)


def test_row_access_bounds():
    m = parse_matrix("01\n")
    with pytest.raises(IndexError):
        m.row(2)
