import pytest

from gsys.errors import IndexOutOfRange, ValidationError
from gsys.notation import (
    format_index_sequence,
    parse_arc,
    parse_arcs,
    parse_index_sequence,
    parse_index_set,
    parse_matrix,
    read_matrix,
    parse_triangulation,
)
from gsys.surface import Arc, Polygon


def test_parse_index_sequence() -> None:
    assert parse_index_sequence("2,3,1,2") == (2, 3, 1, 2)
    assert parse_index_sequence(" 2, 3 ") == (2, 3)
    assert parse_index_sequence("") == ()
    assert parse_index_sequence([1, 2], n=3) == (1, 2)
    assert format_index_sequence((2, 3, 1, 2)) == "2,3,1,2"


@pytest.mark.parametrize("text", ["2,,3", "a", "1.5"])
def test_parse_index_sequence_rejects_bad_tokens(text: str) -> None:
    with pytest.raises(ValidationError):
        parse_index_sequence(text)


def test_indices_are_checked_against_rank() -> None:
    with pytest.raises(IndexOutOfRange):
        parse_index_sequence("4", n=3)
    with pytest.raises(IndexOutOfRange):
        parse_index_set("0", n=3)


def test_parse_index_set() -> None:
    assert parse_index_set("3,1") == frozenset({1, 3})
    assert parse_index_set("") == frozenset()
    with pytest.raises(ValidationError, match="repeated index"):
        parse_index_set("1,1")


def test_parse_matrix() -> None:
    assert parse_matrix("[[0,1],[-1,0]]").rows() == [[0, 1], [-1, 0]]
    with pytest.raises(ValidationError, match="valid JSON"):
        parse_matrix("[[0,1]")
    with pytest.raises(ValidationError, match="integers"):
        parse_matrix("[[0,1.5],[-1,0]]")
    with pytest.raises(ValidationError, match="integers"):
        parse_matrix("[[0,true],[-1,0]]")
    with pytest.raises(ValidationError, match="list of rows"):
        parse_matrix('{"b": 1}')


def test_read_matrix_sources(tmp_path) -> None:
    path = tmp_path / "b.json"
    path.write_text("[[0,1],[-2,0]]", encoding="utf-8")

    assert read_matrix(None, path).rows() == [[0, 1], [-2, 0]]
    assert read_matrix("[[0,1],[-1,0]]", None).n == 2
    with pytest.raises(ValidationError, match="either"):
        read_matrix(None, None)
    with pytest.raises(ValidationError, match="either"):
        read_matrix("[[0]]", path)
    with pytest.raises(ValidationError, match="cannot read"):
        read_matrix(None, tmp_path / "missing.json")


def test_parse_arcs() -> None:
    hexagon = Polygon(6)

    assert parse_arc("4-1", hexagon) == Arc(1, 4)
    assert parse_arcs("0-2, 2-4", hexagon) == [Arc(0, 2), Arc(2, 4)]
    assert parse_arcs("", hexagon) == []
    with pytest.raises(ValidationError, match="invalid arc"):
        parse_arc("1-2-3", hexagon)
    with pytest.raises(ValidationError, match="out of range"):
        parse_arc("0-6", hexagon)


def test_parse_triangulation() -> None:
    tri = parse_triangulation("0-2,2-4,0-4", 6)

    assert tri.to_text() == "0-2,0-4,2-4"
    with pytest.raises(ValidationError, match="repeated arc"):
        parse_triangulation("0-2,0-2,0-4", 6)
    with pytest.raises(ValidationError, match="cross"):
        parse_triangulation("0-2,1-3,0-4", 6)
