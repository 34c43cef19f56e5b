import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from treeshift import BasicSet, ForbiddenSet, build_snre
from treeshift.errors import ValidationError
from treeshift.sft import ANY, full_basic
from treeshift.shifts import gms_basic
from treeshift import specfile
from treeshift.specfile import SpecFile, parse_spec

GMS_BLOCKS = "d=2\nk=2\nblock 1: 1 1\nblock 1: 1 2\nblock 1: 2 1\nblock 1: 2 2\nblock 2: 1 1\n"


def test_forbid_hom():
    spec = parse_spec("d=2\nk=2\nforbid 2 * 2")
    assert spec.style == "forbid"
    assert spec.forbidden == ForbiddenSet(2, frozenset({(2, ANY, 2)}), hom=True)
    assert spec.basic_set() == gms_basic(2, 2)


def test_block_lines():
    spec = parse_spec(GMS_BLOCKS)
    assert spec.basic == gms_basic(2, 2)


def test_snre_lines():
    spec = parse_spec("d=2\nk=2\nsnre 1: a^2 + 2*a*b + b^2\nsnre 2: a^2\n")
    assert spec.to_snre() == build_snre(gms_basic(2, 2))
    assert spec.basic_set() is None


def test_snre_terms_accumulate_and_xn_names():
    spec = parse_spec("d=2\nk=3\nsnre 1: x1*x3 + x3*x1\nsnre 2: 3 * x2^2\nsnre 3: c^2 # tail\n")
    f = spec.to_snre()
    assert f.equations[0].terms == (((1, 0, 1), 2),)
    assert f.equations[1].count == 3


def test_comments_blank_lines_and_tabs():
    spec = parse_spec("# gms\n\n  d = 2\nk=2   # two symbols\nforbid\t2 1 2\nforbid 2 2 2\n")
    assert spec.basic_set() == gms_basic(2, 2)
    assert not spec.forbidden.hom


def test_no_declarations_is_full_shift():
    assert parse_spec("d=2\nk=3\n").basic_set() == full_basic(2, 3)


def test_bytes_input():
    assert parse_spec(GMS_BLOCKS.encode()).basic == gms_basic(2, 2)


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ("d=2\nk=2\nforbid 3 * 1", 3, "out of range"),
        ("d=2\nk=2\nforbid 1 3 1", 3, "generator 3"),
        ("d=2\nk=2\nforbid 1 1", 3, "expected"),
        ("d=2\nk=2\nblock 1: 1 1\nforbid 2 * 2", 4, "cannot mix"),
        ("d=2\nk=2\nsnre 1: a^3", 3, "degree 3"),
        ("d=2\nk=2\nsnre 1: a*z", 3, "out of range"),
        ("d=2\nk=2\nsnre 1: a**b", 3, "malformed"),
        ("d=2\nk=2\nsnre 1: 0*a^2", 3, "positive"),
        ("d=2\nk=2\nblock 1: 1", 3, "2 child symbols"),
        ("d=2\nk=2\nwibble", 3, "unknown directive"),
        ("d=2\nd=3\nk=2", 2, "set twice"),
        ("d=0\nk=2", 1, "between"),
        ("d=2\nk=x", 2, "integer"),
        ("d=2", 2, "missing k"),
    ],
)
def test_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(ValidationError) as info:
        parse_spec(text)
    assert info.value.line == line
    assert fragment in str(info.value)


def test_expansion_limit():
    spec = parse_spec("d=64\nk=64\n")
    with pytest.raises(ValidationError):
        spec.basic_set()


def test_coefficient_limit(monkeypatch):
    monkeypatch.setattr(specfile, "MAX_COEFFICIENT", 10)
    with pytest.raises(ValidationError) as info:
        parse_spec("d=2\nk=2\nsnre 1: 6*a^2 + 5*a^2")
    assert "coefficient exceeds" in str(info.value)


def _total(data):
    try:
        spec = parse_spec(data)
    except ValidationError as exc:
        assert exc.line is None or exc.line >= 1
        return
    assert isinstance(spec, SpecFile)
    try:
        spec.to_snre()
    except ValidationError:
        pass


@settings(max_examples=300, deadline=None)
@given(st.binary(max_size=300))
def test_total_on_bytes(data):
    _total(data)


ALPHABET = st.sampled_from(list("dk=0123456789 *+^:#\nabcx") + ["forbid ", "block ", "snre ", "\t"])


@settings(max_examples=400, deadline=None)
@given(st.lists(ALPHABET, max_size=60).map("".join))
def test_total_on_grammar_shaped_text(text):
    _total(text)


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=200))
def test_total_on_text(text):
    _total(text)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_block_round_trip(d, k, data):
    import itertools

    every = list(itertools.product(range(1, k + 1), repeat=d))
    blocks = {i: data.draw(st.sets(st.sampled_from(every))) for i in range(1, k + 1)}
    assume(any(blocks.values()))  # a file without declarations is the full shift
    lines = [f"d={d}", f"k={k}"]
    lines += [f"block {i}: " + " ".join(map(str, t)) for i, ts in blocks.items() for t in sorted(ts)]
    spec = parse_spec("\n".join(lines))
    assert spec.basic_set() == BasicSet.from_dict(d, k, blocks)
