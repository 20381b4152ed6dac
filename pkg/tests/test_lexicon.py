import pytest

from nabla import terms as tm
from nabla.categories import N, parse_category, sem_type
from nabla.lexicon import (LexiconError, default_lexicon, default_lexicon_source, dump_lexicon,
                           load_lexicon, lookup)


@pytest.fixture(scope="module")
def lex():
    return default_lexicon()


def test_every_entry_type_checks(lex):
    for e in lex.entries:
        tm.check_type(e.definition, sem_type(e.category))


def test_vocabulary(lex):
    expected = {"John", "Nick", "Gloria", "Victoria", "run", "dance", "smile", "find", "love",
                "man", "woman", "thief", "unicorn", "popular", "quick", "be", "a", "every",
                "not", "nix", "and", "or", "ok", "also", "so"}
    assert lex.vocabulary == expected


def test_lookup_keeps_file_order(lex):
    entries = lookup(lex, "be")
    assert [e.combinator_name for e in entries] == ["be", "be'"]
    assert [str(c) for c in lex.categories_of("a")] == ["(S/(N\\S))/G", "((S/N)\\S)/G"]
    assert lookup(lex, "unicorns") == []


@pytest.mark.parametrize("name, category, term", [
    ("John", "N", "J"),
    ("love", "(N\\S)/N", r"\y x. L x y"),
    ("be", "(N\\S)/N", r"\y x. Qdot x y"),
    ("be'", "(N\\S)/(G/G)", r"\f x. f (\y. Qdot x y) x"),
    ("popular", "G/G", r"\t x. Cdot (P x) (t x)"),
    ("so", "S\\(Dot/S)", r"\a b. Pdot a b"),
    ("ok", "S", "Tdot"),
])
def test_entries(lex, name, category, term):
    entry = next(e for e in lex.entries if e.combinator_name == name)
    assert entry.category == parse_category(category)
    assert tm.alpha_equiv(entry.definition, tm.parse_term(term))


def test_names_are_category_n(lex):
    for name in ("John", "Nick", "Gloria", "Victoria"):
        assert lex.categories_of(name) == [N]


def test_inflection_tables(lex):
    assert lex.lemma_of["is"] == "be"
    assert lex.inflected["love"] == "loves"
    assert set(lex.lemma_of.values()) == {"be", "run", "dance", "smile", "find", "love"}


def test_dump_load_roundtrip(lex):
    again = load_lexicon(dump_lexicon(lex))
    assert again == lex


def test_type_mismatch_reports_line():
    src = "John : N := J\nrun : N\\S := \\x. R x\nbad : N\\S := J\n"
    with pytest.raises(LexiconError) as info:
        load_lexicon(src)
    assert info.value.line == 3
    assert "expected e -> t" in str(info.value)


def test_constant_types_must_agree_across_entries():
    src = "John : N := J\nrun : N\\S := \\x. J x\n"
    with pytest.raises(LexiconError):
        load_lexicon(src)


def test_unknown_combinator():
    with pytest.raises(LexiconError) as info:
        load_lexicon("odd : S := Zdot\n")
    assert "Zdot" in str(info.value)


def test_category_syntax_error_has_column():
    with pytest.raises(LexiconError) as info:
        load_lexicon("John : N/ := J\n")
    assert info.value.line == 1 and info.value.column is not None


def test_malformed_line():
    with pytest.raises(LexiconError):
        load_lexicon("John N J\n")


def test_empty_lexicon():
    with pytest.raises(LexiconError):
        load_lexicon("# nothing\n")


def test_inflections_one_to_one():
    with pytest.raises(LexiconError):
        load_lexicon("run : N\\S := \\x. R x\ninflect run : runs\ninflect run : ran\n")


def test_default_source_is_the_shipped_file():
    assert "so : S\\(Dot/S)" in default_lexicon_source()
