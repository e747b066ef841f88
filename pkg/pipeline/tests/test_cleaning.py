import pytest

from sentichess_pipeline.cleaning import clean_commentary


@pytest.mark.parametrize(
    "raw,cleaned",
    [
        ("What a fantastic move 95", "What a fantastic move"),
        ("Good move!! ~~~", "Good move!!"),
        ("nice idea 12 34", "nice idea"),
        ("An excellent sacrifice, winning material", "An excellent sacrifice winning material"),
        ("e4!", "e4!"),
        ("strong?!", "strong?!"),
        ("doesn't lose material", "doesn't lose material"),
        ("well-played endgame", "well-played endgame"),
    ],
)
def test_cleaning_keeps_usable_text(raw, cleaned):
    assert clean_commentary(raw) == cleaned


def test_trailing_numbers_are_stripped_even_when_meaningful():
    # The rule is literal: any trailing bare integer goes, so "mate in 3"
    # loses its move count.  Interior numbers survive.
    assert clean_commentary("mate in 3") == "mate in"
    assert clean_commentary("wins 2 pawns") == "wins 2 pawns"


@pytest.mark.parametrize(
    "raw",
    [
        "Bxg8",
        "Kf8",
        "Nf3",
        "Nf3+",
        "exd5",
        "e8=Q#",
        "O-O",
        "0-0-0",
        "1972",
        "   ",
        "",
        "... ---",
        "42 7",
    ],
)
def test_cleaning_rejects_noise(raw):
    assert clean_commentary(raw) is None


def test_all_six_glyph_combinations_survive():
    for glyph in ("!", "!!", "?", "??", "!?", "?!"):
        cleaned = clean_commentary(f"{glyph} a move of note")
        assert cleaned == f"{glyph} a move of note"


def test_case_preserved():
    assert clean_commentary("What a MOVE by White") == "What a MOVE by White"


def test_idempotent():
    samples = [
        "What a fantastic move 95",
        "Good move!! ~~~",
        "?? {terrible} [blunder]...",
        "An excellent sacrifice, winning material",
        "e4!",
    ]
    for raw in samples:
        once = clean_commentary(raw)
        assert once is not None
        assert clean_commentary(once) == once
