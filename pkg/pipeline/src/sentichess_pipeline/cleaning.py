"""Commentary cleaning: keep text that can carry an opinion about a move.

Rules, in order: punctuation outside the whitelist becomes whitespace (the
annotation glyphs built from ! and ? always survive), trailing bare integer
tokens are stripped, then single-token comments that are just a move in
chess notation are rejected.  Case is preserved; rejection is a value
(None), not an error.
"""

from __future__ import annotations

import re
from typing import Optional

# Letters, digits, whitespace, the annotation glyph characters, and the two
# marks that occur inside ordinary words.
_DISALLOWED = re.compile(r"[^0-9A-Za-z\s!?'\-]")
_TRAILING_INT = re.compile(r"\s\d+$")

# One SAN-shaped token with at most check/mate marks.  Tokens carrying
# ! or ? glyphs are NOT matched: the glyphs themselves express move quality
# and must survive into the dataset.
_SAN_TOKEN = re.compile(
    r"^(?:[KQRBN]?[a-h]?[1-8]?x?[a-h][1-8](?:=[QRBN])?|O-O(?:-O)?|0-0(?:-0)?)[+#]*$"
)


def clean_commentary(text: str) -> Optional[str]:
    """Cleaned comment text, or None when the comment carries no usable prose."""
    raw_tokens = text.split()
    if len(raw_tokens) == 1 and _SAN_TOKEN.match(raw_tokens[0]):
        return None
    cleaned = _DISALLOWED.sub(" ", text)
    cleaned = " ".join(cleaned.split())
    while True:
        stripped = _TRAILING_INT.sub("", cleaned)
        if stripped == cleaned:
            break
        cleaned = stripped
    if not re.search(r"[0-9A-Za-z!?]", cleaned):
        return None
    tokens = cleaned.split()
    if len(tokens) == 1 and _SAN_TOKEN.match(tokens[0]) and not tokens[0].isdigit():
        return None
    if all(token.isdigit() for token in tokens):
        return None
    return cleaned
