"""Code-aware tokenization shared by sparse indexing and corpus statistics.

Identifiers split on non-alphanumerics (covering snake_case), then on
camelCase humps and letter/digit boundaries, and lowercase. "getHTTPResponse"
and "get_http_response" therefore produce the same terms.
"""

from __future__ import annotations

import re

_WORD = re.compile(r"[A-Za-z0-9]+")
# Acronym runs, capitalized words, lowercase runs, digit runs.
_PIECES = re.compile(r"[A-Z]+(?![a-z])|[A-Z][a-z]*|[a-z]+|[0-9]+")


def tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    for word in _WORD.findall(text):
        for piece in _PIECES.findall(word):
            tokens.append(piece.lower())
    return tokens
