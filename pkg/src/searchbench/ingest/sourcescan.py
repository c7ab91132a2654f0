"""Lexical source scanning shared by the C-family function extractors.

The scanner produces a "masked" copy of the source in which comments,
string/char literals, template literals, regex literals, and preprocessor
lines are blanked out (newlines preserved), together with the comment spans.
Structural analysis (brace matching, paren matching, keyword search) runs on
the masked text so braces inside strings or comments can never confuse it;
all extraction slices come from the original text.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

_JS_REGEX_PRECEDERS = set("=([{,;:!&|?+-*%<>~^")
_JS_REGEX_KEYWORDS = {
    "return",
    "typeof",
    "case",
    "in",
    "of",
    "new",
    "delete",
    "void",
    "instanceof",
    "do",
    "else",
}


@dataclass(frozen=True)
class CommentSpan:
    start: int
    end: int  # offset one past the last character
    start_line: int  # 1-based
    end_line: int
    kind: str  # "line" | "block"
    standalone: bool  # nothing but whitespace precedes it on its first line


@dataclass
class ScanResult:
    text: str
    masked: str
    comments: list[CommentSpan]
    line_offsets: list[int] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.line_offsets:
            offsets = [0]
            for i, ch in enumerate(self.text):
                if ch == "\n":
                    offsets.append(i + 1)
            self.line_offsets = offsets

    def line_of(self, offset: int) -> int:
        return bisect_right(self.line_offsets, offset)


def scan_source(
    text: str,
    *,
    string_quotes: tuple[str, ...] = ('"', "'"),
    raw_quotes: tuple[str, ...] = (),
    template_quote: str | None = None,
    preprocessor: bool = False,
    regex_literals: bool = False,
) -> ScanResult:
    masked = list(text)
    comments: list[CommentSpan] = []
    n = len(text)
    line_start_offsets = [0] + [i + 1 for i, c in enumerate(text) if c == "\n"]

    def blank(start: int, end: int) -> None:
        for k in range(start, min(end, n)):
            if masked[k] != "\n":
                masked[k] = " "

    def line_of(offset: int) -> int:
        return bisect_right(line_start_offsets, offset)

    def only_ws_before_on_line(offset: int) -> bool:
        start = line_start_offsets[line_of(offset) - 1]
        return text[start:offset].strip() == ""

    prev_sig = ""  # last significant (unmasked, non-space) character
    prev_word = ""  # last identifier token seen
    word_buf: list[str] = []

    def push_sig(ch: str) -> None:
        nonlocal prev_sig, prev_word
        if ch.isalnum() or ch in "_$":
            word_buf.append(ch)
        elif word_buf:
            prev_word = "".join(word_buf)
            word_buf.clear()
        if not ch.isspace():
            prev_sig = ch

    def flush_word() -> str:
        nonlocal prev_word
        if word_buf:
            prev_word = "".join(word_buf)
            word_buf.clear()
        return prev_word

    i = 0
    at_line_start = True
    while i < n:
        ch = text[i]
        if preprocessor and at_line_start and text[i:].lstrip(" \t").startswith("#"):
            # Mask the whole directive, following backslash continuations.
            j = i
            while j < n:
                if text[j] == "\n":
                    if j > 0 and text[j - 1] == "\\":
                        j += 1
                        continue
                    break
                j += 1
            blank(i, j)
            i = j
            continue
        if ch == "\n":
            at_line_start = True
            i += 1
            continue
        if ch == "/" and text[i : i + 2] == "//":
            j = text.find("\n", i)
            j = n if j == -1 else j
            comments.append(
                CommentSpan(
                    start=i,
                    end=j,
                    start_line=line_of(i),
                    end_line=line_of(j - 1) if j > i else line_of(i),
                    kind="line",
                    standalone=only_ws_before_on_line(i),
                )
            )
            blank(i, j)
            i = j
            continue
        if ch == "/" and text[i : i + 2] == "/*":
            j = text.find("*/", i + 2)
            j = n if j == -1 else j + 2
            comments.append(
                CommentSpan(
                    start=i,
                    end=j,
                    start_line=line_of(i),
                    end_line=line_of(j - 1),
                    kind="block",
                    standalone=only_ws_before_on_line(i),
                )
            )
            blank(i, j)
            at_line_start = False
            i = j
            continue
        if ch in string_quotes:
            j = i + 1
            while j < n and text[j] != ch:
                if text[j] == "\\":
                    j += 1
                elif text[j] == "\n":
                    break  # unterminated literal, stop at end of line
                j += 1
            j = min(j + 1, n)
            blank(i, j)
            at_line_start = False
            i = j
            continue
        if ch in raw_quotes:
            j = text.find(ch, i + 1)
            j = n if j == -1 else j + 1
            blank(i, j)
            at_line_start = False
            i = j
            continue
        if template_quote and ch == template_quote:
            # Whole template (including interpolations) is treated as opaque.
            j = i + 1
            while j < n and text[j] != template_quote:
                if text[j] == "\\":
                    j += 1
                j += 1
            j = min(j + 1, n)
            blank(i, j)
            at_line_start = False
            i = j
            continue
        if regex_literals and ch == "/":
            word = flush_word()
            if prev_sig == "" or prev_sig in _JS_REGEX_PRECEDERS or (
                prev_sig and prev_sig.isalnum() and word in _JS_REGEX_KEYWORDS
            ):
                j = i + 1
                in_class = False
                while j < n and text[j] != "\n":
                    cj = text[j]
                    if cj == "\\":
                        j += 2
                        continue
                    if cj == "[":
                        in_class = True
                    elif cj == "]":
                        in_class = False
                    elif cj == "/" and not in_class:
                        break
                    j += 1
                if j < n and text[j] == "/":
                    j += 1
                    while j < n and (text[j].isalpha()):
                        j += 1
                    blank(i, j)
                    at_line_start = False
                    i = j
                    continue
        push_sig(ch)
        at_line_start = False
        i += 1

    return ScanResult(text=text, masked="".join(masked), comments=comments)


def match_pairs(masked: str, open_ch: str, close_ch: str) -> dict[int, int]:
    """Map each opening delimiter offset to its matching close offset."""
    stack: list[int] = []
    pairs: dict[int, int] = {}
    for i, ch in enumerate(masked):
        if ch == open_ch:
            stack.append(i)
        elif ch == close_ch and stack:
            pairs[stack.pop()] = i
    return pairs


def brace_depths(masked: str) -> list[int]:
    """Brace depth before each character position."""
    depths = [0] * (len(masked) + 1)
    depth = 0
    for i, ch in enumerate(masked):
        depths[i] = depth
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth = max(0, depth - 1)
    depths[len(masked)] = depth
    return depths


def skip_ws(masked: str, i: int) -> int:
    n = len(masked)
    while i < n and masked[i].isspace():
        i += 1
    return i


def clean_comment_text(raw: str, kind: str) -> str:
    """Strip comment markers, keeping the documentation text."""
    if kind == "block":
        body = raw
        if body.startswith("/*"):
            body = body[2:]
            body = body.lstrip("*")  # handles /** doc headers
        if body.endswith("*/"):
            body = body[:-2]
        lines = []
        for line in body.split("\n"):
            stripped = line.strip()
            if stripped.startswith("*"):
                stripped = stripped[1:].strip()
            lines.append(stripped)
        return "\n".join(lines).strip()
    lines = []
    for line in raw.split("\n"):
        stripped = line.strip()
        if stripped.startswith("//"):
            stripped = stripped[2:]
            if stripped.startswith("/"):  # /// style
                stripped = stripped[1:]
            stripped = stripped.strip()
        lines.append(stripped)
    return "\n".join(lines).strip()


def doc_comment_before(scan: ScanResult, decl_offset: int) -> str:
    """Contiguous standalone comment block ending on the line above the
    declaration, with no blank line in between."""
    decl_line = scan.line_of(decl_offset)
    by_end_line: dict[int, CommentSpan] = {}
    for span in scan.comments:
        if span.standalone:
            by_end_line[span.end_line] = span
    blocks: list[CommentSpan] = []
    current = decl_line - 1
    while current in by_end_line:
        span = by_end_line[current]
        blocks.append(span)
        current = span.start_line - 1
    if not blocks:
        return ""
    blocks.reverse()
    cleaned = [
        clean_comment_text(scan.text[span.start : span.end], span.kind)
        for span in blocks
    ]
    return "\n".join(part for part in cleaned if part).strip()
