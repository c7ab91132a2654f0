"""Function-level extraction for C, Go, Java, JavaScript, and Python.

Python uses the standard library parser. The brace languages use the masked
lexical scan from sourcescan: function boundaries are recognized from
signature shapes at known brace depths, which covers the declaration styles
of ordinary library code. Methods are emitted as ``ClassName.method`` (Go
receivers as ``Type.method``), nested named functions as their own entities.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass

from searchbench.ingest.sourcescan import (
    ScanResult,
    brace_depths,
    doc_comment_before,
    match_pairs,
    scan_source,
    skip_ws,
)


class ExtractionError(Exception):
    """File could not be parsed at all (reported and skipped by ingestion)."""


@dataclass(frozen=True)
class ExtractedFunction:
    function_name: str
    code: str
    docstring: str
    start_line: int
    end_line: int


_IDENT = r"[A-Za-z_$][\w$]*"


def extract_functions(source: str, language: str) -> list[ExtractedFunction]:
    """All function/method declarations in one source file, in source order."""
    extractor = _EXTRACTORS.get(language)
    if extractor is None:
        raise ValueError(f"unsupported language: {language}")
    functions = extractor(source)
    return sorted(functions, key=lambda f: (f.start_line, f.function_name))


# --- Python ---------------------------------------------------------------


def _python_block_bodies(stmt: ast.stmt) -> list[list[ast.stmt]]:
    bodies = []
    for attr in ("body", "orelse", "finalbody"):
        value = getattr(stmt, attr, None)
        if isinstance(value, list):
            bodies.append(value)
    for handler in getattr(stmt, "handlers", []) or []:
        bodies.append(handler.body)
    for case in getattr(stmt, "cases", []) or []:
        bodies.append(case.body)
    return bodies


def extract_python(source: str) -> list[ExtractedFunction]:
    try:
        tree = ast.parse(source)
    except (SyntaxError, ValueError) as exc:
        raise ExtractionError(f"python parse failed: {exc}") from exc
    lines = source.split("\n")
    out: list[ExtractedFunction] = []

    def walk(body: list[ast.stmt], scope: list[str]) -> None:
        for stmt in body:
            if isinstance(stmt, (ast.FunctionDef, ast.AsyncFunctionDef)):
                name = ".".join(scope + [stmt.name])
                start = stmt.lineno
                if stmt.decorator_list:
                    start = min(start, min(d.lineno for d in stmt.decorator_list))
                end = stmt.end_lineno or start
                code = "\n".join(lines[start - 1 : end])
                doc = ast.get_docstring(stmt, clean=False) or ""
                out.append(
                    ExtractedFunction(
                        function_name=name,
                        code=code,
                        docstring=doc,
                        start_line=start,
                        end_line=end,
                    )
                )
                walk(stmt.body, scope + [stmt.name])
            elif isinstance(stmt, ast.ClassDef):
                walk(stmt.body, scope + [stmt.name])
            else:
                for nested in _python_block_bodies(stmt):
                    walk(nested, scope)

    walk(tree.body, [])
    return out


# --- C ----------------------------------------------------------------------

_C_KEYWORDS = {
    "if",
    "for",
    "while",
    "switch",
    "return",
    "sizeof",
    "do",
    "else",
    "case",
    "goto",
    "typedef",
    "struct",
    "union",
    "enum",
}


def _decl_start_before(masked: str, name_start: int) -> int:
    """Walk back over the declaration head (type tokens, '*', whitespace)."""
    i = name_start - 1
    while i >= 0:
        ch = masked[i]
        if ch.isalnum() or ch in "_*" or ch.isspace():
            i -= 1
        else:
            break
    return skip_ws(masked, i + 1)


def extract_c(source: str) -> list[ExtractedFunction]:
    scan = scan_source(source, preprocessor=True)
    masked = scan.masked
    depths = brace_depths(masked)
    parens = match_pairs(masked, "(", ")")
    braces = match_pairs(masked, "{", "}")
    out: list[ExtractedFunction] = []
    for m in re.finditer(r"[A-Za-z_]\w*", masked):
        name = m.group(0)
        if name in _C_KEYWORDS or depths[m.start()] != 0:
            continue
        open_paren = skip_ws(masked, m.end())
        if open_paren >= len(masked) or masked[open_paren] != "(":
            continue
        close_paren = parens.get(open_paren)
        if close_paren is None:
            continue
        body_open = skip_ws(masked, close_paren + 1)
        if body_open >= len(masked) or masked[body_open] != "{":
            continue
        body_close = braces.get(body_open)
        if body_close is None:
            continue
        decl_start = _decl_start_before(masked, m.start())
        out.append(_slice_function(scan, name, decl_start, body_close))
    return out


def _slice_function(
    scan: ScanResult, name: str, decl_start: int, body_close: int
) -> ExtractedFunction:
    return ExtractedFunction(
        function_name=name,
        code=scan.text[decl_start : body_close + 1],
        docstring=doc_comment_before(scan, decl_start),
        start_line=scan.line_of(decl_start),
        end_line=scan.line_of(body_close),
    )


# --- Go ---------------------------------------------------------------------


def _go_body_open(masked: str, pos: int, parens: dict[int, int]) -> int | None:
    """First top-of-signature '{' after the parameter list, hopping over
    any parenthesized return group."""
    n = len(masked)
    i = pos
    while i < n:
        ch = masked[i]
        if ch == "{":
            return i
        if ch == "(":
            close = parens.get(i)
            if close is None:
                return None
            i = close + 1
            continue
        if ch in ";)":
            return None
        i += 1
    return None


def extract_go(source: str) -> list[ExtractedFunction]:
    scan = scan_source(source, raw_quotes=("`",))
    masked = scan.masked
    depths = brace_depths(masked)
    parens = match_pairs(masked, "(", ")")
    braces = match_pairs(masked, "{", "}")
    out: list[ExtractedFunction] = []
    claimed: set[int] = set()

    for m in re.finditer(r"\bfunc\b", masked):
        if depths[m.start()] != 0:
            continue
        i = skip_ws(masked, m.end())
        receiver = None
        if i < len(masked) and masked[i] == "(":
            close = parens.get(i)
            if close is None:
                continue
            receiver = masked[i + 1 : close]
            i = skip_ws(masked, close + 1)
        name_match = re.match(_IDENT, masked[i:])
        if not name_match:
            continue  # anonymous function or func type
        name = name_match.group(0)
        i = skip_ws(masked, i + name_match.end())
        # Generic type parameters sit between the name and the value params.
        if i < len(masked) and masked[i] == "[":
            close_bracket = masked.find("]", i)
            if close_bracket == -1:
                continue
            i = skip_ws(masked, close_bracket + 1)
        if i >= len(masked) or masked[i] != "(":
            continue
        params_close = parens.get(i)
        if params_close is None:
            continue
        body_open = _go_body_open(masked, params_close + 1, parens)
        if body_open is None:
            continue
        body_close = braces.get(body_open)
        if body_close is None:
            continue
        if receiver is not None:
            base = re.findall(r"[A-Za-z_]\w*", re.sub(r"\[.*?\]", "", receiver))
            name = f"{base[-1]}.{name}" if base else name
        claimed.add(body_open)
        out.append(_slice_function(scan, name, m.start(), body_close))

    # Named closures: x := func(...) { ... } / var x = func(...) { ... }
    for m in re.finditer(
        rf"(?:\bvar\s+)?({_IDENT})\s*(?::=|=)\s*func\b", masked
    ):
        i = skip_ws(masked, m.end())
        if i >= len(masked) or masked[i] != "(":
            continue
        params_close = parens.get(i)
        if params_close is None:
            continue
        body_open = _go_body_open(masked, params_close + 1, parens)
        if body_open is None or body_open in claimed:
            continue
        body_close = braces.get(body_open)
        if body_close is None:
            continue
        claimed.add(body_open)
        out.append(_slice_function(scan, m.group(1), m.start(), body_close))
    return out


# --- Java ---------------------------------------------------------------------

_JAVA_KEYWORDS = {
    "if",
    "for",
    "while",
    "switch",
    "catch",
    "synchronized",
    "do",
    "try",
    "return",
    "new",
    "else",
    "finally",
    "throw",
    "case",
    "assert",
}

_CLASSLIKE_RE = re.compile(rf"\b(class|interface|enum|record)\s+({_IDENT})")


def _signature_name(segment: str) -> tuple[str, int] | None:
    """Method name and its offset within a pre-'{' segment, or None.

    The segment is everything between the previous ';'/'{'/'}' and the
    opening brace. It must end with a parameter list (an optional throws
    clause aside) whose preceding identifier is the method name.
    """
    seg = segment.rstrip()
    seg = re.sub(r"throws\s+[\w$.,\s<>\[\]]+$", "", seg).rstrip()
    if not seg.endswith(")"):
        return None
    depth = 0
    open_idx = None
    for idx in range(len(seg) - 1, -1, -1):
        ch = seg[idx]
        if ch == ")":
            depth += 1
        elif ch == "(":
            depth -= 1
            if depth == 0:
                open_idx = idx
                break
    if open_idx is None:
        return None
    head = seg[:open_idx].rstrip()
    name_match = re.search(rf"({_IDENT})$", head)
    if not name_match:
        return None
    name = name_match.group(1)
    if name in _JAVA_KEYWORDS:
        return None
    before = head[: name_match.start()].rstrip()
    if re.search(r"\bnew$", before):
        return None  # anonymous class instantiation
    return name, name_match.start()


def extract_java(source: str) -> list[ExtractedFunction]:
    return _extract_class_language(
        scan_source(source),
        method_separator=".",
        treat_top_level_functions=False,
    )


def _extract_class_language(
    scan: ScanResult,
    *,
    method_separator: str,
    treat_top_level_functions: bool,
) -> list[ExtractedFunction]:
    masked = scan.masked
    braces = match_pairs(masked, "{", "}")
    out: list[ExtractedFunction] = []
    # (close_offset, kind, class_name)
    stack: list[tuple[int, str, str | None]] = []

    for open_offset in (i for i, ch in enumerate(masked) if ch == "{"):
        while stack and stack[-1][0] < open_offset:
            stack.pop()
        close_offset = braces.get(open_offset, len(masked) - 1)
        seg_start = max(
            masked.rfind(";", 0, open_offset),
            masked.rfind("{", 0, open_offset),
            masked.rfind("}", 0, open_offset),
        )
        segment = masked[seg_start + 1 : open_offset]
        class_match = None
        for class_match in _CLASSLIKE_RE.finditer(segment):
            pass  # keep the last (innermost) declaration keyword
        if class_match:
            stack.append((close_offset, "class", class_match.group(2)))
            continue
        inside_class = bool(stack) and stack[-1][1] == "class"
        if inside_class or treat_top_level_functions:
            named = _signature_name(segment)
            if named:
                name, name_offset = named
                decl_offset = seg_start + 1 + _leading_ws(segment)
                class_names = [c for _, kind, c in stack if kind == "class" and c]
                full_name = (
                    method_separator.join(class_names + [name])
                    if class_names
                    else name
                )
                out.append(
                    _slice_function(scan, full_name, decl_offset, close_offset)
                )
                stack.append((close_offset, "block", None))
                continue
        stack.append((close_offset, "block", None))
    return out


def _leading_ws(segment: str) -> int:
    return len(segment) - len(segment.lstrip())


# --- JavaScript -----------------------------------------------------------------

_JS_KEYWORDS = {
    "if",
    "for",
    "while",
    "switch",
    "catch",
    "function",
    "return",
    "typeof",
    "new",
    "do",
    "else",
    "in",
    "of",
    "instanceof",
    "void",
    "delete",
    "case",
    "default",
}


def extract_js(source: str) -> list[ExtractedFunction]:
    scan = scan_source(source, template_quote="`", regex_literals=True)
    masked = scan.masked
    parens = match_pairs(masked, "(", ")")
    braces = match_pairs(masked, "{", "}")
    # body_open -> (priority, name, decl_start); higher priority wins
    candidates: dict[int, tuple[int, str, int]] = {}

    def body_for_function_keyword(after: int) -> int | None:
        """Body brace of a `function`-keyword expression starting at `after`."""
        i = skip_ws(masked, after)
        if i < len(masked) and masked[i] == "*":
            i = skip_ws(masked, i + 1)
        name_match = re.match(_IDENT, masked[i:])
        if name_match:  # optional inner name on function expressions
            i = skip_ws(masked, i + name_match.end())
        if i >= len(masked) or masked[i] != "(":
            return None
        close = parens.get(i)
        if close is None:
            return None
        body = skip_ws(masked, close + 1)
        if body < len(masked) and masked[body] == "{":
            return body
        return None

    def arrow_body_after(pos: int) -> int | None:
        """Body brace of a block-bodied arrow whose params start at pos."""
        i = skip_ws(masked, pos)
        if i >= len(masked):
            return None
        if masked[i] == "(":
            close = parens.get(i)
            if close is None:
                return None
            i = skip_ws(masked, close + 1)
        else:
            ident = re.match(_IDENT, masked[i:])
            if not ident:
                return None
            i = skip_ws(masked, i + ident.end())
        if masked[i : i + 2] != "=>":
            return None
        body = skip_ws(masked, i + 2)
        if body < len(masked) and masked[body] == "{":
            return body
        return None

    def offer(body: int | None, priority: int, name: str, decl_start: int) -> None:
        if body is None:
            return
        current = candidates.get(body)
        if current is None or priority > current[0]:
            candidates[body] = (priority, name, decl_start)

    # Foo.bar = function / Foo.prototype.bar = function
    for m in re.finditer(
        rf"({_IDENT})\s*\.\s*(?:prototype\s*\.\s*)?({_IDENT})\s*=\s*(?:async\s+)?function\b",
        masked,
    ):
        offer(
            body_for_function_keyword(m.end()),
            4,
            f"{m.group(1)}.{m.group(2)}",
            m.start(),
        )

    # var/let/const name = function
    for m in re.finditer(
        rf"\b(?:var|let|const)\s+({_IDENT})\s*=\s*(?:async\s+)?function\b", masked
    ):
        offer(body_for_function_keyword(m.end()), 3, m.group(1), m.start())

    # var/let/const name = (args) => { ... }
    for m in re.finditer(
        rf"\b(?:var|let|const)\s+({_IDENT})\s*=\s*(?:async\s*)?", masked
    ):
        offer(arrow_body_after(m.end()), 3, m.group(1), m.start())

    # property: function(...)
    for m in re.finditer(
        rf"({_IDENT})\s*:\s*(?:async\s+)?function\b", masked
    ):
        offer(body_for_function_keyword(m.end()), 2, m.group(1), m.start())

    # property: (args) => { ... }
    for m in re.finditer(rf"({_IDENT})\s*:\s*(?:async\s*)?", masked):
        offer(arrow_body_after(m.end()), 2, m.group(1), m.start())

    # function name(...)
    for m in re.finditer(rf"\bfunction\s*\*?\s*({_IDENT})\s*\(", masked):
        name = m.group(1)
        open_paren = masked.find("(", m.start(1))
        close = parens.get(open_paren)
        if close is None:
            continue
        body = skip_ws(masked, close + 1)
        if body < len(masked) and masked[body] == "{":
            offer(body, 1, name, m.start())

    out = [
        _slice_function(scan, name, decl_start, braces.get(body, len(masked) - 1))
        for body, (priority, name, decl_start) in candidates.items()
        if name not in _JS_KEYWORDS
    ]

    # ES6 class methods via the class-context scan.
    class_methods = _extract_class_language(
        scan, method_separator=".", treat_top_level_functions=False
    )
    seen_spans = {(f.start_line, f.end_line) for f in out}
    for method in class_methods:
        if (method.start_line, method.end_line) not in seen_spans:
            out.append(method)
    return out


_EXTRACTORS = {
    "python": extract_python,
    "c": extract_c,
    "go": extract_go,
    "java": extract_java,
    "javascript": extract_js,
}
