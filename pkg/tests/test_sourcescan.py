from searchbench.ingest.sourcescan import (
    brace_depths,
    clean_comment_text,
    doc_comment_before,
    match_pairs,
    scan_source,
)


class TestMasking:
    def test_strings_masked_braces_preserved(self):
        scan = scan_source('x = "a { b }"; if (x) { y(); }')
        assert "{ b }" not in scan.masked
        assert scan.masked.count("{") == 1
        assert len(scan.masked) == len(scan.text)

    def test_newlines_survive_masking(self):
        scan = scan_source('s = "line";\n/* c1\nc2 */\nint x;')
        assert scan.masked.count("\n") == scan.text.count("\n")

    def test_escaped_quote_does_not_terminate(self):
        scan = scan_source(r'char *s = "a\"b{"; int y;')
        assert "{" not in scan.masked

    def test_unterminated_string_stops_at_newline(self):
        scan = scan_source('bad = "oops\nint f(void) { return 1; }')
        assert "{" in scan.masked  # second line still scans as code

    def test_preprocessor_masked_with_continuation(self):
        source = "#define BROKEN {\\\n  more {\nint ok;\n"
        scan = scan_source(source, preprocessor=True)
        assert "{" not in scan.masked
        assert "int ok;" in scan.masked

    def test_go_raw_string_spans_lines(self):
        source = "a := `raw {\nstill raw }`\nfunc f() {}\n"
        scan = scan_source(source, raw_quotes=("`",))
        assert scan.masked.count("{") == 1

    def test_js_template_with_interpolation_masked_whole(self):
        source = "const s = `a ${ {nested: 1} } b`; function f() {}"
        scan = scan_source(source, template_quote="`", regex_literals=True)
        # only the function body brace pair survives
        assert scan.masked.count("{") == 1
        assert scan.masked.count("}") == 1


class TestRegexDetection:
    def test_regex_after_assignment_masked(self):
        scan = scan_source("var re = /[{(\"']/g; var x = 1;", regex_literals=True)
        assert "{" not in scan.masked
        assert '"' not in scan.masked

    def test_division_not_masked(self):
        scan = scan_source("var x = a / b; var y = c / d;", regex_literals=True)
        assert scan.masked == scan.text

    def test_regex_after_return_keyword(self):
        scan = scan_source("return /ab{1,2}/.test(s);", regex_literals=True)
        assert "{" not in scan.masked

    def test_character_class_slash_does_not_terminate(self):
        scan = scan_source("var re = /[/]{/; var z = 2;", regex_literals=True)
        assert "{" not in scan.masked


class TestStructure:
    def test_match_pairs_nested(self):
        masked = "a(b(c)d)e"
        pairs = match_pairs(masked, "(", ")")
        assert pairs == {1: 7, 3: 5}

    def test_brace_depths(self):
        depths = brace_depths("a{b{c}d}e")
        assert depths[0] == 0  # a
        assert depths[2] == 1  # b
        assert depths[4] == 2  # c
        assert depths[8] == 0  # e


class TestDocPairing:
    def test_adjacent_block_comment(self):
        source = "/* docs here */\nint f(void) { return 1; }\n"
        scan = scan_source(source)
        decl = scan.text.index("int f")
        assert doc_comment_before(scan, decl) == "docs here"

    def test_blank_line_breaks_pairing(self):
        source = "/* stale */\n\nint f(void) { return 1; }\n"
        scan = scan_source(source)
        decl = scan.text.index("int f")
        assert doc_comment_before(scan, decl) == ""

    def test_trailing_comment_not_doc(self):
        source = "int x; // trailing\nint f(void) { return 1; }\n"
        scan = scan_source(source)
        decl = scan.text.index("int f")
        assert doc_comment_before(scan, decl) == ""

    def test_chained_line_comments_join(self):
        source = "// first\n// second\nint f(void) { return 1; }\n"
        scan = scan_source(source)
        decl = scan.text.index("int f")
        assert doc_comment_before(scan, decl) == "first\nsecond"

    def test_clean_block_comment_stars(self):
        raw = "/**\n * Title line.\n * @param x thing\n */"
        assert clean_comment_text(raw, "block") == "Title line.\n@param x thing"

    def test_clean_line_comment_triple_slash(self):
        assert clean_comment_text("/// docs", "line") == "docs"
