/**
 * Minimal dependency-free syntax highlighting.
 *
 * Escapes first, then wraps comments, strings, keywords, and numbers in
 * spans. Good enough to make function listings scannable; not a parser.
 */

const KEYWORDS = new Set([
    "def", "return", "if", "elif", "else", "for", "while", "class", "import",
    "from", "pass", "break", "continue", "lambda", "yield", "async", "await",
    "try", "except", "finally", "raise", "with", "in", "not", "and", "or",
    "None", "True", "False",
    "func", "type", "struct", "interface", "package", "range", "go", "defer",
    "var", "const", "let", "function", "new", "this", "typeof", "prototype",
    "public", "private", "protected", "static", "final", "void", "int",
    "long", "double", "float", "char", "boolean", "null", "enum", "switch",
    "case", "default", "do", "sizeof", "typedef", "union", "unsigned",
]);

export function escapeHtml(text: string): string {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;")
        .replace(/'/g, "&#39;");
}

const TOKEN_RE =
    /(\/\/[^\n]*|#[^\n]*|\/\*[\s\S]*?\*\/|&quot;(?:[^&]|&(?!quot;))*?&quot;|&#39;(?:[^&]|&(?!#39;))*?&#39;|\b\d+(?:\.\d+)?\b|\b[A-Za-z_]\w*\b)/g;

export function highlight(code: string): string {
    const escaped = escapeHtml(code);
    return escaped.replace(TOKEN_RE, (token) => {
        if (token.startsWith("//") || token.startsWith("#") || token.startsWith("/*")) {
            return `<span class="tok-comment">${token}</span>`;
        }
        if (token.startsWith("&quot;") || token.startsWith("&#39;")) {
            return `<span class="tok-string">${token}</span>`;
        }
        if (/^\d/.test(token)) {
            return `<span class="tok-number">${token}</span>`;
        }
        if (KEYWORDS.has(token)) {
            return `<span class="tok-keyword">${token}</span>`;
        }
        return token;
    });
}
