"""C code generation for validated syntax trees.

Assumes `analyze.find_unsupported` returned None; anything outside the
validated subset raises EmitError, which callers fold into the Generic
failure category. Output is deterministic: same tree and type mapping, same
bytes.

Variable scoping: Python locals are function-scoped, so every assigned name
is declared once at the top of the C function body rather than at its first
(possibly block-nested) assignment.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass

INDENT = "    "


class EmitError(Exception):
    """Internal inconsistency between validator and emitter."""


@dataclass(frozen=True)
class TypeMapping:
    """C type tokens for the annotated Python types and the unannotated default.

    The default placeholder is the literal token ``None``, reproducing the
    untyped-source behavior; pass a real C type (e.g. ``long``) to produce
    compilable output.
    """

    default_type: str = "None"
    int_type: str = "long"
    float_type: str = "double"
    bool_type: str = "int"
    str_type: str = "char*"

    def annotation_type(self, annotation: ast.expr | None, *, is_return: bool) -> str:
        if annotation is None:
            return self.default_type
        if isinstance(annotation, ast.Constant) and annotation.value is None:
            if is_return:
                return "void"
            raise EmitError("None annotation outside return position")
        if isinstance(annotation, ast.Name):
            mapped = {
                "int": self.int_type,
                "float": self.float_type,
                "bool": self.bool_type,
                "str": self.str_type,
            }.get(annotation.id)
            if mapped is None:
                raise EmitError(f"unmapped annotation {annotation.id}")
            return mapped
        raise EmitError(f"unexpected annotation node {type(annotation).__name__}")


# C operator precedence, higher binds tighter.
_PREC_OR = 4
_PREC_AND = 5
_PREC_EQ = 9
_PREC_REL = 10
_PREC_ADD = 12
_PREC_MUL = 13
_PREC_UNARY = 14
_PREC_PRIMARY = 16

_BINOP_TOKENS = {
    ast.Add: ("+", _PREC_ADD),
    ast.Sub: ("-", _PREC_ADD),
    ast.Mult: ("*", _PREC_MUL),
    ast.Div: ("/", _PREC_MUL),
    ast.Mod: ("%", _PREC_MUL),
}

_CMP_TOKENS = {
    ast.Eq: ("==", _PREC_EQ),
    ast.NotEq: ("!=", _PREC_EQ),
    ast.Lt: ("<", _PREC_REL),
    ast.LtE: ("<=", _PREC_REL),
    ast.Gt: (">", _PREC_REL),
    ast.GtE: (">=", _PREC_REL),
}

_UNARY_TOKENS = {ast.USub: "-", ast.UAdd: "+", ast.Not: "!"}

_AUG_TOKENS = {ast.Add: "+=", ast.Sub: "-=", ast.Mult: "*=", ast.Div: "/=", ast.Mod: "%="}


def c_string_literal(value: str) -> str:
    # Octal escapes are fixed-width, so a following digit can never be
    # absorbed into the escape the way \x hex escapes absorb hex digits.
    out = ['"']
    for ch in value:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "\r":
            out.append("\\r")
        elif ord(ch) < 32 or ord(ch) == 127:
            out.append(f"\\{ord(ch):03o}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


class _Emitter:
    def __init__(self, types: TypeMapping):
        self.types = types
        self.lines: list[str] = []

    # -- declarations ---------------------------------------------------

    def _declarations(self, func: ast.FunctionDef) -> list[tuple[str, str]]:
        """(name, c_type) for every assigned local, in first-assignment order."""
        params = {arg.arg for arg in list(func.args.posonlyargs) + list(func.args.args)}
        declared: dict[str, str] = {}

        def visit(stmts: list[ast.stmt]) -> None:
            for stmt in stmts:
                if isinstance(stmt, ast.Assign):
                    target = stmt.targets[0]
                    assert isinstance(target, ast.Name)
                    declared.setdefault(target.id, self.types.default_type)
                elif isinstance(stmt, ast.AnnAssign):
                    assert isinstance(stmt.target, ast.Name)
                    ctype = self.types.annotation_type(stmt.annotation, is_return=False)
                    declared.setdefault(stmt.target.id, ctype)
                elif isinstance(stmt, ast.AugAssign):
                    assert isinstance(stmt.target, ast.Name)
                    declared.setdefault(stmt.target.id, self.types.default_type)
                elif isinstance(stmt, ast.For):
                    assert isinstance(stmt.target, ast.Name)
                    declared.setdefault(stmt.target.id, self.types.default_type)
                    visit(stmt.body)
                elif isinstance(stmt, ast.If):
                    visit(stmt.body)
                    visit(stmt.orelse)
                elif isinstance(stmt, ast.While):
                    visit(stmt.body)

        visit(func.body)
        return [(name, ctype) for name, ctype in declared.items() if name not in params]

    # -- statements -----------------------------------------------------

    def emit_function(self, func: ast.FunctionDef) -> str:
        ret_type = self.types.annotation_type(func.returns, is_return=True)
        params = list(func.args.posonlyargs) + list(func.args.args)
        if params:
            rendered = ", ".join(
                f"{self.types.annotation_type(a.annotation, is_return=False)} {a.arg}"
                for a in params
            )
        else:
            rendered = "void"
        self.lines.append(f"{ret_type} {func.name}({rendered}) {{")
        for name, ctype in self._declarations(func):
            self.lines.append(f"{INDENT}{ctype} {name};")
        self._body(func.body, depth=1)
        self.lines.append("}")
        return "\n".join(self.lines) + "\n"

    def _body(self, stmts: list[ast.stmt], depth: int) -> None:
        for stmt in stmts:
            self._stmt(stmt, depth)

    def _stmt(self, node: ast.stmt, depth: int) -> None:
        pad = INDENT * depth
        if isinstance(node, ast.Pass):
            return
        if isinstance(node, ast.Break):
            self.lines.append(f"{pad}break;")
            return
        if isinstance(node, ast.Continue):
            self.lines.append(f"{pad}continue;")
            return
        if isinstance(node, ast.Return):
            if node.value is None:
                self.lines.append(f"{pad}return;")
            else:
                self.lines.append(f"{pad}return {self._expr(node.value, 0)};")
            return
        if isinstance(node, ast.Assign):
            target = node.targets[0]
            assert isinstance(target, ast.Name)
            self.lines.append(f"{pad}{target.id} = {self._expr(node.value, 0)};")
            return
        if isinstance(node, ast.AnnAssign):
            if node.value is not None:
                assert isinstance(node.target, ast.Name)
                self.lines.append(
                    f"{pad}{node.target.id} = {self._expr(node.value, 0)};"
                )
            return
        if isinstance(node, ast.AugAssign):
            assert isinstance(node.target, ast.Name)
            op = _AUG_TOKENS.get(type(node.op))
            if op is None:
                raise EmitError(f"augmented op {type(node.op).__name__}")
            self.lines.append(f"{pad}{node.target.id} {op} {self._expr(node.value, 0)};")
            return
        if isinstance(node, ast.If):
            self._if_chain(node, depth)
            return
        if isinstance(node, ast.While):
            self.lines.append(f"{pad}while ({self._expr(node.test, 0)}) {{")
            self._body(node.body, depth + 1)
            self.lines.append(f"{pad}}}")
            return
        if isinstance(node, ast.For):
            self._for_range(node, depth)
            return
        if isinstance(node, ast.Expr):
            if isinstance(node.value, ast.Constant) and isinstance(
                node.value.value, str
            ):
                return  # docstring, dropped
            self.lines.append(f"{pad}{self._expr(node.value, 0)};")
            return
        raise EmitError(f"statement {type(node).__name__}")

    def _if_chain(self, node: ast.If, depth: int) -> None:
        pad = INDENT * depth
        self.lines.append(f"{pad}if ({self._expr(node.test, 0)}) {{")
        self._body(node.body, depth + 1)
        orelse = node.orelse
        while len(orelse) == 1 and isinstance(orelse[0], ast.If):
            chained = orelse[0]
            self.lines.append(f"{pad}}} else if ({self._expr(chained.test, 0)}) {{")
            self._body(chained.body, depth + 1)
            orelse = chained.orelse
        if orelse:
            self.lines.append(f"{pad}}} else {{")
            self._body(orelse, depth + 1)
        self.lines.append(f"{pad}}}")

    def _for_range(self, node: ast.For, depth: int) -> None:
        pad = INDENT * depth
        assert isinstance(node.target, ast.Name)
        assert isinstance(node.iter, ast.Call)
        args = node.iter.args
        if len(args) == 1:
            start, stop, step = "0", self._expr(args[0], 0), "1"
        elif len(args) == 2:
            start = self._expr(args[0], 0)
            stop = self._expr(args[1], 0)
            step = "1"
        else:
            start = self._expr(args[0], 0)
            stop = self._expr(args[1], 0)
            step = self._expr(args[2], 0)
        name = node.target.id
        self.lines.append(
            f"{pad}for ({name} = {start}; {name} < {stop}; {name} += {step}) {{"
        )
        self._body(node.body, depth + 1)
        self.lines.append(f"{pad}}}")

    # -- expressions ------------------------------------------------------

    def _expr(self, node: ast.expr, context: int) -> str:
        text, prec = self._expr_prec(node)
        if prec < context:
            return f"({text})"
        return text

    def _expr_prec(self, node: ast.expr) -> tuple[str, int]:
        if isinstance(node, ast.Constant):
            return self._constant(node), _PREC_PRIMARY
        if isinstance(node, ast.Name):
            return node.id, _PREC_PRIMARY
        if isinstance(node, ast.BinOp):
            token, prec = _BINOP_TOKENS.get(type(node.op), (None, 0))
            if token is None:
                raise EmitError(f"operator {type(node.op).__name__}")
            left = self._expr(node.left, prec)
            right = self._expr(node.right, prec + 1)
            return f"{left} {token} {right}", prec
        if isinstance(node, ast.UnaryOp):
            token = _UNARY_TOKENS.get(type(node.op))
            if token is None:
                raise EmitError(f"unary {type(node.op).__name__}")
            return f"{token}{self._expr(node.operand, _PREC_UNARY + 1)}", _PREC_UNARY
        if isinstance(node, ast.BoolOp):
            token, prec = (
                ("&&", _PREC_AND) if isinstance(node.op, ast.And) else ("||", _PREC_OR)
            )
            parts = [self._expr(node.values[0], prec)]
            parts += [self._expr(v, prec + 1) for v in node.values[1:]]
            return f" {token} ".join(parts), prec
        if isinstance(node, ast.Compare):
            return self._compare(node)
        if isinstance(node, ast.Call):
            assert isinstance(node.func, ast.Name)
            args = ", ".join(self._expr(a, 0) for a in node.args)
            return f"{node.func.id}({args})", _PREC_PRIMARY
        raise EmitError(f"expression {type(node).__name__}")

    def _compare(self, node: ast.Compare) -> tuple[str, int]:
        if len(node.ops) == 1:
            token, prec = _CMP_TOKENS[type(node.ops[0])]
            left = self._expr(node.left, prec)
            right = self._expr(node.comparators[0], prec + 1)
            return f"{left} {token} {right}", prec
        # Chained comparison: each adjacent pair is evaluated independently
        # and conjoined, matching Python's comparison semantics for
        # side-effect-free operands.
        parts = []
        operands = [node.left] + list(node.comparators)
        for op, lhs, rhs in zip(node.ops, operands, operands[1:]):
            token, prec = _CMP_TOKENS[type(op)]
            parts.append(
                f"({self._expr(lhs, prec)} {token} {self._expr(rhs, prec + 1)})"
            )
        return " && ".join(parts), _PREC_AND

    def _constant(self, node: ast.Constant) -> str:
        value = node.value
        if isinstance(value, bool):
            return "1" if value else "0"
        if isinstance(value, int):
            return str(value)
        if isinstance(value, float):
            return repr(value)
        if isinstance(value, str):
            return c_string_literal(value)
        raise EmitError(f"literal {type(value).__name__}")


def emit_c(tree: ast.Module, types: TypeMapping | None = None) -> str:
    """Render the single validated top-level function as C source."""
    types = types or TypeMapping()
    functions = [s for s in tree.body if isinstance(s, ast.FunctionDef)]
    if len(functions) != 1:
        raise EmitError(f"expected one function, found {len(functions)}")
    return _Emitter(types).emit_function(functions[0])
