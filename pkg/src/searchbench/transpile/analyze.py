"""Front end of the Python-to-C transpiler: parse and reject-with-category.

The supported subset is a single top-level function using positional
parameters, simple-name assignment, if/while, for-over-range with a literal
positive step, arithmetic (+ - * / %), comparisons, boolean operators, and
calls to named functions passed through verbatim. Everything else is
rejected with a category, and for constructs with a recognized syntax-tree
kind, the kind of the first offending node in document order.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass

CATEGORY_SOURCE_CODE = "SourceCode"
CATEGORY_GENERIC = "Generic"
CATEGORY_NONE_NOT_ALLOWED = "NoneNotAllowed"
CATEGORY_INVALID_ANNOTATION = "InvalidAnnotation"
CATEGORY_ATTRIBUTE = "AttributeError"
CATEGORY_SYNTAX = "SyntaxError"

SUPPORTED_ANNOTATIONS = ("int", "float", "bool", "str")

_BINOPS_OK = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Mod)
_CMPOPS_OK = (ast.Eq, ast.NotEq, ast.Lt, ast.LtE, ast.Gt, ast.GtE)

# Statement/expression node classes rejected outright, keyed to the kind
# name reported for them.
_REJECTED_NODES: dict[type, str] = {
    ast.ListComp: "ListComp",
    ast.Try: "Try",
    ast.GeneratorExp: "GeneratorExp",
    ast.With: "With",
    ast.AsyncWith: "With",
    ast.Starred: "Starred",
    ast.Dict: "Dict",
    ast.Raise: "Raise",
    ast.Assert: "Assert",
    ast.DictComp: "DictComp",
    ast.AsyncFunctionDef: "AsyncFunctionDef",
    ast.AsyncFor: "AsyncFunctionDef",
    ast.Yield: "Yield",
    ast.YieldFrom: "YieldFrom",
    ast.Global: "Global",
    ast.Nonlocal: "Nonlocal",
    ast.List: "List",
    ast.JoinedStr: "JoinedStr",
    ast.SetComp: "SetComp",
    ast.Set: "Set",
    ast.ClassDef: "ClassDef",
}

_REJECTED_CMPOPS: dict[type, str] = {
    ast.Is: "Is",
    ast.IsNot: "IsNot",
    ast.In: "In",
    ast.NotIn: "NotIn",
}


@dataclass(frozen=True)
class Failure:
    """A categorized rejection; `node_kind` set when a tree node names it."""

    category: str
    detail: str
    node_kind: str | None = None
    line: int | None = None


def parse_source(source: str) -> tuple[ast.Module | None, Failure | None]:
    """Parse source text, mapping parser rejection to the SyntaxError category."""
    try:
        return ast.parse(source), None
    except (SyntaxError, ValueError) as exc:
        return None, Failure(
            category=CATEGORY_SYNTAX,
            detail=str(exc),
            line=getattr(exc, "lineno", None),
        )
    except RecursionError:
        return None, Failure(
            category=CATEGORY_GENERIC, detail="source too deeply nested"
        )


def _line(node: ast.AST) -> int | None:
    return getattr(node, "lineno", None)


def _reject(node: ast.AST, kind: str, detail: str | None = None) -> Failure:
    category = CATEGORY_ATTRIBUTE if kind == "Attribute" else CATEGORY_SOURCE_CODE
    return Failure(
        category=category,
        detail=detail or f"unsupported construct {kind}",
        node_kind=kind,
        line=_line(node),
    )


def _generic(node: ast.AST, detail: str) -> Failure:
    return Failure(category=CATEGORY_GENERIC, detail=detail, line=_line(node))


def _collect_assigned(func: ast.FunctionDef) -> set[str]:
    names: set[str] = set()
    for node in ast.walk(func):
        if isinstance(node, ast.Assign):
            for target in node.targets:
                if isinstance(target, ast.Name):
                    names.add(target.id)
        elif isinstance(node, (ast.AnnAssign, ast.AugAssign)):
            if isinstance(node.target, ast.Name):
                names.add(node.target.id)
        elif isinstance(node, (ast.For, ast.AsyncFor)):
            if isinstance(node.target, ast.Name):
                names.add(node.target.id)
    return names


class _Validator:
    def __init__(self, func: ast.FunctionDef):
        self.func = func
        params = list(func.args.posonlyargs) + list(func.args.args)
        self.bound = {arg.arg for arg in params} | _collect_assigned(func)
        self.var_annotations: dict[str, str] = {}

    # -- statements ----------------------------------------------------

    def check_function(self) -> Failure | None:
        func = self.func
        if func.decorator_list:
            return _generic(func, "decorated function")
        args = func.args
        if args.vararg or args.kwarg:
            return _generic(func, "star/double-star parameters")
        if args.kwonlyargs:
            return _generic(func, "keyword-only parameters")
        if args.defaults or any(d is not None for d in args.kw_defaults):
            return _generic(func, "default parameter values")
        for arg in list(args.posonlyargs) + list(args.args):
            fail = self._annotation(arg.annotation, position=f"parameter '{arg.arg}'")
            if fail:
                return fail
        fail = self._annotation(func.returns, position="return type", is_return=True)
        if fail:
            return fail
        return self._body(func.body)

    def _annotation(
        self,
        ann: ast.expr | None,
        *,
        position: str,
        is_return: bool = False,
    ) -> Failure | None:
        if ann is None:
            return None
        if isinstance(ann, ast.Name):
            if ann.id in SUPPORTED_ANNOTATIONS:
                return None
            return Failure(
                category=CATEGORY_INVALID_ANNOTATION,
                detail=f"unknown type annotation '{ann.id}' on {position}",
                node_kind="Name",
                line=_line(ann),
            )
        if isinstance(ann, ast.Constant) and ann.value is None:
            if is_return:
                return None  # maps to void
            return Failure(
                category=CATEGORY_NONE_NOT_ALLOWED,
                detail=f"{position} annotated as None has no C type position",
                node_kind="Constant",
                line=_line(ann),
            )
        return Failure(
            category=CATEGORY_INVALID_ANNOTATION,
            detail=f"unsupported annotation form on {position}",
            node_kind=type(ann).__name__,
            line=_line(ann),
        )

    def _body(self, body: list[ast.stmt]) -> Failure | None:
        for stmt in body:
            fail = self._stmt(stmt)
            if fail:
                return fail
        return None

    def _stmt(self, node: ast.stmt) -> Failure | None:
        kind = _REJECTED_NODES.get(type(node))
        if kind:
            return _reject(node, kind)
        if isinstance(node, ast.FunctionDef):
            return _reject(node, "FunctionDef", "nested function definition")
        if isinstance(node, (ast.Import, ast.ImportFrom)):
            return _generic(node, "imports not supported")
        if isinstance(node, ast.Delete):
            return _generic(node, "del statement")
        if isinstance(node, (ast.Pass, ast.Break, ast.Continue)):
            return None
        if isinstance(node, ast.Return):
            if node.value is None:
                return None
            return self._expr(node.value, allow_string=True)
        if isinstance(node, ast.Assign):
            if len(node.targets) != 1:
                return _generic(node, "chained assignment")
            fail = self._assign_target(node.targets[0])
            if fail:
                return fail
            return self._expr(node.value, allow_string=True)
        if isinstance(node, ast.AnnAssign):
            fail = self._assign_target(node.target)
            if fail:
                return fail
            assert isinstance(node.target, ast.Name)
            fail = self._annotation(
                node.annotation, position=f"variable '{node.target.id}'"
            )
            if fail:
                return fail
            if isinstance(node.annotation, ast.Name):
                previous = self.var_annotations.get(node.target.id)
                if previous is not None and previous != node.annotation.id:
                    return _generic(
                        node, f"conflicting type annotations for '{node.target.id}'"
                    )
                self.var_annotations[node.target.id] = node.annotation.id
            if node.value is None:
                return None
            return self._expr(node.value, allow_string=True)
        if isinstance(node, ast.AugAssign):
            fail = self._assign_target(node.target)
            if fail:
                return fail
            fail = self._binop_kind(node, node.op)
            if fail:
                return fail
            return self._expr(node.value)
        if isinstance(node, ast.If):
            fail = self._expr(node.test)
            if fail:
                return fail
            return self._body(node.body) or self._body(node.orelse)
        if isinstance(node, ast.While):
            fail = self._expr(node.test)
            if fail:
                return fail
            if node.orelse:
                return _generic(node.orelse[0], "while-else clause")
            return self._body(node.body)
        if isinstance(node, ast.For):
            return self._for(node)
        if isinstance(node, ast.Expr):
            if isinstance(node.value, ast.Constant) and isinstance(
                node.value.value, str
            ):
                return None  # docstring / bare string, dropped on emission
            if isinstance(node.value, ast.Call):
                return self._expr(node.value)
            # Let the inner expression name itself (Yield, Dict, ...) before
            # falling back to the effect-free-statement rejection.
            fail = self._expr(node.value)
            if fail:
                return fail
            return _generic(node, "expression statement has no effect")
        return _generic(node, f"unsupported statement {type(node).__name__}")

    def _assign_target(self, target: ast.expr) -> Failure | None:
        if isinstance(target, ast.Name):
            return None
        if isinstance(target, ast.Attribute):
            return _reject(target, "Attribute", "attribute assignment target")
        if isinstance(target, ast.Subscript):
            return self._expr(target)
        if isinstance(target, (ast.Tuple, ast.List)):
            return _generic(target, "unpacking assignment target")
        if isinstance(target, ast.Starred):
            return _reject(target, "Starred")
        return _generic(target, f"assignment target {type(target).__name__}")

    def _for(self, node: ast.For) -> Failure | None:
        if node.orelse:
            return _generic(node.orelse[0], "for-else clause")
        if not isinstance(node.target, ast.Name):
            return _generic(node.target, "loop target must be a simple name")
        it = node.iter
        if not (
            isinstance(it, ast.Call)
            and isinstance(it.func, ast.Name)
            and it.func.id == "range"
        ):
            return self._expr(it) or _generic(
                it, "loop iterable must be a range(...) call"
            )
        if it.keywords:
            return _generic(it, "keyword arguments to range")
        if not 1 <= len(it.args) <= 3:
            return _generic(it, f"range() with {len(it.args)} arguments")
        if len(it.args) == 3:
            fail = self._range_step(it.args[2])
            if fail:
                return fail
        for arg in it.args:
            fail = self._expr(arg)
            if fail:
                return fail
        return self._body(node.body)

    def _range_step(self, step: ast.expr) -> Failure | None:
        # Only literal positive integer steps keep the emitted loop's
        # direction decidable at transpile time.
        if isinstance(step, ast.Constant):
            value = step.value
            if isinstance(value, int) and not isinstance(value, bool) and value > 0:
                return None
            return Failure(
                category=CATEGORY_SOURCE_CODE,
                detail=f"range step must be a positive integer literal, got {value!r}",
                node_kind="Constant",
                line=_line(step),
            )
        if isinstance(step, ast.UnaryOp) and isinstance(step.op, ast.USub):
            return Failure(
                category=CATEGORY_SOURCE_CODE,
                detail="negative range step",
                node_kind="Constant",
                line=_line(step),
            )
        return _generic(step, "range step must be a literal integer")

    # -- expressions ----------------------------------------------------

    def _binop_kind(self, node: ast.AST, op: ast.operator) -> Failure | None:
        if isinstance(op, _BINOPS_OK):
            return None
        if isinstance(op, ast.Pow):
            return Failure(
                category=CATEGORY_SOURCE_CODE,
                detail="power operator has no C equivalent without a math library",
                node_kind="BinOp-Pow",
                line=_line(node),
            )
        if isinstance(op, ast.MatMult):
            return _reject(node, "MatMult")
        return _generic(node, f"unsupported operator {type(op).__name__}")

    def _expr(self, node: ast.expr, *, allow_string: bool = False) -> Failure | None:
        kind = _REJECTED_NODES.get(type(node))
        if kind:
            return _reject(node, kind)
        if isinstance(node, ast.Constant):
            value = node.value
            if isinstance(value, bool):
                return None
            if isinstance(value, (int, float)):
                return None
            if isinstance(value, str):
                if allow_string:
                    return None
                return _generic(
                    node, "string literal outside return/assignment position"
                )
            if value is None:
                return Failure(
                    category=CATEGORY_NONE_NOT_ALLOWED,
                    detail="None literal has no C value position",
                    node_kind="Constant",
                    line=_line(node),
                )
            return _reject(
                node, "Constant", f"unsupported literal {type(value).__name__}"
            )
        if isinstance(node, ast.Name):
            if node.id in self.bound:
                return None
            return _generic(node, f"unbound name '{node.id}'")
        if isinstance(node, ast.BinOp):
            return (
                self._binop_kind(node, node.op)
                or self._expr(node.left)
                or self._expr(node.right)
            )
        if isinstance(node, ast.UnaryOp):
            if isinstance(node.op, (ast.USub, ast.UAdd, ast.Not)):
                return self._expr(node.operand)
            return _generic(node, "bitwise complement operator")
        if isinstance(node, ast.BoolOp):
            for value in node.values:
                fail = self._expr(value)
                if fail:
                    return fail
            return None
        if isinstance(node, ast.Compare):
            fail = self._expr(node.left)
            if fail:
                return fail
            for op, comparator in zip(node.ops, node.comparators):
                rejected = _REJECTED_CMPOPS.get(type(op))
                if rejected:
                    return _reject(node, rejected)
                if not isinstance(op, _CMPOPS_OK):
                    return _generic(node, f"comparison {type(op).__name__}")
                fail = self._expr(comparator)
                if fail:
                    return fail
            return None
        if isinstance(node, ast.Call):
            if isinstance(node.func, ast.Attribute):
                return _reject(node.func, "Attribute", "method call")
            if not isinstance(node.func, ast.Name):
                return self._expr(node.func) or _generic(
                    node, "call target must be a name"
                )
            for arg in node.args:
                fail = self._expr(arg)
                if fail:
                    return fail
            if node.keywords:
                return _generic(node, "keyword argument in call")
            return None
        if isinstance(node, ast.Attribute):
            return _reject(node, "Attribute")
        if isinstance(node, ast.Subscript):
            if isinstance(node.slice, ast.Slice):
                return _reject(node, "Slice")
            return _reject(node, "Subscript")
        if isinstance(node, ast.IfExp):
            return _generic(node, "conditional expression")
        if isinstance(node, ast.Lambda):
            return _generic(node, "lambda expression")
        if isinstance(node, ast.NamedExpr):
            return _generic(node, "assignment expression")
        if isinstance(node, ast.Await):
            return _generic(node, "await expression")
        if isinstance(node, ast.Tuple):
            return _generic(node, "tuple expression")
        return _generic(node, f"unsupported expression {type(node).__name__}")


def find_unsupported(tree: ast.Module) -> Failure | None:
    """First unsupported construct in document order, or None if clean.

    The module must hold exactly one top-level function definition (a bare
    leading string literal is tolerated and dropped).
    """
    functions: list[ast.FunctionDef] = []
    for stmt in tree.body:
        if isinstance(stmt, ast.FunctionDef):
            functions.append(stmt)
            continue
        if isinstance(stmt, ast.Expr) and isinstance(stmt.value, ast.Constant):
            if isinstance(stmt.value.value, str):
                continue
        kind = _REJECTED_NODES.get(type(stmt))
        if kind:
            return _reject(stmt, kind)
        if isinstance(stmt, (ast.Import, ast.ImportFrom)):
            return _generic(stmt, "imports not supported")
        return _generic(
            stmt, f"unsupported module-level statement {type(stmt).__name__}"
        )
    if len(functions) != 1:
        return Failure(
            category=CATEGORY_GENERIC,
            detail=f"expected exactly one top-level function, found {len(functions)}",
        )
    return _Validator(functions[0]).check_function()
