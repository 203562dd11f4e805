"""Recursive-descent parser and static checks for ``.sl`` programs."""

from __future__ import annotations

from .diagnostics import Diagnostic, FrontendError
from .lexer import Token, tokenize
from .nodes import (
    ARITHMETIC,
    RELATIONAL,
    Assert,
    Assign,
    BinOp,
    Block,
    BoolLit,
    Change,
    Decl,
    Expr,
    FunctionDecl,
    If,
    IntLit,
    Return,
    SourceProgram,
    Span,
    Stmt,
    UnaryOp,
    Var,
    While,
)

INT_LIMIT = 2**31


class _SyntaxError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        self.diagnostic = diagnostic


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    @property
    def prev(self) -> Token:
        return self.tokens[self.pos - 1]

    def error(self, message: str, tok: Token | None = None, kind: str = "syntax"):
        tok = tok or self.tok
        raise _SyntaxError(Diagnostic(kind, message, tok.line, tok.col))

    def check(self, text: str) -> bool:
        return self.tok.kind in ("op", "kw") and self.tok.text == text

    def accept(self, text: str) -> Token | None:
        if self.check(text):
            tok = self.tok
            self.pos += 1
            return tok
        return None

    def expect(self, text: str) -> Token:
        tok = self.accept(text)
        if tok is None:
            self.error(f"expected {text!r}, found {self.tok}")
        return tok

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            self.error(f"expected identifier, found {self.tok}")
        tok = self.tok
        self.pos += 1
        return tok

    def span_from(self, start: Token) -> Span:
        end = self.prev
        return Span(start.line, start.col, end.line, end.end_col)

    # -- declarations -----------------------------------------------------

    def program(self) -> list[FunctionDecl]:
        functions = []
        while self.tok.kind != "eof":
            functions.append(self.function())
        return functions

    def function(self) -> FunctionDecl:
        start = self.expect("int")
        name = self.ident().text
        self.expect("(")
        params = []
        if not self.check(")"):
            while True:
                self.expect("int")
                params.append(self.ident().text)
                if not self.accept(","):
                    break
        self.expect(")")
        body = self.block()
        return FunctionDecl(name, tuple(params), body, self.span_from(start))

    # -- statements -------------------------------------------------------

    def block(self) -> Block:
        start = self.expect("{")
        stmts = []
        while not self.check("}"):
            if self.tok.kind == "eof":
                self.error("expected '}', found end of input")
            stmts.append(self.statement())
        self.expect("}")
        return Block(tuple(stmts), self.span_from(start))

    def body(self) -> Block:
        if self.check("{"):
            return self.block()
        stmt = self.statement()
        return Block((stmt,), stmt.span)

    def statement(self) -> Stmt:
        start = self.tok
        if self.check("{"):
            return self.block()
        if self.accept("int"):
            name = self.ident().text
            init = self.expression() if self.accept("=") else None
            self.expect(";")
            return Decl(name, init, self.span_from(start))
        if self.accept("if"):
            self.expect("(")
            cond = self.expression()
            self.expect(")")
            then = self.body()
            orelse = self.body() if self.accept("else") else None
            return If(cond, then, orelse, self.span_from(start))
        if self.accept("while"):
            self.expect("(")
            cond = self.expression()
            self.expect(")")
            return While(cond, self.body(), self.span_from(start))
        if self.accept("assert"):
            self.expect("(")
            cond = self.expression()
            self.expect(")")
            self.expect(";")
            return Assert(cond, self.span_from(start))
        if self.accept("return"):
            value = self.expression()
            self.expect(";")
            return Return(value, self.span_from(start))
        if self.tok.kind == "ident":
            name = self.ident().text
            self.expect("=")
            value = self.expression()
            self.expect(";")
            return Assign(name, value, self.span_from(start))
        self.error(f"expected statement, found {self.tok}")

    # -- expressions ------------------------------------------------------

    def expression(self) -> Expr:
        return self.disjunction()

    def _left_assoc(self, operators, operand) -> Expr:
        start = self.tok
        left = operand()
        while self.tok.kind == "op" and self.tok.text in operators:
            op = self.tok.text
            self.pos += 1
            right = operand()
            left = BinOp(op, left, right, self.span_from(start))
        return left

    def disjunction(self) -> Expr:
        return self._left_assoc(("||",), self.conjunction)

    def conjunction(self) -> Expr:
        return self._left_assoc(("&&",), self.equality)

    def equality(self) -> Expr:
        return self._left_assoc(("==", "!="), self.relational)

    def relational(self) -> Expr:
        return self._left_assoc(("<", "<=", ">", ">="), self.additive)

    def additive(self) -> Expr:
        return self._left_assoc(("+", "-"), self.multiplicative)

    def multiplicative(self) -> Expr:
        return self._left_assoc(("*", "/", "%"), self.unary)

    def unary(self) -> Expr:
        start = self.tok
        if self.accept("-"):
            if self.tok.kind == "int":
                tok = self.tok
                self.pos += 1
                return self._int(-int(tok.text), start)
            return UnaryOp("-", self.unary(), self.span_from(start))
        if self.accept("!"):
            return UnaryOp("!", self.unary(), self.span_from(start))
        return self.primary()

    def _int(self, value: int, start: Token) -> IntLit:
        if not -INT_LIMIT <= value < INT_LIMIT:
            self.error(f"integer literal {value} out of 32-bit range", start)
        return IntLit(value, self.span_from(start))

    def primary(self) -> Expr:
        start = self.tok
        if self.tok.kind == "int":
            self.pos += 1
            return self._int(int(start.text), start)
        if self.accept("true"):
            return BoolLit(True, self.span_from(start))
        if self.accept("false"):
            return BoolLit(False, self.span_from(start))
        if self.accept("change"):
            self.expect("(")
            args = []
            if not self.check(")"):
                while True:
                    args.append(self.expression())
                    if not self.accept(","):
                        break
            self.expect(")")
            span = self.span_from(start)
            if len(args) != 2:
                raise _SyntaxError(
                    Diagnostic(
                        "change-arity",
                        f"change expects 2 arguments (old, new), got {len(args)}",
                        span.line,
                        span.col,
                    )
                )
            return Change(args[0], args[1], span)
        if self.tok.kind == "ident":
            self.pos += 1
            return Var(start.text, self.span_from(start))
        if self.accept("("):
            inner = self.expression()
            self.expect(")")
            return inner
        self.error(f"expected expression, found {self.tok}")


# ---------------------------------------------------------------------------
# Static checks
# ---------------------------------------------------------------------------


def is_condition_atom(e: Expr) -> bool:
    """Boolean expressions allowed as ``change`` operands."""
    if isinstance(e, BoolLit):
        return True
    if isinstance(e, BinOp) and e.op in RELATIONAL:
        return True
    if isinstance(e, UnaryOp) and e.op == "!":
        return is_condition_atom(e.operand)
    return False


class Checker:
    def __init__(self, function: FunctionDecl):
        self.function = function
        self.declared: set[str] = set()
        self.diagnostics: list[Diagnostic] = []

    def report(self, kind: str, message: str, span: Span):
        self.diagnostics.append(Diagnostic(kind, message, span.line, span.col))

    def run(self) -> list[Diagnostic]:
        seen = set()
        for p in self.function.params:
            if p in seen:
                self.report("name", f"duplicate parameter {p!r}", self.function.span)
            seen.add(p)
        self.declared = set(self.function.params)
        self.stmt(self.function.body)
        return self.diagnostics

    def stmt(self, s: Stmt):
        if isinstance(s, Block):
            for inner in s.stmts:
                self.stmt(inner)
        elif isinstance(s, Decl):
            if s.init is not None:
                self.expect_type(s.init, "int")
            if s.name in self.declared:
                self.report("name", f"variable {s.name!r} already declared", s.span)
            self.declared.add(s.name)
        elif isinstance(s, Assign):
            if s.name not in self.declared:
                self.report("name", f"assignment to undeclared variable {s.name!r}", s.span)
            self.expect_type(s.value, "int")
        elif isinstance(s, If):
            self.expect_type(s.cond, "bool")
            self.stmt(s.then)
            if s.orelse is not None:
                self.stmt(s.orelse)
        elif isinstance(s, While):
            self.expect_type(s.cond, "bool")
            self.stmt(s.body)
        elif isinstance(s, Assert):
            self.expect_type(s.cond, "bool")
        elif isinstance(s, Return):
            self.expect_type(s.value, "int")

    def expect_type(self, e: Expr, expected: str):
        actual = self.expr(e, in_change=False)
        if actual is not None and actual != expected:
            self.report("type", f"expected {expected} expression, found {actual}", e.span)

    def expr(self, e: Expr, in_change: bool) -> str | None:
        if isinstance(e, IntLit):
            return "int"
        if isinstance(e, BoolLit):
            return "bool"
        if isinstance(e, Var):
            if e.name not in self.declared:
                self.report("name", f"undeclared variable {e.name!r}", e.span)
                return None
            return "int"
        if isinstance(e, UnaryOp):
            inner = self.expr(e.operand, in_change)
            want = "int" if e.op == "-" else "bool"
            if inner is not None and inner != want:
                self.report("type", f"operator {e.op!r} needs {want}, found {inner}", e.span)
            return want
        if isinstance(e, BinOp):
            left = self.expr(e.left, in_change)
            right = self.expr(e.right, in_change)
            want = "bool" if e.op in ("&&", "||") else "int"
            for side in (left, right):
                if side is not None and side != want:
                    self.report("type", f"operator {e.op!r} needs {want} operands, found {side}", e.span)
                    break
            return "int" if e.op in ARITHMETIC else "bool"
        if isinstance(e, Change):
            if in_change:
                self.report("nested-change", "change annotations cannot be nested", e.span)
            old = self.expr(e.old, True)
            new = self.expr(e.new, True)
            if old is not None and new is not None and old != new:
                self.report("type", f"change operands differ in type ({old} vs {new})", e.span)
                return None
            result = old or new
            if result == "bool":
                for operand in (e.old, e.new):
                    if not is_condition_atom(operand):
                        self.report(
                            "type",
                            "boolean change operands must be comparisons or literals",
                            operand.span,
                        )
            return result
        raise TypeError(e)


def parse_program(source: str, entry: str | None = None, filename: str = "<input>") -> SourceProgram:
    """Parse and validate ``source``; raises :class:`FrontendError`."""
    try:
        tokens = tokenize(source)
        functions = Parser(tokens).program()
    except _SyntaxError as exc:
        raise FrontendError([exc.diagnostic], filename) from None
    except FrontendError as exc:
        raise FrontendError(exc.diagnostics, filename) from None
    if not functions:
        raise FrontendError([Diagnostic("entry", "program declares no function", 1, 1)], filename)
    names = [f.name for f in functions]
    if entry is None:
        if len(functions) > 1:
            raise FrontendError(
                [Diagnostic("entry", f"several functions ({', '.join(names)}); choose an entry", 1, 1)],
                filename,
            )
        entry = functions[0].name
    elif entry not in names:
        raise FrontendError([Diagnostic("entry", f"no function named {entry!r}", 1, 1)], filename)
    program = SourceProgram(tuple(functions), entry)
    diagnostics = Checker(program.function).run()
    if diagnostics:
        raise FrontendError(diagnostics, filename)
    return program


def parse_file(path, entry: str | None = None) -> SourceProgram:
    with open(path, encoding="utf-8") as fh:
        return parse_program(fh.read(), entry, str(path))
