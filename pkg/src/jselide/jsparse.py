"""Recursive-descent parser that enumerates function-like units in JS source.

The parser walks the full ECMAScript expression and statement grammar but
builds no AST; its sole product is the list of function-like units (with
exact source offsets) plus the offsets a rewriter needs: where a statement
may be inserted inside each body without disturbing directive prologues.

It accepts a slight superset of the language (cover grammars are not
re-validated, reserved words may appear as identifiers, ``??``/``||``
mixing is tolerated) but is not expected to reject valid scripts. Module
syntax (import/export) is recognised so that module resources analyse
cleanly too.

Ambiguity handling:

* ``/`` is re-scanned as a regex literal whenever the parser is in operand
  position (`_relex_regex`).
* ``}`` is re-scanned as a template continuation inside ``${...}``
  substitutions (`_relex_template`).
* ``(...)`` at assignment level is parsed with a cover grammar; if ``=>``
  follows, the cover was an arrow parameter list.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

from .jslex import (
    EOF,
    IDENT,
    NUM,
    PUNCT,
    REGEX,
    STR,
    TEMPLATE,
    TEMPLATE_HEAD,
    TEMPLATE_TAIL,
    JsSyntaxError,
    Lexer,
    Token,
)

__all__ = ["RawUnit", "parse_units", "JsSyntaxError"]

KIND_DECLARATION = "declaration"
KIND_EXPRESSION = "expression"
KIND_ARROW = "arrow"
KIND_METHOD = "method"
KIND_GETTER = "getter"
KIND_SETTER = "setter"
KIND_CONSTRUCTOR = "constructor"

ASSIGN_OPS = {
    "=", "+=", "-=", "*=", "/=", "%=", "<<=", ">>=", ">>>=",
    "&=", "|=", "^=", "**=", "&&=", "||=", "??=",
}

BINARY_PREC = {
    "??": 1, "||": 2, "&&": 3, "|": 4, "^": 5, "&": 6,
    "==": 7, "!=": 7, "===": 7, "!==": 7,
    "<": 8, ">": 8, "<=": 8, ">=": 8, "instanceof": 8, "in": 8,
    "<<": 9, ">>": 9, ">>>": 9,
    "+": 10, "-": 10,
    "*": 11, "/": 11, "%": 11,
    "**": 12,
}

UNARY_PUNCT = {"+", "-", "~", "!", "++", "--"}
UNARY_KEYWORDS = {"delete", "void", "typeof"}


@dataclass
class RawUnit:
    """One function-like unit, offsets in source-string indices."""

    kind: str
    name: str | None
    start: int
    end: int
    body_start: int
    body_end: int
    is_async: bool
    is_generator: bool
    depth: int
    body_is_block: bool
    marker_offset: int
    scope_escape: bool


@dataclass
class _Frame:
    arrow: bool
    escape: bool = False


class _Parser:
    def __init__(self, source: str):
        self.src = source
        self.lex = Lexer(source)
        self.toks: list[Token] = []
        self.i = 0
        self.last_end = 0
        self.units: list[RawUnit] = []
        self.frames: list[_Frame] = []
        self.depth = 0
        self.in_async = False
        self.in_gen = False
        self.prologue_offset = 0

    # ------------------------------------------------------------------
    # token plumbing

    def _fill(self, k: int) -> None:
        while len(self.toks) <= self.i + k:
            prev_end = self.toks[-1].end if self.toks else 0
            self.toks.append(self.lex.scan(prev_end))

    def tok(self, k: int = 0) -> Token:
        self._fill(k)
        return self.toks[self.i + k]

    def advance(self) -> Token:
        t = self.tok()
        if t.type != EOF:
            self.last_end = t.end
            self.i += 1
        return t

    def at_punct(self, *vals: str) -> bool:
        t = self.tok()
        return t.type == PUNCT and t.value in vals

    def at_ident(self, *vals: str) -> bool:
        t = self.tok()
        return t.type == IDENT and t.value in vals

    def eat_punct(self, val: str) -> bool:
        if self.at_punct(val):
            self.advance()
            return True
        return False

    def expect_punct(self, val: str) -> Token:
        t = self.tok()
        if t.type != PUNCT or t.value != val:
            raise JsSyntaxError(f"expected {val!r}, found {t.value!r}", t.start)
        return self.advance()

    def _relex_regex(self) -> None:
        t = self.tok()
        nt = self.lex.scan_regex(t.start, t.nl_before)
        self.toks[self.i] = nt
        del self.toks[self.i + 1:]

    def _relex_template(self) -> None:
        t = self.tok()
        nt = self.lex.scan_template_part(t.start, t.nl_before)
        self.toks[self.i] = nt
        del self.toks[self.i + 1:]

    # ------------------------------------------------------------------
    # scope-escape bookkeeping (super / new.target inside a unit body)

    def _mark_escape(self) -> None:
        for fr in reversed(self.frames):
            if not fr.arrow:
                fr.escape = True
                return

    # ------------------------------------------------------------------
    # program

    def parse_program(self) -> None:
        if self.src.startswith("#!"):
            nl = len(self.src)
            for t in "\n\r  ":
                p = self.src.find(t, 2)
                if 0 <= p < nl:
                    nl = p
            self.prologue_offset = min(nl + 1, len(self.src))
        in_prologue = True
        while self.tok().type != EOF:
            st = self.tok()
            before = self.i
            self.parse_statement()
            if in_prologue:
                if self._was_directive(st, before):
                    self.prologue_offset = st.end
                else:
                    in_prologue = False

    def _was_directive(self, first: Token, before_index: int) -> bool:
        if first.type != STR:
            return False
        consumed = self.toks[before_index:self.i]
        if len(consumed) == 1:
            return True
        return len(consumed) == 2 and consumed[1].type == PUNCT and consumed[1].value == ";"

    # ------------------------------------------------------------------
    # statements

    def parse_statement(self) -> None:
        t = self.tok()
        if t.type == EOF:
            raise JsSyntaxError("unexpected end of input", t.start)
        if t.type == PUNCT:
            if t.value == "{":
                self.parse_block()
                return
            if t.value == ";":
                self.advance()
                return
            self._expression_statement()
            return
        if t.type != IDENT:
            self._expression_statement()
            return

        nxt = self.tok(1)
        if nxt.type == PUNCT and nxt.value == ":" and t.value != "default":
            self.advance()
            self.advance()
            self.parse_statement()
            return

        v = t.value
        if v in ("var", "const"):
            self.parse_var_declarations(eat_kw=True)
            self._semicolon()
        elif v == "let" and (nxt.type == IDENT or (nxt.type == PUNCT and nxt.value in "[{")):
            self.parse_var_declarations(eat_kw=True)
            self._semicolon()
        elif v == "function":
            self.parse_function(KIND_DECLARATION, t.start, is_async=False)
        elif v == "async" and nxt.type == IDENT and nxt.value == "function" and not nxt.nl_before:
            self.advance()
            self.parse_function(KIND_DECLARATION, t.start, is_async=True)
        elif v == "class":
            self.parse_class()
        elif v == "if":
            self.advance()
            self.expect_punct("(")
            self.parse_expression()
            self.expect_punct(")")
            self.parse_statement()
            if self.at_ident("else"):
                self.advance()
                self.parse_statement()
        elif v == "for":
            self.parse_for()
        elif v == "while":
            self.advance()
            self.expect_punct("(")
            self.parse_expression()
            self.expect_punct(")")
            self.parse_statement()
        elif v == "do":
            self.advance()
            self.parse_statement()
            if not self.at_ident("while"):
                raise JsSyntaxError("expected 'while'", self.tok().start)
            self.advance()
            self.expect_punct("(")
            self.parse_expression()
            self.expect_punct(")")
            self.eat_punct(";")
        elif v == "switch":
            self.parse_switch()
        elif v == "try":
            self.parse_try()
        elif v == "throw":
            self.advance()
            self.parse_expression()
            self._semicolon()
        elif v == "return":
            self.advance()
            c = self.tok()
            if not (c.type == EOF or c.nl_before or (c.type == PUNCT and c.value in (";", "}"))):
                self.parse_expression()
            self._semicolon()
        elif v in ("break", "continue"):
            self.advance()
            c = self.tok()
            if c.type == IDENT and not c.nl_before:
                self.advance()
            self._semicolon()
        elif v == "debugger":
            self.advance()
            self._semicolon()
        elif v == "with":
            self.advance()
            self.expect_punct("(")
            self.parse_expression()
            self.expect_punct(")")
            self.parse_statement()
        elif v == "import" and not (nxt.type == PUNCT and nxt.value in ("(", ".")):
            self.parse_import()
        elif v == "export":
            self.parse_export()
        else:
            self._expression_statement()

    def _expression_statement(self) -> None:
        self.parse_expression()
        self._semicolon()

    def _semicolon(self) -> None:
        t = self.tok()
        if t.type == PUNCT and t.value == ";":
            self.advance()
            return
        if t.type == EOF or t.nl_before or (t.type == PUNCT and t.value == "}"):
            return
        raise JsSyntaxError(f"expected ';' before {t.value!r}", t.start)

    def parse_block(self) -> None:
        self.expect_punct("{")
        while not self.at_punct("}"):
            if self.tok().type == EOF:
                raise JsSyntaxError("unterminated block", self.tok().start)
            self.parse_statement()
        self.advance()

    def parse_var_declarations(self, eat_kw: bool, no_in: bool = False, stop_in_of: bool = False) -> bool:
        """Parse declarator list; returns True if stopped at ``in``/``of``."""
        if eat_kw:
            self.advance()
        first = True
        while True:
            self._binding_element(no_in=no_in or stop_in_of)
            if first and stop_in_of and (self.at_ident("of") or self.at_ident("in")):
                return True
            first = False
            if not self.eat_punct(","):
                return False

    def _binding_element(self, no_in: bool = False) -> None:
        t = self.tok()
        if t.type == PUNCT and t.value == "{":
            self.parse_object_literal()
        elif t.type == PUNCT and t.value == "[":
            self.parse_array_literal()
        elif t.type == IDENT:
            self.advance()
        else:
            raise JsSyntaxError(f"bad binding target {t.value!r}", t.start)
        if self.at_punct("="):
            self.advance()
            self.parse_assignment(no_in=no_in)

    def parse_for(self) -> None:
        self.advance()
        if self.at_ident("await"):
            self.advance()
        self.expect_punct("(")
        t = self.tok()
        if t.type == PUNCT and t.value == ";":
            self.advance()
        elif t.type == IDENT and (
            t.value in ("var", "const")
            or (t.value == "let" and (self.tok(1).type == IDENT or self.at_next_punct(1, "[", "{")))
        ):
            stopped = self.parse_var_declarations(eat_kw=True, no_in=True, stop_in_of=True)
            if stopped or self.at_ident("of") or self.at_ident("in"):
                is_in = self.at_ident("in")
                self.advance()
                if is_in:
                    self.parse_expression()
                else:
                    self.parse_assignment()
                self.expect_punct(")")
                self.parse_statement()
                return
            self.expect_punct(";")
        else:
            self.parse_expression(no_in=True)
            if self.at_ident("of") or self.at_ident("in"):
                is_in = self.at_ident("in")
                self.advance()
                if is_in:
                    self.parse_expression()
                else:
                    self.parse_assignment()
                self.expect_punct(")")
                self.parse_statement()
                return
            self.expect_punct(";")
        if not self.at_punct(";"):
            self.parse_expression()
        self.expect_punct(";")
        if not self.at_punct(")"):
            self.parse_expression()
        self.expect_punct(")")
        self.parse_statement()

    def at_next_punct(self, k: int, *vals: str) -> bool:
        t = self.tok(k)
        return t.type == PUNCT and t.value in vals

    def parse_switch(self) -> None:
        self.advance()
        self.expect_punct("(")
        self.parse_expression()
        self.expect_punct(")")
        self.expect_punct("{")
        while not self.at_punct("}"):
            if self.tok().type == EOF:
                raise JsSyntaxError("unterminated switch", self.tok().start)
            if self.at_ident("case"):
                self.advance()
                self.parse_expression()
                self.expect_punct(":")
            elif self.at_ident("default"):
                self.advance()
                self.expect_punct(":")
            else:
                self.parse_statement()
        self.advance()

    def parse_try(self) -> None:
        self.advance()
        self.parse_block()
        if self.at_ident("catch"):
            self.advance()
            if self.eat_punct("("):
                self._binding_element()
                self.expect_punct(")")
            self.parse_block()
        if self.at_ident("finally"):
            self.advance()
            self.parse_block()

    def parse_import(self) -> None:
        self.advance()
        if self.tok().type == STR:
            self.advance()
            self._import_attributes()
            self._semicolon()
            return
        if self.tok().type == IDENT and not self.at_ident("from"):
            self.advance()
            self.eat_punct(",")
        if self.at_punct("*"):
            self.advance()
            if self.at_ident("as"):
                self.advance()
                self.advance()
        elif self.at_punct("{"):
            self.advance()
            while not self.at_punct("}"):
                if self.tok().type in (IDENT, STR):
                    self.advance()
                else:
                    raise JsSyntaxError("bad import specifier", self.tok().start)
                if self.at_ident("as"):
                    self.advance()
                    self.advance()
                if not self.eat_punct(","):
                    break
            self.expect_punct("}")
        if self.at_ident("from"):
            self.advance()
            if self.tok().type != STR:
                raise JsSyntaxError("expected module string", self.tok().start)
            self.advance()
        self._import_attributes()
        self._semicolon()

    def _import_attributes(self) -> None:
        if (self.at_ident("assert") or self.at_ident("with")) and self.at_next_punct(1, "{"):
            self.advance()
            self.parse_object_literal()

    def parse_export(self) -> None:
        self.advance()
        if self.at_ident("default"):
            self.advance()
            t = self.tok()
            if self.at_ident("function"):
                self.parse_function(KIND_DECLARATION, t.start, is_async=False)
            elif self.at_ident("async") and self.tok(1).type == IDENT and self.tok(1).value == "function" and not self.tok(1).nl_before:
                self.advance()
                self.parse_function(KIND_DECLARATION, t.start, is_async=True)
            elif self.at_ident("class"):
                self.parse_class()
            else:
                self.parse_assignment()
                self._semicolon()
            return
        if self.at_punct("*"):
            self.advance()
            if self.at_ident("as"):
                self.advance()
                self.advance()
            if self.at_ident("from"):
                self.advance()
                self.advance()
            self._semicolon()
            return
        if self.at_punct("{"):
            self.advance()
            while not self.at_punct("}"):
                if self.tok().type in (IDENT, STR):
                    self.advance()
                else:
                    raise JsSyntaxError("bad export specifier", self.tok().start)
                if self.at_ident("as"):
                    self.advance()
                    self.advance()
                if not self.eat_punct(","):
                    break
            self.expect_punct("}")
            if self.at_ident("from"):
                self.advance()
                if self.tok().type != STR:
                    raise JsSyntaxError("expected module string", self.tok().start)
                self.advance()
            self._semicolon()
            return
        self.parse_statement()

    # ------------------------------------------------------------------
    # functions, classes, object literals

    def parse_function(self, kind: str, start: int, is_async: bool) -> None:
        """From the ``function`` keyword (already current)."""
        self.advance()  # function
        is_gen = self.eat_punct("*")
        name = None
        if self.tok().type == IDENT:
            name = self.advance().value
        self._function_tail(kind, start, name, is_async, is_gen)

    def _function_tail(self, kind: str, start: int, name: str | None,
                       is_async: bool, is_gen: bool) -> None:
        """Parse ``( params ) { body }`` and record the unit."""
        unit_depth = self.depth
        frame = _Frame(arrow=False)
        self.frames.append(frame)
        self.depth += 1
        saved = (self.in_async, self.in_gen)
        self.in_async, self.in_gen = is_async, is_gen
        try:
            self.parse_params()
            body_start, body_end, marker_off = self.parse_function_body()
        finally:
            self.in_async, self.in_gen = saved
            self.depth -= 1
            self.frames.pop()
        self.units.append(RawUnit(
            kind=kind, name=name, start=start, end=self.last_end,
            body_start=body_start, body_end=body_end,
            is_async=is_async, is_generator=is_gen, depth=unit_depth,
            body_is_block=True, marker_offset=marker_off,
            scope_escape=frame.escape,
        ))

    def parse_params(self) -> None:
        self.expect_punct("(")
        while not self.at_punct(")"):
            if self.at_punct("..."):
                self.advance()
            self._binding_element()
            if not self.eat_punct(","):
                break
        self.expect_punct(")")

    def parse_function_body(self) -> tuple[int, int, int]:
        open_tok = self.expect_punct("{")
        body_start = open_tok.start
        marker_off = open_tok.end
        in_prologue = True
        while not self.at_punct("}"):
            if self.tok().type == EOF:
                raise JsSyntaxError("unterminated function body", self.tok().start)
            st = self.tok()
            before = self.i
            self.parse_statement()
            if in_prologue:
                if self._was_directive(st, before):
                    marker_off = st.end
                else:
                    in_prologue = False
        close_tok = self.advance()
        return body_start, close_tok.end, marker_off

    def parse_arrow_tail(self, start: int, is_async: bool, units_before: int) -> None:
        """From the token after ``=>``; `units_before` retro-bumps params."""
        for u in self.units[units_before:]:
            u.depth += 1
        unit_depth = self.depth
        frame = _Frame(arrow=True)
        self.frames.append(frame)
        self.depth += 1
        saved = (self.in_async, self.in_gen)
        self.in_async, self.in_gen = is_async, False
        try:
            if self.at_punct("{"):
                body_start, body_end, marker_off = self.parse_function_body()
                block = True
            else:
                body_start = self.tok().start
                self.parse_assignment()
                body_end = self.last_end
                marker_off = body_start
                block = False
        finally:
            self.in_async, self.in_gen = saved
            self.depth -= 1
            self.frames.pop()
        self.units.append(RawUnit(
            kind=KIND_ARROW, name=None, start=start, end=self.last_end,
            body_start=body_start, body_end=body_end,
            is_async=is_async, is_generator=False, depth=unit_depth,
            body_is_block=block, marker_offset=marker_off,
            scope_escape=frame.escape,
        ))

    def parse_class(self) -> None:
        self.advance()  # class
        if self.tok().type == IDENT and not self.at_ident("extends"):
            self.advance()
        if self.at_ident("extends"):
            self.advance()
            self.parse_lhs_expression()
        self.expect_punct("{")
        while not self.at_punct("}"):
            if self.tok().type == EOF:
                raise JsSyntaxError("unterminated class body", self.tok().start)
            if self.eat_punct(";"):
                continue
            if self.at_ident("static") and self.at_next_punct(1, "{"):
                self.advance()
                self.parse_block()
                continue
            self.parse_class_element()
        self.advance()

    def _key_like(self, t: Token) -> bool:
        return t.type in (IDENT, STR, NUM) or (t.type == PUNCT and t.value == "[")

    def parse_class_element(self) -> None:
        start = self.tok().start
        is_static = False
        if self.at_ident("static") and (self._key_like(self.tok(1)) or self.at_next_punct(1, "*")):
            is_static = True
            self.advance()
        self._method_or_field(start, in_class=True, is_static=is_static)

    def _method_or_field(self, start: int, in_class: bool, is_static: bool = False) -> None:
        is_async = False
        is_gen = False
        accessor: str | None = None
        if self.at_ident("async") and not self.tok(1).nl_before and (
            self._key_like(self.tok(1)) or self.at_next_punct(1, "*")
        ):
            is_async = True
            self.advance()
        if self.at_punct("*"):
            is_gen = True
            self.advance()
        if (self.at_ident("get") or self.at_ident("set")) and self._key_like(self.tok(1)):
            accessor = self.tok().value
            self.advance()
        name, computed = self._property_key()
        if self.at_punct("("):
            if accessor == "get":
                kind = KIND_GETTER
            elif accessor == "set":
                kind = KIND_SETTER
            elif (
                in_class and not is_static and not computed and not is_gen
                and not is_async and name == "constructor"
            ):
                kind = KIND_CONSTRUCTOR
            else:
                kind = KIND_METHOD
            self._function_tail(kind, start, name, is_async, is_gen)
            return
        if not in_class:
            raise JsSyntaxError("expected method body", self.tok().start)
        # class field
        if self.at_punct("="):
            self.advance()
            self.parse_assignment()
        self._semicolon()

    def _property_key(self) -> tuple[str | None, bool]:
        t = self.tok()
        if t.type == IDENT:
            self.advance()
            return t.value, False
        if t.type == STR:
            self.advance()
            return t.value[1:-1], False
        if t.type == NUM:
            self.advance()
            return t.value, False
        if t.type == PUNCT and t.value == "[":
            self.advance()
            self.parse_assignment()
            self.expect_punct("]")
            return None, True
        raise JsSyntaxError(f"bad property key {t.value!r}", t.start)

    def parse_object_literal(self) -> None:
        self.expect_punct("{")
        while not self.at_punct("}"):
            if self.tok().type == EOF:
                raise JsSyntaxError("unterminated object literal", self.tok().start)
            if self.at_punct("..."):
                self.advance()
                self.parse_assignment()
            else:
                start = self.tok().start
                t = self.tok()
                looks_method = (
                    (t.type == IDENT and t.value in ("get", "set") and self._key_like(self.tok(1)))
                    or (t.type == IDENT and t.value == "async" and not self.tok(1).nl_before
                        and (self._key_like(self.tok(1)) or self.at_next_punct(1, "*")))
                    or self.at_punct("*")
                    or (self._key_like(t) and self.at_next_punct(1, "("))
                    or (t.type == PUNCT and t.value == "[")
                )
                if looks_method:
                    self._object_member(start)
                else:
                    self._property_key()
                    if self.at_punct(":"):
                        self.advance()
                        self.parse_assignment()
                    elif self.at_punct("="):
                        # cover grammar: shorthand with default (pattern position)
                        self.advance()
                        self.parse_assignment()
            if not self.eat_punct(","):
                break
        self.expect_punct("}")

    def _object_member(self, start: int) -> None:
        """Object-literal member that might be a method or a computed key."""
        is_async = False
        is_gen = False
        accessor: str | None = None
        if self.at_ident("async") and not self.tok(1).nl_before and (
            self._key_like(self.tok(1)) or self.at_next_punct(1, "*")
        ):
            is_async = True
            self.advance()
        if self.at_punct("*"):
            is_gen = True
            self.advance()
        if (self.at_ident("get") or self.at_ident("set")) and self._key_like(self.tok(1)):
            accessor = self.tok().value
            self.advance()
        name, _computed = self._property_key()
        if self.at_punct("("):
            kind = {"get": KIND_GETTER, "set": KIND_SETTER}.get(accessor or "", KIND_METHOD)
            self._function_tail(kind, start, name, is_async, is_gen)
            return
        # not a method after all (e.g. computed key with plain value)
        if self.at_punct(":"):
            self.advance()
            self.parse_assignment()
        elif self.at_punct("="):
            self.advance()
            self.parse_assignment()

    def parse_array_literal(self) -> None:
        self.expect_punct("[")
        while not self.at_punct("]"):
            if self.tok().type == EOF:
                raise JsSyntaxError("unterminated array literal", self.tok().start)
            if self.at_punct(","):
                self.advance()
                continue
            if self.at_punct("..."):
                self.advance()
            self.parse_assignment()
            if not self.eat_punct(","):
                break
        self.expect_punct("]")

    # ------------------------------------------------------------------
    # expressions

    def parse_expression(self, no_in: bool = False) -> None:
        self.parse_assignment(no_in=no_in)
        while self.at_punct(","):
            self.advance()
            self.parse_assignment(no_in=no_in)

    def parse_assignment(self, no_in: bool = False) -> None:
        t = self.tok()

        if t.type == IDENT and t.value == "yield" and self.in_gen:
            self.advance()
            c = self.tok()
            if self.at_punct("*") and not c.nl_before:
                self.advance()
                self.parse_assignment(no_in=no_in)
            elif not c.nl_before and self._starts_expression(c):
                self.parse_assignment(no_in=no_in)
            return

        # single-identifier arrow:  x => ...
        if t.type == IDENT and t.value not in ("async",):
            n1 = self.tok(1)
            if n1.type == PUNCT and n1.value == "=>" and not n1.nl_before:
                self.advance()
                self.advance()
                self.parse_arrow_tail(t.start, is_async=False, units_before=len(self.units))
                return

        # async arrows
        if t.type == IDENT and t.value == "async" and not self.tok(1).nl_before:
            n1 = self.tok(1)
            if n1.type == IDENT and n1.value != "function":
                n2 = self.tok(2)
                if n2.type == PUNCT and n2.value == "=>" and not n2.nl_before:
                    self.advance()
                    self.advance()
                    self.advance()
                    self.parse_arrow_tail(t.start, is_async=True, units_before=len(self.units))
                    return
            if n1.type == PUNCT and n1.value == "(":
                self.advance()  # async
                units_before = len(self.units)
                self._parse_cover_parens()
                nt = self.tok()
                if nt.type == PUNCT and nt.value == "=>" and not nt.nl_before:
                    self.advance()
                    self.parse_arrow_tail(t.start, is_async=True, units_before=units_before)
                    return
                # plain call:  async(...)
                self._finish_from_operand(no_in)
                return

        # parenthesised cover:  (...) => ...   or plain parenthesised expression
        if t.type == PUNCT and t.value == "(":
            units_before = len(self.units)
            self._parse_cover_parens()
            nt = self.tok()
            if nt.type == PUNCT and nt.value == "=>" and not nt.nl_before:
                self.advance()
                self.parse_arrow_tail(t.start, is_async=False, units_before=units_before)
                return
            self._finish_from_operand(no_in)
            return

        self.parse_conditional(no_in=no_in)
        self._assignment_tail(no_in)

    def _assignment_tail(self, no_in: bool) -> None:
        t = self.tok()
        if t.type == PUNCT and t.value in ASSIGN_OPS:
            self.advance()
            self.parse_assignment(no_in=no_in)

    def _finish_from_operand(self, no_in: bool) -> None:
        """Continue after a primary was consumed by a cover parse."""
        self.parse_suffixes()
        if self.at_punct("++", "--") and not self.tok().nl_before:
            self.advance()
        self.parse_binary(no_in=no_in, min_prec=1, head_consumed=True)
        self._conditional_tail(no_in)
        self._assignment_tail(no_in)

    def _parse_cover_parens(self) -> None:
        self.expect_punct("(")
        while not self.at_punct(")"):
            if self.tok().type == EOF:
                raise JsSyntaxError("unterminated parenthesised expression", self.tok().start)
            if self.at_punct("..."):
                self.advance()
            self.parse_assignment()
            if not self.eat_punct(","):
                break
        self.expect_punct(")")

    def parse_conditional(self, no_in: bool = False, head_consumed: bool = False) -> None:
        self.parse_binary(no_in=no_in, min_prec=1, head_consumed=head_consumed)
        self._conditional_tail(no_in)

    def _conditional_tail(self, no_in: bool) -> None:
        if self.at_punct("?"):
            self.advance()
            self.parse_assignment()
            self.expect_punct(":")
            self.parse_assignment(no_in=no_in)

    def parse_binary(self, no_in: bool, min_prec: int, head_consumed: bool = False) -> None:
        if not head_consumed:
            self.parse_unary()
        while True:
            t = self.tok()
            op = None
            if t.type == PUNCT and t.value in BINARY_PREC:
                op = t.value
            elif t.type == IDENT and t.value in ("instanceof", "in"):
                if t.value == "in" and no_in:
                    break
                op = t.value
            if op is None or BINARY_PREC[op] < min_prec:
                break
            self.advance()
            next_min = BINARY_PREC[op] if op == "**" else BINARY_PREC[op] + 1
            self.parse_binary(no_in=no_in, min_prec=next_min)

    def _starts_expression(self, t: Token) -> bool:
        if t.type in (IDENT, NUM, STR, REGEX, TEMPLATE, TEMPLATE_HEAD):
            return True
        return t.type == PUNCT and t.value in (
            "(", "[", "{", "+", "-", "!", "~", "++", "--", "/", "/=",
        )

    def parse_unary(self) -> None:
        t = self.tok()
        if t.type == PUNCT and t.value in UNARY_PUNCT:
            self.advance()
            self.parse_unary()
            return
        if t.type == IDENT and t.value in UNARY_KEYWORDS:
            self.advance()
            self.parse_unary()
            return
        if t.type == IDENT and t.value == "await":
            n1 = self.tok(1)
            if (self.in_async or self.depth == 0) and self._starts_expression(n1) and not n1.nl_before:
                self.advance()
                self.parse_unary()
                return
        self.parse_postfix()

    def parse_postfix(self) -> None:
        if self.at_ident("new"):
            self.parse_new()
        else:
            self.parse_primary()
        self.parse_suffixes()
        if self.at_punct("++", "--") and not self.tok().nl_before:
            self.advance()

    def parse_lhs_expression(self) -> None:
        if self.at_ident("new"):
            self.parse_new()
        else:
            self.parse_primary()
        self.parse_suffixes()

    def parse_new(self) -> None:
        self.advance()  # new
        if self.at_punct("."):
            self.advance()
            if self.tok().type != IDENT:
                raise JsSyntaxError("expected meta property name", self.tok().start)
            self.advance()
            self._mark_escape()
            return
        if self.at_ident("new"):
            self.parse_new()
        else:
            self.parse_primary()
        self.parse_suffixes(allow_call=False)
        if self.at_punct("("):
            self.parse_args()

    def parse_args(self) -> None:
        self.expect_punct("(")
        while not self.at_punct(")"):
            if self.tok().type == EOF:
                raise JsSyntaxError("unterminated argument list", self.tok().start)
            if self.at_punct("..."):
                self.advance()
            self.parse_assignment()
            if not self.eat_punct(","):
                break
        self.expect_punct(")")

    def parse_suffixes(self, allow_call: bool = True) -> None:
        while True:
            t = self.tok()
            if t.type == PUNCT and t.value == ".":
                self.advance()
                if self.tok().type != IDENT:
                    raise JsSyntaxError("expected property name", self.tok().start)
                self.advance()
            elif t.type == PUNCT and t.value == "?.":
                self.advance()
                if self.at_punct("("):
                    self.parse_args()
                elif self.at_punct("["):
                    self.advance()
                    self.parse_expression()
                    self.expect_punct("]")
                elif self.tok().type == IDENT:
                    self.advance()
                else:
                    raise JsSyntaxError("bad optional chain", self.tok().start)
            elif t.type == PUNCT and t.value == "[":
                self.advance()
                self.parse_expression()
                self.expect_punct("]")
            elif t.type == PUNCT and t.value == "(" and allow_call:
                self.parse_args()
            elif t.type in (TEMPLATE, TEMPLATE_HEAD):
                self.parse_template()
            else:
                return

    def parse_template(self) -> None:
        t = self.advance()
        if t.type == TEMPLATE:
            return
        while True:
            self.parse_expression()
            if not self.at_punct("}"):
                raise JsSyntaxError("unterminated template substitution", self.tok().start)
            self._relex_template()
            part = self.advance()
            if part.type == TEMPLATE_TAIL:
                return

    def parse_primary(self) -> None:
        t = self.tok()
        if t.type == IDENT:
            v = t.value
            if v == "function":
                self.parse_function(KIND_EXPRESSION, t.start, is_async=False)
                return
            if v == "async" and self.tok(1).type == IDENT and self.tok(1).value == "function" and not self.tok(1).nl_before:
                self.advance()
                self.parse_function(KIND_EXPRESSION, t.start, is_async=True)
                return
            if v == "class":
                self.parse_class()
                return
            if v == "super":
                self.advance()
                self._mark_escape()
                return
            if v == "import":
                self.advance()
                if self.at_punct("."):
                    self.advance()
                    if self.tok().type != IDENT:
                        raise JsSyntaxError("expected meta property name", self.tok().start)
                    self.advance()
                return
            if v == "new":
                self.parse_new()
                return
            self.advance()
            return
        if t.type in (NUM, STR, REGEX):
            self.advance()
            return
        if t.type in (TEMPLATE, TEMPLATE_HEAD):
            self.parse_template()
            return
        if t.type == PUNCT:
            if t.value in ("/", "/="):
                self._relex_regex()
                self.advance()
                return
            if t.value == "(":
                self.advance()
                self.parse_expression()
                self.expect_punct(")")
                return
            if t.value == "[":
                self.parse_array_literal()
                return
            if t.value == "{":
                self.parse_object_literal()
                return
        raise JsSyntaxError(f"unexpected token {t.value!r}", t.start)


def parse_units(source: str) -> tuple[list[RawUnit], int]:
    """Parse `source`; return (units sorted by start, prologue offset).

    Raises JsSyntaxError when the source cannot be parsed. Minified bundles
    chain hundreds of ternaries/initializers, each costing a few recursion
    frames; the interpreter limit is raised (process-wide, set-if-lower) to
    accommodate them. Pathological nesting beyond that still surfaces as
    RecursionError for callers to treat as unparseable.
    """
    if sys.getrecursionlimit() < 6000:
        sys.setrecursionlimit(6000)
    p = _Parser(source)
    p.parse_program()
    units = sorted(p.units, key=lambda u: (u.start, -u.end))
    return units, p.prologue_offset
