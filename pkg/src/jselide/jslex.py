"""Tokenizer for ECMAScript source text.

Produces tokens with exact character offsets into the source string. The
scanner is context-free except for two ambiguities that only the parser can
resolve, which are exposed as explicit re-scan entry points:

* ``/`` starts either a division operator or a regular expression literal
  (`scan_regex`),
* ``}`` either closes a block/object or resumes a template literal after a
  ``${...}`` substitution (`scan_template_part`).

Legacy HTML comments (``<!--`` anywhere, ``-->`` at the start of a line) are
honoured because deployed scripts still carry them.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

__all__ = ["Token", "Lexer", "JsSyntaxError"]


class JsSyntaxError(ValueError):
    """Raised for source text the scanner or parser cannot accept."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


# Token types
IDENT = "ident"
PUNCT = "punct"
NUM = "num"
STR = "str"
REGEX = "regex"
TEMPLATE = "template"            # `...`  with no substitutions
TEMPLATE_HEAD = "template_head"  # `...${
TEMPLATE_MIDDLE = "template_middle"  # }...${
TEMPLATE_TAIL = "template_tail"      # }...`
EOF = "eof"


@dataclass(frozen=True, slots=True)
class Token:
    type: str
    value: str
    start: int
    end: int
    nl_before: bool

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"Token({self.type}, {self.value!r}, {self.start}:{self.end})"


LINE_TERMINATORS = "\n\r  "
# Common whitespace; anything else falls back to a unicodedata category check.
SIMPLE_WS = " \t\v\f ﻿"

PUNCTUATORS = [
    ">>>=",
    "...", "===", "!==", ">>>", "**=", "<<=", ">>=", "&&=", "||=", "??=",
    "=>", "==", "!=", "<=", ">=", "&&", "||", "??", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "**", "?.",
    "{", "}", "(", ")", "[", "]", ";", ",", "<", ">", "+", "-", "*", "/",
    "%", "&", "|", "^", "!", "~", "?", ":", "=", ".",
]

_ID_EXTRA_CATEGORIES = {"Mn", "Mc", "Nd", "Pc", "Lm", "Lo", "Lt", "Lu", "Ll", "Nl"}


def _is_id_start(ch: str) -> bool:
    if ch.isascii():
        return ch.isalpha() or ch in "_$"
    return ch.isalpha() or unicodedata.category(ch) == "Nl"


def _is_id_part(ch: str) -> bool:
    if ch.isascii():
        return ch.isalnum() or ch in "_$"
    if ch in "‌‍":
        return True
    return unicodedata.category(ch) in _ID_EXTRA_CATEGORIES


def _is_ws(ch: str) -> bool:
    if ch in SIMPLE_WS:
        return True
    return not ch.isascii() and unicodedata.category(ch) == "Zs"


class Lexer:
    """Scans one source string; all offsets are Python string indices."""

    def __init__(self, source: str):
        self.src = source
        self.n = len(source)

    # ------------------------------------------------------------------
    # whitespace / comments

    def _skip_blank(self, pos: int) -> tuple[int, bool]:
        """Advance past whitespace and comments; report newline crossings."""
        src, n = self.src, self.n
        nl = False
        at_line_start = pos == 0
        while pos < n:
            ch = src[pos]
            if ch in LINE_TERMINATORS:
                nl = True
                at_line_start = True
                pos += 1
            elif _is_ws(ch):
                pos += 1
            elif ch == "/" and pos + 1 < n and src[pos + 1] == "/":
                pos += 2
                while pos < n and src[pos] not in LINE_TERMINATORS:
                    pos += 1
            elif ch == "/" and pos + 1 < n and src[pos + 1] == "*":
                term = src.find("*/", pos + 2)
                if term < 0:
                    raise JsSyntaxError("unterminated block comment", pos)
                if any(t in src[pos:term] for t in LINE_TERMINATORS):
                    nl = True
                    at_line_start = True
                pos = term + 2
            elif ch == "#" and pos == 0 and src.startswith("#!", 0):
                pos = 2
                while pos < n and src[pos] not in LINE_TERMINATORS:
                    pos += 1
            elif src.startswith("<!--", pos):
                pos += 4
                while pos < n and src[pos] not in LINE_TERMINATORS:
                    pos += 1
            elif at_line_start and src.startswith("-->", pos):
                pos += 3
                while pos < n and src[pos] not in LINE_TERMINATORS:
                    pos += 1
            else:
                break
        return pos, nl

    # ------------------------------------------------------------------
    # main entry point

    def scan(self, pos: int) -> Token:
        pos, nl = self._skip_blank(pos)
        src, n = self.src, self.n
        if pos >= n:
            return Token(EOF, "", n, n, nl)
        ch = src[pos]

        if _is_id_start(ch) or (ch == "\\" and src.startswith("\\u", pos)):
            return self._scan_ident(pos, nl)
        if ch == "#" and pos + 1 < n and (_is_id_start(src[pos + 1]) or src.startswith("\\u", pos + 1)):
            t = self._scan_ident(pos + 1, nl)
            return Token(IDENT, "#" + t.value, pos, t.end, nl)
        if ch.isdigit() or (ch == "." and pos + 1 < n and src[pos + 1].isdigit()):
            return self._scan_number(pos, nl)
        if ch in "'\"":
            return self._scan_string(pos, nl)
        if ch == "`":
            return self._scan_template(pos, pos + 1, nl)
        # ?. followed by a digit is the ternary "?" then ".5"
        if src.startswith("?.", pos) and pos + 2 < n and src[pos + 2].isdigit():
            return Token(PUNCT, "?", pos, pos + 1, nl)
        for p in PUNCTUATORS:
            if src.startswith(p, pos):
                return Token(PUNCT, p, pos, pos + len(p), nl)
        raise JsSyntaxError(f"unexpected character {ch!r}", pos)

    # ------------------------------------------------------------------
    # parser-directed re-scans

    def scan_regex(self, pos: int, nl: bool) -> Token:
        """Re-scan a ``/`` token as a regular expression literal."""
        src, n = self.src, self.n
        assert src[pos] == "/"
        i = pos + 1
        in_class = False
        while True:
            if i >= n:
                raise JsSyntaxError("unterminated regular expression", pos)
            ch = src[i]
            if ch in LINE_TERMINATORS:
                raise JsSyntaxError("unterminated regular expression", pos)
            if ch == "\\":
                i += 2
                continue
            if ch == "[":
                in_class = True
            elif ch == "]":
                in_class = False
            elif ch == "/" and not in_class:
                i += 1
                break
            i += 1
        while i < n and _is_id_part(src[i]):
            i += 1
        return Token(REGEX, src[pos:i], pos, i, nl)

    def scan_template_part(self, pos: int, nl: bool) -> Token:
        """Re-scan a ``}`` as the continuation of a template literal."""
        assert self.src[pos] == "}"
        return self._scan_template(pos, pos + 1, nl)

    # ------------------------------------------------------------------
    # scanners

    def _scan_ident(self, pos: int, nl: bool) -> Token:
        src, n = self.src, self.n
        i = pos
        while i < n:
            ch = src[i]
            if ch == "\\":
                if src.startswith("\\u", i):
                    if i + 2 < n and src[i + 2] == "{":
                        close = src.find("}", i + 3)
                        if close < 0:
                            raise JsSyntaxError("bad unicode escape", i)
                        i = close + 1
                    else:
                        i += 6
                    continue
                break
            if i == pos:
                if not _is_id_start(ch):
                    break
            elif not _is_id_part(ch):
                break
            i += 1
        if i == pos:
            raise JsSyntaxError("bad identifier", pos)
        return Token(IDENT, src[pos:i], pos, i, nl)

    def _scan_number(self, pos: int, nl: bool) -> Token:
        src, n = self.src, self.n
        i = pos
        if src[i] == "0" and i + 1 < n and src[i + 1] in "xXoObB":
            i += 2
            while i < n and (src[i].isalnum() or src[i] == "_"):
                i += 1
            if i < n and src[i] == "n":
                i += 1
            return Token(NUM, src[pos:i], pos, i, nl)
        while i < n and (src[i].isdigit() or src[i] == "_"):
            i += 1
        if i < n and src[i] == "n":
            return Token(NUM, src[pos:i + 1], pos, i + 1, nl)
        if i < n and src[i] == ".":
            i += 1
            while i < n and (src[i].isdigit() or src[i] == "_"):
                i += 1
        if i < n and src[i] in "eE":
            j = i + 1
            if j < n and src[j] in "+-":
                j += 1
            if j < n and src[j].isdigit():
                i = j
                while i < n and (src[i].isdigit() or src[i] == "_"):
                    i += 1
        return Token(NUM, src[pos:i], pos, i, nl)

    def _scan_string(self, pos: int, nl: bool) -> Token:
        src, n = self.src, self.n
        quote = src[pos]
        i = pos + 1
        while i < n:
            ch = src[i]
            if ch == "\\":
                # allow escaped line terminators (line continuations)
                i += 2 if not src.startswith("\\\r\n", i) else 3
                continue
            if ch == quote:
                return Token(STR, src[pos:i + 1], pos, i + 1, nl)
            if ch in "\n\r":
                raise JsSyntaxError("unterminated string literal", pos)
            i += 1
        raise JsSyntaxError("unterminated string literal", pos)

    def _scan_template(self, start: int, pos: int, nl: bool) -> Token:
        """Scan template characters from `pos` until a backtick or ``${``."""
        src, n = self.src, self.n
        opened_by_brace = src[start] == "}"
        i = pos
        while i < n:
            ch = src[i]
            if ch == "\\":
                i += 2
                continue
            if ch == "`":
                ttype = TEMPLATE_TAIL if opened_by_brace else TEMPLATE
                return Token(ttype, src[start:i + 1], start, i + 1, nl)
            if ch == "$" and i + 1 < n and src[i + 1] == "{":
                ttype = TEMPLATE_MIDDLE if opened_by_brace else TEMPLATE_HEAD
                return Token(ttype, src[start:i + 2], start, i + 2, nl)
            i += 1
        raise JsSyntaxError("unterminated template literal", start)
