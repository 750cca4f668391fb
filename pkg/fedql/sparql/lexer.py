#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Lexer

PLY token rules for the SPARQL subset. Rule functions are tried in the
order they are defined here, then the operator strings longest first.
"""

import re
import threading
from dataclasses import dataclass
from typing import List

from ply import lex

from ..errors import QuerySyntaxError

tokens = (
    "IRIREF",
    "STRING_LONG",
    "STRING",
    "BLANK_NODE_LABEL",
    "ANON",
    "VAR",
    "LANGTAG",
    "DOUBLE",
    "DECIMAL",
    "INTEGER",
    "PNAME",
    "NAME",
    "DTYPE",
    "LBRACE",
    "RBRACE",
    "LPAREN",
    "RPAREN",
    "LBRACKET",
    "RBRACKET",
    "DOT",
    "SEMI",
    "COMMA",
    "STAR",
    "EQ",
    "NE",
    "LE",
    "GE",
    "LT",
    "GT",
    "AND",
    "OR",
    "BANG",
    "PLUS",
    "MINUS",
    "SLASH",
    "PIPE",
    "CARET",
    "QMARK",
)


@dataclass(frozen=True)
class Token:
    type: str
    value: str
    line: int
    col: int


class _SparqlLexer:
    tokens = tokens

    t_ignore = " \t\r"

    def t_IRIREF(self, t):
        r'<[A-Za-z][A-Za-z0-9+.-]*:(?:[^<>"{}|^`\\\x00-\x20]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*>'
        t.value = t.value[1:-1]
        return t

    def t_STRING_LONG(self, t):
        r'"""(?:[^"\\]|\\.|"(?!""))*"""|\'\'\'(?:[^\'\\]|\\.|\'(?!\'\'))*\'\'\''
        t.lexer.lineno += t.value.count("\n")
        t.value = t.value[3:-3]
        return t

    def t_STRING(self, t):
        r'"(?:[^"\\\n\r]|\\.)*"|\'(?:[^\'\\\n\r]|\\.)*\''
        t.value = t.value[1:-1]
        return t

    def t_BLANK_NODE_LABEL(self, t):
        r"_:[A-Za-z0-9_](?:[A-Za-z0-9_.-]*[A-Za-z0-9_-])?"
        t.value = t.value[2:]
        return t

    def t_ANON(self, t):
        r"\[[ \t\r\n]*\]"
        t.lexer.lineno += t.value.count("\n")
        return t

    def t_VAR(self, t):
        r"[?$][A-Za-z0-9_]+"
        t.value = t.value[1:]
        return t

    def t_LANGTAG(self, t):
        r"@[A-Za-z]+(?:-[A-Za-z0-9]+)*"
        t.value = t.value[1:]
        return t

    def t_DOUBLE(self, t):
        r"(?:[0-9]+\.[0-9]*[eE][+-]?[0-9]+|\.[0-9]+[eE][+-]?[0-9]+|[0-9]+[eE][+-]?[0-9]+)"
        return t

    def t_DECIMAL(self, t):
        r"[0-9]*\.[0-9]+"
        return t

    def t_INTEGER(self, t):
        r"[0-9]+"
        return t

    def t_PNAME(self, t):
        r"(?:[A-Za-z][A-Za-z0-9_.-]*)?:(?:[A-Za-z0-9_%:](?:[A-Za-z0-9_.%:-]*[A-Za-z0-9_%:-])?)?"
        return t

    def t_NAME(self, t):
        r"[A-Za-z_][A-Za-z0-9_]*"
        return t

    def t_newline(self, t):
        r"\n+"
        t.lexer.lineno += len(t.value)

    def t_comment(self, t):
        r"\#[^\n]*"

    t_DTYPE = r"\^\^"
    t_LBRACE = r"\{"
    t_RBRACE = r"\}"
    t_LPAREN = r"\("
    t_RPAREN = r"\)"
    t_LBRACKET = r"\["
    t_RBRACKET = r"\]"
    t_DOT = r"\."
    t_SEMI = r";"
    t_COMMA = r","
    t_STAR = r"\*"
    t_EQ = r"="
    t_NE = r"!="
    t_LE = r"<="
    t_GE = r">="
    t_LT = r"<"
    t_GT = r">"
    t_AND = r"&&"
    t_OR = r"\|\|"
    t_BANG = r"!"
    t_PLUS = r"\+"
    t_MINUS = r"-"
    t_SLASH = r"/"
    t_PIPE = r"\|"
    t_CARET = r"\^"
    t_QMARK = r"\?"

    def t_error(self, t):
        line, col = position(t.lexer.lexdata, t.lexpos)
        raise QuerySyntaxError(line, col, f"unexpected character {t.value[0]!r}")


_template = lex.lex(object=_SparqlLexer(), reflags=re.UNICODE, errorlog=lex.NullLogger())
_template_lock = threading.Lock()


def position(text: str, offset: int):
    """1-based (line, column) of a character offset."""
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def tokenize(text: str) -> List[Token]:
    """
    Split query text into tokens.

    Raises:
        QuerySyntaxError: On characters no rule accepts
    """
    with _template_lock:
        lexer = _template.clone()
    lexer.lineno = 1
    lexer.input(text)

    result = []
    for tok in iter(lexer.token, None):
        line, col = position(text, tok.lexpos)
        result.append(Token(tok.type, tok.value, line, col))
    return result
