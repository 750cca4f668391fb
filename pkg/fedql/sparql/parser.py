#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Parser

Recursive descent parser for the SPARQL subset:

    Query     := Prefix* (Select | Construct | Ask)
    Select    := SELECT DISTINCT? (Var+ | *) WHERE? Group Mods
    Construct := CONSTRUCT { Template } WHERE? Group Mods
    Ask       := ASK WHERE? Group
    Group     := { (Triples | FILTER | OPTIONAL Group
                    | SERVICE SILENT? iri Group | VALUES)* }

Constructs that belong to SPARQL 1.1 but not to the subset raise
UnsupportedFeature; everything else that fails to parse raises
QuerySyntaxError with the line and column of the offending token.
"""

import logging
from decimal import Decimal
from typing import Dict, List, Optional, Tuple

from .ast import (
    And,
    Arith,
    Ask,
    Compare,
    Construct,
    FnCall,
    FUNCTION_ARITY,
    Filter,
    GroupPattern,
    Not,
    OptionalGroup,
    Or,
    OrderCondition,
    QueryAst,
    Select,
    Service,
    TriplePattern,
    Triples,
    Values,
    Variable,
    group_variables,
)
from .lexer import Token, tokenize
from ..core.terms import (
    BlankNode,
    Iri,
    Literal,
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    XSD_STRING,
)
from ..core.ntriples import _unescape
from ..errors import QuerySyntaxError, UnsupportedFeature

logger = logging.getLogger(__name__)

# Recognized SPARQL 1.1 keywords outside the subset.
UNSUPPORTED_KEYWORDS = {
    "UNION",
    "GRAPH",
    "BIND",
    "MINUS",
    "FROM",
    "NAMED",
    "DESCRIBE",
    "GROUP",
    "HAVING",
    "EXISTS",
    "IN",
    "BASE",
    "REDUCED",
    "INSERT",
    "DELETE",
    "LOAD",
    "CLEAR",
    "DROP",
    "CREATE",
    "WITH",
}
AGGREGATES = {"COUNT", "SUM", "MIN", "MAX", "AVG", "SAMPLE", "GROUP_CONCAT"}
OTHER_BUILTINS = {
    "IRI",
    "URI",
    "BNODE",
    "RAND",
    "ABS",
    "CEIL",
    "FLOOR",
    "ROUND",
    "CONCAT",
    "STRLEN",
    "UCASE",
    "LCASE",
    "ENCODE_FOR_URI",
    "STRENDS",
    "STRBEFORE",
    "STRAFTER",
    "YEAR",
    "MONTH",
    "DAY",
    "HOURS",
    "MINUTES",
    "SECONDS",
    "TIMEZONE",
    "TZ",
    "NOW",
    "UUID",
    "STRUUID",
    "MD5",
    "SHA1",
    "SHA256",
    "SHA384",
    "SHA512",
    "COALESCE",
    "IF",
    "STRLANG",
    "STRDT",
    "SAMETERM",
    "ISBLANK",
    "ISNUMERIC",
    "LANGMATCHES",
    "SUBSTR",
    "REPLACE",
}
_COMPARE_TOKENS = {"EQ": "=", "NE": "!=", "LT": "<", "LE": "<=", "GT": ">", "GE": ">="}
_PATH_TOKENS = {"SLASH", "PIPE", "STAR", "PLUS", "QMARK", "CARET"}
_TERM_START = {
    "IRIREF",
    "PNAME",
    "VAR",
    "BLANK_NODE_LABEL",
    "ANON",
    "STRING",
    "STRING_LONG",
    "INTEGER",
    "DECIMAL",
    "DOUBLE",
    "LBRACKET",
    "LPAREN",
    "PLUS",
    "MINUS",
}


class _Parser:
    """Single-use parser over one token list."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.prefixes: Dict[str, str] = {}
        self.blank_vars: Dict[str, Variable] = {}
        self.anon_count = 0
        self.in_service = False
        self.in_template = False

    # token helpers

    def peek(self, offset: int = 0) -> Optional[Token]:
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            self.fail("unexpected end of query")
        self.pos += 1
        return tok

    def at(self, type_: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.type == type_

    def at_keyword(self, *words: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.type == "NAME" and tok.value.upper() in words

    def expect(self, type_: str, what: str) -> Token:
        tok = self.peek()
        if tok is None or tok.type != type_:
            self.fail(f"expected {what}", tok)
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        if not self.at_keyword(word):
            self.fail(f"expected {word}")
        return self.advance()

    def fail(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        if tok is None:
            lines = self.text.split("\n")
            raise QuerySyntaxError(len(lines), len(lines[-1]) + 1, message)
        found = tok.value if tok.type != "STRING" else f'"{tok.value}"'
        raise QuerySyntaxError(tok.line, tok.col, f"{message}, found {found!r}")

    def unsupported(self, keyword: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        line, col = (tok.line, tok.col) if tok else (0, 0)
        raise UnsupportedFeature(keyword, line, col)

    def check_unsupported_keyword(self):
        tok = self.peek()
        if tok is not None and tok.type == "NAME":
            word = tok.value.upper()
            if word in UNSUPPORTED_KEYWORDS:
                self.unsupported(word, tok)
            if word in AGGREGATES:
                self.unsupported(word, tok)

    # query forms

    def parse(self) -> QueryAst:
        self.prologue()
        self.check_unsupported_keyword()

        if self.at_keyword("SELECT"):
            ast = self.select_query()
        elif self.at_keyword("CONSTRUCT"):
            ast = self.construct_query()
        elif self.at_keyword("ASK"):
            ast = self.ask_query()
        else:
            self.fail("expected SELECT, CONSTRUCT or ASK")

        if self.peek() is not None:
            self.check_unsupported_keyword()
            self.fail("unexpected trailing input")
        return ast

    def prologue(self):
        while self.at_keyword("PREFIX", "BASE"):
            if self.at_keyword("BASE"):
                self.unsupported("BASE")
            self.advance()
            name = self.expect("PNAME", "prefix name")
            prefix, _, local = name.value.partition(":")
            if local:
                self.fail("prefix declaration must end with ':'", name)
            iri = self.expect("IRIREF", "IRI")
            self.prefixes[prefix] = iri.value

    def select_query(self) -> QueryAst:
        self.advance()
        distinct = False
        if self.at_keyword("DISTINCT"):
            self.advance()
            distinct = True
        self.check_unsupported_keyword()

        projection: Optional[List[Variable]] = None
        if self.at("STAR"):
            self.advance()
        else:
            projection = []
            while self.at("VAR") or self.at("LPAREN"):
                if self.at("LPAREN"):
                    inner = self.peek(1)
                    if inner is not None and inner.type == "NAME" and inner.value.upper() in AGGREGATES:
                        self.unsupported(inner.value.upper(), inner)
                    self.unsupported("AS")
                projection.append(Variable(self.advance().value))
            if not projection:
                self.fail("expected variables or '*' after SELECT")

        self.check_unsupported_keyword()
        if self.at_keyword("WHERE"):
            self.advance()
        where = self.group()
        order, limit, offset = self.modifiers()

        warnings = []
        if projection is not None:
            bound = set(group_variables(where))
            for var in projection:
                if var.key not in bound:
                    warnings.append(f"projected variable ?{var.name} does not occur in WHERE")
        for warning in warnings:
            logger.warning(warning)

        return QueryAst(
            kind=Select(distinct=distinct, projection=tuple(projection) if projection is not None else None),
            where=where,
            prefixes=dict(self.prefixes),
            order=order,
            limit=limit,
            offset=offset,
            warnings=tuple(warnings),
        )

    def construct_query(self) -> QueryAst:
        self.advance()
        if self.at_keyword("WHERE"):
            self.unsupported("CONSTRUCT WHERE")
        self.expect("LBRACE", "'{'")
        self.in_template = True
        template = self.triples_block(template=True)
        self.in_template = False
        self.expect("RBRACE", "'}'")

        self.check_unsupported_keyword()
        if self.at_keyword("WHERE"):
            self.advance()
        where = self.group()
        order, limit, offset = self.modifiers()
        return QueryAst(
            kind=Construct(template=tuple(template)),
            where=where,
            prefixes=dict(self.prefixes),
            order=order,
            limit=limit,
            offset=offset,
        )

    def ask_query(self) -> QueryAst:
        self.advance()
        self.check_unsupported_keyword()
        if self.at_keyword("WHERE"):
            self.advance()
        where = self.group()
        return QueryAst(kind=Ask(), where=where, prefixes=dict(self.prefixes))

    def modifiers(self) -> Tuple[Tuple[OrderCondition, ...], Optional[int], Optional[int]]:
        self.check_unsupported_keyword()
        order: List[OrderCondition] = []
        if self.at_keyword("ORDER"):
            self.advance()
            self.expect_keyword("BY")
            while True:
                if self.at("VAR"):
                    order.append(OrderCondition(Variable(self.advance().value), True))
                elif self.at_keyword("ASC", "DESC"):
                    ascending = self.advance().value.upper() == "ASC"
                    self.expect("LPAREN", "'('")
                    if not self.at("VAR"):
                        self.unsupported("ORDER BY expression")
                    order.append(OrderCondition(Variable(self.advance().value), ascending))
                    self.expect("RPAREN", "')'")
                elif self.at("LPAREN"):
                    self.unsupported("ORDER BY expression")
                else:
                    break
            if not order:
                self.fail("expected an order condition")

        limit = offset = None
        while self.at_keyword("LIMIT", "OFFSET"):
            word = self.advance().value.upper()
            value = int(self.expect("INTEGER", "non-negative integer").value)
            if word == "LIMIT":
                if limit is not None:
                    self.fail("duplicate LIMIT")
                limit = value
            else:
                if offset is not None:
                    self.fail("duplicate OFFSET")
                offset = value
        return tuple(order), limit, offset

    # graph patterns

    def group(self) -> GroupPattern:
        self.expect("LBRACE", "'{'")
        elements = []

        while not self.at("RBRACE"):
            tok = self.peek()
            if tok is None:
                self.fail("unterminated group, expected '}'")
            self.check_unsupported_keyword()

            if self.at_keyword("SELECT"):
                self.unsupported("subquery")
            elif self.at_keyword("FILTER"):
                self.advance()
                elements.append(Filter(self.constraint()))
            elif self.at_keyword("OPTIONAL"):
                self.advance()
                elements.append(OptionalGroup(self.group()))
            elif self.at_keyword("SERVICE"):
                elements.append(self.service())
            elif self.at_keyword("VALUES"):
                elements.append(self.values())
            elif self.at("LBRACE"):
                self.nested_group()
            elif self.at("DOT"):
                self.advance()
            elif tok.type in _TERM_START or (tok.type == "NAME" and tok.value.lower() in ("true", "false")):
                patterns = self.triples_block()
                if elements and isinstance(elements[-1], Triples):
                    elements[-1] = Triples(elements[-1].patterns + tuple(patterns))
                else:
                    elements.append(Triples(tuple(patterns)))
            else:
                self.fail("unexpected token in group pattern")

        self.advance()
        return GroupPattern(tuple(elements))

    def nested_group(self):
        start = self.peek()
        if self.peek(1) is not None and self.peek(1).type == "NAME" and self.peek(1).value.upper() == "SELECT":
            self.unsupported("subquery", self.peek(1))
        self.group()
        if self.at_keyword("UNION"):
            self.unsupported("UNION")
        self.unsupported("nested group", start)

    def service(self) -> Service:
        tok = self.advance()
        if self.in_service:
            raise QuerySyntaxError(tok.line, tok.col, "SERVICE may not be nested inside SERVICE")
        silent = False
        if self.at_keyword("SILENT"):
            self.advance()
            silent = True
        if self.at("VAR"):
            self.unsupported("SERVICE with variable endpoint")
        endpoint = self.iri()
        self.in_service = True
        try:
            body = self.group()
        finally:
            self.in_service = False
        return Service(endpoint=endpoint, silent=silent, body=body)

    def values(self) -> Values:
        self.advance()
        variables: List[Variable] = []
        single = False
        if self.at("VAR"):
            variables.append(Variable(self.advance().value))
            single = True
        else:
            self.expect("LPAREN", "variable or '('")
            while self.at("VAR"):
                variables.append(Variable(self.advance().value))
            self.expect("RPAREN", "')'")

        self.expect("LBRACE", "'{'")
        rows = []
        while not self.at("RBRACE"):
            if single:
                rows.append((self.data_value(),))
                continue
            open_tok = self.expect("LPAREN", "'('")
            row = []
            while not self.at("RPAREN"):
                row.append(self.data_value())
            self.advance()
            if len(row) != len(variables):
                raise QuerySyntaxError(
                    open_tok.line,
                    open_tok.col,
                    f"VALUES row has {len(row)} values for {len(variables)} variables",
                )
            rows.append(tuple(row))
        self.advance()
        return Values(vars=tuple(variables), rows=tuple(rows))

    def data_value(self):
        if self.at_keyword("UNDEF"):
            self.advance()
            return None
        term = self.term(allow_var=False)
        if isinstance(term, (Variable, BlankNode)):
            self.fail("VALUES data must be IRIs, literals or UNDEF")
        return term

    def triples_block(self, template: bool = False) -> List[TriplePattern]:
        patterns: List[TriplePattern] = []
        while True:
            tok = self.peek()
            if tok is None or not (
                tok.type in _TERM_START or (tok.type == "NAME" and tok.value.lower() in ("true", "false"))
            ):
                break
            subject = self.term()
            self.property_list(subject, patterns)
            if self.at("DOT"):
                self.advance()
                continue
            break
        if not patterns and not template:
            self.fail("expected triple pattern")
        return patterns

    def property_list(self, subject, patterns: List[TriplePattern]):
        while True:
            predicate = self.verb()
            while True:
                obj = self.term()
                patterns.append(TriplePattern(subject, predicate, obj))
                if self.at("COMMA"):
                    self.advance()
                    continue
                break
            if self.at("SEMI"):
                while self.at("SEMI"):
                    self.advance()
                if self.at("DOT") or self.at("RBRACE") or self.peek() is None:
                    return
                continue
            return

    def verb(self):
        tok = self.peek()
        if tok is None:
            self.fail("expected predicate")
        if tok.type in ("CARET", "BANG", "LPAREN"):
            self.unsupported("property path", tok)
        if tok.type == "NAME" and tok.value == "a":
            self.advance()
            predicate = Iri(RDF_TYPE)
        elif tok.type == "VAR":
            self.advance()
            predicate = Variable(tok.value)
        elif tok.type in ("IRIREF", "PNAME"):
            predicate = self.iri()
        else:
            self.fail("expected predicate")
        if self.peek() is not None and self.peek().type in _PATH_TOKENS:
            self.unsupported("property path")
        return predicate

    # terms

    def iri(self) -> Iri:
        tok = self.advance()
        if tok.type == "IRIREF":
            value = _unescape(tok.value)
        elif tok.type == "PNAME":
            prefix, _, local = tok.value.partition(":")
            if prefix not in self.prefixes:
                raise QuerySyntaxError(tok.line, tok.col, f"undeclared prefix {prefix!r}")
            value = self.prefixes[prefix] + local
        else:
            self.fail("expected IRI", tok)
        try:
            return Iri(value)
        except ValueError as e:
            raise QuerySyntaxError(tok.line, tok.col, str(e))

    def term(self, allow_var: bool = True):
        tok = self.peek()
        if tok is None:
            self.fail("expected term")

        if tok.type == "VAR":
            if not allow_var:
                self.fail("variable not allowed here")
            self.advance()
            return Variable(tok.value)
        if tok.type in ("IRIREF", "PNAME"):
            return self.iri()
        if tok.type == "BLANK_NODE_LABEL":
            self.advance()
            return self.blank(tok.value)
        if tok.type == "ANON":
            self.advance()
            self.anon_count += 1
            return self.blank(f"anon{self.anon_count}", fresh=True)
        if tok.type == "LBRACKET":
            self.unsupported("blank node property list", tok)
        if tok.type == "LPAREN":
            self.unsupported("collection", tok)
        if tok.type in ("STRING", "STRING_LONG"):
            return self.rdf_literal()
        if tok.type in ("PLUS", "MINUS"):
            self.advance()
            number = self.peek()
            if number is None or number.type not in ("INTEGER", "DECIMAL", "DOUBLE"):
                self.fail("expected number after sign")
            literal = self.numeric_literal()
            sign = "-" if tok.type == "MINUS" else ""
            return Literal(sign + literal.lexical, literal.datatype)
        if tok.type in ("INTEGER", "DECIMAL", "DOUBLE"):
            return self.numeric_literal()
        if tok.type == "NAME" and tok.value.lower() in ("true", "false"):
            self.advance()
            return Literal(tok.value.lower(), XSD_BOOLEAN)
        self.fail("expected term")

    def blank(self, label: str, fresh: bool = False):
        safe = label if label.isalnum() else "x" + label.encode("utf-8").hex()
        if self.in_template:
            return BlankNode(safe)
        if fresh or label not in self.blank_vars:
            self.blank_vars[label] = Variable(safe, anonymous=True)
        return self.blank_vars[label]

    def rdf_literal(self) -> Literal:
        tok = self.advance()
        lexical = _unescape(tok.value)
        if self.at("LANGTAG"):
            return Literal(lexical, language=self.advance().value)
        if self.at("DTYPE"):
            self.advance()
            datatype = self.iri()
            try:
                return Literal(lexical, datatype.value)
            except ValueError as e:
                raise QuerySyntaxError(tok.line, tok.col, str(e))
        return Literal(lexical, XSD_STRING)

    def numeric_literal(self) -> Literal:
        tok = self.advance()
        datatype = {"INTEGER": XSD_INTEGER, "DECIMAL": XSD_DECIMAL, "DOUBLE": XSD_DOUBLE}[tok.type]
        return Literal(tok.value, datatype)

    # expressions

    def constraint(self):
        if self.at("LPAREN"):
            self.advance()
            expr = self.expression()
            self.expect("RPAREN", "')'")
            return expr
        if self.at("NAME"):
            return self.function_call()
        self.fail("expected '(' or function call after FILTER")

    def expression(self):
        left = self.and_expression()
        while self.at("OR"):
            self.advance()
            left = Or(left, self.and_expression())
        return left

    def and_expression(self):
        left = self.relational_expression()
        while self.at("AND"):
            self.advance()
            left = And(left, self.relational_expression())
        return left

    def relational_expression(self):
        left = self.additive_expression()
        tok = self.peek()
        if tok is not None and tok.type in _COMPARE_TOKENS:
            self.advance()
            return Compare(_COMPARE_TOKENS[tok.type], left, self.additive_expression())
        if self.at_keyword("IN", "NOT"):
            self.unsupported("IN")
        return left

    def additive_expression(self):
        left = self.multiplicative_expression()
        while self.at("PLUS") or self.at("MINUS"):
            op = "+" if self.advance().type == "PLUS" else "-"
            left = Arith(op, left, self.multiplicative_expression())
        return left

    def multiplicative_expression(self):
        left = self.unary_expression()
        while self.at("STAR") or self.at("SLASH"):
            op = "*" if self.advance().type == "STAR" else "/"
            left = Arith(op, left, self.unary_expression())
        return left

    def unary_expression(self):
        if self.at("BANG"):
            self.advance()
            return Not(self.unary_expression())
        if self.at("PLUS"):
            self.advance()
            return self.unary_expression()
        if self.at("MINUS"):
            self.advance()
            operand = self.unary_expression()
            if isinstance(operand, Literal) and operand.datatype in (XSD_INTEGER, XSD_DECIMAL, XSD_DOUBLE):
                if operand.lexical.startswith("-"):
                    return Literal(operand.lexical[1:], operand.datatype)
                return Literal("-" + operand.lexical, operand.datatype)
            return Arith("-", Literal("0", XSD_INTEGER), operand)
        return self.primary_expression()

    def primary_expression(self):
        tok = self.peek()
        if tok is None:
            self.fail("expected expression")
        if tok.type == "LPAREN":
            self.advance()
            expr = self.expression()
            self.expect("RPAREN", "')'")
            return expr
        if tok.type == "NAME" and tok.value.lower() not in ("true", "false"):
            return self.function_call()
        if tok.type in ("IRIREF", "PNAME"):
            iri = self.iri()
            if self.at("LPAREN"):
                self.unsupported("extension function", tok)
            return iri
        term = self.term()
        if isinstance(term, Variable) and term.anonymous:
            self.fail("blank node not allowed in expression", tok)
        return term

    def function_call(self) -> FnCall:
        tok = self.advance()
        name = tok.value.upper()
        if name in ("NOT", "EXISTS"):
            self.unsupported("EXISTS", tok)
        if name in AGGREGATES:
            self.unsupported(name, tok)
        if name in OTHER_BUILTINS:
            self.unsupported(name, tok)
        if name not in FUNCTION_ARITY:
            raise QuerySyntaxError(tok.line, tok.col, f"unknown function {tok.value}")
        if name == "ISURI":
            name = "ISIRI"

        self.expect("LPAREN", "'('")
        args = []
        if not self.at("RPAREN"):
            args.append(self.expression())
            while self.at("COMMA"):
                self.advance()
                args.append(self.expression())
        self.expect("RPAREN", "')'")

        if len(args) != FUNCTION_ARITY[name]:
            raise QuerySyntaxError(
                tok.line, tok.col, f"{name} takes {FUNCTION_ARITY[name]} argument(s), got {len(args)}"
            )
        if name == "BOUND" and not isinstance(args[0], Variable):
            raise QuerySyntaxError(tok.line, tok.col, "BOUND takes a variable")
        return FnCall(name, tuple(args))


def parse_query(text: str) -> QueryAst:
    """
    Parse SPARQL query text into a QueryAst.

    Args:
        text: Query text

    Returns:
        QueryAst: Parsed query with every prefixed name expanded

    Raises:
        QuerySyntaxError: On malformed input
        UnsupportedFeature: On SPARQL 1.1 constructs outside the subset
    """
    return _Parser(text).parse()


def numeric_value(literal: Literal):
    """Decimal or float value of a numeric literal's lexical form."""
    if literal.datatype == XSD_DOUBLE:
        return float(literal.lexical)
    return Decimal(literal.lexical)
