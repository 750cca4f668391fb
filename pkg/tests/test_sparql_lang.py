"""
Unit tests for the SPARQL lexer, parser, serializer and results JSON.
"""

import json
import random

import pytest

from fedql.core.terms import BlankNode, Iri, Literal, RDF_TYPE, XSD_DECIMAL, XSD_INTEGER
from fedql.errors import MalformedResults, QuerySyntaxError, UnsupportedFeature
from fedql.sparql.ast import (
    And,
    Arith,
    Ask,
    Compare,
    Construct,
    FnCall,
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
)
from fedql.sparql.lexer import tokenize
from fedql.sparql.parser import parse_query
from fedql.sparql.results import SolutionSequence, parse_select_results, serialize_select_results
from fedql.sparql.serializer import serialize_query

EX = "http://ex.org/"
PREFIX = "PREFIX ex: <http://ex.org/>\n"


class TestLexer:
    """Test tokenization."""

    def test_token_kinds(self):
        types = [t.type for t in tokenize('SELECT ?x WHERE { ?x ex:p "a"@en , 1.5 . }')]
        assert types == [
            "NAME", "VAR", "NAME", "LBRACE", "VAR", "PNAME", "STRING", "LANGTAG", "COMMA", "DECIMAL", "DOT", "RBRACE",
        ]

    def test_positions(self):
        tokens = tokenize("SELECT *\nWHERE {\n  ?s ?p ?o }")
        var = next(t for t in tokens if t.type == "VAR")
        assert (var.line, var.col) == (3, 3)

    def test_iri_with_query_string(self):
        (tok,) = tokenize("<http://ex.org/srv/a/sparql?identifiers=X&species=1>")
        assert tok.type == "IRIREF"
        assert tok.value == "http://ex.org/srv/a/sparql?identifiers=X&species=1"

    def test_unspaced_comparisons_are_not_iris(self):
        types = [t.type for t in tokenize("?a<?b&&?b>?a ?a<3&&?b>1")]
        assert types == [
            "VAR", "LT", "VAR", "AND", "VAR", "GT", "VAR", "VAR", "LT", "INTEGER", "AND", "VAR", "GT", "INTEGER",
        ]

    def test_bad_character(self):
        with pytest.raises(QuerySyntaxError):
            tokenize("SELECT * WHERE { ?s ?p ?o } @@@ ~")


class TestParser:
    """Test parsing of the supported subset."""

    def test_select_star(self):
        ast = parse_query("SELECT * WHERE { ?s ?p ?o }")
        assert ast.kind == Select(distinct=False, projection=None)
        assert ast.where.elements == (
            Triples((TriplePattern(Variable("s"), Variable("p"), Variable("o")),)),
        )

    def test_prefixes_expand(self):
        ast = parse_query(PREFIX + "SELECT ?x WHERE { ?x a ex:Thing }")
        (pattern,) = ast.where.elements[0].patterns
        assert pattern.predicate == Iri(RDF_TYPE)
        assert pattern.object == Iri(EX + "Thing")
        assert ast.prefixes == {"ex": EX}

    def test_predicate_object_lists(self):
        ast = parse_query(PREFIX + "SELECT * { ?x ex:p 1, 2 ; ex:q ?y . }")
        assert len(ast.where.elements[0].patterns) == 3

    def test_blank_nodes_are_anonymous_variables(self):
        ast = parse_query(PREFIX + "SELECT * { _:b ex:p ?x . _:b ex:q [] }")
        patterns = ast.where.elements[0].patterns
        assert patterns[0].subject == patterns[1].subject
        assert patterns[0].subject.anonymous
        assert patterns[1].object.anonymous and patterns[1].object != patterns[0].subject

    def test_template_blank_nodes(self):
        ast = parse_query(PREFIX + "CONSTRUCT { _:n ex:p ?x } WHERE { ?x ex:q ?y }")
        assert ast.kind.template[0].subject == BlankNode("n")

    def test_negative_numbers_fold(self):
        ast = parse_query(PREFIX + "SELECT * { ?x ex:p -5 . FILTER(?x > -2.5) }")
        assert ast.where.elements[0].patterns[0].object == Literal("-5", XSD_INTEGER)
        assert ast.where.elements[1].expression.right == Literal("-2.5", XSD_DECIMAL)

    def test_filter_precedence(self):
        ast = parse_query("SELECT * { ?x ?p ?y FILTER(?a || ?b && !?c) }")
        expr = ast.where.elements[1].expression
        assert isinstance(expr, Or)
        assert isinstance(expr.right, And)
        assert isinstance(expr.right.right, Not)

    def test_unspaced_comparison_filter(self):
        ast = parse_query("SELECT * WHERE { ?a <http://ex.org/p> ?b FILTER(?a<?b&&?b>?a) }")
        expr = ast.where.elements[1].expression
        assert isinstance(expr, And)
        assert isinstance(expr.left, Compare) and expr.left.op == "<"
        assert isinstance(expr.right, Compare) and expr.right.op == ">"
        assert expr.left.right == Variable("b")

    def test_arithmetic_precedence(self):
        expr = parse_query("SELECT * { ?x ?p ?y FILTER(?a + ?b * 2 = 7) }").where.elements[1].expression
        assert isinstance(expr, Compare) and expr.op == "="
        assert isinstance(expr.left, Arith) and expr.left.op == "+"
        assert expr.left.right.op == "*"

    def test_functions(self):
        expr = parse_query('SELECT * { ?x ?p ?y FILTER(isURI(?x) && REGEX(STR(?y), "^a")) }').where.elements[1].expression
        assert expr.left == FnCall("ISIRI", (Variable("x"),))
        assert expr.right.name == "REGEX"

    def test_optional_service_values(self):
        ast = parse_query(
            PREFIX
            + """
            SELECT ?x ?y WHERE {
              VALUES (?x ?z) { (ex:a UNDEF) (ex:b 3) }
              OPTIONAL { ?x ex:p ?y }
              SERVICE SILENT <http://remote.org/sparql> { ?y ex:q ?w }
            }
            ORDER BY DESC(?y) ?x LIMIT 5 OFFSET 2
            """
        )
        values, optional, service = ast.where.elements
        assert values.rows == ((Iri(EX + "a"), None), (Iri(EX + "b"), Literal("3", XSD_INTEGER)))
        assert isinstance(optional, OptionalGroup)
        assert service.silent and service.endpoint == Iri("http://remote.org/sparql")
        assert ast.order == (OrderCondition(Variable("y"), False), OrderCondition(Variable("x"), True))
        assert (ast.limit, ast.offset) == (5, 2)

    def test_single_variable_values(self):
        ast = parse_query('SELECT * { VALUES ?l { "a" "b" } }')
        assert ast.where.elements[0] == Values((Variable("l"),), ((Literal("a"),), (Literal("b"),)))

    def test_ask(self):
        assert isinstance(parse_query("ASK { ?s ?p ?o }").kind, Ask)

    def test_projection_warning(self):
        ast = parse_query("SELECT ?nowhere WHERE { ?s ?p ?o }")
        assert ast.warnings and "nowhere" in ast.warnings[0]

    @pytest.mark.parametrize(
        "query, keyword",
        [
            ("SELECT * { { ?s ?p ?o } UNION { ?s ?p ?x } }", "UNION"),
            ("SELECT * { GRAPH ?g { ?s ?p ?o } }", "GRAPH"),
            ("SELECT * { ?s ?p ?o BIND(1 AS ?x) }", "BIND"),
            ("SELECT * { ?s ?p ?o MINUS { ?s ?p 1 } }", "MINUS"),
            ("SELECT (COUNT(?s) AS ?n) { ?s ?p ?o }", "COUNT"),
            ("SELECT * FROM <http://g> { ?s ?p ?o }", "FROM"),
            ("DESCRIBE <http://x>", "DESCRIBE"),
            ("SELECT * { ?s ?p ?o } GROUP BY ?s", "GROUP"),
            ("SELECT * { ?s <http://p>/<http://q> ?o }", "property path"),
            ("SELECT * { ?s ?p ?o FILTER(STRLEN(?o) > 1) }", "STRLEN"),
            ("SELECT * { SERVICE ?e { ?s ?p ?o } }", "SERVICE with variable endpoint"),
            ("SELECT * { ?s ?p [ <http://p> 1 ] }", "blank node property list"),
            ("SELECT * { { ?s ?p ?o } }", "nested group"),
            ("BASE <http://x/> SELECT * { ?s ?p ?o }", "BASE"),
        ],
    )
    def test_unsupported(self, query, keyword):
        with pytest.raises(UnsupportedFeature) as info:
            parse_query(query)
        assert info.value.keyword == keyword

    @pytest.mark.parametrize(
        "query",
        [
            "SELECT * WHERE { ?s ?p }",
            "SELECT WHERE { ?s ?p ?o }",
            "SELECT * WHERE { ?s ?p ?o ",
            "SELECT * WHERE { ?s undeclared:p ?o }",
            "SELECT * WHERE { VALUES (?a ?b) { (1) } }",
            "SELECT * WHERE { ?s ?p ?o FILTER(BOUND(1)) }",
            "SELECT * WHERE { ?s ?p ?o FILTER(REGEX(?o)) }",
            "SELECT * WHERE { SERVICE <http://a> { SERVICE <http://b> { ?s ?p ?o } } }",
            "SELECT * WHERE { ?s ?p ?o } LIMIT ?x",
        ],
    )
    def test_syntax_errors(self, query):
        with pytest.raises(QuerySyntaxError):
            parse_query(query)

    def test_error_position(self):
        with pytest.raises(QuerySyntaxError) as info:
            parse_query("SELECT *\nWHERE {\n  ?s ?p ?o .\n  ?s ?p\n}")
        assert info.value.line == 5
        assert info.value.to_dict()["line"] == 5


# AST generation for the parse/serialize identity


def _var(rng):
    return Variable(rng.choice("abcdef"))


def _constant(rng):
    return rng.choice(
        [
            Iri(EX + rng.choice(["p", "q", "r", "s"])),
            Literal(rng.choice(["x", "hello world", 'say "hi"', "é"])),
            Literal(str(rng.randint(-50, 50)), XSD_INTEGER),
            Literal("1.25", XSD_DECIMAL),
            Literal("chat", language="fr"),
        ]
    )


def _term(rng):
    return _var(rng) if rng.random() < 0.6 else _constant(rng)


def _pattern(rng):
    predicate = _var(rng) if rng.random() < 0.2 else Iri(EX + rng.choice(["p", "q", "r"]))
    subject = _var(rng) if rng.random() < 0.8 else Iri(EX + "s")
    return TriplePattern(subject, predicate, _term(rng))


def _expression(rng, depth=0):
    if depth > 2 or rng.random() < 0.3:
        choice = rng.randrange(4)
        if choice == 0:
            return Compare(rng.choice(["=", "!=", "<", "<=", ">", ">="]), _var(rng), _constant(rng))
        if choice == 1:
            return FnCall("BOUND", (_var(rng),))
        if choice == 2:
            return FnCall("REGEX", (FnCall("STR", (_var(rng),)), Literal("^a")))
        return Compare(">", Arith(rng.choice("+-*/"), _var(rng), Literal("2", XSD_INTEGER)), _var(rng))
    kind = rng.randrange(3)
    if kind == 0:
        return And(_expression(rng, depth + 1), _expression(rng, depth + 1))
    if kind == 1:
        return Or(_expression(rng, depth + 1), _expression(rng, depth + 1))
    return Not(_expression(rng, depth + 1))


def _group(rng, depth=0, in_service=False):
    elements = []
    for _ in range(rng.randint(1, 4)):
        kind = rng.randrange(5)
        if kind == 0 or not elements:
            if elements and isinstance(elements[-1], Triples):
                continue
            elements.append(Triples(tuple(_pattern(rng) for _ in range(rng.randint(1, 3)))))
        elif kind == 1:
            elements.append(Filter(_expression(rng)))
        elif kind == 2 and depth < 2:
            elements.append(OptionalGroup(_group(rng, depth + 1, in_service)))
        elif kind == 3 and not in_service and depth < 2:
            elements.append(Service(Iri("http://remote.org/sparql"), rng.random() < 0.5, _group(rng, depth + 1, True)))
        elif kind == 4:
            names = rng.sample("abcdef", rng.randint(1, 2))
            rows = tuple(
                tuple(None if rng.random() < 0.2 else _constant(rng) for _ in names) for _ in range(rng.randint(0, 3))
            )
            elements.append(Values(tuple(Variable(n) for n in names), rows))
    return GroupPattern(tuple(elements))


def random_query(seed: int) -> QueryAst:
    rng = random.Random(seed)
    where = _group(rng)
    form = rng.randrange(3)
    if form == 0:
        projection = None if rng.random() < 0.3 else tuple(Variable(n) for n in rng.sample("abcdef", 2))
        kind = Select(distinct=rng.random() < 0.3, projection=projection)
    elif form == 1:
        kind = Construct(template=tuple(_pattern(rng) for _ in range(rng.randint(1, 3))))
    else:
        return QueryAst(kind=Ask(), where=where)
    order = tuple(OrderCondition(_var(rng), rng.random() < 0.5) for _ in range(rng.randint(0, 2)))
    return QueryAst(
        kind=kind,
        where=where,
        prefixes={"ex": EX} if rng.random() < 0.5 else {},
        order=order,
        limit=rng.choice([None, 0, 10]),
        offset=rng.choice([None, 3]),
    )


class TestSerializer:
    """Test query serialization."""

    @pytest.mark.parametrize("seed", range(100))
    def test_parse_serialize_identity(self, seed):
        ast = random_query(seed)
        assert parse_query(serialize_query(ast)) == ast

    def test_values_always_multi_form(self):
        text = serialize_query(parse_query('SELECT * { VALUES ?l { "a" } }'))
        assert 'VALUES (?l) {' in text
        assert '("a")' in text

    def test_text_is_stable(self):
        text = serialize_query(parse_query(PREFIX + "SELECT ?x { ?x ex:p ?y FILTER(?y > 3) } ORDER BY ?x"))
        assert serialize_query(parse_query(text)) == text


def random_solutions(seed: int) -> SolutionSequence:
    rng = random.Random(seed)
    names = rng.sample(["a", "b", "c", "d"], rng.randint(1, 4))
    pool = [
        Iri(EX + "x"),
        BlankNode("b1"),
        BlankNode("n7"),
        Literal("plain"),
        Literal("quote \" and \\ slash\n"),
        Literal("5", XSD_INTEGER),
        Literal("hej", language="sv"),
    ]
    rows = [
        {name: rng.choice(pool) for name in names if rng.random() < 0.8}
        for _ in range(rng.randint(0, 6))
    ]
    return SolutionSequence(names, rows)


class TestResultsJson:
    """Test the SPARQL results JSON wire format."""

    @pytest.mark.parametrize("seed", range(30))
    def test_serialize_parse_identity(self, seed):
        solutions = random_solutions(seed)
        parsed = parse_select_results(serialize_select_results(solutions))
        assert parsed.vars == solutions.vars
        assert parsed.rows == solutions.rows

    def test_unbound_is_absent(self):
        doc = json.loads(serialize_select_results(SolutionSequence(["a", "b"], [{"a": Literal("1")}])))
        assert doc["results"]["bindings"] == [{"a": {"type": "literal", "value": "1"}}]

    def test_ask_form(self):
        text = serialize_select_results(SolutionSequence([], [{}], boolean=True))
        assert json.loads(text) == {"head": {}, "boolean": True}
        assert parse_select_results(text).boolean is True

    def test_scope_relabels_blank_nodes(self):
        text = serialize_select_results(SolutionSequence(["a"], [{"a": BlankNode("b1")}]))
        assert parse_select_results(text, scope="r0n").rows[0]["a"] == BlankNode("r0nb1")

    @pytest.mark.parametrize(
        "text",
        [
            "not json",
            "{}",
            '{"head": {"vars": ["a"]}}',
            '{"head": {"vars": ["a"]}, "results": {"bindings": [{"z": {"type": "uri", "value": "http://x"}}]}}',
            '{"head": {"vars": ["a"]}, "results": {"bindings": [{"a": {"type": "weird", "value": "x"}}]}}',
        ],
    )
    def test_malformed(self, text):
        with pytest.raises(MalformedResults):
            parse_select_results(text)
