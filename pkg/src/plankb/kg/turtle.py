"""Turtle subset: @prefix declarations, prefixed names, plain and typed
literals, one triple per statement.  No blank nodes or collections."""

from __future__ import annotations

import re

from .schema import PLAN_NS, RDF_NS, XSD_NS, XSD_STRING
from .store import Graph, Iri, Node, Triple, TypedLiteral

DEFAULT_PREFIXES = {
    "plan": PLAN_NS,
    "rdf": RDF_NS,
    "xsd": XSD_NS,
}

_SAFE_LOCAL = re.compile(r"^[A-Za-z_][A-Za-z0-9_.-]*$")


class TurtleSyntaxError(Exception):
    def __init__(self, message: str, line: int, column: int):
        super().__init__("{}:{}: {}".format(line, column, message))
        self.line = line
        self.column = column


def _escape(text: str) -> str:
    return (
        text.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )


def _unescape(text: str) -> str:
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if c == "\\" and i + 1 < len(text):
            nxt = text[i + 1]
            out.append({"n": "\n", "r": "\r", "t": "\t", '"': '"', "\\": "\\"}.get(nxt, nxt))
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def _format_iri(iri: Iri, prefixes: dict[str, str]) -> str:
    for prefix, ns in prefixes.items():
        if iri.value.startswith(ns):
            local = iri.value[len(ns):]
            if _SAFE_LOCAL.match(local):
                return "{}:{}".format(prefix, local)
    return "<{}>".format(iri.value)


def _format_term(term: Node, prefixes: dict[str, str]) -> str:
    if isinstance(term, Iri):
        return _format_iri(term, prefixes)
    if term.datatype == XSD_STRING:
        return '"{}"'.format(_escape(term.lexical))
    return '"{}"^^{}'.format(_escape(term.lexical), _format_iri(term.datatype, prefixes))


def export_turtle(g: Graph, prefixes: dict[str, str] | None = None) -> str:
    prefixes = prefixes or DEFAULT_PREFIXES
    lines = [
        "@prefix {}: <{}> .".format(p, ns) for p, ns in sorted(prefixes.items())
    ]
    lines.append("")
    for t in sorted(g.triples(), key=Triple.key):
        lines.append(
            "{} {} {} .".format(
                _format_iri(t.subject, prefixes),
                _format_iri(t.predicate, prefixes),
                _format_term(t.object, prefixes),
            )
        )
    return "\n".join(lines) + "\n"


# --- parsing ---------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<iriref><[^<>"{}|^`\\\s]*>)
  | (?P<literal>"(?:[^"\\\n]|\\.)*")
  | (?P<dcaret>\^\^)
  | (?P<dot>\.(?=\s|$))
  | (?P<prefixdecl>@prefix)
  | (?P<pname>[A-Za-z_][A-Za-z0-9_.-]*?:[A-Za-z_][A-Za-z0-9_.-]*|[A-Za-z_][A-Za-z0-9_.-]*:)
  | (?P<kw_a>a(?=\s))
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise TurtleSyntaxError(
                "unexpected character '{}'".format(text[pos]), line, col
            )
        kind = m.lastgroup
        value = m.group()
        if kind == "newline":
            line += 1
            col = 1
        else:
            if kind not in ("ws", "comment"):
                yield kind, value, line, col
            col += len(value)
        pos = m.end()
    yield "eof", "", line, col


def _resolve_pname(pname: str, prefixes: dict[str, str], line: int, col: int) -> Iri:
    prefix, _, local = pname.partition(":")
    if prefix not in prefixes:
        raise TurtleSyntaxError("undeclared prefix '{}'".format(prefix), line, col)
    return Iri(prefixes[prefix] + local)


def import_turtle(text: str) -> Graph:
    g = Graph()
    prefixes: dict[str, str] = {}
    tokens = list(_tokenize(text))
    i = 0

    def term_at(j: int) -> tuple[Node, int]:
        kind, value, line, col = tokens[j]
        if kind == "iriref":
            return Iri(value[1:-1]), j + 1
        if kind == "pname":
            return _resolve_pname(value, prefixes, line, col), j + 1
        if kind == "kw_a":
            return Iri(RDF_NS + "type"), j + 1
        if kind == "literal":
            lexical = _unescape(value[1:-1])
            if j + 1 < len(tokens) and tokens[j + 1][0] == "dcaret":
                dt_kind, dt_value, dt_line, dt_col = tokens[j + 2]
                if dt_kind == "iriref":
                    dt = Iri(dt_value[1:-1])
                elif dt_kind == "pname":
                    dt = _resolve_pname(dt_value, prefixes, dt_line, dt_col)
                else:
                    raise TurtleSyntaxError("expected datatype IRI", dt_line, dt_col)
                return TypedLiteral(lexical, dt), j + 3
            return TypedLiteral(lexical, XSD_STRING), j + 1
        raise TurtleSyntaxError("expected an IRI or literal", line, col)

    while tokens[i][0] != "eof":
        kind, value, line, col = tokens[i]
        if kind == "prefixdecl":
            if tokens[i + 1][0] != "pname" or tokens[i + 2][0] != "iriref":
                raise TurtleSyntaxError("malformed @prefix declaration", line, col)
            prefix = tokens[i + 1][1].rstrip(":")
            prefixes[prefix] = tokens[i + 2][1][1:-1]
            if tokens[i + 3][0] != "dot":
                raise TurtleSyntaxError("expected '.' after @prefix", line, col)
            i += 4
            continue
        subject, i = term_at(i)
        if not isinstance(subject, Iri):
            raise TurtleSyntaxError("subject must be an IRI", line, col)
        predicate, i = term_at(i)
        if not isinstance(predicate, Iri):
            raise TurtleSyntaxError("predicate must be an IRI", line, col)
        obj, i = term_at(i)
        kind, _, line, col = tokens[i]
        if kind != "dot":
            raise TurtleSyntaxError("expected '.' after triple", line, col)
        i += 1
        g.add(Triple(subject, predicate, obj))
    return g
