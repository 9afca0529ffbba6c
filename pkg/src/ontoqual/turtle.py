"""Turtle parser and serializer for the OWL subset the rule engine needs.

Supported syntax: @prefix/@base and SPARQL-style PREFIX/BASE, prefixed
names, IRI refs with \\u/\\U escapes, the `a` keyword, predicate-object
lists (`;`), object lists (`,`), blank-node property lists (`[...]`),
collections (`(...)`), quoted and triple-quoted string literals with
`@lang` and `^^datatype`, numeric and boolean shorthand, `#` comments.
Not supported: RDF-star, reification shorthand, full IRIREF escape set.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .rdf import (
    RDF_FIRST,
    RDF_NIL,
    RDF_REST,
    RDF_TYPE,
    WELL_KNOWN_PREFIXES,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    BlankNode,
    Iri,
    Literal,
    RdfGraph,
    Term,
    Triple,
    term_sort_key,
)


class TurtleSyntaxError(Exception):
    """Parse failure with a 1-based source position."""

    def __init__(self, message: str, line: int, column: int, token: str = "") -> None:
        super().__init__(f"{message} at line {line}, column {column}" + (f" (near {token!r})" if token else ""))
        self.line = line
        self.column = column
        self.token = token


class UnresolvedPrefixError(TurtleSyntaxError):
    def __init__(self, prefix: str, line: int, column: int) -> None:
        super().__init__(f"undeclared prefix '{prefix}:'", line, column, prefix)
        self.prefix = prefix


@dataclass
class _Token:
    kind: str  # IRIREF PNAME BLANK STRING NUMBER PUNCT KEYWORD ANON EOF
    text: str
    line: int
    column: int


_LONG_STRING_RE = re.compile(r'"""((?:[^"\\]|\\.|"(?!""")|""(?!"))*)"""', re.S)
_STRING_RE = re.compile(r'"((?:[^"\\\n]|\\.)*)"')
_LONG_SQ_RE = re.compile(r"'''((?:[^'\\]|\\.|'(?!'')|''(?!'))*)'''", re.S)
_SQ_RE = re.compile(r"'((?:[^'\\\n]|\\.)*)'")
_IRIREF_RE = re.compile(r"<([^<>\"{}|^`\\\x00-\x20]*)>")
_NUMBER_RE = re.compile(r"[+-]?(?:\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)")
_PNAME_RE = re.compile(r"(?:[A-Za-z_][\w.\-]*)?:(?:[A-Za-z0-9_:%\-.]*[A-Za-z0-9_:%\-])?")
_BLANK_RE = re.compile(r"_:[A-Za-z0-9_][\w.\-]*")
_LANGTAG_RE = re.compile(r"@[A-Za-z]+(?:-[A-Za-z0-9]+)*")
_BARE_RE = re.compile(r"[A-Za-z][\w\-]*")

_ESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


def _unescape(raw: str, line: int, col: int) -> str:
    out = []
    i = 0
    while i < len(raw):
        c = raw[i]
        if c != "\\":
            out.append(c)
            i += 1
            continue
        if i + 1 >= len(raw):
            raise TurtleSyntaxError("dangling escape", line, col)
        e = raw[i + 1]
        if e in _ESCAPES:
            out.append(_ESCAPES[e])
            i += 2
        elif e == "u":
            out.append(chr(int(raw[i + 2 : i + 6], 16)))
            i += 6
        elif e == "U":
            out.append(chr(int(raw[i + 2 : i + 10], 16)))
            i += 10
        else:
            raise TurtleSyntaxError(f"bad escape \\{e}", line, col)
    return "".join(out)


class _Lexer:
    def __init__(self, source: str) -> None:
        self.src = source
        self.pos = 0
        self.line = 1
        self.col = 1

    def _advance(self, text: str) -> None:
        nl = text.count("\n")
        if nl:
            self.line += nl
            self.col = len(text) - text.rfind("\n")
        else:
            self.col += len(text)
        self.pos += len(text)

    def _skip_ws(self) -> None:
        while self.pos < len(self.src):
            c = self.src[self.pos]
            if c in " \t\r\n":
                self._advance(c)
            elif c == "#":
                end = self.src.find("\n", self.pos)
                if end == -1:
                    end = len(self.src)
                self._advance(self.src[self.pos : end])
            else:
                return

    def next(self) -> _Token:
        self._skip_ws()
        line, col = self.line, self.col
        if self.pos >= len(self.src):
            return _Token("EOF", "", line, col)
        src, pos = self.src, self.pos

        if src.startswith("[", pos):
            # ANON blank node `[]` vs property list opener
            m = re.match(r"\[\s*\]", src[pos:])
            if m:
                self._advance(m.group(0))
                return _Token("ANON", "[]", line, col)
        for punct in ("^^", ".", ";", ",", "[", "]", "(", ")"):
            if src.startswith(punct, pos):
                # Avoid eating the decimal point of a number: "." followed by digit
                if punct == "." and pos + 1 < len(src) and src[pos + 1].isdigit():
                    break
                self._advance(punct)
                return _Token("PUNCT", punct, line, col)
        if src.startswith("<", pos):
            m = _IRIREF_RE.match(src, pos)
            if not m:
                raise TurtleSyntaxError("malformed IRI reference", line, col, src[pos : pos + 20])
            self._advance(m.group(0))
            return _Token("IRIREF", _unescape(m.group(1), line, col), line, col)
        if src.startswith('"""', pos) or src.startswith('"', pos) or src.startswith("'", pos):
            for regex in (_LONG_STRING_RE, _LONG_SQ_RE, _STRING_RE, _SQ_RE):
                m = regex.match(src, pos)
                if m:
                    self._advance(m.group(0))
                    return _Token("STRING", _unescape(m.group(1), line, col), line, col)
            raise TurtleSyntaxError("unterminated string literal", line, col)
        if src.startswith("@", pos):
            m = _LANGTAG_RE.match(src, pos)
            if not m:
                raise TurtleSyntaxError("malformed @ directive or language tag", line, col)
            self._advance(m.group(0))
            return _Token("LANGTAG", m.group(0)[1:], line, col)
        m = _BLANK_RE.match(src, pos)
        if m:
            self._advance(m.group(0))
            return _Token("BLANK", m.group(0)[2:], line, col)
        m = _NUMBER_RE.match(src, pos)
        if m and (src[pos].isdigit() or src[pos] in "+-." ):
            # Guard: pname locals may start with a digit only after a colon,
            # so a leading digit here is always a number.
            self._advance(m.group(0))
            return _Token("NUMBER", m.group(0), line, col)
        m = _PNAME_RE.match(src, pos)
        if m and ":" in m.group(0):
            self._advance(m.group(0))
            return _Token("PNAME", m.group(0), line, col)
        m = _BARE_RE.match(src, pos)
        if m:
            self._advance(m.group(0))
            return _Token("KEYWORD", m.group(0), line, col)
        raise TurtleSyntaxError("unexpected character", line, col, src[pos])


class _Parser:
    def __init__(self, source: str, base: Optional[Iri] = None) -> None:
        self.lexer = _Lexer(source)
        self.prefixes: dict[str, str] = dict(WELL_KNOWN_PREFIXES)
        self.declared_prefixes: dict[str, str] = {}
        self.base = base
        self.triples: list[Triple] = []
        self._bnode_counter = 0
        self._tok = self.lexer.next()

    def _next(self) -> _Token:
        tok = self._tok
        self._tok = self.lexer.next()
        return tok

    def _expect_punct(self, text: str) -> None:
        tok = self._next()
        if tok.kind != "PUNCT" or tok.text != text:
            raise TurtleSyntaxError(f"expected {text!r}", tok.line, tok.column, tok.text)

    def _fresh_bnode(self) -> BlankNode:
        self._bnode_counter += 1
        return BlankNode(f"genid{self._bnode_counter}")

    def _resolve_iri(self, ref: str, tok: _Token) -> Iri:
        if ":" not in ref and self.base is not None:
            base = self.base.value
            if ref.startswith("#") or not ref:
                ref = base.split("#")[0] + ref
            else:
                ref = base.rstrip("#/") + "/" + ref
        try:
            return Iri(ref)
        except ValueError:
            raise TurtleSyntaxError(f"invalid IRI {ref!r} (no base declared?)", tok.line, tok.column, ref)

    def _resolve_pname(self, pname: str, tok: _Token) -> Iri:
        prefix, _, local = pname.partition(":")
        ns = self.prefixes.get(prefix)
        if ns is None:
            raise UnresolvedPrefixError(prefix, tok.line, tok.column)
        return Iri(ns + local)

    def parse(self) -> RdfGraph:
        while self._tok.kind != "EOF":
            tok = self._tok
            if tok.kind == "LANGTAG" and tok.text in ("prefix", "base"):
                self._next()
                self._directive(tok.text, sparql_style=False)
            elif tok.kind == "KEYWORD" and tok.text.lower() in ("prefix", "base"):
                self._next()
                self._directive(tok.text.lower(), sparql_style=True)
            else:
                self._statement()
        return RdfGraph(self.triples, prefixes=self.declared_prefixes, base=self.base)

    def _directive(self, which: str, sparql_style: bool) -> None:
        if which == "prefix":
            tok = self._next()
            if tok.kind != "PNAME" or not tok.text.endswith(":"):
                raise TurtleSyntaxError("expected prefix name ending in ':'", tok.line, tok.column, tok.text)
            prefix = tok.text[:-1]
            iri_tok = self._next()
            if iri_tok.kind != "IRIREF":
                raise TurtleSyntaxError("expected IRI in prefix declaration", iri_tok.line, iri_tok.column, iri_tok.text)
            self.prefixes[prefix] = iri_tok.text
            self.declared_prefixes[prefix] = iri_tok.text
        else:
            iri_tok = self._next()
            if iri_tok.kind != "IRIREF":
                raise TurtleSyntaxError("expected IRI in base declaration", iri_tok.line, iri_tok.column, iri_tok.text)
            self.base = Iri(iri_tok.text)
        if not sparql_style:
            self._expect_punct(".")

    def _statement(self) -> None:
        subject = self._subject()
        self._predicate_object_list(subject)
        self._expect_punct(".")

    def _subject(self):
        tok = self._tok
        if tok.kind == "IRIREF":
            self._next()
            return self._resolve_iri(tok.text, tok)
        if tok.kind == "PNAME":
            self._next()
            return self._resolve_pname(tok.text, tok)
        if tok.kind == "BLANK":
            self._next()
            return BlankNode(tok.text)
        if tok.kind == "ANON":
            self._next()
            return self._fresh_bnode()
        if tok.kind == "PUNCT" and tok.text == "[":
            return self._bnode_property_list()
        if tok.kind == "PUNCT" and tok.text == "(":
            return self._collection()
        raise TurtleSyntaxError("expected subject", tok.line, tok.column, tok.text)

    def _predicate(self) -> Iri:
        tok = self._tok
        if tok.kind == "KEYWORD" and tok.text == "a":
            self._next()
            return RDF_TYPE
        if tok.kind == "IRIREF":
            self._next()
            return self._resolve_iri(tok.text, tok)
        if tok.kind == "PNAME":
            self._next()
            return self._resolve_pname(tok.text, tok)
        raise TurtleSyntaxError("expected predicate", tok.line, tok.column, tok.text)

    def _predicate_object_list(self, subject) -> None:
        while True:
            predicate = self._predicate()
            while True:
                obj = self._object()
                self.triples.append(Triple(subject, predicate, obj))
                if self._tok.kind == "PUNCT" and self._tok.text == ",":
                    self._next()
                    continue
                break
            if self._tok.kind == "PUNCT" and self._tok.text == ";":
                self._next()
                # trailing ';' before '.' or ']' is legal
                if self._tok.kind == "PUNCT" and self._tok.text in (".", "]"):
                    return
                continue
            return

    def _object(self) -> Term:
        tok = self._tok
        if tok.kind == "IRIREF":
            self._next()
            return self._resolve_iri(tok.text, tok)
        if tok.kind == "PNAME":
            self._next()
            return self._resolve_pname(tok.text, tok)
        if tok.kind == "BLANK":
            self._next()
            return BlankNode(tok.text)
        if tok.kind == "ANON":
            self._next()
            return self._fresh_bnode()
        if tok.kind == "PUNCT" and tok.text == "[":
            return self._bnode_property_list()
        if tok.kind == "PUNCT" and tok.text == "(":
            return self._collection()
        if tok.kind == "STRING":
            self._next()
            return self._literal_tail(tok.text)
        if tok.kind == "NUMBER":
            self._next()
            text = tok.text
            if "e" in text.lower():
                return Literal(text, datatype=XSD_DOUBLE)
            if "." in text:
                return Literal(text, datatype=XSD_DECIMAL)
            return Literal(text, datatype=XSD_INTEGER)
        if tok.kind == "KEYWORD" and tok.text in ("true", "false"):
            self._next()
            return Literal(tok.text, datatype=XSD_BOOLEAN)
        raise TurtleSyntaxError("expected object", tok.line, tok.column, tok.text)

    def _literal_tail(self, lexical: str) -> Literal:
        tok = self._tok
        if tok.kind == "LANGTAG":
            self._next()
            return Literal(lexical, lang=tok.text)
        if tok.kind == "PUNCT" and tok.text == "^^":
            self._next()
            dt_tok = self._next()
            if dt_tok.kind == "IRIREF":
                return Literal(lexical, datatype=self._resolve_iri(dt_tok.text, dt_tok))
            if dt_tok.kind == "PNAME":
                return Literal(lexical, datatype=self._resolve_pname(dt_tok.text, dt_tok))
            raise TurtleSyntaxError("expected datatype IRI", dt_tok.line, dt_tok.column, dt_tok.text)
        return Literal(lexical)

    def _bnode_property_list(self) -> BlankNode:
        self._expect_punct("[")
        node = self._fresh_bnode()
        self._predicate_object_list(node)
        self._expect_punct("]")
        return node

    def _collection(self) -> Term:
        self._expect_punct("(")
        items: list[Term] = []
        while not (self._tok.kind == "PUNCT" and self._tok.text == ")"):
            if self._tok.kind == "EOF":
                raise TurtleSyntaxError("unterminated collection", self._tok.line, self._tok.column)
            items.append(self._object())
        self._next()  # ')'
        head: Term = RDF_NIL
        for item in reversed(items):
            node = self._fresh_bnode()
            self.triples.append(Triple(node, RDF_FIRST, item))
            self.triples.append(Triple(node, RDF_REST, head))
            head = node
        return head


def parse_turtle(source: str, base: Optional[Iri] = None) -> RdfGraph:
    """Parse a Turtle document into an :class:`RdfGraph`.

    Raises :class:`TurtleSyntaxError` (with 1-based line/column) on
    malformed input, :class:`UnresolvedPrefixError` on undeclared
    prefixes. The well-known rdf/rdfs/owl/xsd prefixes are built in.
    """
    return _Parser(source, base=base).parse()


def _escape_literal(s: str) -> str:
    return (
        s.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )


def _canonical_bnode_labels(graph: RdfGraph) -> dict[str, str]:
    mapping: dict[str, str] = {}
    for t in graph:
        for term in (t.subject, t.object):
            if isinstance(term, BlankNode) and term.label not in mapping:
                mapping[term.label] = f"b{len(mapping)}"
    return mapping


def serialize_turtle(graph: RdfGraph) -> str:
    """Deterministic Turtle: prefix table, then one line per triple,
    sorted by (subject, predicate, object). Blank nodes are relabeled
    canonically in document order, so serialize → parse is isomorphic
    (and equal for ground graphs).
    """
    prefixes = dict(WELL_KNOWN_PREFIXES)
    prefixes.update(graph.prefixes)
    bnode_map = _canonical_bnode_labels(graph)

    def fmt_iri(iri: Iri) -> str:
        best_prefix, best_ns = None, ""
        for prefix, ns in prefixes.items():
            if iri.value.startswith(ns) and len(ns) > len(best_ns):
                local = iri.value[len(ns) :]
                if re.fullmatch(r"[A-Za-z0-9_\-.]*", local) and not local.startswith("."):
                    best_prefix, best_ns = prefix, ns
        if best_prefix is not None:
            return f"{best_prefix}:{iri.value[len(best_ns):]}"
        return f"<{iri.value}>"

    def fmt(term: Term) -> str:
        if isinstance(term, Iri):
            return fmt_iri(term)
        if isinstance(term, BlankNode):
            return f"_:{bnode_map[term.label]}"
        lit = f'"{_escape_literal(term.lexical)}"'
        if term.lang:
            return f"{lit}@{term.lang}"
        if term.datatype:
            return f"{lit}^^{fmt_iri(term.datatype)}"
        return lit

    lines = []
    for prefix in sorted(graph.prefixes):
        lines.append(f"@prefix {prefix}: <{graph.prefixes[prefix]}> .")
    if lines:
        lines.append("")
    for t in sorted(graph, key=Triple.sort_key):
        lines.append(f"{fmt(t.subject)} {fmt(t.predicate)} {fmt(t.object)} .")
    return "\n".join(lines) + ("\n" if lines else "")
