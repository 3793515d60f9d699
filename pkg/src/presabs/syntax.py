"""Reader and writer for the OWL functional-style syntax subset.

Supported axioms: Declaration, SubClassOf, EquivalentClasses,
SubObjectPropertyOf (plain or with a two-element ObjectPropertyChain),
InverseObjectProperties and AnnotationAssertion. Supported class
expressions: IRIs, owl:Thing, owl:Nothing, ObjectIntersectionOf,
ObjectSomeValuesFrom, ObjectHasValue and ObjectComplementOf.
"""
from __future__ import annotations

import logging
import re
from typing import Mapping

from .model import (
    NOTHING, THING, AnnotationAssertion, Axiom, Bottom, ClassExpression,
    Complement, Declaration, EquivalentClasses, HasValue, Intersection,
    InversePropertiesOf, Iri, Named, Ontology, SomeValues, SubClassOf,
    SubPropertyChainOf, SubPropertyOf, Top,
)

log = logging.getLogger(__name__)

STANDARD_PREFIXES = {
    "owl": "http://www.w3.org/2002/07/owl#",
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
}


class OwlSyntaxError(Exception):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class UnsupportedConstructError(OwlSyntaxError):
    """A well-formed OWL construct outside the supported subset."""


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<iri><[^>\s]*>)
  | (?P<literal>"(?:[^"\\]|\\.)*"(?:@[A-Za-z0-9-]+|\^\^(?:<[^>\s]*>|[^\s()<>]+))?)
  | (?P<open>\()
  | (?P<close>\))
  | (?P<eq>=)
  | (?P<name>[^\s()<>=\#"]+)
""", re.VERBOSE)

# constructs that are valid OWL but outside the subset; named in errors
_KNOWN_UNSUPPORTED = {
    "ObjectUnionOf", "ObjectAllValuesFrom", "ObjectOneOf", "ObjectHasSelf",
    "ObjectMinCardinality", "ObjectMaxCardinality", "ObjectExactCardinality",
    "DataSomeValuesFrom", "DataAllValuesFrom", "DataHasValue",
    "DataMinCardinality", "DataMaxCardinality", "DataExactCardinality",
    "ObjectInverseOf", "DisjointClasses", "DisjointUnion", "ClassAssertion",
    "ObjectPropertyAssertion", "ObjectPropertyDomain", "ObjectPropertyRange",
    "TransitiveObjectProperty", "FunctionalObjectProperty", "ReflexiveObjectProperty",
    "SymmetricObjectProperty", "EquivalentObjectProperties", "DisjointObjectProperties",
    "SubDataPropertyOf", "DataPropertyDomain", "DataPropertyRange", "HasKey",
    "SameIndividual", "DifferentIndividuals", "Import", "DatatypeDefinition",
}
_ANNOTATION_ONLY = {"SubAnnotationPropertyOf", "AnnotationPropertyDomain",
                    "AnnotationPropertyRange"}


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col

    def __repr__(self):
        return f"{self.kind}:{self.text!r}@{self.line}:{self.col}"


def _tokenize(text: str) -> list:
    tokens = []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            raise OwlSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, prefixes: Mapping[str, str], negates: Iri | None):
        self.toks = _tokenize(text)
        self.i = 0
        self.prefixes = {**STANDARD_PREFIXES, **prefixes}
        self.negates = negates

    # -- token helpers
    def peek(self, k: int = 0) -> _Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> _Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def fail(self, tok: _Token, expected: str):
        got = tok.text if tok.kind != "eof" else "end of input"
        raise OwlSyntaxError(f"expected {expected}, found {got!r}", tok.line, tok.col)

    def expect(self, kind: str, expected: str | None = None) -> _Token:
        t = self.next()
        if t.kind != kind:
            self.fail(t, expected or kind)
        return t

    def keyword(self, word: str) -> _Token:
        t = self.next()
        if t.kind != "name" or t.text != word:
            self.fail(t, word)
        return t

    # -- terminals
    def iri(self, what: str = "IRI") -> Iri:
        t = self.next()
        if t.kind == "iri":
            return Iri(t.text[1:-1])
        if t.kind == "name" and ":" in t.text:
            prefix, local = t.text.split(":", 1)
            if prefix not in self.prefixes:
                raise OwlSyntaxError(f"unknown prefix {prefix + ':'!r}", t.line, t.col)
            return Iri(self.prefixes[prefix] + local)
        self.fail(t, what)

    # -- document
    def document(self) -> Ontology:
        declared_prefixes = {}
        while self.peek().kind == "name" and self.peek().text == "Prefix":
            self.next()
            self.expect("open", "'('")
            t = self.next()
            if t.kind != "name" or not t.text.endswith(":"):
                self.fail(t, "prefix name ending in ':'")
            self.expect("eq", "'='")
            ns = self.expect("iri", "namespace IRI")
            declared_prefixes[t.text[:-1]] = ns.text[1:-1]
            self.prefixes[t.text[:-1]] = ns.text[1:-1]
            self.expect("close", "')'")
        self.keyword("Ontology")
        self.expect("open", "'('")
        oid = None
        if self.peek().kind == "iri" or (self.peek().kind == "name" and ":" in self.peek().text
                                         and self.peek(1).kind != "open"):
            oid = self.iri()
            if self.peek().kind == "iri":  # version IRI, ignored
                self.next()
        axioms: list = []
        while self.peek().kind != "close":
            if self.peek().kind == "eof":
                self.fail(self.peek(), "')' closing Ontology")
            axioms.extend(self.axiom())
        self.next()
        if self.peek().kind != "eof":
            self.fail(self.peek(), "end of input")
        return Ontology(tuple(axioms), declared_prefixes, oid)

    def skip_annotations(self):
        while self.peek().kind == "name" and self.peek().text == "Annotation":
            t = self.next()
            log.warning("line %d: axiom annotation dropped", t.line)
            self.skip_group()

    def skip_group(self):
        self.expect("open", "'('")
        depth = 1
        while depth:
            t = self.next()
            if t.kind == "eof":
                self.fail(t, "')'")
            depth += {"open": 1, "close": -1}.get(t.kind, 0)

    def axiom(self) -> list:
        t = self.next()
        if t.kind != "name":
            self.fail(t, "axiom")
        head = t.text
        if head in _KNOWN_UNSUPPORTED:
            raise UnsupportedConstructError(f"unsupported construct {head}", t.line, t.col)
        if head in _ANNOTATION_ONLY:
            log.warning("line %d: %s dropped", t.line, head)
            self.skip_group()
            return []
        self.expect("open", "'('")
        if head == "Declaration":
            out = [self.declaration()]
        elif head == "SubClassOf":
            self.skip_annotations()
            out = [SubClassOf(self.class_expression(), self.class_expression())]
        elif head == "EquivalentClasses":
            self.skip_annotations()
            ces = [self.class_expression(), self.class_expression()]
            while self.peek().kind != "close":
                ces.append(self.class_expression())
            out = [EquivalentClasses(ces[0], c) for c in ces[1:]]
        elif head == "SubObjectPropertyOf":
            self.skip_annotations()
            out = [self.sub_property()]
        elif head == "InverseObjectProperties":
            self.skip_annotations()
            out = [InversePropertiesOf(self.object_property(), self.object_property())]
        elif head == "AnnotationAssertion":
            self.skip_annotations()
            out = self.annotation_assertion(t)
        else:
            raise UnsupportedConstructError(f"unknown construct {head}", t.line, t.col)
        self.expect("close", f"')' closing {head}")
        return out

    def declaration(self) -> Declaration:
        t = self.next()
        kinds = {"Class": "class", "ObjectProperty": "property",
                 "AnnotationProperty": "property", "NamedIndividual": "individual"}
        if t.kind != "name" or t.text not in kinds:
            if t.kind == "name" and t.text in ("DataProperty", "Datatype"):
                raise UnsupportedConstructError(f"unsupported construct Declaration({t.text})",
                                                t.line, t.col)
            self.fail(t, "Class, ObjectProperty, AnnotationProperty or NamedIndividual")
        self.expect("open", "'('")
        iri = self.iri()
        self.expect("close", "')'")
        return Declaration(kinds[t.text], iri)

    def object_property(self) -> Iri:
        t = self.peek()
        if t.kind == "name" and t.text == "ObjectInverseOf":
            raise UnsupportedConstructError("unsupported construct ObjectInverseOf", t.line, t.col)
        return self.iri("object property")

    def sub_property(self) -> Axiom:
        t = self.peek()
        if t.kind == "name" and t.text == "ObjectPropertyChain":
            self.next()
            self.expect("open", "'('")
            chain = []
            while self.peek().kind != "close":
                chain.append(self.object_property())
            self.next()
            if len(chain) != 2:
                raise OwlSyntaxError(
                    f"property chains must have exactly 2 elements, found {len(chain)}",
                    t.line, t.col)
            return SubPropertyChainOf(tuple(chain), self.object_property())
        return SubPropertyOf(self.object_property(), self.object_property())

    def annotation_assertion(self, head: _Token) -> list:
        prop = self.iri("annotation property")
        subject = self.iri("annotation subject")
        t = self.peek()
        if t.kind == "literal":
            self.next()
            log.debug("line %d: literal annotation dropped", head.line)
            return []
        target = self.iri("annotation value")
        if self.negates is not None and prop == self.negates:
            return [AnnotationAssertion(prop, subject, target)]
        log.warning("line %d: annotation <%s> dropped", head.line, prop)
        return []

    def class_expression(self) -> ClassExpression:
        t = self.peek()
        if t.kind == "name" and self.peek(1).kind == "open":
            self.next()
            head = t.text
            if head in _KNOWN_UNSUPPORTED:
                raise UnsupportedConstructError(f"unsupported construct {head}", t.line, t.col)
            self.expect("open", "'('")
            if head == "ObjectIntersectionOf":
                ops = [self.class_expression(), self.class_expression()]
                while self.peek().kind != "close":
                    ops.append(self.class_expression())
                ce = Intersection(tuple(ops))
            elif head == "ObjectSomeValuesFrom":
                ce = SomeValues(self.object_property(), self.class_expression())
            elif head == "ObjectHasValue":
                ce = HasValue(self.object_property(), self.iri("individual"))
            elif head == "ObjectComplementOf":
                ce = Complement(self.class_expression())
            else:
                raise UnsupportedConstructError(f"unknown class expression {head}", t.line, t.col)
            self.expect("close", f"')' closing {head}")
            return ce
        iri = self.iri("class expression")
        if iri == THING:
            return Top
        if iri == NOTHING:
            return Bottom
        return Named(iri)


def parse_ontology(text: str, base_prefixes: Mapping[str, str] | None = None,
                   negates: Iri | None = None) -> Ontology:
    """Parse a functional-syntax document.

    ``base_prefixes`` are available without being declared in the document;
    ``negates`` is the annotation property kept as a logical annotation
    (defaults to the standard vocabulary's).
    """
    if negates is None:
        from .vocabulary import Vocabulary
        negates = Vocabulary.default().negates
    return _Parser(text, base_prefixes or {}, negates).document()


# -- writer ------------------------------------------------------------------

_LOCAL_OK = re.compile(r"^[A-Za-z0-9_\-+%.]+$")


class _Abbreviator:
    def __init__(self, prefixes: Mapping[str, str]):
        # longest namespace first so the most specific prefix wins
        self.pairs = sorted(prefixes.items(), key=lambda kv: (-len(kv[1]), kv[0]))
        self.cache: dict = {}

    def __call__(self, iri: Iri) -> str:
        s = self.cache.get(iri)
        if s is None:
            s = f"<{iri.value}>"
            for p, ns in self.pairs:
                if iri.value.startswith(ns):
                    local = iri.value[len(ns):]
                    if _LOCAL_OK.match(local):
                        s = f"{p}:{local}"
                        break
            self.cache[iri] = s
        return s


def write_class_expression(ce: ClassExpression, ab) -> str:
    if ce is Top or ce == Top:
        return ab(THING)
    if ce == Bottom:
        return ab(NOTHING)
    if isinstance(ce, Named):
        return ab(ce.iri)
    if isinstance(ce, Intersection):
        return "ObjectIntersectionOf(" + " ".join(write_class_expression(o, ab) for o in ce.operands) + ")"
    if isinstance(ce, SomeValues):
        return f"ObjectSomeValuesFrom({ab(ce.property)} {write_class_expression(ce.filler, ab)})"
    if isinstance(ce, HasValue):
        return f"ObjectHasValue({ab(ce.property)} {ab(ce.individual)})"
    if isinstance(ce, Complement):
        return f"ObjectComplementOf({write_class_expression(ce.operand, ab)})"
    raise TypeError(f"not a class expression: {ce!r}")


_DECL_NAMES = {"class": "Class", "property": "ObjectProperty", "individual": "NamedIndividual"}


def write_axiom(ax: Axiom, ab) -> str:
    ce = write_class_expression
    if isinstance(ax, SubClassOf):
        return f"SubClassOf({ce(ax.sub, ab)} {ce(ax.sup, ab)})"
    if isinstance(ax, EquivalentClasses):
        return f"EquivalentClasses({ce(ax.a, ab)} {ce(ax.b, ab)})"
    if isinstance(ax, SubPropertyOf):
        return f"SubObjectPropertyOf({ab(ax.sub)} {ab(ax.sup)})"
    if isinstance(ax, SubPropertyChainOf):
        chain = " ".join(ab(p) for p in ax.chain)
        return f"SubObjectPropertyOf(ObjectPropertyChain({chain}) {ab(ax.sup)})"
    if isinstance(ax, InversePropertiesOf):
        return f"InverseObjectProperties({ab(ax.p)} {ab(ax.q)})"
    if isinstance(ax, Declaration):
        return f"Declaration({_DECL_NAMES[ax.kind]}({ab(ax.iri)}))"
    if isinstance(ax, AnnotationAssertion):
        return f"AnnotationAssertion({ab(ax.property)} {ab(ax.subject)} {ab(ax.target)})"
    raise TypeError(f"not an axiom: {ax!r}")


def serialize_ontology(o: Ontology, axioms=None) -> str:
    """Deterministic document text; axioms are written in canonical order.

    ``axioms`` replaces the ontology's own axioms when given (the prefix map
    and ontology IRI are still taken from ``o``).
    """
    ab = _Abbreviator(o.prefixes)
    lines = [f"Prefix({p}:=<{ns}>)" for p, ns in sorted(o.prefixes.items())]
    header = f"Ontology(<{o.ontology_iri.value}>" if o.ontology_iri else "Ontology("
    lines.append(header)
    items = o.canonical_axioms() if axioms is None else sorted(set(axioms), key=lambda a: a.key)
    lines.extend(write_axiom(ax, ab) for ax in items)
    lines.append(")")
    return "\n".join(lines) + "\n"
