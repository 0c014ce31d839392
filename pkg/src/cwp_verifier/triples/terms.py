"""Term model: names, tagged literals and pattern variables.

Names are rdflib ``URIRef`` values holding the fully expanded identifier, so
two names are equal exactly when their identifiers are byte-equal. Literals
are rdflib ``Literal`` values always built through the helpers below, which
pin one XSD datatype per tag and normalize the lexical form.
"""

import re
from datetime import datetime
from enum import Enum
from typing import Optional, Union

from rdflib import Literal, URIRef, Variable
from rdflib.namespace import RDF, XSD

from cwp_verifier.errors import UnknownPrefix

Name = URIRef
Term = Union[URIRef, Literal, Variable]

TYPE = RDF.type

# Characters the triple text accepts after the colon of a prefixed name
_PNAME_LOCAL = re.compile(r"[\w\-']*")

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


class LiteralTag(Enum):
    """Literal value tags. No coercion happens between tags."""

    STRING = "string"
    INTEGER = "integer"
    BOOLEAN = "boolean"
    DATETIME = "dateTime"


_DATATYPE_BY_TAG = {
    LiteralTag.STRING: XSD.string,
    LiteralTag.INTEGER: XSD.integer,
    LiteralTag.BOOLEAN: XSD.boolean,
    LiteralTag.DATETIME: XSD.dateTime,
}
_TAG_BY_DATATYPE = {dt: tag for tag, dt in _DATATYPE_BY_TAG.items()}

DATETIME_FORMAT = "%Y-%m-%dT%H:%M:%S"


def string_literal(text: str) -> Literal:
    return Literal(text, datatype=XSD.string)


def integer_literal(value: int) -> Literal:
    """Build a signed 64-bit integer literal.

    Raises:
        OverflowError: If the value does not fit in 64 bits
    """
    if not INT64_MIN <= value <= INT64_MAX:
        raise OverflowError(f"integer {value} does not fit in 64 bits")
    return Literal(str(int(value)), datatype=XSD.integer)


def boolean_literal(value: bool) -> Literal:
    return Literal("true" if value else "false", datatype=XSD.boolean)


def datetime_literal(value: Union[datetime, str]) -> Literal:
    """Build a timezone-free dateTime literal with second precision.

    Args:
        value: A naive datetime or an ISO-8601 ``YYYY-MM-DDThh:mm:ss`` string

    Raises:
        ValueError: If the value is malformed or carries a timezone
    """
    if isinstance(value, str):
        value = datetime.strptime(value, DATETIME_FORMAT)
    if value.tzinfo is not None:
        raise ValueError("dateTime literals are timezone-free")
    value = value.replace(microsecond=0)
    return Literal(value.strftime(DATETIME_FORMAT), datatype=XSD.dateTime)


def literal_tag(literal: Literal) -> LiteralTag:
    try:
        return _TAG_BY_DATATYPE[literal.datatype]
    except KeyError:
        raise ValueError(f"unsupported literal datatype: {literal.datatype}")


def datatype_for(tag: LiteralTag) -> URIRef:
    return _DATATYPE_BY_TAG[tag]


def literal_value(literal: Literal) -> Union[str, int, bool, datetime]:
    """Return the Python value of a tagged literal."""
    tag = literal_tag(literal)
    lexical = str(literal)
    if tag is LiteralTag.INTEGER:
        return int(lexical)
    if tag is LiteralTag.BOOLEAN:
        return lexical == "true"
    if tag is LiteralTag.DATETIME:
        return datetime.strptime(lexical, DATETIME_FORMAT)
    return lexical


def is_variable(term: object) -> bool:
    return isinstance(term, Variable)


def is_name(term: object) -> bool:
    return isinstance(term, URIRef)


def is_literal(term: object) -> bool:
    return isinstance(term, Literal)


def escape_string(text: str) -> str:
    return (
        text.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )


def unescape_string(text: str) -> str:
    out = []
    chars = iter(text)
    for ch in chars:
        if ch != "\\":
            out.append(ch)
            continue
        nxt = next(chars, "")
        out.append({"n": "\n", "r": "\r", "t": "\t"}.get(nxt, nxt))
    return "".join(out)


class PrefixTable:
    """Prefix declarations of one model.

    The table expands ``prefix:local`` names and renders terms back to their
    canonical text. A default prefix, when set, expands the bare identifiers
    used in declarations and scenario files.
    """

    def __init__(
        self,
        prefixes: Optional[dict[str, str]] = None,
        default: Optional[str] = None,
    ):
        self._prefixes: dict[str, str] = {}
        self._render_cache: dict[Term, str] = {}
        self.default = default
        for prefix, namespace in (prefixes or {}).items():
            self.bind(prefix, namespace)

    def bind(self, prefix: str, namespace: str) -> None:
        self._prefixes[prefix] = namespace
        self._render_cache.clear()

    def items(self) -> list[tuple[str, str]]:
        return sorted(self._prefixes.items())

    def namespace(self, prefix: str) -> str:
        try:
            return self._prefixes[prefix]
        except KeyError:
            raise UnknownPrefix(f"undeclared prefix '{prefix}:'", subject=prefix)

    def expand(self, qname: str) -> URIRef:
        """Expand ``prefix:local`` into a name.

        Raises:
            UnknownPrefix: If the prefix is not declared
        """
        prefix, sep, local = qname.partition(":")
        if not sep:
            return self.expand_local(qname)
        return URIRef(self.namespace(prefix) + local)

    def expand_local(self, local: str) -> URIRef:
        """Expand a bare identifier with the default prefix."""
        if self.default is None:
            raise UnknownPrefix(
                f"bare name '{local}' used without a default prefix", subject=local
            )
        return URIRef(self.namespace(self.default) + local)

    def local_name(self, name: URIRef) -> str:
        """Return the part of a name after its namespace."""
        match = self._match(name)
        return str(name)[len(match[1]):] if match else str(name)

    def _match(self, name: URIRef) -> Optional[tuple[str, str]]:
        best = None
        text = str(name)
        for prefix, namespace in self._prefixes.items():
            if text.startswith(namespace) and (best is None or len(namespace) > len(best[1])):
                best = (prefix, namespace)
        return best

    def render(self, term: Term) -> str:
        """Render a term in canonical triple-text form.

        Names are written ``prefix:local`` when a namespace matches and the
        local part is a legal prefixed-name local, otherwise ``<iri>``. The
        ``a`` keyword is only produced by ``render_predicate``.
        """
        cached = self._render_cache.get(term)
        if cached is not None:
            return cached
        if isinstance(term, Variable):
            text = f"?{term}"
        elif isinstance(term, Literal):
            text = render_literal(term)
        else:
            text = f"<{term}>"
            match = self._match(term)
            if match:
                local = str(term)[len(match[1]):]
                if _PNAME_LOCAL.fullmatch(local):
                    text = f"{match[0]}:{local}"
        self._render_cache[term] = text
        return text

    def render_predicate(self, term: Term) -> str:
        """Render a term standing in the predicate slot of a triple."""
        return "a" if term == TYPE else self.render(term)

    def render_triple(self, subject: Term, predicate: Term, obj: Term) -> tuple[str, str, str]:
        return self.render(subject), self.render_predicate(predicate), self.render(obj)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PrefixTable):
            return NotImplemented
        return self._prefixes == other._prefixes and self.default == other.default

    def copy(self) -> "PrefixTable":
        return PrefixTable(dict(self._prefixes), self.default)


def render_literal(literal: Literal) -> str:
    tag = literal_tag(literal)
    if tag is LiteralTag.STRING:
        return f'"{escape_string(str(literal))}"'
    if tag is LiteralTag.DATETIME:
        return f'"{literal}"^^dateTime'
    return str(literal)
