"""Marked poset description files.

Text form, one ``key: value`` per line, ``#`` starts a comment::

    elements: z, p, u, v
    covers: z<p, p<u, p<v
    marking: z=0, u=1, v=1
    chain:
    order: p

``covers`` accepts chains such as ``a<p<q<b``; repeated keys accumulate.
``elements`` may be omitted when every element shows up elsewhere. Without
``chain``/``order`` every unmarked element is an order element. A document
whose first non-blank character is ``{`` is read as JSON with the same keys
(covers as ``"a<b"`` strings or ``[a, b]`` pairs, marking values as integers
or ``"p/q"`` strings).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import DocumentError
from .marked import ChainOrderPartition, MarkedPoset, all_order
from .poset import build_poset

KEYS = ("elements", "covers", "marking", "chain", "order")
_LABEL = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_'.-]*$")
_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


@dataclass(frozen=True)
class PosetDocument:
    marked_poset: MarkedPoset
    partition: ChainOrderPartition

    def __eq__(self, other) -> bool:
        if not isinstance(other, PosetDocument):
            return NotImplemented
        return self.marked_poset == other.marked_poset and self.partition == other.partition

    def __hash__(self) -> int:
        return hash((self.marked_poset, self.partition))


def format_rational(v) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _label(text: str) -> str:
    text = text.strip()
    if not _LABEL.match(text):
        raise DocumentError(f"invalid element label {text!r}")
    return text


def _rational(value) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise DocumentError(f"marking value {value!r} must be an integer or 'p/q' string")
    if isinstance(value, int):
        return Fraction(value)
    text = str(value).strip()
    if not _RATIONAL.match(text):
        raise DocumentError(f"marking value {value!r} is not an exact rational")
    f = Fraction(text)
    return f


def _split_list(value: str) -> list[str]:
    return [part for part in (s.strip() for s in value.split(",")) if part]


def _parse_cover_text(text: str) -> list[tuple[str, str]]:
    labels = [_label(x) for x in text.split("<")]
    if len(labels) < 2:
        raise DocumentError(f"cover {text!r} must look like 'a<b'")
    return list(zip(labels, labels[1:]))


def _parse_text(text: str) -> dict:
    raw: dict[str, list[str]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key = key.strip().lower()
        if not sep or key not in KEYS:
            raise DocumentError(f"line {lineno}: expected one of {', '.join(KEYS)} followed by ':'")
        raw.setdefault(key, []).extend(_split_list(value))

    fields: dict = {k: None for k in KEYS}
    if "elements" in raw:
        fields["elements"] = [_label(x) for x in raw["elements"]]
    fields["covers"] = [pair for item in raw.get("covers", []) for pair in _parse_cover_text(item)]
    marking = {}
    for item in raw.get("marking", []):
        label, eq, value = item.partition("=")
        if not eq:
            raise DocumentError(f"marking entry {item!r} must look like 'a=1/2'")
        label = _label(label)
        if label in marking:
            raise DocumentError(f"element {label} is marked twice")
        marking[label] = _rational(value)
    fields["marking"] = marking
    for key in ("chain", "order"):
        if key in raw:
            fields[key] = [_label(x) for x in raw[key]]
    return fields


def _parse_json(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise DocumentError("JSON document must be an object")
    unknown = set(data) - set(KEYS)
    if unknown:
        raise DocumentError(f"unknown keys {sorted(unknown)}")

    def labels(key):
        value = data.get(key)
        if value is None:
            return None
        if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
            raise DocumentError(f"{key} must be a list of labels")
        return [_label(x) for x in value]

    covers = []
    for item in data.get("covers", []):
        if isinstance(item, str):
            covers.extend(_parse_cover_text(item))
        elif isinstance(item, list) and len(item) == 2 and all(isinstance(x, str) for x in item):
            covers.append((_label(item[0]), _label(item[1])))
        else:
            raise DocumentError(f"cover {item!r} must be 'a<b' or [a, b]")
    marking = data.get("marking", {})
    if not isinstance(marking, dict):
        raise DocumentError("marking must be an object")
    return {
        "elements": labels("elements"),
        "covers": covers,
        "marking": {_label(k): _rational(v) for k, v in marking.items()},
        "chain": labels("chain"),
        "order": labels("order"),
    }


def parse_document(text: str) -> PosetDocument:
    """Parse either document form.

    Raises :class:`DocumentError` for syntax problems; poset and marking
    invariants surface as the library's own errors.
    """
    fields = _parse_json(text) if text.lstrip().startswith("{") else _parse_text(text)
    elements = fields["elements"]
    if elements is None:
        seen = dict.fromkeys(x for pair in fields["covers"] for x in pair)
        seen.update(dict.fromkeys(fields["marking"]))
        for key in ("chain", "order"):
            seen.update(dict.fromkeys(fields[key] or []))
        elements = list(seen)
    elif len(set(elements)) != len(elements):
        raise DocumentError("duplicate element labels")
    if not elements:
        raise DocumentError("document has no elements")
    poset = build_poset(elements, fields["covers"])
    mp = MarkedPoset(poset, fields["marking"])

    chain, order = fields["chain"], fields["order"]
    unmarked = set(mp.unmarked)
    if chain is None and order is None:
        part = all_order(mp)
    else:
        if chain is None:
            chain = sorted(unmarked - set(order))
        if order is None:
            order = sorted(unmarked - set(chain))
        part = ChainOrderPartition(frozenset(chain), frozenset(order)).check(mp)
    return PosetDocument(mp, part)


def load_document(path: str | Path) -> PosetDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_document(text)


def document_fields(doc: PosetDocument) -> dict:
    mp = doc.marked_poset
    P = mp.poset
    return {
        "elements": list(P.elements),
        "covers": [f"{p}<{q}" for p, q in sorted(P.covers)],
        "marking": {a: format_rational(v) for a, v in sorted(mp.marking.items())},
        "chain": sorted(doc.partition.chain),
        "order": sorted(doc.partition.order),
    }


def serialize(doc: PosetDocument, as_json: bool = False) -> str:
    """Canonical form: sorted labels, Hasse covers only, explicit partition."""
    f = document_fields(doc)
    if as_json:
        marking = {a: int(v) if "/" not in v else v for a, v in f["marking"].items()}
        return json.dumps({**f, "marking": marking}, indent=2) + "\n"
    lines = [
        "elements: " + ", ".join(f["elements"]),
        "covers: " + ", ".join(f["covers"]),
        "marking: " + ", ".join(f"{a}={v}" for a, v in f["marking"].items()),
        "chain: " + ", ".join(f["chain"]),
        "order: " + ", ".join(f["order"]),
    ]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def fixture_names() -> list[str]:
    return sorted(
        Path(p.name).stem
        for p in resources.files("mcop.data").iterdir()
        if p.name.endswith(".mcop")
    )


def load_fixture(name: str) -> PosetDocument:
    """A bundled example document by stem, e.g. ``"chain4"``."""
    ref = resources.files("mcop.data") / f"{name}.mcop"
    if not ref.is_file():
        raise DocumentError(f"no bundled document named {name!r}")
    return parse_document(ref.read_text(encoding="utf-8"))


__all__ = [
    "PosetDocument",
    "document_fields",
    "format_rational",
    "load_document",
    "load_fixture",
    "fixture_names",
    "parse_document",
    "serialize",
]
