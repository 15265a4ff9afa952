"""
JSON instance documents.

A document is one object or an array of objects. Each object carries a
"kind" and exactly the fields that kind needs:

    group      basis, l, optional r
    frobenius  a
    ip         A, b, c

Rationals are strings such as "4/7" (plain integers are accepted);
JSON floats are rejected.
"""

import json
import logging
import sys
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from .groupsolve import GroupInstance
from .types import InstanceKind, IntVector, IpInstance, LatticeBasis
from .utils import InstanceFormatError, parse_int_vector

logger = logging.getLogger(__name__)

REQUIRED_FIELDS = {
    InstanceKind.GROUP: {"basis", "l"},
    InstanceKind.FROBENIUS: {"a"},
    InstanceKind.IP: {"A", "b", "c"},
}

OPTIONAL_FIELDS = {
    InstanceKind.GROUP: {"r"},
    InstanceKind.FROBENIUS: set(),
    InstanceKind.IP: set(),
}


@dataclass(frozen=True)
class Instance:
    """A parsed instance document; only the fields of its kind are set."""
    kind: InstanceKind
    group: Optional[GroupInstance] = None
    residue: Optional[IntVector] = None
    a: Optional[IntVector] = None
    ip: Optional[IpInstance] = None


def _reject_floats(value: float):
    raise InstanceFormatError(f"Floating point number {value} is not allowed; write rationals as \"p/q\"")


def load_documents(text: str) -> Tuple[List[Dict[str, Any]], bool]:
    """
    Decode a JSON document into instance objects.

    Args:
        text: JSON text

    Returns:
        The objects and whether the document was a batch array
    """
    try:
        data = json.loads(text, parse_float=_reject_floats)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"Malformed JSON: {e}")
    batch = isinstance(data, list)
    documents = data if batch else [data]
    if any(not isinstance(doc, dict) for doc in documents):
        raise InstanceFormatError("Each instance must be a JSON object")
    return documents, batch


def _kind(doc: Dict[str, Any]) -> InstanceKind:
    try:
        return InstanceKind(doc.get("kind"))
    except ValueError:
        raise InstanceFormatError(f"Unknown instance kind {doc.get('kind')!r}")


def _matrix(value: Any, name: str) -> Tuple[IntVector, ...]:
    if not isinstance(value, list) or not value:
        raise InstanceFormatError(f"{name} must be a non-empty array of integer rows")
    return tuple(tuple(parse_int_vector(row, name)) for row in value)


def _rationals(value: Any, name: str) -> List[Any]:
    if not isinstance(value, list) or not value:
        raise InstanceFormatError(f"{name} must be a non-empty array of rationals")
    return value


def parse_instance(doc: Dict[str, Any]) -> Instance:
    """
    Validate and convert one instance object.

    Args:
        doc: Decoded JSON object

    Returns:
        Parsed instance
    """
    kind = _kind(doc)
    fields = set(doc) - {"kind"}
    missing = REQUIRED_FIELDS[kind] - fields
    extra = fields - REQUIRED_FIELDS[kind] - OPTIONAL_FIELDS[kind]
    if missing:
        raise InstanceFormatError(f"{kind.value} instance is missing {sorted(missing)}")
    if extra:
        raise InstanceFormatError(f"{kind.value} instance has unexpected fields {sorted(extra)}")

    if kind is InstanceKind.GROUP:
        basis = LatticeBasis(_matrix(doc["basis"], "basis"))
        group = GroupInstance.create(basis, _rationals(doc["l"], "l"))
        residue = tuple(parse_int_vector(doc["r"], "r")) if "r" in doc else None
        return Instance(kind=kind, group=group, residue=residue)
    if kind is InstanceKind.FROBENIUS:
        return Instance(kind=kind, a=tuple(parse_int_vector(doc["a"], "a")))
    ip = IpInstance(
        _matrix(doc["A"], "A"),
        tuple(parse_int_vector(doc["b"], "b")),
        tuple(_rationals(doc["c"], "c")),
    )
    return Instance(kind=kind, ip=ip)


def read_instances(path: str) -> Tuple[List[Dict[str, Any]], bool]:
    """Read a file (or stdin for "-") and decode its instance objects."""
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise InstanceFormatError(f"Cannot read {path}: {e}")
    logger.debug(f"Read {len(text)} characters from {path}")
    return load_documents(text)
