"""Reading and writing the JSON documents described in docs/formats.md."""

import json
import sys
from pathlib import Path

from .action import build_action
from .algebra import BaseRing, IdempotentAlgebra
from .errors import ParseError
from .groupoid import group_from_permutations, validate_groupoid


def read_text(source):
    """File contents, or stdin for ``-``/None."""
    if source in (None, "-"):
        return sys.stdin.read()
    return Path(source).read_text(encoding="utf-8")


def read_json(source):
    text = read_text(source)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {source or 'stdin'}: {exc}") from None


def dumps(doc):
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def normalize(text):
    """LF line endings and a single trailing newline."""
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    return text.rstrip("\n") + "\n"


def kind_of(doc):
    if isinstance(doc, dict) and "groupoid" in doc:
        return "action"
    if isinstance(doc, dict) and "objects" in doc:
        return "groupoid"
    if isinstance(doc, dict) and "permutations" in doc:
        return "group"
    raise ParseError("document is neither a groupoid, a group nor an action")


def load_groupoid(doc, relative_to=None):
    """Groupoid from an inline document, a path, or a permutation group."""
    if isinstance(doc, str):
        path = Path(doc)
        if relative_to is not None and not path.is_absolute():
            path = Path(relative_to).parent / path
        doc = read_json(str(path))
    kind = kind_of(doc)
    if kind == "group":
        return load_group(doc)
    if kind != "groupoid":
        raise ParseError("expected a groupoid document")
    return validate_groupoid(doc)


def load_group(doc):
    """``{"permutations": {name: [images, 1-based]}}`` as a one-object groupoid."""
    perms = doc.get("permutations")
    if not isinstance(perms, dict) or not perms:
        raise ParseError("permutations must be a nonempty object")
    try:
        return group_from_permutations({str(k): tuple(int(x) - 1 for x in v) for k, v in perms.items()})
    except (TypeError, ValueError, KeyError) as exc:
        raise ParseError(f"bad permutation group: {exc}") from None


def load_action(doc, base=None, relative_to=None):
    """Action from its JSON document; ``base`` overrides the document's base ring."""
    if kind_of(doc) != "action":
        raise ParseError("expected an action document")
    G = load_groupoid(doc["groupoid"], relative_to)
    try:
        m = int(doc["m"])
        ring = BaseRing.parse(base if base is not None else doc.get("base", "Q"))  # ValueError if not prime
        A = IdempotentAlgebra(m, ring)
        support = {}
        for g, idx in dict(doc.get("support", {})).items():
            support[str(g)] = [_index(i, m) for i in idx]
        perm = {}
        for g, pairs in dict(doc.get("perm", {})).items():
            perm[str(g)] = {_index(i, m): _index(j, m) for i, j in pairs}
        for g in list(support) + list(perm):
            G.index(g)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed action document: {exc}") from None
    return build_action(G, A, support, perm)


def _index(i, m):
    i = int(i)
    if not 1 <= i <= m:
        raise ValueError(f"index {i} outside 1..{m}")
    return i - 1


def action_document(action, extra=None):
    doc = action.to_json()
    if extra:
        doc.update(extra)
    return doc
