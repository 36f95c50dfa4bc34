"""Plain-text serialization of embeddings and surgery logs.

Embedding files look like::

    embedding n=4 orientable=1
    1: 2+ 4+
    2: 3+ 1+
    ...
    faces:
    1 2 3 4

The ``faces:`` block is written for inspection only and ignored on load.
"""

from __future__ import annotations

import re
from pathlib import Path

from .embedding import Embedding, EmbeddingError, edge_key

_HEADER = re.compile(r"^embedding\s+n=(\d+)\s+orientable=([01])\s*$")
_ENTRY = re.compile(r"^(\d+)([+-])$")


class FormatError(EmbeddingError):
    """Malformed embedding text."""


def dumps(emb: Embedding, faces: bool = True) -> str:
    lines = [f"embedding n={emb.n} orientable={int(emb.orientable)}"]
    for v in range(1, emb.n + 1):
        parts = []
        for u in emb.rotations[v]:
            parts.append(f"{u}{'+' if emb.sign(v, u) > 0 else '-'}")
        lines.append(f"{v}: " + " ".join(parts))
    if faces:
        lines.append("faces:")
        for f in emb.face_tuples():
            lines.append(" ".join(map(str, f)))
    return "\n".join(lines) + "\n"


def parse(text: str) -> tuple[Embedding, bool]:
    """Parse embedding text.  Returns the embedding and the header's orientability claim."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise FormatError("empty embedding file")
    m = _HEADER.match(lines[0])
    if not m:
        raise FormatError(f"bad header line {lines[0]!r}")
    n, claim = int(m.group(1)), m.group(2) == "1"
    rotations: dict[int, tuple[int, ...]] = {}
    signs: dict[tuple[int, int], int] = {}
    for ln in lines[1:]:
        if ln == "faces:":
            break
        head, sep, rest = ln.partition(":")
        if not sep or not head.strip().isdigit():
            raise FormatError(f"bad rotation line {ln!r}")
        v = int(head)
        if v in rotations:
            raise FormatError(f"vertex {v} listed twice")
        nbrs = []
        for tok in rest.split():
            em = _ENTRY.match(tok)
            if not em:
                raise FormatError(f"bad neighbour entry {tok!r} at vertex {v}")
            u, s = int(em.group(1)), 1 if em.group(2) == "+" else -1
            key = edge_key(v, u)
            if key in signs and signs[key] != s:
                raise FormatError(f"edge {key} has inconsistent signs")
            signs[key] = s
            nbrs.append(u)
        rotations[v] = tuple(nbrs)
    if sorted(rotations) != list(range(1, n + 1)):
        raise FormatError(f"expected rotation lines for vertices 1..{n}")
    return Embedding(rotations, signs), claim


def loads(text: str) -> Embedding:
    return parse(text)[0]


def read(path: str | Path) -> Embedding:
    return loads(Path(path).read_text())


def write(emb: Embedding, path: str | Path, faces: bool = True) -> None:
    Path(path).write_text(dumps(emb, faces=faces))
