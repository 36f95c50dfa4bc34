"""Disc, handle and crosscap additions on quadrangular embeddings.

Every operation rewrites the face system locally (a few squares out, a few
squares in) and reassembles the signed rotation system with
:func:`~minquad.embedding.from_faces`.  Squares are passed with explicit
roles: ``outer = (o1, o2, o3, o4)`` and ``inner = (i1, i2, i3, i4)`` as
cyclic vertex sequences.  On an orientable embedding both must be given in
clockwise order (the order :func:`~minquad.embedding.trace_faces` reports);
on a nonorientable one either direction is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .embedding import (
    Embedding,
    EmbeddingError,
    Face,
    edge_key,
    face_edges,
    from_faces,
    is_quadrangular,
    same_cycle,
)


class SurgeryError(EmbeddingError):
    """A surgery precondition failed."""


class HandleType(Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"


# Created faces per handle type.  ("o", k) / ("i", k) refer to the 1-based
# corner k of the outer / inner square.  Each pattern is one of the
# non-crossing ways of cutting the annulus between the two squares into four
# quadrilaterals; going clockwise round the annulus, the outer corners are
# met in increasing order and the inner corners in decreasing order, so every
# pattern is coherent for an untwisted handle.
HANDLE_PATTERNS: dict[HandleType, tuple[tuple[tuple[str, int], ...], ...]] = {
    # chords o1i2, o3i2, o3i4, o1i4; keeps o1/o3 and i2/i4 as diagonals
    HandleType.I: (
        (("o", 1), ("o", 2), ("o", 3), ("i", 2)),
        (("o", 3), ("i", 4), ("i", 1), ("i", 2)),
        (("o", 3), ("o", 4), ("o", 1), ("i", 4)),
        (("o", 1), ("i", 2), ("i", 3), ("i", 4)),
    ),
    # chords o1i4, o3i4, o4i3, o4i1; keeps o1/o3 and i1/i3
    HandleType.II: (
        (("o", 1), ("o", 2), ("o", 3), ("i", 4)),
        (("o", 3), ("o", 4), ("i", 3), ("i", 4)),
        (("o", 4), ("i", 1), ("i", 2), ("i", 3)),
        (("o", 4), ("o", 1), ("i", 4), ("i", 1)),
    ),
    # chords o1i4, o3i4, o3i2, o4i1; keeps o1/o3 and i2/i4.  With i2 = o1 the
    # chords form a triangle o1 o3 i4 plus the edge o4 i1.
    HandleType.III: (
        (("o", 1), ("o", 2), ("o", 3), ("i", 4)),
        (("o", 3), ("i", 2), ("i", 3), ("i", 4)),
        (("o", 3), ("o", 4), ("i", 1), ("i", 2)),
        (("o", 4), ("o", 1), ("i", 4), ("i", 1)),
    ),
    # chords o1i1, o2i4, o3i3, o4i2; no diagonal kept in general
    HandleType.IV: (
        (("o", 1), ("o", 2), ("i", 4), ("i", 1)),
        (("o", 2), ("o", 3), ("i", 3), ("i", 4)),
        (("o", 3), ("o", 4), ("i", 2), ("i", 3)),
        (("o", 4), ("o", 1), ("i", 1), ("i", 2)),
    ),
}


def handle_faces(htype: HandleType, outer: Sequence[int], inner: Sequence[int]) -> tuple[Face, ...]:
    """The four squares a handle creates for the given corner roles."""
    label = {("o", k + 1): outer[k] for k in range(4)}
    label.update({("i", k + 1): inner[k] for k in range(4)})
    return tuple(tuple(label[c] for c in face) for face in HANDLE_PATTERNS[HandleType(htype)])


def handle_chord_vertices(htype: HandleType, outer: Sequence[int], inner: Sequence[int]) -> list[tuple[int, int]]:
    return [(outer[a[1] - 1], inner[b[1] - 1]) for a, b in handle_chords(htype)]


def disc_faces(f: Sequence[int], new: Sequence[int]) -> tuple[Face, ...]:
    p1, p2, p3, p4 = f
    a, b = new
    return ((p1, p2, p3, a), (p1, a, p3, b), (p1, b, p3, p4))


def crosscap_faces(f: Sequence[int]) -> tuple[Face, ...]:
    v1, v2, v3, v4 = f
    return ((v1, v2, v4, v3), (v1, v4, v2, v3))


def handle_chords(htype: HandleType) -> list[tuple[tuple[str, int], tuple[str, int]]]:
    """The four new edges of a handle type, as (outer corner, inner corner)."""
    chords = set()
    for face in HANDLE_PATTERNS[htype]:
        for a, b in zip(face, face[1:] + face[:1]):
            if a[0] != b[0]:
                chords.add((a, b) if a[0] == "o" else (b, a))
    return sorted(chords)


@dataclass(frozen=True)
class SurgeryStep:
    kind: str  # disc | handle | crosscap | crosscap_removal | relabel
    outer: Face
    inner: Face | None = None
    handle_type: HandleType | None = None
    new_vertices: tuple[int, ...] = ()
    removed_edges: tuple[tuple[int, int], ...] = ()
    created_faces: tuple[Face, ...] = field(default=(), compare=False)
    destroyed_faces: tuple[Face, ...] = field(default=(), compare=False)

    def to_line(self) -> str:
        def sq(f):
            return ",".join(map(str, f))

        if self.kind == "disc":
            o = self.outer
            return f"disc outer={sq(o)} diag={o[0]},{o[2]} new={sq(self.new_vertices)}"
        if self.kind == "handle":
            return f"handle type={self.handle_type.value} outer={sq(self.outer)} inner={sq(self.inner)}"
        if self.kind == "crosscap":
            return f"crosscap face={sq(self.outer)}"
        if self.kind == "relabel":
            return f"relabel map={sq(self.outer)}"
        edges = " ".join(f"{u}-{v}" for u, v in self.removed_edges)
        return f"crosscap_removal edges={edges.replace(' ', ',')}"

    @classmethod
    def from_line(cls, line: str) -> "SurgeryStep":
        kind, *rest = line.split()
        fields = dict(item.split("=", 1) for item in rest)

        def sq(key):
            return tuple(int(x) for x in fields[key].split(","))

        if kind == "disc":
            outer = sq("outer")
            diag = sq("diag")
            if (diag[0], diag[1]) != (outer[0], outer[2]):
                raise ValueError(f"disc diag must be outer corners 1 and 3: {line!r}")
            return cls("disc", outer, new_vertices=sq("new"))
        if kind == "handle":
            return cls("handle", sq("outer"), sq("inner"), HandleType(fields["type"]))
        if kind == "crosscap":
            return cls("crosscap", sq("face"))
        if kind == "relabel":
            return cls("relabel", sq("map"))
        if kind == "crosscap_removal":
            pairs = tuple(tuple(int(x) for x in p.split("-")) for p in fields["edges"].split(","))
            return cls("crosscap_removal", (), removed_edges=pairs)
        raise ValueError(f"unknown surgery {kind!r}")


def _locate(emb: Embedding, square: Sequence[int]) -> int:
    """Index of the face equal to ``square``; direction enforced when orientable."""
    square = tuple(square)
    if len(square) != 4 or len(set(square)) != 4:
        raise SurgeryError(f"{square} is not a square")
    faces = emb.face_tuples()
    orientable = emb.orientable
    for i, f in enumerate(faces):
        if same_cycle(f, square, directed=True):
            return i
    for i, f in enumerate(faces):
        if same_cycle(f, square, directed=False):
            if orientable:
                raise SurgeryError(f"square {square} is not in clockwise order")
            return i
    raise SurgeryError(f"{square} is not a face")


def _rebuild(emb: Embedding, drop: list[int], add: list[Face], n: int) -> Embedding:
    faces = [f for i, f in enumerate(emb.face_tuples()) if i not in set(drop)]
    faces.extend(add)
    try:
        return from_faces(faces, n)
    except EmbeddingError as exc:
        raise SurgeryError(f"surgery does not produce a surface: {exc}") from exc


def _check_delta(before: Embedding, after: Embedding, dv: int, de: int, df: int) -> None:
    got = (after.n - before.n, after.m - before.m, after.r - before.r)
    if got != (dv, de, df):
        raise SurgeryError(f"delta (V,E,F) = {got}, expected {(dv, de, df)}")
    if not is_quadrangular(after):
        raise SurgeryError("surgery lost quadrangularity")


def disc_addition(emb: Embedding, f: Sequence[int], new: tuple[int, int] | None = None):
    """Put two new vertices inside square ``f = p1 p2 p3 p4`` joined to ``p1``, ``p3``.

    ``f`` is replaced by ``p1 p2 p3 a``, ``p1 a p3 b``, ``p1 b p3 p4`` where
    ``(a, b) = new`` must be ``(n+1, n+2)`` in some order.
    """
    f = tuple(f)
    n = emb.n
    if new is None:
        new = (n + 1, n + 2)
    if sorted(new) != [n + 1, n + 2]:
        raise SurgeryError(f"new vertices must be {n + 1} and {n + 2}")
    idx = _locate(emb, f)
    created = disc_faces(f, new)
    out = _rebuild(emb, [idx], list(created), n + 2)
    _check_delta(emb, out, 2, 4, 2)
    step = SurgeryStep("disc", f, new_vertices=tuple(new), created_faces=created, destroyed_faces=(f,))
    return out, step


def handle_addition(emb: Embedding, outer: Sequence[int], inner: Sequence[int], htype: HandleType):
    """Join two distinct squares by a handle carrying four new edges."""
    outer, inner = tuple(outer), tuple(inner)
    htype = HandleType(htype)
    io = _locate(emb, outer)
    ii = _locate(emb, inner)
    if io == ii:
        raise SurgeryError("outer and inner square must be distinct faces")
    created = handle_faces(htype, outer, inner)
    for u, v in handle_chord_vertices(htype, outer, inner):
        if u == v:
            raise SurgeryError(f"handle chord would be a loop at {u}")
        if emb.has_edge(u, v):
            raise SurgeryError(f"edge {u}-{v} already present")
    out = _rebuild(emb, [io, ii], list(created), emb.n)
    _check_delta(emb, out, 0, 4, 2)
    if emb.orientable and not out.orientable:
        raise SurgeryError("handle addition on an orientable embedding became nonorientable")
    step = SurgeryStep("handle", outer, inner, htype, created_faces=created, destroyed_faces=(outer, inner))
    return out, step


def crosscap_addition(emb: Embedding, f: Sequence[int]):
    """Add both diagonals of square ``f = v1 v2 v3 v4`` through a new crosscap.

    ``f`` is replaced by ``v1 v2 v4 v3`` and ``v1 v4 v2 v3``.
    """
    f = tuple(f)
    idx = _locate(emb, f)
    v1, v2, v3, v4 = f
    if emb.has_edge(v1, v3) or emb.has_edge(v2, v4):
        raise SurgeryError(f"a diagonal of {f} is already an edge")
    created = crosscap_faces(f)
    out = _rebuild(emb, [idx], list(created), emb.n)
    _check_delta(emb, out, 0, 2, 1)
    if out.orientable:
        raise SurgeryError("crosscap addition did not produce a nonorientable embedding")
    step = SurgeryStep("crosscap", f, created_faces=created, destroyed_faces=(f,))
    return out, step


def crosscap_removal(emb: Embedding, e1: tuple[int, int], e2: tuple[int, int]):
    """Delete edges ``e1``, ``e2`` that cross inside a crosscap; refill with a disc.

    Both edges must lie on the same two faces, and those faces must be of
    the form ``v1 v2 v4 v3`` / ``v1 v4 v2 v3`` with ``e1 = v1v3``,
    ``e2 = v2v4``.
    """
    k1, k2 = edge_key(*e1), edge_key(*e2)
    if set(k1) & set(k2):
        raise SurgeryError("crosscap edges must be disjoint")
    faces = emb.face_tuples()
    holders = [i for i, f in enumerate(faces) if k1 in face_edges(f)]
    if len(holders) != 2 or not all(k2 in face_edges(faces[i]) for i in holders):
        raise SurgeryError(f"edges {k1}, {k2} do not bound a crosscap configuration")
    rest = []
    for i in holders:
        rest += [e for e in face_edges(faces[i]) if e not in (k1, k2)]
    # the four remaining edges must form the 4-cycle v1 v2 v3 v4
    v1, v3 = k1
    nbr: dict[int, list[int]] = {}
    for u, v in rest:
        nbr.setdefault(u, []).append(v)
        nbr.setdefault(v, []).append(u)
    if len(rest) != 4 or len(nbr) != 4 or any(len(x) != 2 for x in nbr.values()):
        raise SurgeryError("removal does not leave a 4-cycle boundary")
    v2, v4 = nbr[v1]
    square = (v1, v2, v3, v4)
    if set(nbr[v3]) != {v2, v4}:
        raise SurgeryError("removal does not leave a 4-cycle boundary")
    n = emb.n
    kept = [f for i, f in enumerate(faces) if i not in holders]
    for cand in (square, tuple(reversed(square))):
        try:
            out = from_faces(kept + [cand], n)
        except EmbeddingError:
            continue
        if out.m == emb.m - 2 and out.r == emb.r - 1:
            break
    else:
        raise SurgeryError("could not refill the crosscap with a disc")
    _check_delta(emb, out, 0, -2, -1)
    step = SurgeryStep(
        "crosscap_removal", square, removed_edges=(k1, k2),
        created_faces=(square,), destroyed_faces=tuple(faces[i] for i in holders),
    )
    return out, step


def relabel(emb: Embedding, mapping: dict[int, int]):
    """Rename vertices; ``mapping`` must be a permutation of ``1..n``."""
    if sorted(mapping) != list(range(1, emb.n + 1)) or sorted(mapping.values()) != list(range(1, emb.n + 1)):
        raise SurgeryError("relabelling must be a permutation of the vertex labels")
    image = tuple(mapping[v] for v in range(1, emb.n + 1))
    return emb.relabel(mapping), SurgeryStep("relabel", image)


def apply_step(emb: Embedding, step: SurgeryStep):
    """Re-execute a logged step (used by replay)."""
    if step.kind == "disc":
        return disc_addition(emb, step.outer, step.new_vertices)
    if step.kind == "handle":
        return handle_addition(emb, step.outer, step.inner, step.handle_type)
    if step.kind == "crosscap":
        return crosscap_addition(emb, step.outer)
    if step.kind == "crosscap_removal":
        return crosscap_removal(emb, *step.removed_edges)
    if step.kind == "relabel":
        return relabel(emb, {v: step.outer[v - 1] for v in range(1, emb.n + 1)})
    raise SurgeryError(f"unknown step kind {step.kind!r}")
