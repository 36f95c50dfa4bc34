"""Random applicable surgeries, shared by the property tests and the acceptance suite."""

import random

from minquad.embedding import Embedding
from minquad.surgery import (
    HandleType,
    SurgeryError,
    crosscap_addition,
    disc_addition,
    handle_addition,
    handle_chord_vertices,
)

# which vertex pairs of the input squares stay diagonals of created squares
KEPT_DIAGONALS = {
    HandleType.I: (("o", 0, 2), ("i", 1, 3)),
    HandleType.II: (("o", 0, 2), ("i", 0, 2)),
    HandleType.III: (("o", 0, 2), ("i", 1, 3)),
    HandleType.IV: (),
}


def oriented(face, r: random.Random, directed: bool):
    k = r.randrange(4)
    f = tuple(face[k:] + face[:k])
    if not directed and r.random() < 0.5:
        f = f[::-1]
    return f


def random_surgery(emb: Embedding, kind: str, r: random.Random, tries: int = 200):
    """Pick random roles until the surgery of ``kind`` applies; None if it never does."""
    faces = emb.face_tuples()
    directed = emb.orientable
    for _ in range(tries):
        if kind == "disc":
            f = oriented(r.choice(faces), r, directed)
            new = (emb.n + 1, emb.n + 2) if r.random() < 0.5 else (emb.n + 2, emb.n + 1)
            out, step = disc_addition(emb, f, new)
            return out, step, {"square": f, "new": new}
        if kind == "crosscap":
            f = oriented(r.choice(faces), r, directed)
            if emb.has_edge(f[0], f[2]) or emb.has_edge(f[1], f[3]):
                continue
            out, step = crosscap_addition(emb, f)
            return out, step, {"square": f}
        if len(faces) < 2:
            return None
        i, j = r.sample(range(len(faces)), 2)
        o, inn = oriented(faces[i], r, directed), oriented(faces[j], r, directed)
        htype = r.choice(list(HandleType))
        if any(u == v or emb.has_edge(u, v) for u, v in handle_chord_vertices(htype, o, inn)):
            continue
        try:
            out, step = handle_addition(emb, o, inn, htype)
        except SurgeryError:
            continue
        return out, step, {"outer": o, "inner": inn, "type": htype}
    return None
