"""Signed rotation systems: faces, Euler characteristic, orientability, checks.

An :class:`Embedding` stores, for each vertex ``1..n``, the cyclic order of
its neighbours together with a sign ``+1``/``-1`` per edge.  Everything else
(faces, surface, certificates) is recomputed from that data on demand.

Convention: for an orientable embedding with all signs positive, the rotation
at each vertex is its clockwise neighbour order and :func:`trace_faces`
returns every face with its vertices in clockwise order.  Face tracing
leaves a vertex ``w`` entered from ``v`` towards the rotation predecessor of
``v`` when the current local orientation is positive, and towards the
successor when it is negative.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

Edge = tuple[int, int]
Face = tuple[int, ...]


class EmbeddingError(ValueError):
    """Raised for malformed rotation data or face systems that do not glue."""


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class SurfaceSpec:
    """A closed surface: ``S_g`` when orientable, ``N_q`` otherwise."""

    orientable: bool
    genus: int

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be nonnegative")
        if not self.orientable and self.genus < 1:
            raise ValueError("nonorientable genus must be at least 1")

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus if self.orientable else 2 - self.genus

    @property
    def euler_genus(self) -> int:
        return 2 - self.euler_characteristic

    @classmethod
    def from_euler(cls, chi: int, orientable: bool) -> "SurfaceSpec":
        if chi > 2:
            raise EmbeddingError(f"Euler characteristic {chi} > 2")
        if orientable:
            if chi % 2:
                raise EmbeddingError(f"orientable surface with odd Euler characteristic {chi}")
            return cls(True, (2 - chi) // 2)
        return cls(False, 2 - chi)

    @classmethod
    def parse(cls, text: str) -> "SurfaceSpec":
        text = text.strip()
        if len(text) < 2 or text[0].upper() not in "SN" or not text[1:].isdigit():
            raise ValueError(f"surface must look like S<g> or N<q>, got {text!r}")
        return cls(text[0].upper() == "S", int(text[1:]))

    def __str__(self) -> str:
        return f"{'S' if self.orientable else 'N'}{self.genus}"


@dataclass(frozen=True)
class FaceWalk:
    """A closed boundary walk; ``darts`` are ``(from, to, side)`` triples."""

    darts: tuple[tuple[int, int, int], ...]

    @property
    def vertices(self) -> Face:
        return tuple(d[0] for d in self.darts)

    def __len__(self) -> int:
        return len(self.darts)


@dataclass(frozen=True, eq=False)
class Embedding:
    """A signed rotation system on vertices ``1..n``.

    ``rotations[v]`` is the cyclic neighbour order at ``v``; ``signs`` maps
    each edge ``(u, v)`` with ``u < v`` to ``+1`` or ``-1``.
    """

    rotations: dict[int, tuple[int, ...]]
    signs: dict[Edge, int]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._validate()

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rotations(cls, rotations, signs=None) -> "Embedding":
        rot = {int(v): tuple(int(u) for u in nbrs) for v, nbrs in rotations.items()}
        sg: dict[Edge, int] = {}
        for v, nbrs in rot.items():
            for u in nbrs:
                sg[edge_key(u, v)] = 1
        if signs:
            for (u, v), s in signs.items():
                sg[edge_key(u, v)] = int(s)
        return cls(rot, sg)

    def _validate(self) -> None:
        rot = self.rotations
        n = len(rot)
        if n < 3:
            raise EmbeddingError("embeddings need at least 3 vertices")
        if sorted(rot) != list(range(1, n + 1)):
            raise EmbeddingError("vertices must be labelled 1..n")
        edges = set()
        for v, nbrs in rot.items():
            if len(set(nbrs)) != len(nbrs):
                raise EmbeddingError(f"parallel edge at vertex {v}")
            for u in nbrs:
                if u == v:
                    raise EmbeddingError(f"loop at vertex {v}")
                if u not in rot or v not in rot[u]:
                    raise EmbeddingError(f"asymmetric adjacency {v}-{u}")
                edges.add(edge_key(u, v))
        if set(self.signs) != edges:
            raise EmbeddingError("sign table does not match edge set")
        if any(s not in (1, -1) for s in self.signs.values()):
            raise EmbeddingError("signs must be +1 or -1")
        # connectivity
        seen = {1}
        queue = deque([1])
        while queue:
            v = queue.popleft()
            for u in rot[v]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        if len(seen) != n:
            raise EmbeddingError("graph is not connected")

    # -- basic graph data ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.rotations)

    @property
    def m(self) -> int:
        return len(self.signs)

    def edges(self) -> set[Edge]:
        return set(self.signs)

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.signs

    def sign(self, u: int, v: int) -> int:
        return self.signs[edge_key(u, v)]

    def missing_edges(self) -> set[Edge]:
        return {e for e in combinations(range(1, self.n + 1), 2) if e not in self.signs}

    def min_degree(self) -> int:
        return min(len(r) for r in self.rotations.values())

    # -- derived structure (cached; instances are never mutated) ----------

    def faces(self) -> list[FaceWalk]:
        if "faces" not in self._cache:
            self._cache["faces"] = trace_faces(self)
        return self._cache["faces"]

    def face_tuples(self) -> list[Face]:
        return [f.vertices for f in self.faces()]

    @property
    def r(self) -> int:
        return len(self.faces())

    @property
    def euler_characteristic(self) -> int:
        return self.n - self.m + self.r

    @property
    def orientable(self) -> bool:
        if "orientable" not in self._cache:
            self._cache["orientable"] = orientability(self)
        return self._cache["orientable"]

    @property
    def surface(self) -> SurfaceSpec:
        return surface_of(self)

    # -- transformations ------------------------------------------------------

    def flip(self, v: int) -> "Embedding":
        """Reverse the rotation at ``v`` and negate its incident signs."""
        rot = dict(self.rotations)
        rot[v] = tuple(reversed(rot[v]))
        sg = dict(self.signs)
        for u in rot[v]:
            sg[edge_key(u, v)] *= -1
        return Embedding(rot, sg)

    def relabel(self, mapping: dict[int, int]) -> "Embedding":
        """Rename vertices; ``mapping`` must be a permutation of ``1..n``."""
        if sorted(mapping) != list(range(1, self.n + 1)) or sorted(mapping.values()) != list(range(1, self.n + 1)):
            raise EmbeddingError("relabelling must be a permutation of 1..n")
        rot = {mapping[v]: tuple(mapping[u] for u in nbrs) for v, nbrs in self.rotations.items()}
        sg = {edge_key(mapping[u], mapping[v]): s for (u, v), s in self.signs.items()}
        return Embedding(rot, sg)

    def normalized(self) -> "Embedding":
        """Flip-equivalent embedding with all tree edges positive.

        An orientable embedding comes back with every sign ``+1``.
        """
        flips = _tree_flips(self)
        rot = {v: (tuple(reversed(nb)) if flips[v] < 0 else nb) for v, nb in self.rotations.items()}
        sg = {(u, v): s * flips[u] * flips[v] for (u, v), s in self.signs.items()}
        return Embedding(rot, sg)

    def __eq__(self, other):
        if not isinstance(other, Embedding):
            return NotImplemented
        return self.rotations == other.rotations and self.signs == other.signs

    def __hash__(self):
        return hash((tuple(sorted(self.rotations.items())), tuple(sorted(self.signs.items()))))


# ---------------------------------------------------------------------------
# Face tracing and surface identification
# ---------------------------------------------------------------------------


def _positions(emb: Embedding) -> dict[int, dict[int, int]]:
    return {v: {u: i for i, u in enumerate(nbrs)} for v, nbrs in emb.rotations.items()}


def trace_faces(emb: Embedding) -> list[FaceWalk]:
    """Trace every face of ``emb`` exactly once.

    A traversal state is ``(v, w, s)``: leaving ``v`` along ``vw`` with local
    orientation ``s``.  Each face is met twice among the ``4m`` states (once
    per direction), so the reverse of every traced state is marked as well.
    """
    rot = emb.rotations
    pos = _positions(emb)
    used: set[tuple[int, int, int]] = set()
    walks: list[FaceWalk] = []
    for side in (1, -1):
        for v in sorted(rot):
            for w in rot[v]:
                start = (v, w, side)
                if start in used:
                    continue
                darts = []
                state = start
                while True:
                    if state in used:
                        raise EmbeddingError("face tracing revisited a state; rotation data is inconsistent")
                    a, b, s = state
                    used.add(state)
                    s2 = s * emb.signs[edge_key(a, b)]
                    used.add((b, a, -s2))
                    darts.append(state)
                    k = len(rot[b])
                    i = pos[b][a]
                    c = rot[b][(i - 1) % k] if s2 > 0 else rot[b][(i + 1) % k]
                    state = (b, c, s2)
                    if state == start:
                        break
                walks.append(FaceWalk(tuple(darts)))
    total = sum(len(w) for w in walks)
    if total != 2 * emb.m:
        raise EmbeddingError(f"face walks cover {total} edge sides, expected {2 * emb.m}")
    return walks


def _tree_flips(emb: Embedding) -> dict[int, int]:
    """Vertex flips making every edge of a BFS spanning tree positive."""
    flips = {1: 1}
    queue = deque([1])
    while queue:
        v = queue.popleft()
        for u in emb.rotations[v]:
            if u not in flips:
                flips[u] = flips[v] * emb.sign(u, v)
                queue.append(u)
    return flips


def orientability(emb: Embedding) -> bool:
    """True iff vertex flips can make every edge sign positive."""
    flips = _tree_flips(emb)
    return all(s * flips[u] * flips[v] == 1 for (u, v), s in emb.signs.items())


def euler_characteristic(emb: Embedding) -> int:
    return emb.euler_characteristic


def surface_of(emb: Embedding) -> SurfaceSpec:
    return SurfaceSpec.from_euler(emb.euler_characteristic, emb.orientable)


# ---------------------------------------------------------------------------
# Assembly from a face system
# ---------------------------------------------------------------------------


def from_faces(faces: Iterable[Sequence[int]], n: int | None = None) -> Embedding:
    """Glue polygonal faces (given as vertex cycles) into a signed rotation system.

    Every edge must lie on exactly two face sides and the corners at each
    vertex must chain into a single cycle.  If the faces are coherently
    oriented (each directed edge used at most once) the result has all signs
    positive and :func:`trace_faces` returns the faces in the given direction.
    """
    faces = [tuple(f) for f in faces]
    verts = {v for f in faces for v in f}
    if n is None:
        n = max(verts)
    if verts != set(range(1, n + 1)):
        raise EmbeddingError("faces must use exactly the vertices 1..n")
    corners: dict[int, list[tuple[int, int, int]]] = defaultdict(list)
    sides: dict[Edge, int] = defaultdict(int)
    for fi, f in enumerate(faces):
        if len(set(f)) != len(f) or len(f) < 3:
            raise EmbeddingError(f"face {f} must be a cycle on distinct vertices")
        k = len(f)
        for j in range(k):
            a, v, b = f[j - 1], f[j], f[(j + 1) % k]
            corners[v].append((a, b, fi))
            sides[edge_key(v, b)] += 1
    bad = [e for e, c in sides.items() if c != 2]
    if bad:
        raise EmbeddingError(f"edges not covered exactly twice: {sorted(bad)[:5]}")

    rotations: dict[int, tuple[int, ...]] = {}
    eps: dict[tuple[int, int], int] = {}
    for v in range(1, n + 1):
        cs = corners[v]
        link: dict[int, list[int]] = defaultdict(list)
        for idx, (a, b, _) in enumerate(cs):
            link[a].append(idx)
            link[b].append(idx)
        a0, b0, _ = cs[0]
        seq = [a0]
        used = {0}
        cur, prev_idx = b0, 0
        while cur != a0:
            seq.append(cur)
            nxt = [i for i in link[cur] if i != prev_idx]
            if len(nxt) != 1 or nxt[0] in used:
                raise EmbeddingError(f"link of vertex {v} is not a single cycle")
            i = nxt[0]
            used.add(i)
            a, b, _ = cs[i]
            cur = a if b == cur else b
            prev_idx = i
        if len(used) != len(cs):
            raise EmbeddingError(f"link of vertex {v} is not a single cycle")
        rot = tuple(reversed(seq))
        rotations[v] = rot
        k = len(rot)
        where = {u: i for i, u in enumerate(rot)}
        for a, b, fi in cs:
            eps[(fi, v)] = 1 if rot[(where[a] - 1) % k] == b else -1

    signs: dict[Edge, int] = {}
    for fi, f in enumerate(faces):
        k = len(f)
        for j in range(k):
            v, w = f[j], f[(j + 1) % k]
            s = eps[(fi, v)] * eps[(fi, w)]
            e = edge_key(v, w)
            if signs.setdefault(e, s) != s:
                raise EmbeddingError(f"inconsistent sign on edge {e}")
    return Embedding(rotations, signs)


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------


def is_quadrangular(emb: Embedding) -> bool:
    return all(len(f) == 4 and len(set(f.vertices)) == 4 for f in emb.faces())


def face_edges(face: Sequence[int]) -> list[Edge]:
    return [edge_key(face[i], face[(i + 1) % len(face)]) for i in range(len(face))]


def _shared_edge_counts(emb: Embedding) -> dict[tuple[int, int], int]:
    owners: dict[Edge, list[int]] = defaultdict(list)
    for i, f in enumerate(emb.face_tuples()):
        for e in face_edges(f):
            owners[e].append(i)
    counts: dict[tuple[int, int], int] = defaultdict(int)
    for fs in owners.values():
        if len(fs) == 2 and fs[0] != fs[1]:
            counts[tuple(sorted(fs))] += 1
    return counts


def is_face_simple(emb: Embedding) -> bool:
    """True iff no two distinct faces share two or more edges."""
    return all(c < 2 for c in _shared_edge_counts(emb).values())


def dual_graph(emb: Embedding) -> dict[int, list[int]]:
    """Dual multigraph: face index -> adjacent face indices (with repeats)."""
    owners: dict[Edge, list[int]] = defaultdict(list)
    for i, f in enumerate(emb.face_tuples()):
        for e in face_edges(f):
            owners[e].append(i)
    adj: dict[int, list[int]] = {i: [] for i in range(emb.r)}
    for a, b in owners.values():
        adj[a].append(b)
        adj[b].append(a)
    return {i: sorted(v) for i, v in adj.items()}


@dataclass(frozen=True)
class TouchReport:
    max_touch: int
    pair: tuple[int, int] | None
    polyhedral: bool


def _touch_count(f: Face, g: Face) -> int:
    shared = set(f) & set(g)
    if not shared:
        return 0
    fe, ge = set(face_edges(f)), set(face_edges(g))
    common = fe & ge
    # components of the intersection subcomplex
    parent = {v: v for v in shared}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in common:
        parent[find(u)] = find(v)
    comps = len({find(v) for v in shared})
    return comps + max(0, len(common) - 1)


def face_touch_multiplicity(emb: Embedding) -> TouchReport:
    """How often two distinct faces touch (maximum over all pairs).

    A pair touches once when its boundaries meet in exactly one vertex or one
    edge.  Each further component of the intersection, and each shared edge
    beyond the first, counts as another touch.  The embedding is polyhedral
    iff the maximum is at most 1.
    """
    faces = emb.face_tuples()
    best, pair = 0, None
    for i, j in combinations(range(len(faces)), 2):
        c = _touch_count(faces[i], faces[j])
        if c > best:
            best, pair = c, (i, j)
    return TouchReport(best, pair, best <= 1)


# ---------------------------------------------------------------------------
# Face matching helpers
# ---------------------------------------------------------------------------


def cyclic_rotations(face: Sequence[int]) -> list[Face]:
    k = len(face)
    return [tuple(face[(i + j) % k] for j in range(k)) for i in range(k)]


def same_cycle(f: Sequence[int], g: Sequence[int], directed: bool = True) -> bool:
    """Equality of faces as cyclic sequences (optionally up to reversal)."""
    g = tuple(g)
    if len(f) != len(g):
        return False
    if g in cyclic_rotations(f):
        return True
    return not directed and g in cyclic_rotations(tuple(reversed(f)))


def canonical_face(face: Sequence[int], directed: bool = True) -> Face:
    """Lexicographically least rotation (and reversal when undirected)."""
    cands = cyclic_rotations(face)
    if not directed:
        cands += cyclic_rotations(tuple(reversed(face)))
    return min(cands)


def matches_pattern(face: Sequence[int], pattern: Sequence[int | None], directed: bool = True) -> bool:
    """Match a face against a pattern where ``None`` entries are wildcards."""
    if len(face) != len(pattern):
        return False
    cands = cyclic_rotations(face)
    if not directed:
        cands += cyclic_rotations(tuple(reversed(face)))
    return any(all(p is None or p == x for p, x in zip(pattern, c)) for c in cands)


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Claim:
    n: int
    t: int
    surface: SurfaceSpec
    missing_edges: frozenset[Edge] | None = None


@dataclass
class Certificate:
    n: int
    m: int
    t: int
    r: int
    chi: int
    orientable: bool
    surface: SurfaceSpec | None
    face_simple: bool
    missing_edges: list[Edge]
    checks: list[tuple[str, bool]]

    @property
    def ok(self) -> bool:
        return all(passed for _, passed in self.checks)

    def failed(self) -> list[str]:
        return [name for name, passed in self.checks if not passed]

    def summary_line(self) -> str:
        missing = " ".join(f"{u}-{v}" for u, v in self.missing_edges)
        return (
            f"n={self.n} t={self.t} m={self.m} r={self.r} chi={self.chi} "
            f"orientable={int(self.orientable)} face_simple={int(self.face_simple)} "
            f"surface={self.surface} missing={{{missing}}}"
        )

    def render(self) -> str:
        lines = [self.summary_line()]
        lines += [f"  [{'PASS' if ok else 'FAIL'}] {name}" for name, ok in self.checks]
        return "\n".join(lines)


def certify(emb: Embedding, claim: Claim | None = None) -> Certificate:
    """Recompute every quantity of ``emb`` and compare with ``claim``.

    Failed checks are recorded rather than raised.
    """
    checks: list[tuple[str, bool]] = []
    n, m = emb.n, emb.m
    try:
        r = emb.r
        traced = True
    except EmbeddingError:
        r, traced = 0, False
    checks.append(("faces traceable", traced))
    chi = n - m + r
    orient = emb.orientable
    try:
        surface = SurfaceSpec.from_euler(chi, orient) if traced else None
        consistent = surface is not None
    except EmbeddingError:
        surface, consistent = None, False
    checks.append(("surface consistent (chi <= 2, parity)", consistent))
    quad = traced and is_quadrangular(emb)
    checks.append(("quadrangular", quad))
    if quad:
        checks.append(("edge sides 2m = 4r", 2 * m == 4 * r))
    fs = quad and is_face_simple(emb)
    missing = sorted(emb.missing_edges())
    t = n * (n - 1) // 2 - m
    if claim is not None:
        checks.append((f"n = {claim.n}", n == claim.n))
        checks.append((f"m = C(n,2) - {claim.t}", t == claim.t))
        checks.append((f"orientable = {claim.surface.orientable}", orient == claim.surface.orientable))
        checks.append((f"surface = {claim.surface}", surface == claim.surface))
        if claim.missing_edges is not None:
            checks.append(("missing edge set", set(missing) == set(claim.missing_edges)))
    return Certificate(n, m, t, r, chi, orient, surface, fs, missing, checks)


def face_set(emb: Embedding, directed: bool = False) -> frozenset[Face]:
    """Faces as canonical cycles; equal face sets mean flip-equivalent embeddings."""
    return frozenset(canonical_face(f, directed) for f in emb.face_tuples())
