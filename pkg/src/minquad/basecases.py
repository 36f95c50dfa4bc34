"""The small embeddings every inductive construction starts from.

Each base case is stated as a set of constraints (graph, surface, faces that
must be present, named diagonals).  The rotation data under ``data/`` was
produced once from those constraints by the exhaustive search in
:mod:`minquad.oracle` (see ``scripts/derive_base_cases.py``) and is
re-certified against the same constraints every time it is loaded.

The nonorientable order-8 family is stored differently: as the planar cube
plus a replayable surgery log (four crosscaps, a Type IV handle, two more
crosscaps) whose intermediate stages give t = 8, 4, 2, 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from itertools import combinations, permutations, product

from .embedding import (
    Claim,
    Embedding,
    EmbeddingError,
    canonical_face,
    SurfaceSpec,
    certify,
    edge_key,
    face_set,
    from_faces,
    matches_pattern,
)
from .io import dumps, loads
from .oracle import SearchProblem, find_one
from .surgery import HandleType, SurgeryStep, apply_step, crosscap_addition, handle_addition, SurgeryError


class BaseCaseError(EmbeddingError):
    """A stored base case does not satisfy its constraints."""


Diag = tuple[tuple[int, int], tuple[int, ...]]


@dataclass(frozen=True)
class BaseCase:
    name: str
    n: int
    missing: tuple[tuple[int, int], ...]
    surface: SurfaceSpec
    required_faces: tuple[tuple[int, ...], ...] = ()
    diagonals: tuple[Diag, ...] = ()
    note: str = ""

    @property
    def t(self) -> int:
        return len(self.missing)

    @property
    def directed(self) -> bool:
        return self.surface.orientable

    def problem(self) -> SearchProblem:
        faces = list(self.required_faces) + [sq for _, sq in self.diagonals]
        uniq = []
        for f in faces:
            if f not in uniq:
                uniq.append(f)
        return SearchProblem.complete_minus(
            self.n,
            self.missing,
            target_chi=self.surface.euler_characteristic,
            orientable=self.surface.orientable,
            required_faces=uniq,
        )

    def claim(self) -> Claim:
        return Claim(self.n, self.t, self.surface, frozenset(edge_key(*e) for e in self.missing))


def _s(text: str) -> SurfaceSpec:
    return SurfaceSpec.parse(text)


BASE_CASES: dict[str, BaseCase] = {
    bc.name: bc
    for bc in [
        BaseCase("c4", 4, ((1, 3), (2, 4)), _s("S0"), note="4-cycle in the sphere, Q(4,2)"),
        BaseCase("cube", 8, tuple(sorted(set(combinations(range(1, 9), 2)) - {
            (1, 2), (2, 3), (3, 4), (1, 4), (5, 6), (6, 7), (7, 8), (5, 8), (1, 5), (2, 6), (3, 7), (4, 8)})),
            _s("S0"), required_faces=((1, 2, 3, 4),), note="planar cube, face-simple, n'(S0)=8"),
        BaseCase("k4", 4, (), _s("N1"), note="K4 in the projective plane"),
        BaseCase(
            "phi5", 5, (), _s("S1"),
            diagonals=(((1, 5), (1, 4, 5, 2)), ((3, 4), (3, 5, 4, 2)), ((4, 5), (4, 1, 5, 3)), ((2, 3), (2, 4, 3, 1))),
            note="K5 in the torus with a full diagonal set",
        ),
        BaseCase("k6e1", 6, ((5, 6),), _s("N3"), note="K6 minus an edge, Q~(6,1)"),
        BaseCase("k6e3", 6, ((1, 3), (2, 6), (3, 4)), _s("N2"), note="minimal quadrangulation of N2"),
        BaseCase(
            "phi7", 7, ((1, 6),), _s("N5"),
            required_faces=((2, 6, 5, 7), (1, 4, 5, 7), (1, 5, 4, 7)),
            diagonals=(((1, 3), (1, 2, 3, 5)), ((2, 3), (2, 1, 3, 5)), ((4, 6), (4, 2, 6, 3)), ((5, 7), (5, 2, 7, 6))),
            note="K7 minus an edge in N5; edges 1-7 and 4-5 cross in a removable crosscap",
        ),
        BaseCase(
            "phi8", 8, (), _s("S4"),
            diagonals=(((1, 2), (1, 6, 2, 5)), ((3, 4), (3, 7, 4, 8)), ((5, 6), (5, 8, 6, 4)), ((7, 8), (7, 1, 8, 2))),
            note="K8 in S4 with a perfect diagonal set",
        ),
        BaseCase("o8", 8, ((1, 2), (3, 4), (5, 6), (7, 8)), _s("S3"), note="octahedral graph K_{2,2,2,2}, Q(8,4)"),
    ]
}

# Nonorientable K8 minus {1-7, 3-5} with the perfect diagonal set used by the
# even nonorientable induction.
NQ8_MISSING = ((1, 7), (3, 5))
NQ8_DIAGONALS: tuple[Diag, ...] = (
    ((8, 1), (8, 4, 1, 5)),
    ((2, 3), (2, 8, 3, 1)),
    ((4, 5), (4, 6, 5, 7)),
    ((6, 7), (6, 2, 7, 3)),
)
NQ8_T_SEQUENCE = (8, 4, 2, 0)


def check_base(emb: Embedding, bc: BaseCase) -> list[str]:
    """Problems with ``emb`` as an instance of ``bc`` (empty list = certified)."""
    problems = []
    cert = certify(emb, bc.claim())
    problems += [f"certificate: {name}" for name in cert.failed()]
    faces = emb.face_tuples()
    for pat in bc.required_faces:
        if not any(matches_pattern(f, pat, bc.directed) for f in faces):
            problems.append(f"missing face {pat}")
    problems += check_diagonals(emb, bc.diagonals, bc.directed)
    return problems


def check_diagonals(emb: Embedding, diagonals, directed: bool) -> list[str]:
    problems = []
    faces = emb.face_tuples()
    used = []
    for (a, b), sq in diagonals:
        if not any(matches_pattern(f, sq, directed) for f in faces):
            problems.append(f"underlying square {sq} of ({a},{b}) is not a face")
        if {sq[0], sq[2]} != {a, b} and {sq[1], sq[3]} != {a, b}:
            problems.append(f"({a},{b}) is not a diagonal of {sq}")
        used.append(canonical_face(sq, directed))
    if len(set(used)) != len(used):
        problems.append("diagonal set reuses an underlying square")
    return problems


def _data_text(filename: str) -> str:
    return resources.files("minquad").joinpath("data").joinpath(filename).read_text()


@lru_cache(maxsize=None)
def load_base(name: str) -> Embedding:
    """Load and certify a stored base case; raises :class:`BaseCaseError` on failure."""
    bc = BASE_CASES[name]
    emb = loads(_data_text(f"{name}.emb"))
    problems = check_base(emb, bc)
    if problems:
        raise BaseCaseError(f"base case {name}: " + "; ".join(problems))
    return emb


def derive(name: str, node_cap: int | None = None) -> Embedding:
    """Find the first embedding satisfying a base case's constraints."""
    bc = BASE_CASES[name]
    kw = {} if node_cap is None else {"node_cap": node_cap}
    emb = find_one(bc.problem(), **kw)
    if emb is None:
        raise BaseCaseError(f"no embedding satisfies the constraints of {name}")
    problems = check_base(emb, bc)
    if problems:
        raise BaseCaseError(f"derived {name} fails its own constraints: {problems}")
    return emb


# ---------------------------------------------------------------------------
# Nonorientable order-8 chain
# ---------------------------------------------------------------------------


@dataclass
class Chain:
    cube: Embedding
    steps: list[SurgeryStep]
    stages: list[Embedding] = field(default_factory=list)

    def by_t(self) -> dict[int, Embedding]:
        return {28 - e.m: e for e in self.stages}


def _orientations(face, directed: bool):
    rots = [tuple(face[(i + j) % 4] for j in range(4)) for i in range(4)]
    if directed:
        return rots
    rev = tuple(reversed(face))
    return rots + [tuple(rev[(i + j) % 4] for j in range(4)) for i in range(4)]


def _nq8_relabelling(emb: Embedding) -> dict[int, int] | None:
    """Map ``emb`` (K8 minus two disjoint edges) onto the labelled target, if possible."""
    miss = sorted(emb.missing_edges())
    if len(miss) != 2 or set(miss[0]) & set(miss[1]):
        return None
    target_faces = [sq for _, sq in NQ8_DIAGONALS]
    for (a, b), (c, d) in ((miss[0], miss[1]), (miss[1], miss[0])):
        for (x1, x7), (x3, x5) in product(((a, b), (b, a)), ((c, d), (d, c))):
            rest = [v for v in range(1, 9) if v not in (x1, x7, x3, x5)]
            for perm in permutations(rest):
                mapping = {x1: 1, x7: 7, x3: 3, x5: 5}
                mapping.update(dict(zip(perm, (2, 4, 6, 8))))
                faces = face_set(emb.relabel(mapping))
                if all(canonical_face(sq, directed=False) in faces for sq in target_faces):
                    return mapping
    return None


def derive_nq8_chain() -> Chain:
    """Search crosscap/handle choices on the planar cube until K8 is reached.

    Order: four crosscaps on distinct cube faces (t = 8), one Type IV handle
    (t = 4), a crosscap giving the labelled K8 - {1-7, 3-5} (t = 2) and a final
    crosscap (t = 0).  The first success in deterministic order is returned,
    relabelled so that the t = 2 stage carries the named diagonal set.
    """
    cube = load_base("cube")
    cube_faces = cube.face_tuples()
    for four in combinations(range(6), 4):
        e8, steps8 = cube, []
        for i in four:
            e8, st = crosscap_addition(e8, cube_faces[i])
            steps8.append(st)
        missing8 = e8.missing_edges()
        faces8 = e8.face_tuples()
        for fa, fb in permutations(range(len(faces8)), 2):
            for outer in _orientations(faces8[fa], False):
                for inner in _orientations(faces8[fb], False):
                    chords = [(outer[0], inner[0]), (outer[1], inner[3]), (outer[2], inner[2]), (outer[3], inner[1])]
                    if any(edge_key(*c) not in missing8 for c in chords if c[0] != c[1]) or any(
                        c[0] == c[1] for c in chords
                    ):
                        continue
                    try:
                        e4, st4 = handle_addition(e8, outer, inner, HandleType.IV)
                    except SurgeryError:
                        continue
                    found = _finish_chain(e4)
                    if found is None:
                        continue
                    e2, st2, e0, st0, mapping = found
                    steps = steps8 + [st4, st2, st0]
                    return _relabel_chain(cube, steps, mapping)
    raise BaseCaseError("no crosscap/handle sequence on the cube reaches K8")


def _finish_chain(e4: Embedding):
    missing4 = e4.missing_edges()
    for f in e4.face_tuples():
        if edge_key(f[0], f[2]) not in missing4 or edge_key(f[1], f[3]) not in missing4:
            continue
        e2, st2 = crosscap_addition(e4, f)
        mapping = _nq8_relabelling(e2)
        if mapping is None:
            continue
        for g in e2.face_tuples():
            if {edge_key(g[0], g[2]), edge_key(g[1], g[3])} == e2.missing_edges():
                e0, st0 = crosscap_addition(e2, g)
                return e2, st2, e0, st0, mapping
    return None


def _relabel_step(step: SurgeryStep, mapping: dict[int, int]) -> SurgeryStep:
    def m(face):
        return tuple(mapping[v] for v in face) if face else face

    return SurgeryStep(step.kind, m(step.outer), m(step.inner), step.handle_type)


def _relabel_chain(cube: Embedding, steps, mapping) -> Chain:
    cube2 = from_faces([tuple(mapping[v] for v in f) for f in cube.face_tuples()], 8)
    steps2 = [_relabel_step(s, mapping) for s in steps]
    return replay_chain(cube2, steps2)


def replay_chain(cube: Embedding, steps) -> Chain:
    emb = cube
    out = Chain(cube, [], [])
    for st in steps:
        emb, done = apply_step(emb, st)
        out.steps.append(done)
        if emb.m in (20, 24, 26, 28):
            out.stages.append(emb)
    return out


@lru_cache(maxsize=None)
def load_nq8_chain() -> Chain:
    """Replay the stored chain and certify its t = 8, 4, 2, 0 stages."""
    cube = loads(_data_text("nq8_cube.emb"))
    cert = certify(cube, Claim(8, 16, SurfaceSpec(True, 0)))
    if not cert.ok:
        raise BaseCaseError(f"stored cube fails: {cert.failed()}")
    steps = [SurgeryStep.from_line(ln) for ln in _data_text("nq8_chain.log").splitlines() if ln.strip()]
    chain = replay_chain(cube, steps)
    problems = check_nq8_chain(chain)
    if problems:
        raise BaseCaseError("nQ(8) chain: " + "; ".join(problems))
    return chain


def check_nq8_chain(chain: Chain) -> list[str]:
    problems = []
    ts = [28 - e.m for e in chain.stages]
    if tuple(ts) != NQ8_T_SEQUENCE:
        problems.append(f"intermediate t values {ts}, expected {list(NQ8_T_SEQUENCE)}")
        return problems
    for e in chain.stages:
        t = 28 - e.m
        chi = 8 - e.m // 2
        cert = certify(e, Claim(8, t, SurfaceSpec.from_euler(chi, False)))
        problems += [f"t={t}: {x}" for x in cert.failed()]
    e2 = chain.stages[2]
    if e2.missing_edges() != {edge_key(*x) for x in NQ8_MISSING}:
        problems.append(f"t=2 stage misses {sorted(e2.missing_edges())}")
    problems += [f"t=2: {p}" for p in check_diagonals(e2, NQ8_DIAGONALS, directed=False)]
    return problems


def nq8(t: int) -> Embedding:
    return load_nq8_chain().by_t()[t]


def write_nq8_chain(chain: Chain, data_dir) -> None:
    (data_dir / "nq8_cube.emb").write_text(dumps(chain.cube))
    (data_dir / "nq8_chain.log").write_text("".join(st.to_line() + "\n" for st in chain.steps))
