"""The four inductive constructions as scripted stages.

Every induction step adds eight (orientable) or four (nonorientable) vertices
through a fixed sequence of stages.  Each stage is a list of ops for
:func:`minquad.stages.run_stage` plus the diagonal set and missing-edge set
the stage must end with.  The driver records a snapshot whenever the number
of missing edges reaches an admissible value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

from .basecases import BASE_CASES, NQ8_DIAGONALS, load_base, load_nq8_chain
from .embedding import Embedding, edge_key, matches_pattern
from .ledger import Ledger, classify, pair_key
from .stages import (
    D,
    Make,
    Op,
    R,
    State,
    X,
    crosscap,
    disc,
    drop,
    handle,
    replay_stage,
    run_stage,
)
from .surgery import SurgeryStep, crosscap_removal, relabel as relabel_emb

Expected = list[tuple[tuple[int, int], tuple | None]]


def admissible_t_set(n: int, orientable: bool) -> list[int]:
    """Values 0 <= t <= n-4 congruent to n(n-5)/2 modulo 4 (orientable) or 2."""
    if n < 4:
        raise ValueError("n must be at least 4")
    mod = 4 if orientable else 2
    f = n * (n - 5) // 2
    return [t for t in range(0, n - 3) if (t - f) % mod == 0]


@dataclass(frozen=True)
class Snapshot:
    n: int
    t: int
    orientable: bool
    emb: Embedding
    base: str
    steps: tuple[SurgeryStep, ...]
    origin: str


@dataclass
class StageReport:
    pipeline: str
    n_from: int
    stage: str
    problems: list[str]
    state: State

    @property
    def ok(self) -> bool:
        return not self.problems

    def render(self) -> str:
        head = f"# {self.pipeline} from n={self.n_from} {self.stage}: {'ok' if self.ok else self.problems}"
        missing = " ".join(f"{u}-{v}" for u, v in sorted(self.state.emb.missing_edges()))
        return f"{head}\nmissing: {{{missing}}}\n{self.state.ledger.dump()}"


@dataclass(frozen=True)
class StageSpec:
    name: str
    ops: tuple[Op, ...]
    expected: Expected
    missing: frozenset[tuple[int, int]]
    # missing edges of the crosscap-omitting variant the next stage starts from
    missing_omitted: frozenset[tuple[int, int]] | None = None
    extra_check: Callable[[State], list[str]] | None = None


def _edges(*pairs) -> frozenset[tuple[int, int]]:
    return frozenset(edge_key(*p) for p in pairs)


def stage_problems(st: State, expected: Expected, missing) -> list[str]:
    problems = st.ledger.validate(st.emb)
    problems += st.ledger.matches(expected)
    got = st.emb.missing_edges()
    if got != set(missing):
        problems.append(f"missing edges {sorted(got)}, expected {sorted(missing)}")
    return problems


def _ledger_from(diagonals, directed: bool) -> Ledger:
    led = Ledger(directed)
    for pair, sq in diagonals:
        led.add(pair, sq)
    return led


def release_all(st: State, keep: Sequence[str] = ()) -> State:
    """End of an induction step: stage-local reservations become ordinary faces."""
    led = st.ledger.copy()
    for tag in list(led.reserved):
        if tag not in keep:
            led.release(tag)
    return State(st.emb, led, st.base, st.steps)


def apply_relabel(st: State, mapping: dict[int, int], reserved: dict[str, str] | None = None) -> State:
    full = {v: mapping.get(v, v) for v in range(1, st.emb.n + 1)}
    emb, step = relabel_emb(st.emb, full)
    led = st.ledger.relabel(full)
    for old, new in (reserved or {}).items():
        led.reserved[new] = led.reserved.pop(old)
    return State(emb, led, st.base, st.steps + (step,))


class Pipeline:
    """Common driver: run stages, take snapshots, keep stage reports."""

    name = ""
    orientable = True

    def __init__(self):
        self.snapshots: dict[tuple[int, int], Snapshot] = {}
        self.reports: list[StageReport] = []
        self.state: State | None = None

    def _snap(self, st: State, origin: str) -> None:
        n = st.emb.n
        t = n * (n - 1) // 2 - st.emb.m
        if n >= 4 and t in admissible_t_set(n, self.orientable) and (n, t) not in self.snapshots:
            self.snapshots[(n, t)] = Snapshot(n, t, self.orientable, st.emb, st.base, st.steps, origin)

    def run_spec(self, st: State, spec: StageSpec, n_from: int, continue_omitting: Sequence[int] | None = None) -> State:
        """Run one stage; snapshot the full run and every crosscap-omission variant."""
        origin = f"{self.name} from n={n_from} {spec.name}"

        def check(s: State) -> list[str]:
            probs = stage_problems(s, spec.expected, spec.missing)
            if spec.extra_check:
                probs += spec.extra_check(s)
            return probs

        executed = run_stage(st, spec.ops, final_check=check)
        end = executed[-1].state
        self.reports.append(StageReport(self.name, n_from, spec.name, check(end), end))
        for ex in executed:
            if ex.step is not None:
                self._snap(ex.state, origin)
        optional = [i for i, ex in enumerate(executed) if ex.op.optional]
        result = end
        for k in range(1, len(optional) + 1):
            for omit in combinations(optional, k):
                variant = replay_stage(st, executed, frozenset(omit))
                for ex in variant:
                    if ex.step is not None:
                        self._snap(ex.state, f"{origin} omitting op(s) {list(omit)}")
                if continue_omitting is not None and list(omit) == [optional[i] for i in continue_omitting]:
                    result = variant[-1].state
                    # the squares kept for the omitted crosscaps are ordinary faces now
                    for i in omit:
                        tag = executed[i].op.outer.tag
                        if tag in result.ledger.reserved:
                            result.ledger.release(tag)
        if continue_omitting:
            name = f"{spec.name} without optional crosscap(s)"
            probs = stage_problems(result, spec.expected, spec.missing_omitted or spec.missing)
            if spec.extra_check:
                probs += spec.extra_check(result)
            self.reports.append(StageReport(self.name, n_from, name, probs, result))
        return result

    # subclasses provide start() and step()
    def start(self) -> State:  # pragma: no cover - abstract
        raise NotImplementedError

    def step(self, st: State) -> State:  # pragma: no cover - abstract
        raise NotImplementedError

    def run(self, n_max: int) -> "Pipeline":
        """Continue the induction until the order reaches ``n_max``."""
        if self.state is None:
            self.state = self.start()
        while self.state.emb.n < n_max:
            self.state = self.step(self.state)
        return self


# ---------------------------------------------------------------------------
# Orientable, even order
# ---------------------------------------------------------------------------


def orientable_even_stages(n: int) -> list[StageSpec]:
    a, b, c, d, e, f, g, h = range(n + 1, n + 9)
    pairs = [(i, i + 1) for i in range(1, n, 2)]
    rest = pairs[3:]  # (7,8), ..., (n-1,n)

    def base_expected(skip=()):
        return [(p, None) for p in pairs if p not in skip]

    s1 = [disc(D(1, 2), (a, b), Make((a, 2, b, 1)))]
    s1.append(handle("I", D(a, b), D(3, 4), Make((a, 4, X, 3), reserve="S1a", home=(3, 4))))
    s1.append(handle("I", D(a, b), D(5, 6), Make((b, 5, X, 6), reserve="S1b", home=(5, 6))))
    s1 += [handle("I", D(a, b), D(*p)) for p in rest]
    exp1 = base_expected(skip=((3, 4), (5, 6))) + [((3, 4), (a, 4, X, 3)), ((5, 6), (b, 5, X, 6)), ((a, b), None)]

    s2 = [disc(D(1, 2), (c, d))]
    s2.append(handle("I", D(c, d), R("S1a", pair=(3, 4)), Make((a, 4, c, 3), reserve="S2a", home=(a, c))))
    s2.append(handle("I", D(c, d), R("S1b", pair=(5, 6)), Make((b, 5, d, 6), reserve="S2b", home=(b, d))))
    s2 += [handle("I", D(c, d), D(*p)) for p in rest]
    s2 += [handle("I", D(c, d), D(a, b)), drop((a, b), (c, d))]
    exp2 = base_expected() + [((a, c), (a, 4, c, 3)), ((b, d), (b, 5, d, 6))]

    s3 = [disc(D(1, 2), (e, f))]
    s3 += [handle("I", D(e, f), D(*p)) for p in pairs[1:]]
    s3.append(handle("I", D(e, f), R("S2a", pair=(a, c)), Make((a, 4, c, e), reserve="S3a", home=(a, c))))
    s3.append(handle("I", D(e, f), R("S2b", pair=(b, d)), Make((b, f, d, 6), reserve="S3b", home=(b, d))))
    exp3 = base_expected() + [((a, c), (a, 4, c, e)), ((b, d), (b, f, d, 6)), ((e, f), None)]

    s4 = [disc(D(1, 2), (g, h))]
    s4 += [handle("I", D(g, h), D(*p)) for p in pairs[1:] + [(e, f)]]
    s4.append(handle("I", D(g, h), R("S3a", pair=(a, c)), Make((a, g, c, e), reserve="S4a")))
    s4.append(handle("I", D(g, h), R("S3b", pair=(b, d)), Make((b, f, d, h), reserve="S4b")))
    s4.append(handle("IV", R("S4a", fixed={0: a, 1: g, 2: c, 3: e}), R("S4b", fixed={0: b, 1: f, 2: d, 3: h})))
    exp4 = base_expected() + [((a, c), None), ((b, d), None), ((e, f), None), ((g, h), None)]

    return [
        StageSpec("stage 1", tuple(s1), exp1, _edges((a, b))),
        StageSpec("stage 2", tuple(s2), exp2, _edges((a, b), (c, d))),
        StageSpec("stage 3", tuple(s3), exp3, _edges((a, b), (c, d), (e, f))),
        StageSpec("stage 4", tuple(s4), exp4, frozenset()),
    ]


class OrientableEven(Pipeline):
    """Complete graphs K_n, n = 0 mod 8 step from the K_8 embedding in S_4."""

    name = "orientable-even"
    orientable = True

    def start(self) -> State:
        bc = BASE_CASES["phi8"]
        emb = load_base("phi8")
        st = State(emb, _ledger_from(bc.diagonals, True), "phi8")
        self._snap(st, "base phi8")
        o8 = load_base("o8")
        self._snap(State(o8, Ledger(True), "o8"), "base o8")
        return st

    def step(self, st: State) -> State:
        n = st.emb.n
        for spec in orientable_even_stages(n):
            st = self.run_spec(st, spec, n)
        # pairs (n+1,n+3) and (n+2,n+4) become consecutive
        return apply_relabel(release_all(st), {n + 2: n + 3, n + 3: n + 2})


# ---------------------------------------------------------------------------
# Orientable, odd order
# ---------------------------------------------------------------------------


@dataclass
class OddContext:
    y: list[tuple[int, int]]  # ends with the pair containing v1; misses v2
    z: list[tuple[int, int]]  # ends with the pair containing v2; misses v1


def orientable_odd_stages(n: int, ctx: OddContext) -> list[StageSpec]:
    a, b, c, d, e, f, g, h = range(n + 1, n + 9)
    Y, Z = ctx.y, ctx.z
    base = [(p, None) for p in dict.fromkeys(pair_key(*p) for p in Y + Z)]

    s1 = [disc(D(*Y[0]), (a, b), Make((a, Y[0][1], b, Y[0][0])))]
    for k, p in enumerate(Y[1:], 1):
        mk = (Make((a, X, b, 1), reserve="T1"),) if k == len(Y) - 1 else ()
        s1.append(handle("I", D(a, b), D(*p), *mk))
    exp1 = base + [((a, b), None)]

    s2 = [disc(D(*Z[0]), (c, d))]
    for k, p in enumerate(Z[1:], 1):
        mk = (Make((c, X, d, 2), reserve="T2"),) if k == len(Z) - 1 else ()
        s2.append(handle("I", D(c, d), D(*p), *mk))
    s2 += [handle("I", D(c, d), D(a, b)), drop((a, b), (c, d))]
    s2.append(
        handle(
            "II", R("T2", pair=(c, d), fixed={3: 2}), R("T1", pair=(a, b), fixed={3: 1}),
            Make((a, 2, c, 1), reserve="T2a", home=(a, c)), Make((b, 1, d, 2), reserve="T2b", home=(b, d)),
        )
    )
    exp2 = base + [((a, c), (a, 2, c, 1)), ((b, d), (b, 1, d, 2))]

    s3 = [disc(D(*Z[0]), (e, f))]
    s3 += [handle("I", D(e, f), D(*p)) for p in Z[1:]]
    s3.append(handle("I", D(e, f), R("T2a", pair=(a, c)),
                     Make((a, e, c, 1), reserve="T3a", home=(a, c)), Make((e, X, f, c), reserve="T3c")))
    s3.append(handle("I", D(e, f), R("T2b", pair=(b, d)),
                     Make((b, f, d, 2), reserve="T3b", home=(b, d)), Make((e, b, 1, d), reserve="T3d")))
    s3.append(handle("III", R("T3c", fixed={0: e, 2: f, 3: c}), R("T3d", fixed={0: d, 1: e, 2: b, 3: 1})))
    exp3 = base + [((a, c), (a, e, c, 1)), ((b, d), (b, f, d, 2)), ((e, f), None)]

    s4 = [disc(D(*Z[0]), (g, h))]
    s4 += [handle("I", D(g, h), D(*p)) for p in Z[1:] + [(e, f)]]
    s4.append(handle("I", D(g, h), R("T3a", pair=(a, c)), Make((a, g, c, 1), reserve="T4a")))
    s4.append(handle("I", D(g, h), R("T3b", pair=(b, d)), Make((g, X, h, b), reserve="T4b")))
    s4.append(handle("III", R("T4b", fixed={0: g, 2: h, 3: b}), R("T4a", fixed={0: a, 1: g, 2: c, 3: 1})))
    exp4 = base + [((a, c), None), ((b, d), None), ((e, f), None), ((g, h), None)]

    def split_check(new_pairs):
        def check(st: State) -> list[str]:
            verts = range(1, st.emb.n + 1)
            probs = []
            c1 = classify(list(Y) + new_pairs, verts)
            c2 = classify(list(Z) + new_pairs, verts)
            if str(c1) != "v2-nearly-perfect":
                probs.append(f"first subset is {c1}, expected v2-nearly-perfect")
            if str(c2) != "v1-nearly-perfect":
                probs.append(f"second subset is {c2}, expected v1-nearly-perfect")
            return probs

        return check

    return [
        StageSpec("stage 1", tuple(s1), exp1, _edges((2, a), (2, b), (a, b))),
        StageSpec("stage 2", tuple(s2), exp2, _edges((a, b), (c, d))),
        StageSpec("stage 3", tuple(s3), exp3, _edges((a, b))),
        StageSpec("stage 4", tuple(s4), exp4, frozenset(),
                  extra_check=split_check([(a, c), (b, d), (e, f), (g, h)])),
    ]


class OrientableOdd(Pipeline):
    """Complete graphs K_n, n = 5 mod 8 step from the K_5 embedding in the torus."""

    name = "orientable-odd"
    orientable = True

    def start(self) -> State:
        bc = BASE_CASES["phi5"]
        st = State(load_base("phi5"), _ledger_from(bc.diagonals, True), "phi5")
        self.ctx = OddContext(y=[(3, 4), (5, 1)], z=[(4, 5), (3, 2)])
        self._snap(st, "base phi5")
        return st

    def step(self, st: State) -> State:
        n = st.emb.n
        for spec in orientable_odd_stages(n, self.ctx):
            st = self.run_spec(st, spec, n)
        st = release_all(st)
        new = [(n + 1, n + 3), (n + 2, n + 4), (n + 5, n + 6), (n + 7, n + 8)]
        self.ctx = OddContext(self.ctx.y[:-1] + new + self.ctx.y[-1:], self.ctx.z[:-1] + new + self.ctx.z[-1:])
        return st


# ---------------------------------------------------------------------------
# Nonorientable, even order
# ---------------------------------------------------------------------------

# nQ(8,2) relabelled so that the diagonal pairs are consecutive and the
# missing edges are 1-3 and 5-7
NQ8_STANDARD = {1: 1, 8: 2, 7: 3, 6: 4, 3: 5, 2: 6, 5: 7, 4: 8}


def nonorientable_even_stages(n: int) -> list[StageSpec]:
    a, b, c, d = range(n + 1, n + 5)
    pairs = [(i, i + 1) for i in range(1, n, 2)]
    base = [(p, None) for p in pairs]

    s1 = [disc(D(1, 2), (a, b))]
    s1.append(handle("I", D(a, b), D(3, 4),
                     Make((3, b, 4, X), reserve="N1a", home=(3, 4)), Make((a, 3, b, 1), reserve="N1x")))
    s1.append(crosscap(R("N1x")))
    s1.append(handle("I", D(a, b), D(5, 6), Make((5, a, 6, X), reserve="N1b", home=(5, 6))))
    s1 += [handle("I", D(a, b), D(*p)) for p in pairs[3:]]
    exp1 = [(p, None) for p in pairs if p not in ((3, 4), (5, 6))]
    exp1 += [((3, 4), (3, b, 4, X)), ((5, 6), (5, a, 6, X)), ((a, b), None)]

    s2 = [disc(R("N1b", pair=(5, 6)), (c, d), Make((a, 6, c, 5), reserve="N2a", home=(a, c)))]
    s2.append(handle("I", D(c, d), D(7, 8), Make((c, 7, d, 5), reserve="N2x")))
    s2.append(crosscap(R("N2x")))
    s2.append(handle("I", D(c, d), R("N1a", pair=(3, 4)), Make((b, 4, d, 3), reserve="N2b", home=(b, d))))
    s2 += [handle("I", D(c, d), D(*p)) for p in [(1, 2)] + pairs[4:] + [(a, b)]]
    s2.append(drop((a, b), (c, d)))
    exp2 = base + [((a, c), (a, 6, c, 5)), ((b, d), (b, 4, d, 3))]

    return [
        StageSpec("stage 1", tuple(s1), exp1, _edges((5, 7))),
        StageSpec("stage 2", tuple(s2), exp2, frozenset(), _edges((5, 7), (c, d))),
    ]


def nonorientable_even_relabelling(n: int) -> dict[int, int]:
    """Send the pairs (5,6),(7,8),(n+3,n+1),(n+4,n+2),(1,2),(3,4),(9,10),... to 1..n+4."""
    a, b, c, d = range(n + 1, n + 5)
    order = [5, 6, 7, 8, c, a, d, b, 1, 2, 3, 4] + list(range(9, n + 1))
    return {v: i for i, v in enumerate(order, 1)}


class NonorientableEven(Pipeline):
    name = "nonorientable-even"
    orientable = False

    def start(self) -> State:
        chain = load_nq8_chain()
        steps = tuple(chain.steps)
        # the stages after steps 4, 5, 6, 7 have t = 8, 4, 2, 0
        for k, (stage, t) in enumerate(zip(chain.stages, (8, 4, 2, 0))):
            self._snap(State(stage, Ledger(False), "nq8_cube", steps[: k + 4]), f"base nq8 t={t}")
        e2 = chain.stages[2]
        st = State(e2, _ledger_from(NQ8_DIAGONALS, False), "nq8_cube", steps[:6])
        return apply_relabel(st, NQ8_STANDARD)

    def step(self, st: State) -> State:
        n = st.emb.n
        s1, s2 = nonorientable_even_stages(n)
        st = self.run_spec(st, s1, n)
        st = self.run_spec(st, s2, n, continue_omitting=[0])
        return apply_relabel(release_all(st), nonorientable_even_relabelling(n))


# ---------------------------------------------------------------------------
# Nonorientable, odd order (Property P)
# ---------------------------------------------------------------------------


@dataclass
class PropertyReport:
    missing_ok: bool
    diagonals_ok: bool
    square_ok: bool
    details: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.missing_ok and self.diagonals_ok and self.square_ok


def check_property_p(emb: Embedding, ledger: Ledger, n: int | None = None) -> PropertyReport:
    """Check the three-part invariant of the odd nonorientable induction.

    (a) the missing edges are exactly v1v_{n-1}, v1v_n, v_{n-3}v_{n-2};
    (b) the diagonal set consists of (1,3), (2,3), a perfect pairing of
        4..n-4, (n-3,n-1) and (n-2,n), all on distinct current faces;
    (c) some face v2 v_{n-1} x v_n does not underlie any diagonal.
    """
    n = emb.n if n is None else n
    details = []
    if n % 4 != 3 or emb.n != n:
        return PropertyReport(False, False, False, [f"order {emb.n} is not {n} = 3 mod 4"])
    want_missing = _edges((1, n - 1), (1, n), (n - 3, n - 2))
    missing_ok = emb.missing_edges() == set(want_missing)
    if not missing_ok:
        details.append(f"(a) missing edges {sorted(emb.missing_edges())}")
    pairs = set(ledger.diagonals)
    fixed = {pair_key(1, 3), pair_key(2, 3), pair_key(n - 3, n - 1), pair_key(n - 2, n)}
    ys = pairs - fixed
    covered = sorted(v for p in ys for v in p)
    diag_problems = ledger.validate(emb)
    if not fixed <= pairs:
        diag_problems.append(f"missing fixed pairs {sorted(fixed - pairs)}")
    if covered != list(range(4, n - 3)):
        diag_problems.append(f"middle pairs cover {covered}, expected 4..{n - 4} once each")
    diagonals_ok = not diag_problems
    details += [f"(b) {p}" for p in diag_problems]
    owned = {ledger._key(sq) for sq in ledger.diagonals.values()}
    square_ok = any(
        matches_pattern(f, (2, n - 1, None, n), directed=False) and ledger._key(f) not in owned
        for f in emb.face_tuples()
    )
    if not square_ok:
        details.append(f"(c) no free face 2 {n - 1} x {n}")
    return PropertyReport(missing_ok, diagonals_ok, square_ok, details)


def nonorientable_odd_stages(n: int, ys: list[tuple[int, int]]) -> list[StageSpec]:
    a, b, c, d = range(n + 1, n + 5)
    ordered = ys + [(1, 3)]
    base = [(p, None) for p in [(1, 3), (2, 3)] + ys]

    s1 = [disc(D(n - 3, n - 1), (a, b), Make((n - 3, a, n - 1, X), reserve="Q2", home=(n - 3, n - 1)))]
    s1.append(handle("I", D(a, b), D(n - 2, n),
                     Make((n - 2, b, n, X), reserve="Q3", home=(n - 2, n)), Make((a, n - 3, b, n - 2), reserve="Qx")))
    s1.append(crosscap(R("Qx")))
    for k, p in enumerate(ordered):
        mk = (Make((a, 1, b, X), reserve="Q4"),) if k == len(ordered) - 1 else ()
        s1.append(handle("I", D(a, b), D(*p), *mk))
    s1.append(handle("II", R("Q4", pair=(a, b), fixed={3: 1}), R("P", pair=(n - 1, n), fixed={3: 2}),
                     Make((a, 2, b, X), reserve="Q5", home=(a, b))))
    exp1 = base + [((n - 3, n - 1), (n - 3, a, n - 1, X)), ((n - 2, n), (n - 2, b, n, X)), ((a, b), (a, 2, b, X))]

    s2 = [disc(R("Q2", pair=(n - 3, n - 1)), (c, d), Make((a, n - 1, c, n - 3), reserve="Q6", home=(a, c)))]
    s2.append(handle("I", D(c, d), R("Q3", pair=(n - 2, n)),
                     Make((b, n, d, n - 2), reserve="Q7", home=(b, d)), Make((c, n - 2, d, n - 3), reserve="Qy")))
    s2.append(crosscap(R("Qy")))
    s2.append(handle("I", D(c, d), R("Q5", pair=(a, b)), Make((b, 2, a, d), reserve="Qz")))
    s2.append(crosscap(R("Qz")))
    for k, p in enumerate(ordered):
        mk = (Make((1, d, X, c), reserve="Pnew"),) if k == len(ordered) - 1 else ()
        s2.append(handle("I", D(c, d), D(*p), *mk))
    s2.append(drop((a, b), (c, d)))
    exp2 = base + [((n - 3, n - 1), None), ((n - 2, n), None), ((a, c), (a, n - 1, c, n - 3)), ((b, d), (b, n, d, n - 2))]

    return [
        StageSpec("stage 1", tuple(s1), exp1, frozenset(), _edges((n - 3, n - 2), (a, b))),
        StageSpec("stage 2", tuple(s2), exp2, _edges((2, c)), _edges((2, c), (2, d), (a, b))),
    ]


class NonorientableOdd(Pipeline):
    name = "nonorientable-odd"
    orientable = False

    def start(self) -> State:
        bc = BASE_CASES["phi7"]
        phi7 = load_base("phi7")
        self._snap(State(phi7, Ledger(False), "phi7"), "base phi7")
        emb, step = crosscap_removal(phi7, (1, 7), (4, 5))
        led = _ledger_from(bc.diagonals, False)
        led.reserve("P", next(f for f in emb.face_tuples() if matches_pattern(f, (2, 6, None, 7), False)))
        st = State(emb, led, "phi7", (step,))
        self._snap(st, "base phi7 minus crosscap")
        self.ys: list[tuple[int, int]] = []
        self.property_reports: list[tuple[int, PropertyReport]] = [(7, check_property_p(emb, led))]
        return st

    def step(self, st: State) -> State:
        n = st.emb.n
        s1, s2 = nonorientable_odd_stages(n, self.ys)
        st = self.run_spec(st, s1, n, continue_omitting=[0])
        st = self.run_spec(st, s2, n, continue_omitting=[1])
        st = apply_relabel(release_all(st, keep=("Pnew",)), {1: 2, 2: 1}, reserved={"Pnew": "P"})
        self.ys = self.ys + [(n - 3, n - 1), (n - 2, n)]
        self.property_reports.append((n + 4, check_property_p(st.emb, st.ledger)))
        return st


PIPELINES = {
    (True, 0): OrientableEven,
    (True, 1): OrientableOdd,
    (False, 0): NonorientableEven,
    (False, 1): NonorientableOdd,
}
