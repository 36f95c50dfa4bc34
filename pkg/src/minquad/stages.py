"""Scripted surgery sequences with automatic choice of corner roles.

A stage is a list of :class:`Op` values.  Each op names the squares it acts
on through the ledger (the square currently underlying a diagonal, or a
reserved square by tag) and lists the squares it must create
(:class:`Make`).  Which corner of a square plays ``o1`` / ``i1`` and so on is
left open; :func:`run_stage` tries the orientations of each square in a
fixed order and keeps the first one whose created squares match every
``Make`` pattern, backtracking into earlier ops when a later one cannot be
satisfied.  The choices made are recorded so that a stage can be replayed
exactly, optionally with some crosscap additions left out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .embedding import Embedding, Face, matches_pattern, same_cycle
from .ledger import Ledger, LedgerError, is_diagonal_of, pair_key
from .surgery import (
    HandleType,
    SurgeryError,
    SurgeryStep,
    crosscap_addition,
    crosscap_faces,
    disc_addition,
    disc_faces,
    handle_addition,
    handle_chord_vertices,
    handle_faces,
)

X = None  # wildcard corner in square patterns


class StageError(RuntimeError):
    """A scripted stage could not be carried out."""


@dataclass(frozen=True)
class Use:
    """A square an op consumes: the home of diagonal ``diag`` or reserved square ``tag``.

    ``pair`` is the vertex pair that must sit on the positions the surgery
    keeps as a diagonal (defaults to ``diag``); ``fixed`` pins corners to
    vertices as ``((position, vertex), ...)`` with 0-based positions.
    """

    diag: tuple[int, int] | None = None
    tag: str | None = None
    pair: tuple[int, int] | None = None
    fixed: tuple[tuple[int, int], ...] = ()

    def diagonal_pair(self):
        return self.pair if self.pair is not None else self.diag


def D(a: int, b: int, **kw) -> Use:
    return Use(diag=(a, b), **kw)


def R(tag: str, pair: tuple[int, int] | None = None, fixed: dict[int, int] | None = None) -> Use:
    return Use(tag=tag, pair=pair, fixed=tuple(sorted((fixed or {}).items())))


@dataclass(frozen=True)
class Make:
    """A square the op must create; optionally reserve it and/or home a diagonal on it."""

    pattern: tuple[int | None, ...]
    reserve: str | None = None
    home: tuple[int, int] | None = None


@dataclass(frozen=True)
class Op:
    kind: str  # disc | handle | crosscap | drop
    outer: Use | None = None
    inner: Use | None = None
    htype: HandleType | None = None
    new: tuple[int, int] | None = None
    makes: tuple[Make, ...] = ()
    drop: tuple[tuple[int, int], ...] = ()
    optional: bool = False
    note: str = ""


def disc(outer: Use, new, *makes: Make, note: str = "") -> Op:
    return Op("disc", outer=outer, new=tuple(new), makes=tuple(makes), note=note)


def handle(htype, outer: Use, inner: Use, *makes: Make, note: str = "") -> Op:
    return Op("handle", outer=outer, inner=inner, htype=HandleType(htype), makes=tuple(makes), note=note)


def crosscap(square: Use, *makes: Make, optional: bool = True, note: str = "") -> Op:
    return Op("crosscap", outer=square, makes=tuple(makes), optional=optional, note=note)


def drop(*pairs) -> Op:
    return Op("drop", drop=tuple(pairs))


# Positions a surgery keeps as a diagonal, per square role.
_DIAG_POS = {
    "disc": ((0, 2), None),
    HandleType.I: ((0, 2), (1, 3)),
    HandleType.III: ((0, 2), (1, 3)),
    HandleType.II: ((0, 2), (0, 2)),
    HandleType.IV: (None, None),
    "crosscap": (None, None),
}


@dataclass
class State:
    emb: Embedding
    ledger: Ledger
    base: str
    steps: tuple[SurgeryStep, ...] = ()

    def copy(self) -> "State":
        return State(self.emb, self.ledger.copy(), self.base, self.steps)


@dataclass(frozen=True)
class Choice:
    outer: Face | None = None
    inner: Face | None = None
    new: tuple[int, int] | None = None


@dataclass
class Executed:
    op: Op
    choice: Choice | None
    step: SurgeryStep | None
    state: State


def _orientations(face: Sequence[int], directed: bool) -> list[Face]:
    face = tuple(face)
    out = [face[i:] + face[:i] for i in range(4)]
    if not directed:
        rev = face[::-1]
        out += [rev[i:] + rev[:i] for i in range(4)]
    return out


def _resolve(state: State, use: Use) -> Face:
    led = state.ledger
    sq = led.reserved[use.tag] if use.tag is not None else led.home(use.diag)
    for f in state.emb.face_tuples():
        if same_cycle(f, sq, directed=state.emb.orientable):
            return f
    raise StageError(f"square {sq} is not a face of the current embedding")


def _role_options(state: State, use: Use, positions) -> list[Face]:
    face = _resolve(state, use)
    pair = use.diagonal_pair()
    opts = []
    for o in _orientations(face, state.emb.orientable):
        if pair is not None and positions is not None and {o[positions[0]], o[positions[1]]} != set(pair):
            continue
        if any(o[i] != v for i, v in use.fixed):
            continue
        opts.append(o)
    return opts


def _candidates(state: State, op: Op) -> Iterator[Choice]:
    if op.kind == "disc":
        for o in _role_options(state, op.outer, _DIAG_POS["disc"][0]):
            for new in (op.new, op.new[::-1]):
                yield Choice(outer=o, new=new)
    elif op.kind == "handle":
        pos_o, pos_i = _DIAG_POS[op.htype]
        inners = _role_options(state, op.inner, pos_i)
        for o in _role_options(state, op.outer, pos_o):
            for i in inners:
                yield Choice(outer=o, inner=i)
    elif op.kind == "crosscap":
        face = _resolve(state, op.outer)
        yield Choice(outer=face)
    else:
        yield Choice()


def _created(op: Op, ch: Choice) -> tuple[Face, ...]:
    if op.kind == "disc":
        return disc_faces(ch.outer, ch.new)
    if op.kind == "handle":
        return handle_faces(op.htype, ch.outer, ch.inner)
    if op.kind == "crosscap":
        return crosscap_faces(ch.outer)
    return ()


def _assign_makes(makes: Sequence[Make], created: Sequence[Face], directed: bool) -> list[Face] | None:
    """Match each Make to a distinct created square (small backtracking)."""
    out: list[Face] = []

    def go(k: int, used: set[int]) -> bool:
        if k == len(makes):
            return True
        for j, f in enumerate(created):
            if j not in used and matches_pattern(f, makes[k].pattern, directed):
                out.append(f)
                if go(k + 1, used | {j}):
                    return True
                out.pop()
        return False

    return out if go(0, set()) else None


def execute(state: State, op: Op, ch: Choice) -> tuple[State, SurgeryStep | None]:
    """Apply one op with fixed roles; raises SurgeryError/LedgerError/StageError."""
    if op.kind == "drop":
        new = state.copy()
        for p in op.drop:
            new.ledger.drop(p)
        return new, None
    directed = state.emb.orientable
    created = _created(op, ch)
    assigned = _assign_makes(op.makes, created, directed)
    if assigned is None:
        raise StageError("created squares do not match the required patterns")
    led = state.ledger.copy()
    released = [u.tag for u in (op.outer, op.inner) if u is not None and u.tag is not None]
    for tag in released:
        led.release(tag)
    for sq in (ch.outer, ch.inner):
        if sq is not None:
            led.check_usable(sq)
    if op.kind == "disc":
        emb, step = disc_addition(state.emb, ch.outer, ch.new)
    elif op.kind == "handle":
        for u, v in handle_chord_vertices(op.htype, ch.outer, ch.inner):
            if u == v or state.emb.has_edge(u, v):
                raise SurgeryError("chord is a loop or an existing edge")
        emb, step = handle_addition(state.emb, ch.outer, ch.inner, op.htype)
    elif op.kind == "crosscap":
        emb, step = crosscap_addition(state.emb, ch.outer)
    else:
        raise StageError(f"unknown op kind {op.kind!r}")
    homes = {}
    for mk, sq in zip(op.makes, assigned):
        if mk.reserve is not None:
            led.reserve(mk.reserve, sq)
        if mk.home is not None:
            homes[pair_key(*mk.home)] = sq
    if op.kind == "disc":
        a, b = ch.new
        key = pair_key(a, b)
        if key not in homes:
            homes[key] = created[1]
    led.refresh(emb, step.destroyed_faces, step.created_faces, homes)
    return State(emb, led, state.base, state.steps + (step,)), step


def run_stage(
    state: State,
    ops: Sequence[Op],
    final_check: Callable[[State], list[str]] | None = None,
    max_attempts: int = 20000,
) -> list[Executed]:
    """Find roles for every op (depth-first, deterministic order) and execute them."""
    attempts = 0
    last_error: list[str] = []

    def go(k: int, st: State) -> list[Executed] | None:
        nonlocal attempts
        if k == len(ops):
            problems = final_check(st) if final_check else []
            if problems:
                last_error[:] = [f"postcondition: {problems}"]
                return None
            return []
        op = ops[k]
        for ch in _candidates(st, op):
            attempts += 1
            if attempts > max_attempts:
                raise StageError(f"gave up after {max_attempts} attempts; last error {last_error}")
            try:
                nxt, step = execute(st, op, ch)
            except (SurgeryError, LedgerError, StageError) as exc:
                last_error[:] = [f"op {k} ({op.note or op.kind}): {exc}"]
                continue
            rest = go(k + 1, nxt)
            if rest is not None:
                return [Executed(op, ch, step, nxt)] + rest
        return None

    out = go(0, state)
    if out is None:
        raise StageError(f"stage cannot be carried out: {last_error}")
    return out


def replay_stage(state: State, executed: Sequence[Executed], omit: frozenset[int] = frozenset()) -> list[Executed]:
    """Re-run recorded choices, skipping the ops whose indices are in ``omit``."""
    out = []
    st = state
    for idx, ex in enumerate(executed):
        if idx in omit:
            if ex.op.kind != "crosscap" or not ex.op.optional:
                raise StageError("only optional crosscap additions can be omitted")
            continue
        st, step = execute(st, ex.op, ex.choice)
        out.append(Executed(ex.op, ex.choice, step, st))
    # squares reserved only for an omitted crosscap stay faces; drop their tags
    return out


def pattern_face(emb: Embedding, pattern, directed: bool | None = None) -> Face | None:
    directed = emb.orientable if directed is None else directed
    for f in emb.face_tuples():
        if matches_pattern(f, pattern, directed):
            return f
    return None


def diag_ok(pair, square) -> bool:
    return is_diagonal_of(pair, square)
