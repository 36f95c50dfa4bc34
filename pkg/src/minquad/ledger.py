"""Diagonals, diagonal sets and reserved squares.

A diagonal is a pair of opposite corners of a square face (its underlying
square).  A diagonal set uses pairwise distinct underlying squares.  The
:class:`Ledger` follows a diagonal set and a table of reserved squares
through a sequence of surgeries: after each step, diagonals whose square was
destroyed are moved to a surviving square that still has them as a
diagonal, and reserved squares are protected from being consumed until they
are explicitly released.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .embedding import Embedding, EmbeddingError, Face, canonical_face, matches_pattern


class LedgerError(EmbeddingError):
    """Bookkeeping rule violated (lost diagonal, reused square, reserved square consumed)."""


def pair_key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def is_diagonal_of(pair: Sequence[int], square: Sequence[int]) -> bool:
    s = set(pair)
    return s == {square[0], square[2]} or s == {square[1], square[3]}


@dataclass(frozen=True)
class Diagonal:
    pair: tuple[int, int]
    square: Face

    def __str__(self) -> str:
        a, b = self.pair
        return f"diq(v{a}, v{b}, {' '.join(f'v{x}' for x in self.square)})"


@dataclass(frozen=True)
class Classification:
    kind: str  # none | full | perfect | nearly_perfect
    exempt: int | None = None

    def __str__(self) -> str:
        return f"v{self.exempt}-nearly-perfect" if self.kind == "nearly_perfect" else self.kind


def classify(pairs: Iterable[Sequence[int]], vertices: Iterable[int]) -> Classification:
    """Strongest label among perfect, v-nearly-perfect, full, none."""
    pairs = list(pairs)
    verts = list(vertices)
    if not pairs:
        return Classification("none")
    count = Counter(v for p in pairs for v in p)
    mult = [count.get(v, 0) for v in verts]
    if all(c == 1 for c in mult):
        return Classification("perfect")
    zeros = [v for v, c in zip(verts, mult) if c == 0]
    if len(zeros) == 1 and all(c == 1 for v, c in zip(verts, mult) if v != zeros[0]):
        return Classification("nearly_perfect", zeros[0])
    if all(c >= 1 for c in mult):
        return Classification("full")
    return Classification("none")


@dataclass
class Ledger:
    directed: bool
    diagonals: dict[tuple[int, int], Face] = field(default_factory=dict)
    reserved: dict[str, Face] = field(default_factory=dict)

    def copy(self) -> "Ledger":
        return Ledger(self.directed, dict(self.diagonals), dict(self.reserved))

    # -- identity of squares -------------------------------------------------

    def _key(self, face: Sequence[int]) -> Face:
        return canonical_face(face, self.directed)

    def square_owner(self, face: Sequence[int]) -> tuple[int, int] | None:
        k = self._key(face)
        for pair, sq in self.diagonals.items():
            if self._key(sq) == k:
                return pair
        return None

    def reservation_of(self, face: Sequence[int]) -> str | None:
        k = self._key(face)
        for tag, sq in self.reserved.items():
            if self._key(sq) == k:
                return tag
        return None

    # -- diagonals -------------------------------------------------------------

    def pairs(self) -> list[tuple[int, int]]:
        return list(self.diagonals)

    def home(self, pair: Sequence[int]) -> Face:
        key = pair_key(*pair)
        if key not in self.diagonals:
            raise LedgerError(f"no diagonal ({key[0]},{key[1]}) in the set")
        return self.diagonals[key]

    def add(self, pair: Sequence[int], square: Sequence[int]) -> None:
        key = pair_key(*pair)
        square = tuple(square)
        if not is_diagonal_of(key, square):
            raise LedgerError(f"{key} is not a diagonal of {square}")
        owner = self.square_owner(square)
        if owner is not None and owner != key:
            raise LedgerError(f"square {square} already underlies ({owner[0]},{owner[1]})")
        self.diagonals[key] = square

    def drop(self, pair: Sequence[int]) -> None:
        self.diagonals.pop(pair_key(*pair), None)

    def classify(self, vertices: Iterable[int], pairs: Iterable[Sequence[int]] | None = None) -> Classification:
        return classify(self.diagonals if pairs is None else pairs, vertices)

    # -- reservations -----------------------------------------------------------

    def reserve(self, tag: str, square: Sequence[int]) -> None:
        if tag in self.reserved:
            raise LedgerError(f"reservation tag {tag!r} already in use")
        self.reserved[tag] = tuple(square)

    def release(self, tag: str) -> Face:
        if tag not in self.reserved:
            raise LedgerError(f"no reserved square tagged {tag!r}")
        return self.reserved.pop(tag)

    def check_usable(self, face: Sequence[int], released: Iterable[str] = ()) -> None:
        tag = self.reservation_of(face)
        if tag is not None and tag not in set(released):
            raise LedgerError(f"square {tuple(face)} is reserved ({tag}) and was not released")

    # -- following surgeries ------------------------------------------------------

    def refresh(
        self,
        emb: Embedding,
        destroyed: Sequence[Face],
        created: Sequence[Face],
        homes: dict[tuple[int, int], Face] | None = None,
    ) -> None:
        """Re-home diagonals after a surgery.

        ``homes`` fixes squares for particular pairs (the stage script's
        choice); every other diagonal whose square was destroyed moves to the
        first created square that still has it as a diagonal and is neither
        reserved nor underlying another diagonal, falling back to any such
        current face.
        """
        homes = {pair_key(*p): tuple(sq) for p, sq in (homes or {}).items()}
        gone = {self._key(f) for f in destroyed}
        for tag, sq in self.reserved.items():
            if self._key(sq) in gone:
                raise LedgerError(f"reserved square {tag} = {sq} was consumed")
        for pair, sq in homes.items():
            self.diagonals.pop(pair, None)
        lost = [p for p, sq in self.diagonals.items() if self._key(sq) in gone]
        for p in lost:
            del self.diagonals[p]
        for pair, sq in homes.items():
            self.add(pair, sq)
        for p in lost:
            self.diagonals[p] = self._rehome(emb, p, created)

    def _rehome(self, emb: Embedding, pair, created) -> Face:
        taken = {self._key(sq) for sq in self.diagonals.values()} | {self._key(sq) for sq in self.reserved.values()}
        for pool in (created, emb.face_tuples()):
            for f in pool:
                if len(f) == 4 and is_diagonal_of(pair, f) and self._key(f) not in taken:
                    return tuple(f)
        raise LedgerError(f"diagonal ({pair[0]},{pair[1]}) has no surviving underlying square")

    def relabel(self, mapping: dict[int, int]) -> "Ledger":
        out = Ledger(self.directed)
        for pair, sq in self.diagonals.items():
            out.diagonals[pair_key(mapping[pair[0]], mapping[pair[1]])] = tuple(mapping[v] for v in sq)
        for tag, sq in self.reserved.items():
            out.reserved[tag] = tuple(mapping[v] for v in sq)
        return out

    # -- validation -----------------------------------------------------------------

    def validate(self, emb: Embedding) -> list[str]:
        """Every underlying/reserved square is a face; squares pairwise distinct."""
        faces = {self._key(f) for f in emb.face_tuples()}
        problems = []
        seen: dict[Face, str] = {}
        for pair, sq in self.diagonals.items():
            k = self._key(sq)
            if k not in faces:
                problems.append(f"underlying square {sq} of {pair} is not a face")
            if not is_diagonal_of(pair, sq):
                problems.append(f"{pair} is not a diagonal of {sq}")
            if k in seen:
                problems.append(f"square {sq} underlies both {seen[k]} and {pair}")
            seen[k] = str(pair)
        for tag, sq in self.reserved.items():
            if self._key(sq) not in faces:
                problems.append(f"reserved square {tag} = {sq} is not a face")
        return problems

    def matches(self, expected: Sequence[tuple[Sequence[int], Sequence[int | None] | None]]) -> list[str]:
        """Compare with a listed diagonal set; ``None`` corners are wildcards."""
        problems = []
        want = {pair_key(*p): pat for p, pat in expected}
        have = set(self.diagonals)
        for p in sorted(want.keys() - have):
            problems.append(f"missing diagonal {p}")
        for p in sorted(have - want.keys()):
            problems.append(f"unexpected diagonal {p}")
        for p, pat in want.items():
            if pat is not None and p in self.diagonals:
                if not matches_pattern(self.diagonals[p], pat, self.directed):
                    problems.append(f"diagonal {p} sits on {self.diagonals[p]}, expected {tuple(pat)}")
        return problems

    def dump(self) -> str:
        lines = ["diagonals:"]
        for pair, sq in self.diagonals.items():
            lines.append(f"  {Diagonal(pair, sq)}")
        lines.append("reserved:")
        for tag, sq in self.reserved.items():
            lines.append(f"  {tag}: {' '.join(f'v{x}' for x in sq)}")
        return "\n".join(lines)
