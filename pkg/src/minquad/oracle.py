"""Exhaustive search for quadrangular embeddings of small graphs.

A quadrangulation of a graph is the same thing as a family of 4-cycles that
covers every edge exactly twice and whose corners at each vertex chain into
one cycle (the vertex link).  The search below is an exact-cover backtrack
over 4-cycles with the most constrained edge branched first; link cycles are
checked incrementally so partial covers that close a vertex link too early
are cut immediately.

Orientable searches work with directed 4-cycles: every directed edge is
covered exactly once, so every solution is coherently oriented.  Other
searches use undirected 4-cycles with edge capacity 2 and classify each
solution afterwards.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Sequence

from .embedding import Edge, Embedding, Face, edge_key, from_faces, matches_pattern

DEFAULT_NODE_CAP = int(os.environ.get("MINQUAD_NODE_CAP", "20000000"))


class SearchInconclusive(RuntimeError):
    """The node cap was reached before the search space was exhausted."""

    def __init__(self, nodes: int, found: int):
        super().__init__(f"search inconclusive after {nodes} nodes ({found} solutions so far)")
        self.nodes = nodes
        self.found = found


@dataclass
class SearchProblem:
    """What to look for.

    ``edges=None`` means the graph itself is free: any pair of vertices may
    be used as an edge, and ``target_chi`` fixes the face count.
    ``orientable`` is ``True``, ``False`` or ``None`` (either).
    """

    n: int
    edges: set[Edge] | None = None
    target_chi: int | None = None
    orientable: bool | None = None
    required_faces: list[tuple[int | None, ...]] = field(default_factory=list)
    face_simple: bool = False

    @classmethod
    def complete_minus(cls, n: int, missing: Sequence[tuple[int, int]] = (), **kw) -> "SearchProblem":
        miss = {edge_key(*e) for e in missing}
        edges = {e for e in combinations(range(1, n + 1), 2) if e not in miss}
        return cls(n, edges, **kw)

    def face_count(self) -> int:
        if self.edges is not None:
            if len(self.edges) % 2:
                raise ValueError("a quadrangulation needs an even number of edges")
            return len(self.edges) // 2
        if self.target_chi is None:
            raise ValueError("free-graph searches need a target Euler characteristic")
        return self.n - self.target_chi

    # -- text format ------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"n {self.n}"]
        if self.edges is None:
            lines.append("graph free")
        else:
            full = set(combinations(range(1, self.n + 1), 2))
            missing = sorted(full - self.edges)
            lines.append(f"graph K{self.n} minus {{{', '.join(f'{u}-{v}' for u, v in missing)}}}")
        if self.target_chi is not None:
            lines.append(f"chi {self.target_chi}")
        if self.orientable is not None:
            lines.append(f"orientable {'true' if self.orientable else 'false'}")
        if self.face_simple:
            lines.append("face-simple true")
        for pat in self.required_faces:
            lines.append("require-face " + " ".join("x" if v is None else f"v{v}" for v in pat))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SearchProblem":
        n = None
        graph = None
        kw: dict = {"required_faces": []}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, rest = line.partition(" ")
            rest = rest.strip()
            if key == "n":
                n = int(rest)
            elif key == "graph":
                graph = rest
            elif key == "chi":
                kw["target_chi"] = int(rest)
            elif key == "orientable":
                kw["orientable"] = {"true": True, "false": False, "either": None}[rest.lower()]
            elif key == "face-simple":
                kw["face_simple"] = rest.lower() == "true"
            elif key == "require-face":
                pat = []
                for tok in rest.split():
                    pat.append(None if tok.lower() == "x" else int(tok.lstrip("v")))
                kw["required_faces"].append(tuple(pat))
            else:
                raise ValueError(f"unknown problem line {raw!r}")
        if graph is None:
            raise ValueError("problem needs a graph line")
        if graph == "free":
            if n is None:
                raise ValueError("free graph needs an 'n' line")
            return cls(n, None, **kw)
        head, _, tail = graph.partition("minus")
        head = head.strip()
        if not head.startswith("K"):
            raise ValueError(f"graph must be 'K<n> minus {{...}}' or 'free', got {graph!r}")
        kn = int(head[1:])
        if n is not None and n != kn:
            raise ValueError("n line disagrees with graph line")
        missing = []
        body = tail.strip().strip("{}").strip()
        if body:
            for tok in body.split(","):
                tok = tok.strip().replace("v", "")
                u, v = tok.split("-")
                missing.append((int(u), int(v)))
        return cls.complete_minus(kn, missing, **kw)


def enumerate_quadrilaterals(n: int, edges: set[Edge] | None = None) -> list[Face]:
    """All 4-cycles of the graph, each listed once (least vertex first)."""
    out = []
    for a, b, c, d in combinations(range(1, n + 1), 4):
        for cyc in ((a, b, c, d), (a, b, d, c), (a, c, b, d)):
            if edges is None or all(edge_key(cyc[i], cyc[(i + 1) % 4]) in edges for i in range(4)):
                out.append(cyc)
    return out


@dataclass
class SearchResult:
    solutions: list[Embedding]
    nodes: int
    complete: bool


class _Search:
    def __init__(self, problem: SearchProblem, node_cap: int):
        self.p = problem
        self.n = problem.n
        self.directed = problem.orientable is True
        self.free = problem.edges is None
        self.faces_needed = problem.face_count()
        self.node_cap = node_cap
        self.nodes = 0
        cycles = enumerate_quadrilaterals(self.n, problem.edges)
        if self.directed:
            cycles = cycles + [(c[0], c[3], c[2], c[1]) for c in cycles]
        self.rows = cycles
        # column ids: undirected edge (u<v) or directed edge (u, v)
        self.row_cols: list[tuple] = []
        self.col_rows: dict[tuple, list[int]] = {}
        for ri, c in enumerate(cycles):
            cols = []
            for i in range(4):
                u, v = c[i], c[(i + 1) % 4]
                cols.append((u, v) if self.directed else edge_key(u, v))
            self.row_cols.append(tuple(cols))
            for col in cols:
                self.col_rows.setdefault(col, []).append(ri)
        self.capacity = 1 if self.directed else 2
        if self.free:
            self.cols = sorted(self.col_rows)
        else:
            es = sorted(problem.edges)
            self.cols = es + [(v, u) for u, v in es] if self.directed else es
        self.degree = {v: 0 for v in range(1, self.n + 1)}
        if not self.free:
            for u, v in problem.edges:
                self.degree[u] += 1
                self.degree[v] += 1
        self.cover = {c: 0 for c in self.col_rows}
        for c in self.cols:
            self.cover.setdefault(c, 0)
        # link structure: directed -> succ map per vertex; undirected -> neighbour lists
        self.link: dict[int, dict[int, list[int]]] = {v: {} for v in range(1, self.n + 1)}
        self.closed = {v: False for v in range(1, self.n + 1)}
        self.chosen: list[int] = []
        self.used_rows: set[int] = set()
        self.face_edge_sets: list[set] = []

    # -- link bookkeeping ------------------------------------------------------

    def _corners(self, ri):
        c = self.rows[ri]
        return [(c[i - 1], c[i], c[(i + 1) % 4]) for i in range(4)]

    def _path_end(self, v: int, start: int, avoid: int | None) -> tuple[int, int]:
        """Follow the link path at ``v`` from ``start``; return (end, length)."""
        link = self.link[v]
        prev, cur, length = avoid, start, 0
        while True:
            nxt = [x for x in link.get(cur, []) if x != prev]
            if self.directed:
                nxt = link.get(cur, [])[:1]
            if not nxt:
                return cur, length
            prev, cur = cur, nxt[0]
            length += 1
            if cur == start:
                return cur, -1

    def _corner_ok(self, a: int, v: int, b: int) -> tuple[bool, bool]:
        """Can corner a-v-b be added?  Returns (ok, closes_link)."""
        if self.closed[v]:
            return False, False
        link = self.link[v]
        if self.directed:
            # follow successors from b; reaching a closes the rotation cycle
            cur, length = b, 1
            while cur in link and link[cur]:
                cur = link[cur][0]
                length += 1
                if cur == a:
                    break
            if cur != a:
                return True, False
        else:
            if len(link.get(a, [])) >= 2 or len(link.get(b, [])) >= 2:
                return False, False
            end, length = self._path_end(v, b, None)
            if end != a:
                return True, False
            length += 1
        if self.free:
            return length >= 3, True
        return length == self.degree[v], True

    def _add_row(self, ri: int) -> bool:
        added = []
        ok = True
        for a, v, b in self._corners(ri):
            good, closes = self._corner_ok(a, v, b)
            if not good:
                ok = False
                break
            link = self.link[v]
            if self.directed:
                link.setdefault(a, []).append(b)
            else:
                link.setdefault(a, []).append(b)
                link.setdefault(b, []).append(a)
            added.append((a, v, b, closes))
            if closes:
                self.closed[v] = True
        if not ok:
            self._undo_corners(added)
            return False
        if self.p.face_simple:
            es = set(self.row_cols[ri]) if not self.directed else {edge_key(*c) for c in self.row_cols[ri]}
            for other in self.face_edge_sets:
                if len(es & other) >= 2:
                    self._undo_corners(added)
                    return False
            self.face_edge_sets.append(es)
        for col in self.row_cols[ri]:
            self.cover[col] += 1
        self.chosen.append(ri)
        self.used_rows.add(ri)
        self._pending = added
        return True

    def _undo_corners(self, added):
        for a, v, b, closes in reversed(added):
            link = self.link[v]
            link[a].remove(b)
            if not link[a]:
                del link[a]
            if not self.directed:
                link[b].remove(a)
                if not link[b]:
                    del link[b]
            if closes:
                self.closed[v] = False

    def _remove_row(self, ri: int, added) -> None:
        for col in self.row_cols[ri]:
            self.cover[col] -= 1
        self.chosen.pop()
        self.used_rows.discard(ri)
        if self.p.face_simple:
            self.face_edge_sets.pop()
        self._undo_corners(added)

    def _row_fits(self, ri: int) -> bool:
        if ri in self.used_rows:
            return False
        cap = self.capacity
        return all(self.cover[c] < cap for c in self.row_cols[ri])

    # -- search -----------------------------------------------------------------

    def _pick_column(self):
        best, best_rows = None, None
        if self.free:
            cols = [c for c in self.cover if self.cover[c] == 1]
        else:
            cols = [c for c in self.cols if self.cover[c] < self.capacity]
        for c in cols:
            rows = [ri for ri in self.col_rows.get(c, []) if self._row_fits(ri)]
            if best is None or len(rows) < len(best_rows):
                best, best_rows = c, rows
                if not rows:
                    break
        return best, best_rows

    def _is_solution(self) -> bool:
        if len(self.chosen) != self.faces_needed:
            return False
        if self.free:
            if any(c == 1 for c in self.cover.values()):
                return False
            return all(self.closed.values())
        return all(self.cover[c] == self.capacity for c in self.cols)

    def _emit(self) -> Embedding | None:
        emb = from_faces([self.rows[ri] for ri in self.chosen], self.n)
        if self.p.orientable is False and emb.orientable:
            return None
        if self.p.target_chi is not None and emb.euler_characteristic != self.p.target_chi:
            return None
        return emb

    def run(self, limit: int | None) -> Iterator[Embedding]:
        self.found = 0
        seeds = self._seed_choices()
        yield from self._with_required(0, seeds, limit)

    def _seed_choices(self) -> list[list[int]]:
        opts = []
        for pat in self.p.required_faces:
            cands = [ri for ri, c in enumerate(self.rows) if matches_pattern(c, pat, directed=self.directed)]
            opts.append(cands)
        if self.free and not opts:
            # relabelling symmetry: the first face may be fixed
            first = (1, 2, 3, 4)
            opts.append([ri for ri, c in enumerate(self.rows) if c == first])
        return opts

    def _with_required(self, k, seeds, limit):
        if k == len(seeds):
            yield from self._dfs(limit)
            return
        for ri in seeds[k]:
            if not self._row_fits(ri):
                continue
            if not self._add_row(ri):
                continue
            added = self._pending
            yield from self._with_required(k + 1, seeds, limit)
            self._remove_row(ri, added)
            if limit is not None and self.found >= limit:
                return

    def _dfs(self, limit):
        self.nodes += 1
        if self.nodes > self.node_cap:
            raise SearchInconclusive(self.nodes, self.found)
        if len(self.chosen) >= self.faces_needed:
            if self._is_solution():
                emb = self._emit()
                if emb is not None:
                    self.found += 1
                    yield emb
            return
        col, rows = self._pick_column()
        if col is None or not rows:
            return
        for ri in rows:
            if not self._add_row(ri):
                continue
            added = self._pending
            yield from self._dfs(limit)
            self._remove_row(ri, added)
            if limit is not None and self.found >= limit:
                return


def search(problem: SearchProblem, limit: int | None = None, node_cap: int = DEFAULT_NODE_CAP) -> SearchResult:
    """Run an exhaustive search.

    Returns up to ``limit`` solutions.  ``complete`` is True when the whole
    space was explored (so an empty solution list proves nonexistence).
    Raises :class:`SearchInconclusive` when the node cap is hit first.
    """
    s = _Search(problem, node_cap)
    sols = []
    for emb in s.run(limit):
        sols.append(emb)
        if limit is not None and len(sols) >= limit:
            return SearchResult(sols, s.nodes, False)
    return SearchResult(sols, s.nodes, True)


def find_one(problem: SearchProblem, node_cap: int = DEFAULT_NODE_CAP) -> Embedding | None:
    res = search(problem, limit=1, node_cap=node_cap)
    return res.solutions[0] if res.solutions else None
