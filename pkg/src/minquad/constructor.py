"""Quadrangulations Q(n, t) and minimal quadrangulations of every surface.

``build(n, t, orientable)`` returns a certified quadrangular embedding of
K_n minus t edges, taken from the base library for small orders and from a
snapshot of the matching inductive pipeline otherwise.  Every result carries
the surgery log that produced it, so it can be replayed from its base
embedding.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Sequence

from .basecases import BASE_CASES, load_base, load_nq8_chain
from .embedding import Certificate, Claim, Embedding, EmbeddingError, SurfaceSpec, certify
from .pipelines import PIPELINES, Pipeline, admissible_t_set, check_property_p  # noqa: F401
from .surgery import SurgeryStep, apply_step


class NonexistenceError(EmbeddingError):
    """The requested quadrangulation provably does not exist."""


class InadmissibleError(ValueError):
    """(n, t) is outside the range the constructions cover."""


# Pairs outside the admissible progressions that still give minimal quadrangulations.
EXCEPTIONAL = {(4, 2, True): "c4", (6, 3, False): "k6e3"}
SMALL = {(4, 0, False): "k4", (6, 1, False): "k6e1", **EXCEPTIONAL}
NONEXISTENT = {(5, 0, False): "K_5 has no quadrangular embedding in any nonorientable surface"}


def f(x: int) -> int:
    return x * (x - 5) // 2


def minimal_order(surface: SurfaceSpec) -> int:
    """Fewest vertices of a quadrangulation of ``surface`` (exact integer arithmetic)."""
    chi = surface.euler_characteristic
    if chi == 2:
        return 4
    if chi == 0 and not surface.orientable:
        return 6
    d = 25 - 16 * chi
    # least n with 2n - 5 >= sqrt(d), i.e. ceil((5 + sqrt(d)) / 2)
    n = (5 + isqrt(d)) // 2
    while 2 * n - 5 < 0 or (2 * n - 5) ** 2 < d:
        n += 1
    return n


def pair_for_surface(surface: SurfaceSpec) -> tuple[int, int]:
    """The (n, t) realised by the minimal quadrangulation of ``surface``."""
    chi = surface.euler_characteristic
    if chi == 2:
        return (4, 2)
    if chi == 1:
        return (4, 0)
    if chi == 0 and not surface.orientable:
        return (6, 3)
    k = -2 * chi
    for n in range(5, 10**6):
        t = f(n) - k
        if 0 <= t <= n - 4:
            return (n, t)
    raise InadmissibleError(f"no admissible pair for {surface}")  # pragma: no cover


def is_buildable(n: int, t: int, orientable: bool) -> bool:
    if (n, t, orientable) in SMALL:
        return True
    if (n, t, orientable) in NONEXISTENT or n < 4:
        return False
    return t in admissible_t_set(n, orientable)


@dataclass
class Construction:
    n: int
    t: int
    orientable: bool
    emb: Embedding
    certificate: Certificate
    base: str
    steps: tuple[SurgeryStep, ...]
    origin: str

    @property
    def surface(self) -> SurfaceSpec:
        return self.certificate.surface

    def log_text(self) -> str:
        return format_log(self.base, self.steps)


def format_log(base: str, steps: Sequence[SurgeryStep]) -> str:
    return f"base {base}\n" + "".join(st.to_line() + "\n" for st in steps)


def parse_log(text: str) -> tuple[str, list[SurgeryStep]]:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("base "):
        raise ValueError("surgery log must start with a 'base NAME' line")
    return lines[0].split(None, 1)[1], [SurgeryStep.from_line(ln) for ln in lines[1:]]


def base_embedding(name: str) -> Embedding:
    if name == "nq8_cube":
        return load_nq8_chain().cube
    if name not in BASE_CASES:
        raise ValueError(f"unknown base embedding {name!r}")
    return load_base(name)


def replay(base: str, steps: Sequence[SurgeryStep]) -> Embedding:
    emb = base_embedding(base)
    for st in steps:
        emb, _ = apply_step(emb, st)
    return emb


_pipelines: dict[tuple[bool, int], Pipeline] = {}


def pipeline_for(n: int, orientable: bool) -> Pipeline:
    key = (orientable, n % 2)
    if key not in _pipelines:
        _pipelines[key] = PIPELINES[key]()
    return _pipelines[key].run(n)


def expected_claim(n: int, t: int, orientable: bool) -> Claim:
    m = n * (n - 1) // 2 - t
    return Claim(n, t, SurfaceSpec.from_euler(n - m // 2, orientable))


def build(n: int, t: int, orientable: bool) -> Construction:
    """A certified quadrangular embedding of K_n minus t edges."""
    key = (n, t, orientable)
    if key in NONEXISTENT:
        raise NonexistenceError(f"Q(n={n}, t={t}) nonorientable: {NONEXISTENT[key]}")
    if not is_buildable(n, t, orientable):
        kind = "orientable" if orientable else "nonorientable"
        raise InadmissibleError(f"(n={n}, t={t}) is not an admissible {kind} pair")
    if key in SMALL:
        name = SMALL[key]
        emb = load_base(name)
        cert = certify(emb, BASE_CASES[name].claim())
        con = Construction(n, t, orientable, emb, cert, name, (), f"base {name}")
    else:
        snap = pipeline_for(n, orientable).snapshots.get((n, t))
        if snap is None:
            raise InadmissibleError(f"no snapshot for (n={n}, t={t})")
        cert = certify(snap.emb, expected_claim(n, t, orientable))
        con = Construction(n, t, orientable, snap.emb, cert, snap.base, snap.steps, snap.origin)
    return con


def minimal_quadrangulation(surface: SurfaceSpec) -> Construction:
    """Build the minimal quadrangulation and add the minimality checks to its certificate."""
    n, t = pair_for_surface(surface)
    con = build(n, t, surface.orientable)
    checks = con.certificate.checks
    checks.append((f"requested surface {surface}", con.certificate.surface == surface))
    checks.append((f"n = minimal order {minimal_order(surface)}", n == minimal_order(surface)))
    if n >= 5 and (n, t) != (6, 3):
        checks.append(("0 <= t <= n-4", 0 <= t <= n - 4))
    return con


def all_pairs(n_max: int, orientable: bool) -> list[tuple[int, int]]:
    out = []
    for n in range(4, n_max + 1):
        for t in admissible_t_set(n, orientable):
            if (n, t, orientable) not in NONEXISTENT:
                out.append((n, t))
    return out
