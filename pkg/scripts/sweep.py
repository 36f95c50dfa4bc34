"""Build and certify every admissible Q(n, t) up to a maximum order.

    python3 scripts/sweep.py --n-max 34 --csv sweep.csv

Prints one row per (n, t, orientability) with the certified surface, whether
the embedding is face-simple, and its worst face touching count.
"""

import argparse
import csv
import sys
import time
from dataclasses import asdict, dataclass

from minquad.constructor import all_pairs, build
from minquad.embedding import face_touch_multiplicity


@dataclass
class SweepConfig:
    n_max: int = 34
    orientable: tuple[bool, ...] = (True, False)
    csv_path: str | None = None


@dataclass
class Row:
    n: int
    t: int
    orientable: bool
    surface: str
    face_simple: bool
    max_touch: int
    origin: str
    ok: bool


def sweep(cfg: SweepConfig) -> list[Row]:
    rows = []
    for orientable in cfg.orientable:
        for n, t in all_pairs(cfg.n_max, orientable):
            con = build(n, t, orientable)
            cert = con.certificate
            touch = face_touch_multiplicity(con.emb).max_touch
            rows.append(Row(n, t, orientable, str(cert.surface), cert.face_simple, touch, con.origin, cert.ok))
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=SweepConfig.n_max)
    ap.add_argument("--only", choices=["o", "n"], help="restrict to one orientability")
    ap.add_argument("--csv", dest="csv_path")
    args = ap.parse_args(argv)
    orient = {"o": (True,), "n": (False,), None: (True, False)}[args.only]
    cfg = SweepConfig(args.n_max, orient, args.csv_path)
    t0 = time.perf_counter()
    rows = sweep(cfg)
    for r in rows:
        print(f"{'o' if r.orientable else 'n'} n={r.n:3d} t={r.t:3d} {r.surface:>5} "
              f"simple={int(r.face_simple)} touch={r.max_touch} {'ok' if r.ok else 'FAIL'}  {r.origin}")
    bad = sum(not r.ok for r in rows)
    print(f"# {len(rows)} pairs, {bad} failures, {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    if cfg.csv_path:
        with open(cfg.csv_path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(asdict(rows[0])))
            w.writeheader()
            w.writerows(asdict(r) for r in rows)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
