"""Tabulate minimal quadrangulations for all surfaces up to an Euler genus.

    python3 scripts/minimal_orders.py --max-euler-genus 50

For each surface: the closed-form order, the order of the certified
construction, the realised (n, t) and its edge and face counts.
"""

import argparse
import sys
from dataclasses import dataclass

from minquad.cli import surfaces_up_to
from minquad.constructor import minimal_order, minimal_quadrangulation


@dataclass
class TableConfig:
    max_euler_genus: int = 50


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-euler-genus", type=int, default=TableConfig.max_euler_genus)
    cfg = TableConfig(ap.parse_args(argv).max_euler_genus)
    print(f"{'surface':>7} {'chi':>5} {'n':>4} {'built':>5} {'t':>4} {'m':>5} {'faces':>5}  check")
    bad = 0
    for s in surfaces_up_to(cfg.max_euler_genus):
        con = minimal_quadrangulation(s)
        ok = con.certificate.ok
        bad += not ok
        print(f"{str(s):>7} {s.euler_characteristic:>5} {minimal_order(s):>4} {con.n:>5} {con.t:>4} "
              f"{con.emb.m:>5} {con.emb.r:>5}  {'ok' if ok else 'FAIL'}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
