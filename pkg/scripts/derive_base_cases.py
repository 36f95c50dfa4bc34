"""Derive the stored base embeddings from their constraints.

Run once (the results are committed under src/minquad/data/).  Each
embedding is the first solution of the exhaustive search in deterministic
order; the constraint file for each case is written next to it.

    python3 scripts/derive_base_cases.py [--check]

With --check nothing is written; the script only confirms that a fresh
derivation reproduces the stored files byte for byte.
"""

import argparse
import sys
import time
from pathlib import Path

from minquad import basecases
from minquad.io import dumps

DATA = Path(__file__).resolve().parents[1] / "src" / "minquad" / "data"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="compare with stored files instead of writing")
    args = ap.parse_args(argv)
    mismatches = 0
    outputs: dict[str, str] = {}
    # the cube comes first: the nonorientable chain starts from it
    for name, bc in basecases.BASE_CASES.items():
        t0 = time.perf_counter()
        emb = basecases.derive(name)
        outputs[f"{name}.emb"] = dumps(emb)
        outputs[f"{name}.problem"] = bc.problem().to_text()
        print(f"{name:6s} {emb.surface}  n={emb.n} m={emb.m}  {time.perf_counter() - t0:.2f}s")
        if not args.check:
            (DATA / f"{name}.emb").write_text(outputs[f"{name}.emb"])
            (DATA / f"{name}.problem").write_text(outputs[f"{name}.problem"])
    basecases.load_base.cache_clear()
    t0 = time.perf_counter()
    chain = basecases.derive_nq8_chain()
    outputs["nq8_cube.emb"] = dumps(chain.cube)
    outputs["nq8_chain.log"] = "".join(st.to_line() + "\n" for st in chain.steps)
    print(f"nq8 chain: t = {[28 - e.m for e in chain.stages]}  {time.perf_counter() - t0:.2f}s")
    for line in outputs["nq8_chain.log"].splitlines():
        print("   ", line)
    if args.check:
        for fname, text in outputs.items():
            stored = (DATA / fname).read_text()
            if stored != text:
                print(f"MISMATCH {fname}")
                mismatches += 1
        print("all stored base cases reproduced" if not mismatches else f"{mismatches} mismatches")
    else:
        basecases.write_nq8_chain(chain, DATA)
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
