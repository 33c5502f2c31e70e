#!/usr/bin/env python3
"""Emit a corpus of complex files for downstream tooling.

    python3 scripts/generate_corpus.py --count 10 --out-dir corpus/
"""

import argparse
import pathlib
import sys
from fractions import Fraction

from novikit.fileformat import emit
from novikit.models import ModelSpec, gen_pathological, gen_random


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out-dir", default="corpus")
    parser.add_argument("--include-pathological", action="store_true",
                        help="also emit the divergence counterexample")
    args = parser.parse_args(argv)

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for k in range(args.count):
        spec = ModelSpec(seed=args.seed + k, n_pairs=1 + k % 3,
                         n_closed=k % 2, density=Fraction(1, 2),
                         lattice_rank=(0, 1, 2)[k % 3])
        path = out / f"model_{spec.seed:04d}.nvk"
        path.write_text(emit(gen_random(spec)))
    if args.include_pathological:
        (out / "pathological.nvk").write_text(emit(gen_pathological()))
    print(f"wrote {args.count} models to {out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
