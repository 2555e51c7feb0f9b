"""Print a real-root histogram for a minimal shape.

    python3 demos/census_table.py 5x3x3 200
"""

import sys

from realrank import CensusSpec, emit_report, run_census
from realrank.tensor import Shape


def main(shape="3x3x2", trials="500", seed="0"):
    spec = CensusSpec(Shape.parse(shape), int(trials), int(seed))
    h = run_census(spec, jobs=1, progress=True)
    sys.stdout.write(emit_report(h, "csv"))
    lo, hi = h.wald_interval()
    print(f"Pr(rank = {spec.shape.I}) ~ {h.prob_rank_I():.3f}  (95% Wald: {lo:.3f} .. {hi:.3f})")


if __name__ == "__main__":
    main(*sys.argv[1:])
