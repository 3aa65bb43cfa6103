"""Bounded countermodel search for every axiom over every named frame class.

Prints a grid: '.' for no countermodel up to N states, 'x' for a countermodel.

    python3 scripts/soundness_sweep.py --max-states 2
"""

import argparse
import time

from imlkit.decide import SearchBudget, countermodel_search
from imlkit.proofsys import AXIOMS

CLASSES = ["all", "fc", "bc", "dc", "uc", "uref", "dref", "usym", "dsym", "utra", "dtra"]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-states", type=int, default=2)
    ap.add_argument("--dedup", action="store_true")
    ap.add_argument("--classes", default=",".join(CLASSES))
    args = ap.parse_args()
    classes = args.classes.split(",")
    budget = SearchBudget(args.max_states, dedup_isomorphic=args.dedup)
    names = [k for k in AXIOMS if not k.startswith("I")]

    start = time.monotonic()
    print("%-6s %s" % ("", " ".join("%5s" % c for c in classes)))
    for name in names:
        cells = []
        for spec in classes:
            out = countermodel_search(AXIOMS[name], spec, budget)
            cells.append("%5s" % ("x" if out.found else "."))
        print("%-6s %s" % (name, " ".join(cells)), flush=True)
    print("\n%.1fs, up to %d states" % (time.monotonic() - start, args.max_states))


if __name__ == "__main__":
    main()
