"""Which frame classes each axiom defines, checked on all frames up to N states.

    python3 scripts/definability_tables.py --max-states 3
"""

import argparse

from imlkit.decide import definability_check
from imlkit.formula import show
from imlkit.proofsys import AXIOMS

ROWS = [("Af", "fc"), ("Af", "qfc"), ("Ab", "bc"), ("Ab", "qbc"), ("Ad", "dc"), ("Ad", "qdc"),
        ("Auref", "uref"), ("Adref", "dref"), ("Ausym", "usym"), ("Adsym", "dsym"),
        ("Autra", "utra"), ("Adtra", "dtra"), ("Auref", "ref"), ("Adsym", "sym"),
        ("Autra", "tra")]


def describe(res):
    if res.holds:
        return "defines"
    if res.refuted_in_class:
        return "no: refuted inside the class"
    return "no: valid on a frame outside the class"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-states", type=int, default=3)
    ap.add_argument("--dedup", action="store_true")
    args = ap.parse_args()
    for axiom, pred in ROWS:
        res = definability_check(AXIOMS[axiom], pred, args.max_states, dedup=args.dedup)
        print("%-6s %-5s %-40s %s" % (axiom, pred, show(AXIOMS[axiom]), describe(res)), flush=True)


if __name__ == "__main__":
    main()
