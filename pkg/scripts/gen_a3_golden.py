#!/usr/bin/env python3
"""Regenerate the committed A3 P-table golden file.

The table is produced by the defining recursion only (the oracle route);
the chain routes are later required to reproduce it.  Output is sorted and
stable so reruns are byte-identical.
"""

import json
from pathlib import Path

from klpoly.coxeter import CartanDatum, WeylGroup
from klpoly.klcore import KLEngine

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "a3_p_table.json"


def main():
    group = WeylGroup(CartanDatum.from_label("A3"))
    engine = KLEngine(group)
    rows = []
    for w in group.enumerate_group():
        for v in group.enumerate_group():
            if not group.bruhat_leq(v, w):
                continue
            rows.append(
                {
                    "w": group.word_string(w),
                    "v": group.word_string(v),
                    "len_w": group.length(w),
                    "len_v": group.length(v),
                    "poly": engine.p_poly_recursive(v, w).to_pairs(),
                }
            )
    rows.sort(key=lambda r: (r["len_w"], r["w"], r["len_v"], r["v"]))
    payload = {
        "schema": "klpoly.golden.v1",
        "type": "A3",
        "kind": "P",
        "route": "recursion",
        "rows": rows,
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    nontrivial = sum(1 for r in rows if r["poly"] != [[0, 1]])
    print(f"wrote {OUT} ({len(rows)} rows, {nontrivial} nontrivial)")


if __name__ == "__main__":
    main()
