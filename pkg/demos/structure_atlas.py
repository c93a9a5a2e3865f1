"""Coarse phase diagram of solution structures over (ML, MR) for three gains.

Each character is one solve: digits are Type1..Type7, 'c' means the
source switched off (classical solution), '.' an error such as vacuum.
"""

import json

from singular_euler.cli import cmd_sweep, parse_config

N = 24
cfg = parse_config(json.dumps({
    "sweep": {"ml": [0.1, 3.0, N], "mr": [0.1, 3.0, N], "k": [-0.2, 0.0, 0.2], "workers": 4},
}))
rows = cmd_sweep(cfg).rows


def glyph(tag):
    if tag.startswith("Type"):
        return tag[4:]
    return "c" if tag == "SourceOffClassical" else "."


for block in range(3):
    chunk = rows[block * N * N:(block + 1) * N * N]
    k = chunk[0][3]
    print(f"\nk = {k:+.1f}   (rows: ML from 3.0 down to 0.1, columns: MR from 0.1 to 3.0)")
    grid = [chunk[i * N:(i + 1) * N] for i in range(N)]
    for line in reversed(grid):
        print("  " + "".join(glyph(r[4]) for r in line))
    seen = sorted({r[4] for r in chunk})
    print("  structures:", ", ".join(seen))
