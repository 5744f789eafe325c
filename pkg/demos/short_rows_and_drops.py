# Dropped stitches stretch yarn edges; short rows only change which loops
# get pulled. Both patterns stay planar.
import numpy as np

from knitgraph import EdgeKind, FdaConfig, bundled_patterns, convert, parse, run

for name in ("short_row_wedge", "drop_stitch_1"):
    g = convert(parse(bundled_patterns()[name].read_text()))
    yarn = np.array([e.length for e in g.edges if e.kind is EdgeKind.YARN])
    rows = max(n.row for n in g.nodes)
    print(name, g.n, "stitches in", rows, "rows")
    print("  yarn lengths:", sorted(set(yarn.round(3).tolist())))

    layout, report = run(g, FdaConfig())
    P = layout.positions
    stretched = [e for e in g.edges if e.kind is EdgeKind.YARN and e.length > yarn.min()]
    for e in stretched[:3]:
        d = np.hypot(*(P[e.u - 1] - P[e.v - 1]))
        print(f"  edge {e.u}-{e.v}: want {e.length:.2f}, got {d:.2f}")
    print("  DEL", round(report.initial_del, 3), "->", round(report.final_del, 3))

# a short row turns before the end, so the next row pulls fewer loops
g = convert(parse("co 6\nrow: k6\nrow: k3, turn\nrow: k3, turn\nrow: k to end"))
print([sum(1 for n in g.nodes if n.row == r) for r in range(5)])
