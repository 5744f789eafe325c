# How layout quality and runtime grow with the triangle shawl.
import sys
import time

from knitgraph import FdaConfig, convert, gen_triangle, run

rows = [int(r) for r in sys.argv[1:]] or [5, 11, 17]

print(f"{'rows':>4} {'nodes':>6} {'initial':>8} {'final':>7} {'seconds':>8}")
for r in rows:
    g = convert(gen_triangle(r))
    t = time.perf_counter()
    _, report = run(g, FdaConfig())
    print(f"{r:>4} {g.n:>6} {report.initial_del:8.3f} {report.final_del:7.3f} {time.perf_counter() - t:8.1f}")

# bigger shawls stall on the crossing constraint; letting blocked nodes
# move part of the way helps
g = convert(gen_triangle(rows[-1]))
_, report = run(g, FdaConfig(bisect_moves=True))
print("with bisect_moves:", round(report.final_del, 3))
