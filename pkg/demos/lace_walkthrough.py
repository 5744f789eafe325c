# Lace swatch, one step at a time: parse, convert, lay out, score, draw.
from pathlib import Path

from knitgraph import (
    FdaConfig, bundled_patterns, classify_pattern, convert, count_crossings,
    del_score, parse, planar_layout, run, to_svg,
)

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

text = bundled_patterns()["lace"].read_text()
print(text)

pattern = parse(text)
print("class", classify_pattern(pattern))   # 0 means the graph is planar

g = convert(pattern)
print(g.n, "stitches,", len(g.edges), "edges")

# grid drawing from the planar embedding, rescaled to the desired lengths
start = planar_layout(g)
print("initial DEL", round(del_score(start, g), 3), "crossings", count_crossings(start, g))

layout, report = run(g, FdaConfig())
print("final DEL", round(report.final_del, 3), "after", report.iterations, "iterations")
print("worst crossing count seen", report.max_crossings)

(out / "lace_start.svg").write_text(to_svg(start, g))
(out / "lace.svg").write_text(to_svg(layout, g))
report.save(out / "lace.csv")
print("wrote", out / "lace.svg")
