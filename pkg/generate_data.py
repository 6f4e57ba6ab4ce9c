"""
Regenerate the golden files under data/golden/.

Run from the repository root:
    python generate_data.py
"""

from pathlib import Path

from src.tools.extremal import bounds
from src.tools.schreier_engine import export_graph, minv_distribution
from src.utils.exporters import bounds_frame, edges_frame, histogram_frame

GOLDEN_DIR = Path("data") / "golden"

print("Generating golden files...")
print("=" * 60)

GOLDEN_DIR.mkdir(parents=True, exist_ok=True)

# Closed-form bounds for the two smallest interesting sizes
bounds_frame([bounds(4), bounds(5)]).to_csv(GOLDEN_DIR / "bounds_n4_n5.csv", index=False)
print("✅ bounds_n4_n5.csv")

for n in (4, 5):
    counts = minv_distribution(n).counts
    histogram_frame(counts).to_csv(GOLDEN_DIR / f"distribution_n{n}.csv", index=False)
    print(f"✅ distribution_n{n}.csv: {list(counts)}")

graph = export_graph(4)
edges_frame(graph).to_csv(GOLDEN_DIR / "gamma4_edges.csv", index=False)
print(f"✅ gamma4_edges.csv: {graph.number_of_nodes()} vertices, {graph.number_of_edges()} edges")

print("=" * 60)
print(f"📁 Saved to: {GOLDEN_DIR}/")
