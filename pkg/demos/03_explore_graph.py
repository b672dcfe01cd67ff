"""Walk a persisted task graph the way the exploration UI does.

Drills one path through the hierarchy: pick an outcome, pick an approach,
read its requirements (shaded by how many videos use each item), expand a
step into method variations, and land on concrete clips and tips.

Run 02_run_pipeline.py first, then:
    python demos/03_explore_graph.py
"""

from pathlib import Path

from vmx import graph as graph_store

graph = graph_store.load(Path("demo_workspace/graphs/make-gnocchi.json"))
graph_store.validate(graph)  # referential integrity over the whole file

print(f"task: {graph.task_name}")
print(f"outcome types: {[c.name for c in graph.outcome_clusters]}\n")

# --- choose an outcome, then an approach ------------------------------------
cluster = graph.outcome_clusters[0]
print(f"exploring outcome {cluster.name!r}")
print(f"representative frames: {[f.uri for f in cluster.representative_frames]}")

standard = next(a for a in cluster.approaches if a.kind == "STANDARD")
print(f"\nstandard approach, followed by {len(standard.supporting_video_ids)} videos:")
for step in standard.steps:
    print(f"  - {step.step_name}: {step.description}")

# --- requirements, sorted by frequency, with UI shading buckets -------------
print("\nwhat you need (share of supporting videos that use it):")
for item in standard.requirements:
    bar = {"dark": "###", "medium": "## ", "light": "#  "}[item.shade]
    print(f"  [{bar}] {item.name:<14} {item.kind.lower():<10} {item.count} videos ({item.fraction:.0%})")

# --- expand one step into its method variations -----------------------------
step = standard.steps[2]
print(f"\nmethods for step {step.step_name!r}:")
for method in step.methods:
    print(f"  {method.name}: {len(method.clips)} clips")
    for clip in method.clips[:2]:
        print(f"    {clip.video_id} @ {clip.start_s:.0f}-{clip.end_s:.0f}s: {clip.summary}")
    for tip in method.tips:
        where = ", ".join(f"{g.video_id}[{g.sentence_start}-{g.sentence_end}]" for g in tip.groundings)
        print(f"    tip: {tip.text} (grounded in {where})")
