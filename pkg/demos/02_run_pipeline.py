"""Run the full extraction pipeline offline and walk the stages.

Uses the scripted backend, a deterministic stand-in for the remote
vision-language model that derives its answers from markers embedded in
the sample corpus narration.  The same code path with backend="live"
talks to a real model (MODEL_API_KEY / MODEL_BASE_URL).

Run 01_build_sample_corpus.py first, then:
    python demos/02_run_pipeline.py
"""

from pathlib import Path

from vmx import graph as graph_store
from vmx.corpus import load_corpus
from vmx.gateway import Backend, GatewayConfig, ModelGateway
from vmx.pipeline import PipelineConfig, report, run_pipeline

workspace = Path("demo_workspace")
corpus = load_corpus(workspace / "corpus" / "manifest.json")
gateway = ModelGateway(GatewayConfig(backend=Backend.SCRIPTED))

# Stage order is fixed: outcomes -> dai -> requirements -> methods.
# A checkpoint lands after each stage under the run dir, so re-running
# this script resumes instantly and reproduces the identical graph.
graph, run = run_pipeline(
    corpus,
    gateway,
    PipelineConfig(seed=42),
    run_dir=workspace / "runs" / "make-gnocchi",
)

out_path = workspace / "graphs" / "make-gnocchi.json"
graph_store.save(graph, out_path)
print(f"graph saved to {out_path}\n")

# The hierarchy: task -> outcome types -> approaches -> steps.
for cluster in graph.outcome_clusters:
    print(f"outcome: {cluster.name}")
    for approach in cluster.approaches:
        support = len(approach.supporting_video_ids)
        print(f"  {approach.kind:<8} ({support} videos): {' > '.join(approach.step_sequence)}")

summary = report(run)
print("\nmodel calls per template:")
for template, count in summary["call_counts"].items():
    print(f"  {template:<18} {count}")
print(f"wall time: {summary['wall_time_s']}s")
print(f"resumed stages: {summary['stages_resumed'] or 'none (fresh run)'}")
