"""vmx: aggregate how-to video corpora into explorable task graphs.

Pipeline stages turn a corpus of narrated videos for one task into a
hierarchy of outcome types, standard/simple/complex approaches, grounded
steps, method variations and tips, persisted as a canonical JSON task
graph and served read-only over HTTP.
"""

__version__ = "0.1.0"

from . import corpus, dai, gateway, graph, methods, outcomes, pipeline, requirements

__all__ = [
    "corpus",
    "dai",
    "gateway",
    "graph",
    "methods",
    "outcomes",
    "pipeline",
    "requirements",
    "__version__",
]
