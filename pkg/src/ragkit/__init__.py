"""Retrieval-augmented question answering toolkit.

Subpackages cover the full pipeline: corpus ingestion and chunking
(`ragkit.corpus`), lexical/dense/fused retrieval (`ragkit.retrieval`),
prompt construction and answer generation (`ragkit.generation`), and a
multiple-choice QA benchmark harness with its analyses
(`ragkit.benchmark`). The `ragkit` console script drives everything from
config files.
"""

__version__ = "0.1.0"
