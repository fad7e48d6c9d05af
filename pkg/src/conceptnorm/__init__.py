"""Concept-normalization workbench.

Pipeline: ingest a mention corpus, pool subword embeddings into term
vectors, project to 2-D, group and label terms, cluster each group with
cosine k-means, and elect the centroid-nearest term as the canonical
parent node. Reports quantify within- vs cross-concept similarity.
"""

__version__ = "0.1.0"
