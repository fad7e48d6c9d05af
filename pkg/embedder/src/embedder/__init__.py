"""Transformer sidecar: corpus terms in, token-level vectors out.

The only component touching the ML ecosystem. Output follows the
token-embedding JSON-lines interchange consumed by the workbench core.
"""

from .encode import EmbedderConfig, ModelUnavailable, TokenizationFailure, embed_terms

__all__ = ["EmbedderConfig", "ModelUnavailable", "TokenizationFailure", "embed_terms"]
