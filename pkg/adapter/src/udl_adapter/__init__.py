"""Model sidecar for the document-linking pipeline.

Serves sentence embeddings, general and specialized entity counts, and
synthetic-query generation over HTTP, matching the wire contracts the
pipeline's remote backends speak.
"""

from udl_adapter.models import (
    GENERAL_VOCABULARY_SIZE,
    SPECIALIZED_VOCABULARY_SIZE,
    HashEmbedder,
    PhraseMatcher,
    TemplateGenerator,
    general_matcher,
    specialized_matcher,
)
from udl_adapter.service import ServiceModels, create_app

__version__ = "0.1.0"

__all__ = [
    "GENERAL_VOCABULARY_SIZE",
    "SPECIALIZED_VOCABULARY_SIZE",
    "HashEmbedder",
    "PhraseMatcher",
    "ServiceModels",
    "TemplateGenerator",
    "create_app",
    "general_matcher",
    "specialized_matcher",
]
