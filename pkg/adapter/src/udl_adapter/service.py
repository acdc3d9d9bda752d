"""HTTP surface for the embedding, entity-count, and generation models.

Four routes: GET /manifest describes the loaded models, POST /embed returns
unit-norm vectors, POST /ner returns per-text mention counts plus the
recognizer's vocabulary size, POST /generate returns a fixed number of
queries per text.  Handlers are stateless; everything mutable is filled in
at startup.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from udl_adapter.models import (
    HashEmbedder,
    PhraseMatcher,
    TemplateGenerator,
    general_matcher,
    specialized_matcher,
)

NER_MODELS = ("general", "specialized")


@dataclass
class ServiceModels:
    """Models the service was started with; None marks one as not loaded."""

    embedder: HashEmbedder | None = None
    matchers: dict[str, PhraseMatcher] = field(default_factory=dict)
    generator: TemplateGenerator | None = None

    @classmethod
    def standard(cls, dim: int = 256) -> "ServiceModels":
        return cls(
            embedder=HashEmbedder(dim),
            matchers={"general": general_matcher(), "specialized": specialized_matcher()},
            generator=TemplateGenerator(),
        )


class EmbedRequest(BaseModel):
    texts: list[str]


class EmbedResponse(BaseModel):
    vectors: list[list[float]]
    dim: int


class NerRequest(BaseModel):
    texts: list[str]
    model: str


class NerResponse(BaseModel):
    counts: list[int]
    vocabulary_size: int


class GenerateRequest(BaseModel):
    texts: list[str]
    n: int = 3


class GenerateResponse(BaseModel):
    queries: list[list[str]]


def create_app(models: ServiceModels | None = None) -> FastAPI:
    """Build the application.  models=None loads the standard set."""
    if models is None:
        models = ServiceModels.standard()
    app = FastAPI(title="udl model adapter")

    @app.get("/manifest")
    def manifest() -> dict:
        missing = [name for name in NER_MODELS if name not in models.matchers]
        if models.embedder is None or models.generator is None or missing:
            raise HTTPException(status_code=503, detail="service started without all models")
        return {
            "embedding": {"model": models.embedder.name, "dim": models.embedder.dim},
            "ner": {
                name: {
                    "model": models.matchers[name].name,
                    "vocabulary_size": models.matchers[name].vocabulary_size,
                }
                for name in NER_MODELS
            },
            "generator": {"model": models.generator.name},
        }

    @app.post("/embed", response_model=EmbedResponse)
    def embed(req: EmbedRequest) -> EmbedResponse:
        if models.embedder is None:
            raise HTTPException(status_code=503, detail="embedding model not loaded")
        if not req.texts:
            raise HTTPException(status_code=400, detail="empty batch")
        vectors = models.embedder.embed(req.texts)
        return EmbedResponse(vectors=vectors.tolist(), dim=models.embedder.dim)

    @app.post("/ner", response_model=NerResponse)
    def ner(req: NerRequest) -> NerResponse:
        if req.model not in NER_MODELS:
            raise HTTPException(status_code=400, detail=f"unknown model {req.model!r}")
        matcher = models.matchers.get(req.model)
        if matcher is None:
            raise HTTPException(status_code=503, detail=f"{req.model} model not loaded")
        if not req.texts:
            raise HTTPException(status_code=400, detail="empty batch")
        return NerResponse(
            counts=[matcher.count(t) for t in req.texts],
            vocabulary_size=matcher.vocabulary_size,
        )

    @app.post("/generate", response_model=GenerateResponse)
    def generate(req: GenerateRequest) -> GenerateResponse:
        if models.generator is None:
            raise HTTPException(status_code=503, detail="generation model not loaded")
        if not req.texts:
            raise HTTPException(status_code=400, detail="empty batch")
        if req.n < 1:
            raise HTTPException(status_code=400, detail=f"n must be at least 1, got {req.n}")
        return GenerateResponse(queries=[models.generator.generate(t, req.n) for t in req.texts])

    return app
