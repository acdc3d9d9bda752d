"""Wire conformance of the four HTTP routes."""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from udl_adapter.models import HashEmbedder, TemplateGenerator, general_matcher
from udl_adapter.service import ServiceModels, create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


@pytest.fixture(scope="module")
def manifest(client):
    resp = client.get("/manifest")
    assert resp.status_code == 200
    return resp.json()


class TestManifest:
    def test_reports_every_model(self, manifest):
        assert set(manifest) == {"embedding", "ner", "generator"}
        assert set(manifest["ner"]) == {"general", "specialized"}
        for entry in manifest["ner"].values():
            assert entry["vocabulary_size"] > 0

    def test_vocabulary_sizes(self, manifest):
        assert manifest["ner"]["general"]["vocabulary_size"] == 50000
        assert manifest["ner"]["specialized"]["vocabulary_size"] == 785000

    def test_dim_matches_embed_output(self, client, manifest):
        resp = client.post("/embed", json={"texts": ["one text"]})
        payload = resp.json()
        assert payload["dim"] == manifest["embedding"]["dim"]
        assert len(payload["vectors"][0]) == manifest["embedding"]["dim"]

    def test_partial_service_is_unavailable(self):
        partial = TestClient(create_app(ServiceModels(embedder=HashEmbedder(8))))
        assert partial.get("/manifest").status_code == 503


class TestEmbed:
    def test_identical_texts_identical_vectors(self, client):
        resp = client.post("/embed", json={"texts": ["a", "a"]})
        assert resp.status_code == 200
        vectors = resp.json()["vectors"]
        assert vectors[0] == vectors[1]

    def test_unit_norms(self, client):
        texts = ["first document", "second, longer document text", ""]
        mat = np.array(client.post("/embed", json={"texts": texts}).json()["vectors"])
        assert np.allclose(np.linalg.norm(mat, axis=1), 1.0, atol=1e-6)

    def test_rows_independent_of_batching(self, client):
        alone = client.post("/embed", json={"texts": ["alpha beta"]}).json()["vectors"][0]
        batched = client.post(
            "/embed", json={"texts": ["unrelated filler", "alpha beta"]}
        ).json()["vectors"][1]
        assert alone == batched

    def test_empty_batch_rejected(self, client):
        assert client.post("/embed", json={"texts": []}).status_code == 400

    def test_unloaded_model_unavailable(self):
        no_embedder = ServiceModels(
            matchers={"general": general_matcher()}, generator=TemplateGenerator()
        )
        resp = TestClient(create_app(no_embedder)).post("/embed", json={"texts": ["x"]})
        assert resp.status_code == 503


class TestNer:
    def test_counts_per_text_and_vocabulary_size(self, client):
        resp = client.post(
            "/ner",
            json={"texts": ["acetaminophen and rituximab", "no mentions", ""], "model": "specialized"},
        )
        assert resp.status_code == 200
        payload = resp.json()
        assert payload["counts"] == [2, 0, 0]
        assert payload["vocabulary_size"] == 785000

    def test_general_model(self, client):
        resp = client.post("/ner", json={"texts": ["euro fell in brussels"], "model": "general"})
        assert resp.json() == {"counts": [2], "vocabulary_size": 50000}

    def test_same_text_twice_equal_counts(self, client):
        text = "nato convened the security council"
        counts = client.post("/ner", json={"texts": [text, text], "model": "general"}).json()["counts"]
        assert counts[0] == counts[1]

    def test_unknown_model_rejected(self, client):
        resp = client.post("/ner", json={"texts": ["x"], "model": "tiny"})
        assert resp.status_code == 400
        assert "tiny" in resp.json()["detail"]

    def test_known_but_unloaded_model_unavailable(self):
        app = create_app(
            ServiceModels(embedder=HashEmbedder(8), matchers={}, generator=TemplateGenerator())
        )
        resp = TestClient(app).post("/ner", json={"texts": ["x"], "model": "general"})
        assert resp.status_code == 503

    def test_empty_batch_rejected(self, client):
        assert client.post("/ner", json={"texts": [], "model": "general"}).status_code == 400


class TestGenerate:
    def test_exactly_n_per_text(self, client):
        resp = client.post(
            "/generate", json={"texts": ["wind farm siting", "estuary salinity"], "n": 3}
        )
        assert resp.status_code == 200
        queries = resp.json()["queries"]
        assert [len(qs) for qs in queries] == [3, 3]

    def test_single_text_single_query(self, client):
        queries = client.post("/generate", json={"texts": ["soil carbon"], "n": 1}).json()["queries"]
        assert len(queries) == 1 and len(queries[0]) == 1

    def test_identical_across_calls(self, client):
        body = {"texts": ["reservoir sediment load"], "n": 4}
        first = client.post("/generate", json=body).json()
        second = client.post("/generate", json=body).json()
        assert first == second

    @pytest.mark.parametrize("n", [0, -3])
    def test_n_below_one_rejected(self, client, n):
        assert client.post("/generate", json={"texts": ["x"], "n": n}).status_code == 400

    def test_empty_batch_rejected(self, client):
        assert client.post("/generate", json={"texts": [], "n": 2}).status_code == 400
