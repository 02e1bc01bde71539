import json

import pytest
from fastapi.testclient import TestClient

from signalmatch.data import SynthConfig, generate_synthetic, save_library, save_pairs
from signalmatch.service import MatcherService, ServiceConfig, create_app


@pytest.fixture(scope="module")
def corpus():
    return generate_synthetic(SynthConfig(8, 3, 20, 30, 0.0, seed=13))


@pytest.fixture
def service(tmp_path, corpus):
    save_pairs(corpus.dataset, tmp_path / "pairs.csv")
    save_library(corpus.library, tmp_path / "library.txt")
    corpus.antonyms.save(tmp_path / "antonyms.json")
    corpus.keywords.save(tmp_path / "keywords.txt")
    config = ServiceConfig(
        pairs_path=str(tmp_path / "pairs.csv"),
        library_path=str(tmp_path / "library.txt"),
        antonyms_path=str(tmp_path / "antonyms.json"),
        keywords_path=str(tmp_path / "keywords.txt"),
        confirm_log_path=str(tmp_path / "confirmations.ndjson"),
    )
    return MatcherService(config)


@pytest.fixture
def client(service):
    return TestClient(create_app(service))


class TestSuggest:
    def test_planted_query_ranks_its_label_first(self, client, corpus):
        label, tokens = next(iter(corpus.class_tokens.items()))
        resp = client.post("/api/suggest", json={"signal": " ".join(tokens), "k": 5})
        assert resp.status_code == 200
        body = resp.json()
        assert body["entries"][0]["label"] == label
        assert body["fallback"] is False
        assert body["model_version"].startswith("sha256:")

    def test_empty_signal_rejected(self, client):
        assert client.post("/api/suggest", json={"signal": "  ", "k": 3}).status_code == 400

    def test_k_out_of_range_rejected(self, client):
        assert client.post("/api/suggest", json={"signal": "x", "k": 0}).status_code == 400
        assert client.post("/api/suggest", json={"signal": "x", "k": 51}).status_code == 400

    def test_default_k_applied(self, client):
        resp = client.post("/api/suggest", json={"signal": "anything at all"})
        assert resp.status_code == 200
        assert len(resp.json()["entries"]) <= 10

    def test_unseen_query_flagged_as_fallback(self, client):
        resp = client.post("/api/suggest", json={"signal": "zzz qqq www", "k": 3})
        assert resp.status_code == 200
        assert resp.json()["fallback"] is True

    def test_suggest_is_read_only(self, client, service):
        before = service.model_info()
        for _ in range(5):
            client.post("/api/suggest", json={"signal": "zzz", "k": 3})
        assert service.model_info() == before

    def test_no_model_gives_503(self, tmp_path):
        (tmp_path / "pairs.csv").write_text(
            "project_id,customer_signal,library_signal\n"
        )
        (tmp_path / "library.txt").write_text("trip\n")
        config = ServiceConfig(
            pairs_path=str(tmp_path / "pairs.csv"),
            library_path=str(tmp_path / "library.txt"),
            confirm_log_path=str(tmp_path / "log.ndjson"),
        )
        client = TestClient(create_app(MatcherService(config)))
        assert client.post("/api/suggest", json={"signal": "x", "k": 1}).status_code == 503


class TestConfirm:
    def test_valid_confirmation_appends_to_log(self, client, service, corpus):
        label = next(iter(corpus.class_tokens))
        resp = client.post(
            "/api/confirm",
            json={"signal": "my new signal", "chosen": label, "source": "eng1"},
        )
        assert resp.status_code == 201
        log = service.confirmations()
        assert len(log) == 1
        assert log[0].chosen_label == label
        assert log[0].customer_signal == "my new signal"

    def test_unknown_label_rejected(self, client, service):
        resp = client.post(
            "/api/confirm", json={"signal": "x", "chosen": "no such label"}
        )
        assert resp.status_code == 400
        assert service.confirmations() == []

    def test_sequential_confirmations_all_recorded(self, client, service, corpus):
        label = next(iter(corpus.class_tokens))
        for i in range(4):
            client.post(
                "/api/confirm",
                json={"signal": f"sig {i}", "chosen": label, "source": f"e{i}"},
            )
        assert [c.customer_signal for c in service.confirmations()] == [
            f"sig {i}" for i in range(4)
        ]


class TestRebuild:
    def test_confirmation_with_new_token_becomes_learnable(self, client, corpus):
        label = next(iter(corpus.class_tokens))
        before = client.post("/api/suggest", json={"signal": "frobnicator", "k": 3})
        assert before.json()["fallback"] is True
        client.post(
            "/api/confirm", json={"signal": "frobnicator unit", "chosen": label}
        )
        rebuilt = client.post("/api/rebuild")
        assert rebuilt.status_code == 200
        after = client.post("/api/suggest", json={"signal": "frobnicator", "k": 3})
        assert after.json()["fallback"] is False
        assert after.json()["entries"][0]["label"] == label

    def test_rebuild_with_unchanged_data_keeps_version(self, client):
        v1 = client.post("/api/rebuild").json()["model_version"]
        v2 = client.post("/api/rebuild").json()["model_version"]
        assert v1 == v2

    def test_rebuild_changes_version_after_confirmation(self, client, corpus):
        label = next(iter(corpus.class_tokens))
        v1 = client.get("/api/model").json()["model_version"]
        client.post("/api/confirm", json={"signal": "brand new name", "chosen": label})
        v2 = client.post("/api/rebuild").json()["model_version"]
        assert v1 != v2

    def test_failed_rebuild_keeps_old_model(self, client, service, monkeypatch):
        v1 = service.model_info()["model_version"]

        def boom():
            raise RuntimeError("injected failure")

        monkeypatch.setattr(service, "rebuild", boom)
        assert client.post("/api/rebuild").status_code == 500
        monkeypatch.undo()
        assert service.model_info()["model_version"] == v1
        resp = client.post("/api/suggest", json={"signal": "anything", "k": 1})
        assert resp.status_code == 200
        assert resp.json()["model_version"] == v1

    def test_rebuild_replays_log_deterministically(self, tmp_path, corpus, service, client):
        label = next(iter(corpus.class_tokens))
        client.post("/api/confirm", json={"signal": "replayed name", "chosen": label})
        v1 = client.post("/api/rebuild").json()["model_version"]
        # a second service over the same files reaches the same version
        twin = MatcherService(service.config)
        assert twin.model_info()["model_version"] == v1


class TestInfo:
    def test_model_info(self, client):
        body = client.get("/api/model").json()
        assert body["method"] == "tokvote"
        assert body["n_training_pairs"] > 0
        assert body["n_confirmations"] == 0

    def test_health(self, client):
        resp = client.get("/health")
        assert resp.status_code == 200
        assert resp.json() == {"status": "ok"}

    def test_log_format_is_ndjson(self, client, service, corpus):
        label = next(iter(corpus.class_tokens))
        client.post("/api/confirm", json={"signal": "a b", "chosen": label, "source": "e"})
        lines = open(service.config.confirm_log_path, encoding="utf-8").read().splitlines()
        assert len(lines) == 1
        record = json.loads(lines[0])
        assert record["signal"] == "a b"
        assert record["chosen"] == label
        assert "timestamp" in record and "source" in record
