import gzip
import json

import pytest

from phishguard import modelstore, preprocess
from phishguard.modelstore import ModelBundle, ModelStoreError, load, save
from phishguard.vectorize import TfidfConfig, Vocabulary


def probe_texts():
    return [
        "urgent verify your prize account now",
        "meeting agenda for the quarterly review",
        "claim bitcoin refund before it expires",
        "team timeline and budget minutes attached",
        "",
        "completely out of vocabulary words xyzzy",
    ]


class TestRoundTrip:
    @pytest.mark.parametrize("kind", ["lr", "nb"])
    def test_save_load_structural_identity(self, kind, tmp_path, lr_bundle, nb_bundle):
        bundle = lr_bundle if kind == "lr" else nb_bundle
        path = tmp_path / "model.pgmodel"
        save(bundle, path)
        loaded = load(path)
        assert loaded.kind == bundle.kind
        assert loaded.vocab == bundle.vocab
        assert loaded.preprocess_config == bundle.preprocess_config
        assert loaded.created_at == bundle.created_at
        assert loaded.payload() == bundle.payload()
        assert loaded.content_hash() == bundle.content_hash()

    @pytest.mark.parametrize("kind", ["lr", "nb"])
    def test_predictions_bit_identical_after_reload(self, kind, tmp_path, lr_bundle, nb_bundle):
        bundle = lr_bundle if kind == "lr" else nb_bundle
        path = tmp_path / "model.pgmodel"
        save(bundle, path)
        loaded = load(path)
        for text in probe_texts():
            before = bundle.predict(text)
            after = loaded.predict(text)
            assert before.label == after.label
            assert before.p_phishing == after.p_phishing
            assert before.contributions == after.contributions

    def test_gzip_container(self, tmp_path, lr_bundle):
        path = tmp_path / "model.pgmodel"
        save(lr_bundle, path, compress=True)
        assert path.read_bytes()[:2] == modelstore.GZIP_MAGIC
        assert load(path).kind == "logistic_regression"


class TestDeterminism:
    def test_saving_twice_is_byte_identical(self, tmp_path, lr_bundle):
        a, b = tmp_path / "a.pgmodel", tmp_path / "b.pgmodel"
        save(lr_bundle, a)
        save(lr_bundle, b)
        assert a.read_bytes() == b.read_bytes()

    def test_top_level_schema(self, tmp_path, lr_bundle):
        path = tmp_path / "m.pgmodel"
        save(lr_bundle, path)
        raw = json.loads(path.read_text())
        assert set(raw) == {
            "format_version", "preprocess", "vocab", "model", "created_at", "content_hash",
        }
        assert raw["format_version"] == modelstore.FORMAT_VERSION
        assert raw["model"]["kind"] == "logistic_regression"


class TestIntegrity:
    def test_every_single_byte_flip_is_detected(self, tmp_path, lr_bundle):
        path = tmp_path / "m.pgmodel"
        save(lr_bundle, path)
        original = path.read_bytes()
        # a representative spread of positions, including first and last byte
        positions = sorted({0, 1, len(original) - 1, *range(7, len(original), max(1, len(original) // 50))})
        for position in positions:
            tampered = bytearray(original)
            tampered[position] ^= 0x01
            path.write_bytes(bytes(tampered))
            with pytest.raises(ModelStoreError):
                load(path)

    def test_stale_hash_detected(self, tmp_path, lr_bundle):
        path = tmp_path / "m.pgmodel"
        raw = lr_bundle.payload()
        raw["content_hash"] = "0" * 64
        path.write_text(modelstore.canonical_json(raw))
        with pytest.raises(ModelStoreError, match="hash mismatch"):
            load(path)

    def test_version_mismatch_is_hard_error(self, tmp_path, lr_bundle):
        import hashlib

        path = tmp_path / "m.pgmodel"
        raw = lr_bundle.payload()
        raw["format_version"] = 99
        payload = modelstore.canonical_json(raw).encode()
        digest = hashlib.sha256(payload).hexdigest()
        path.write_bytes(b'{"content_hash":"' + digest.encode() + b'",' + payload[1:])
        with pytest.raises(ModelStoreError, match="format_version"):
            load(path)

    def test_truncated_gzip(self, tmp_path, lr_bundle):
        path = tmp_path / "m.pgmodel"
        save(lr_bundle, path, compress=True)
        path.write_bytes(path.read_bytes()[:40])
        with pytest.raises(ModelStoreError):
            load(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ModelStoreError, match="not found"):
            load(tmp_path / "missing.pgmodel")

    def test_invariants_rechecked_on_load(self, tmp_path, nb_bundle):
        path = tmp_path / "m.pgmodel"
        raw = nb_bundle.payload()
        # de-normalize one likelihood row, then re-hash so only the
        # invariant check can catch it
        raw["model"]["feature_log_prob"][0][0] += 1.0
        blob = {k: v for k, v in raw.items()}
        import hashlib

        blob["content_hash"] = hashlib.sha256(
            modelstore.canonical_json(raw).encode()
        ).hexdigest()
        path.write_text(modelstore.canonical_json(blob))
        with pytest.raises(ModelStoreError, match="sum to 1"):
            load(path)

    def test_pipeline_fingerprint_enforced(self, tmp_path, lr_bundle):
        import hashlib

        path = tmp_path / "m.pgmodel"
        raw = lr_bundle.payload()
        raw["preprocess"]["stopwords_sha256"] = "f" * 64
        raw["content_hash"] = hashlib.sha256(
            modelstore.canonical_json(raw).encode()
        ).hexdigest()
        path.write_text(modelstore.canonical_json(raw))
        with pytest.raises(ModelStoreError, match="different preprocessing pipeline"):
            load(path)
        assert load(path, verify_pipeline=False).kind == "logistic_regression"


class TestConsistency:
    def test_dimension_mismatch_rejected(self, lr_bundle):
        small_vocab = Vocabulary(
            terms=("only",),
            df=(2,),
            idf=(1.0,),
            n_docs=3,
            config=TfidfConfig(min_df=1),
        )
        with pytest.raises(ModelStoreError, match="does not match vocabulary"):
            ModelBundle(
                preprocess_config=preprocess.active_config(),
                vocab=small_vocab,
                model=lr_bundle.model,
                created_at="2026-01-01T00:00:00Z",
            )

    def test_metrics_travel_with_bundle(self, tmp_path, lr_bundle):
        bundle = ModelBundle(
            preprocess_config=lr_bundle.preprocess_config,
            vocab=lr_bundle.vocab,
            model=lr_bundle.model,
            created_at=lr_bundle.created_at,
            metrics={"accuracy": 1.0},
        )
        path = tmp_path / "m.pgmodel"
        save(bundle, path)
        assert load(path).metrics == {"accuracy": 1.0}
