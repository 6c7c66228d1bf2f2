"""
Testes do formato de persistência do modelo
"""

import json
import struct

import numpy as np
import pytest

from app.errors import BundleError
from app.neural.gru_model import Hyperparams, forward_batch, init_params
from app.persistence.model_bundle import (
    FORMAT_VERSION,
    MAGIC,
    ModelBundle,
    expected_payload_bytes,
    from_bytes,
    load_model,
    save_model,
    to_bytes,
)
from app.text.vectorizer import build_vocab


@pytest.fixture
def bundle(tiny_hp):
    vocab = build_vocab([[f"w{i}" for i in range(40)]], max_words=28)
    hp = tiny_hp.model_copy(update={"vocab_rows": vocab.rows})
    return ModelBundle(
        params=init_params(hp, 7),
        hyperparams=hp,
        vocab=vocab,
        config={"text_source": "both", "lemmatizer": "identity", "seed": 7},
    )


def _split(data: bytes):
    header = len(MAGIC) + 8
    (size,) = struct.unpack_from("<Q", data, len(MAGIC))
    return json.loads(data[header:header + size]), data[header + size:]


def _rebuild(manifest: dict, payload: bytes) -> bytes:
    body = json.dumps(manifest).encode("utf-8")
    return MAGIC + struct.pack("<Q", len(body)) + body + payload


def test_round_trip_gives_identical_predictions(tmp_path, bundle):
    path = save_model(bundle, tmp_path / "model.bin")
    loaded = load_model(path)

    assert loaded.params.equals(bundle.params)
    assert loaded.hyperparams == bundle.hyperparams
    assert loaded.vocab == bundle.vocab
    assert loaded.config == bundle.config

    hp = bundle.hyperparams
    ids = np.random.default_rng(0).integers(0, hp.vocab_rows, (100, hp.seq_len))
    before, _ = forward_batch(ids, bundle.params, hp)
    after, _ = forward_batch(ids, loaded.params, loaded.hyperparams)
    np.testing.assert_array_equal(before, after)


def test_serialization_is_deterministic(bundle):
    assert to_bytes(bundle) == to_bytes(bundle)


def test_manifest_is_readable_json(bundle):
    manifest, payload = _split(to_bytes(bundle))
    assert manifest["format_version"] == FORMAT_VERSION
    assert manifest["dtype"] == "<f4"
    assert [t["name"] for t in manifest["tensors"]] == ["E", "W", "U", "b", "w_out", "b_out"]
    assert manifest["vocabulary"]["words"][:2] == ["w0", "w1"]
    assert manifest["payload_bytes"] == len(payload)


def test_default_model_payload_size():
    expected = 4 * (10_002 * 100 + 100 * 96 + 32 * 96 + 96 + 32 + 1)
    assert expected_payload_bytes(Hyperparams().shapes()) == expected


def test_truncated_payload(bundle):
    data = to_bytes(bundle)
    _, payload = _split(data)
    with pytest.raises(BundleError) as exc:
        from_bytes(data[:-4])
    message = str(exc.value)
    assert f"esperado {len(payload)}" in message
    assert f"encontrado {len(payload) - 4}" in message


def test_trailing_bytes_rejected(bundle):
    with pytest.raises(BundleError, match="tamanho errado"):
        from_bytes(to_bytes(bundle) + b"\x00" * 4)


def test_version_mismatch(bundle):
    manifest, payload = _split(to_bytes(bundle))
    manifest["format_version"] = FORMAT_VERSION + 1
    with pytest.raises(BundleError, match="incompatível"):
        from_bytes(_rebuild(manifest, payload))


def test_shape_mismatch(bundle):
    manifest, payload = _split(to_bytes(bundle))
    manifest["tensors"][0]["shape"][0] += 1
    with pytest.raises(BundleError, match="shapes"):
        from_bytes(_rebuild(manifest, payload))


def test_bad_magic(bundle):
    with pytest.raises(BundleError, match="magic"):
        from_bytes(b"XXXX" + to_bytes(bundle)[4:])


def test_truncated_manifest(bundle):
    with pytest.raises(BundleError, match="manifest truncado"):
        from_bytes(to_bytes(bundle)[:20])


def test_float64_params_are_stored_as_float32(bundle):
    hp64 = bundle.hyperparams.model_copy(update={"precision": "float64"})
    wide = ModelBundle(params=init_params(hp64, 7), hyperparams=hp64, vocab=bundle.vocab)
    loaded = from_bytes(to_bytes(wide))

    assert loaded.hyperparams.precision == "float32"
    assert all(arr.dtype == np.float32 for _, arr in loaded.params.items())


def test_saving_without_vocab(tmp_path, bundle):
    bundle.vocab = None
    with pytest.raises(BundleError, match="vocabulário"):
        save_model(bundle, tmp_path / "model.bin")
    assert not (tmp_path / "model.bin").exists()


def test_missing_file(tmp_path):
    with pytest.raises(BundleError, match="não encontrado"):
        load_model(tmp_path / "nope.bin")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
