"""
💾 Model Bundle

Arquivo único = manifest JSON + payload binário de pesos.

Layout:
    MAGIC (4 bytes, b"BFNG")
    tamanho do manifest (uint64 little-endian)
    manifest (JSON UTF-8, legível)
    payload: float32 little-endian, na ordem E, W, U, b, w_out, b_out
             (row-major; W/U/b com blocos de gate [z, r, h] contíguos)
"""

import json
import logging
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from app.errors import BundleError
from app.neural.gru_model import PARAM_ORDER, Hyperparams, ModelParams
from app.text.vectorizer import Vocabulary

logger = logging.getLogger(__name__)

MAGIC = b"BFNG"
FORMAT_VERSION = 1
PAYLOAD_DTYPE = np.dtype("<f4")
_LENGTH = struct.Struct("<Q")


@dataclass
class ModelBundle:
    """Tudo que a inferência precisa: pesos, vocabulário, hiperparâmetros e config"""

    params: ModelParams
    hyperparams: Hyperparams
    vocab: Optional[Vocabulary] = None
    config: Optional[Dict[str, Any]] = None

    def manifest(self) -> Dict[str, Any]:
        shapes = self.hyperparams.shapes()
        return {
            "format_version": FORMAT_VERSION,
            "hyperparams": self.hyperparams.model_dump(mode="json"),
            "config": self.config,
            "vocabulary": self.vocab.to_dict() if self.vocab else None,
            "tensors": [{"name": n, "shape": list(shapes[n])} for n in PARAM_ORDER],
            "dtype": PAYLOAD_DTYPE.str,
            "payload_bytes": expected_payload_bytes(shapes),
        }


def expected_payload_bytes(shapes: Dict[str, Any]) -> int:
    return PAYLOAD_DTYPE.itemsize * sum(int(np.prod(s)) for s in shapes.values())


def to_bytes(bundle: ModelBundle) -> bytes:
    if bundle.vocab is None:
        raise BundleError("bundle sem vocabulário não pode ser salvo")
    bundle.params.check_shapes(bundle.hyperparams)

    manifest = json.dumps(bundle.manifest(), ensure_ascii=False, indent=2, sort_keys=True).encode("utf-8")
    payload = b"".join(
        np.ascontiguousarray(arr, dtype=PAYLOAD_DTYPE).tobytes() for _, arr in bundle.params.items()
    )
    return MAGIC + _LENGTH.pack(len(manifest)) + manifest + payload


def from_bytes(data: bytes, source: str = "<bytes>") -> ModelBundle:
    header = len(MAGIC) + _LENGTH.size
    if len(data) < header or data[:len(MAGIC)] != MAGIC:
        raise BundleError(f"{source}: não é um model bundle (magic inválido)")

    (manifest_len,) = _LENGTH.unpack_from(data, len(MAGIC))
    if len(data) < header + manifest_len:
        raise BundleError(
            f"{source}: manifest truncado (esperado {manifest_len} bytes, "
            f"encontrado {len(data) - header})"
        )

    try:
        manifest = json.loads(data[header:header + manifest_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise BundleError(f"{source}: manifest ilegível ({e})") from e

    version = manifest.get("format_version")
    if version != FORMAT_VERSION:
        raise BundleError(
            f"{source}: versão {version} incompatível (suportada: {FORMAT_VERSION})"
        )

    hp = Hyperparams.model_validate({**manifest["hyperparams"], "precision": "float32"})
    declared = {t["name"]: tuple(t["shape"]) for t in manifest["tensors"]}
    if declared != hp.shapes():
        raise BundleError(f"{source}: shapes do manifest não batem com os hiperparâmetros")

    payload = data[header + manifest_len:]
    expected = expected_payload_bytes(declared)
    if len(payload) != expected:
        raise BundleError(
            f"{source}: payload com tamanho errado: esperado {expected} bytes, "
            f"encontrado {len(payload)}"
        )

    tensors, offset = {}, 0
    for name in _tensor_names(manifest):
        shape = declared[name]
        count = int(np.prod(shape))
        flat = np.frombuffer(payload, dtype=PAYLOAD_DTYPE, count=count, offset=offset)
        tensors[name] = flat.astype(np.float32).reshape(shape)
        offset += count * PAYLOAD_DTYPE.itemsize

    vocab = Vocabulary.from_dict(manifest["vocabulary"]) if manifest.get("vocabulary") else None
    return ModelBundle(
        params=ModelParams(**tensors),
        hyperparams=hp,
        vocab=vocab,
        config=manifest.get("config"),
    )


def _tensor_names(manifest: Dict[str, Any]):
    names = [t["name"] for t in manifest["tensors"]]
    if names != list(PARAM_ORDER):
        raise BundleError(f"ordem de tensores inesperada: {names}")
    return names


def save_model(bundle: ModelBundle, path) -> Path:
    """Salva o bundle (escrita atômica via arquivo temporário)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = to_bytes(bundle)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(data)
    tmp.replace(path)
    logger.info(f"💾 Modelo salvo: {path} ({len(data)} bytes)")
    return path


def load_model(path) -> ModelBundle:
    """Carrega um bundle escrito por save_model."""
    path = Path(path)
    if not path.is_file():
        raise BundleError(f"model bundle não encontrado: {path}")
    bundle = from_bytes(path.read_bytes(), source=str(path))
    logger.info(
        f"💾 Modelo carregado: {path} "
        f"(vocab_rows={bundle.hyperparams.vocab_rows}, units={bundle.hyperparams.gru_units})"
    )
    return bundle
