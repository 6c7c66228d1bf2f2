"""
🎯 Pipeline Runner

Liga os módulos para cada comando da CLI (prepare, train, evaluate,
predict, gradcheck) e escreve os artefatos em config.output_dir.

Artefatos por comando:
- prepare:  splits.json, vocab.json, class_counts.json, load_report.json
- train:    os de prepare + model.bin, history.csv
- evaluate: eval_report.json/.txt, confusion.json/.txt
- todos:    manifest_<comando>.json (config + seed + hash da entrada)
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple

import pandas as pd

from app import __version__
from app.config import RunConfig
from app.data.dataset_io import (
    ClassCounts,
    Corpus,
    SplitSet,
    class_counts,
    load_corpus,
    oversample,
    stratified_split,
)
from app.data.synthetic import make_synthetic_corpus
from app.errors import DataError, UsageError
from app.neural.grad_check import GRAD_CHECK_TOLERANCE, grad_check
from app.persistence.model_bundle import ModelBundle, load_model, save_model
from app.text.text_pipeline import LemmatizerMode, TextSource, preprocess
from app.text.vectorizer import EncodedDataset, Vocabulary, build_vocab, encode_example
from app.training.evaluator import EvalReport, Prediction, evaluate, predict, text_settings
from app.training.reports import write_confusion, write_eval_report, write_history_csv
from app.training.trainer import EpochRecord, train
from app.utils.hashing import sha256_file, sha256_text
from app.utils.plotting import plot_class_distribution, plot_confusion, plot_history

logger = logging.getLogger(__name__)

MODEL_FILE = "model.bin"
HISTORY_FILE = "history.csv"
SPLIT_KEYS = ("data_path", "synthetic_size", "seed", "split_ratios", "validation_split")


@dataclass
class PreparedData:
    """Resultado de prepare: corpus, splits, treino balanceado e vocabulário"""

    corpus: Corpus
    split: SplitSet
    train_corpus: Corpus
    vocab: Vocabulary
    counts: Dict[str, ClassCounts]


# ═══════════════════════════════════════════════════════════
# HELPERS
# ═══════════════════════════════════════════════════════════

def corpus_tokens(corpus: Corpus, source=TextSource.BOTH, mode=LemmatizerMode.IDENTITY) -> Iterator[List[str]]:
    for doc in corpus.documents:
        yield preprocess(doc.headline, doc.content, source, mode)


def encode_corpus(
    corpus: Corpus,
    vocab: Vocabulary,
    seq_len: int,
    source=TextSource.BOTH,
    mode=LemmatizerMode.IDENTITY,
) -> EncodedDataset:
    """Corpus → EncodedDataset (ids (N, seq_len) + labels 0/1)."""
    examples = [
        encode_example(tokens, doc.label, vocab, seq_len)
        for doc, tokens in zip(corpus.documents, corpus_tokens(corpus, source, mode))
    ]
    return EncodedDataset.from_examples(examples, maxlen=seq_len)


def _write_json(path: Path, data: Any) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    return path


class PipelineRunner:
    """
    Executa os comandos com um RunConfig validado.
    """

    def __init__(self, config: RunConfig):
        self.config = config
        self.output_dir = Path(config.output_dir)

    # ─────────────────────────────────────────────
    # ENTRADA
    # ─────────────────────────────────────────────

    def load_input(self) -> Corpus:
        config = self.config
        if config.synthetic_size is not None:
            logger.info(f"🧪 Usando corpus sintético (n={config.synthetic_size}, seed={config.seed})")
            return make_synthetic_corpus(config.synthetic_size, seed=config.seed)
        if config.data_path:
            return load_corpus(config.data_path)
        raise UsageError("nenhuma entrada: informe --data <csv> ou --synthetic N")

    def input_fingerprint(self) -> Dict[str, Any]:
        config = self.config
        if config.synthetic_size is not None:
            recipe = f"synthetic://n={config.synthetic_size},seed={config.seed}"
            return {"kind": "synthetic", "recipe": recipe, "sha256": sha256_text(recipe)}
        if config.data_path and Path(config.data_path).is_file():
            return {
                "kind": "csv",
                "path": str(config.data_path),
                "sha256": sha256_file(config.data_path),
            }
        return {"kind": "none"}

    def write_manifest(self, command: str, artifacts: List[str], extra: Optional[Dict] = None) -> Path:
        """Run manifest: tudo que é preciso para repetir o run."""
        manifest = {
            "command": command,
            "version": __version__,
            "seed": self.config.seed,
            "config": self.config.snapshot(),
            "input": self.input_fingerprint(),
            "artifacts": sorted(artifacts),
        }
        if extra:
            manifest.update(extra)
        return _write_json(self.output_dir / f"manifest_{command}.json", manifest)

    # ─────────────────────────────────────────────
    # PREPARE
    # ─────────────────────────────────────────────

    def prepare(self, write: bool = True) -> PreparedData:
        """
        Load → split estratificado → oversampling do treino → vocabulário.

        O vocabulário é montado só com o split de treino original (sem as
        duplicatas do oversampling).
        """
        config = self.config
        logger.info("🔧 Preparando dados...")

        corpus = self.load_input()
        split = stratified_split(corpus, config.effective_ratios(), seed=config.seed)
        train_corpus = oversample(split.train, seed=config.seed) if config.oversample else split.train

        vocab = build_vocab(
            corpus_tokens(split.train, config.text_source, config.lemmatizer),
            max_words=config.max_words,
        )

        counts = {
            "corpus": class_counts(corpus),
            "train": class_counts(split.train),
            "train_balanced": class_counts(train_corpus),
            "validation": class_counts(split.validation),
            "test": class_counts(split.test),
        }
        prepared = PreparedData(corpus=corpus, split=split, train_corpus=train_corpus, vocab=vocab, counts=counts)

        if write:
            self.write_manifest("prepare", self._write_prepare_artifacts(prepared))
        return prepared

    def _write_prepare_artifacts(self, prepared: PreparedData) -> List[str]:
        out = self.output_dir
        split = prepared.split

        _write_json(out / "splits.json", {
            "seed": split.seed,
            "ratios": list(split.ratios),
            "train": split.train_indices,
            "validation": split.validation_indices,
            "test": split.test_indices,
        })
        (out / "vocab.json").write_text(prepared.vocab.to_json(), encoding="utf-8")
        _write_json(out / "class_counts.json", {
            name: {"fake": c.fake, "real": c.real, "total": c.total}
            for name, c in prepared.counts.items()
        })

        load_report = prepared.corpus.load_report
        _write_json(out / "load_report.json", {
            **(load_report.model_dump() if load_report else {"kept": len(prepared.corpus)}),
            "dropped": load_report.dropped if load_report else 0,
            "distinct_tokens": prepared.vocab.total_distinct,
            "vocabulary_size": prepared.vocab.size,
        })

        artifacts = ["splits.json", "vocab.json", "class_counts.json", "load_report.json"]
        if self.config.plots:
            plot_class_distribution(prepared.counts["corpus"], out / "class_distribution_initial.png",
                                    title="Initial class distribution")
            plot_class_distribution(prepared.counts["train_balanced"], out / "class_distribution_balanced.png",
                                    title="Training set after oversampling")
            artifacts += ["class_distribution_initial.png", "class_distribution_balanced.png"]

        logger.info(f"✅ Dados preparados em {out}")
        return artifacts

    # ─────────────────────────────────────────────
    # TRAIN
    # ─────────────────────────────────────────────

    def train(self) -> Tuple[ModelBundle, List[EpochRecord]]:
        config = self.config
        prepared = self.prepare(write=True)

        encode = dict(seq_len=config.seq_len, source=config.text_source, mode=config.lemmatizer)
        train_set = encode_corpus(prepared.train_corpus, prepared.vocab, **encode)
        val_set = encode_corpus(prepared.split.validation, prepared.vocab, **encode)

        hp = config.to_hyperparams(prepared.vocab.rows)
        bundle, history = train(
            train_set,
            val_set,
            hp,
            seed=config.seed,
            vocab=prepared.vocab,
            config=config.snapshot(),
            threads=config.threads,
        )

        save_model(bundle, self.output_dir / MODEL_FILE)
        write_history_csv(history, self.output_dir / HISTORY_FILE)

        artifacts = ["splits.json", "vocab.json", "class_counts.json", "load_report.json", MODEL_FILE, HISTORY_FILE]
        if config.plots:
            plot_history(history, self.output_dir / "history.png")
            artifacts.append("history.png")

        self.write_manifest("train", artifacts)
        return bundle, history

    # ─────────────────────────────────────────────
    # EVALUATE / PREDICT
    # ─────────────────────────────────────────────

    def evaluate(self, model_path, split_name: str = "test") -> EvalReport:
        """Avalia o bundle no split pedido (test por default) do corpus do config."""
        if split_name not in ("test", "validation"):
            raise UsageError(f"split inválido: {split_name} (test | validation)")

        bundle = load_model(model_path)
        self._adopt_training_input(bundle)
        self._warn_config_drift(bundle)

        corpus = self.load_input()
        split = stratified_split(corpus, self.config.effective_ratios(), seed=self.config.seed)
        target = split.test if split_name == "test" else split.validation
        if len(target) == 0:
            raise DataError(f"empty test set: split '{split_name}' não tem documentos")

        source, mode = text_settings(bundle)
        dataset = encode_corpus(target, bundle.vocab, bundle.hyperparams.seq_len, source, mode)
        report = evaluate(bundle, dataset, positive=self.config.positive_class)

        out = self.output_dir
        write_eval_report(report, out / "eval_report.json", out / "eval_report.txt")
        write_confusion(report.confusion_matrix, out / "confusion.json", out / "confusion.txt")
        artifacts = ["eval_report.json", "eval_report.txt", "confusion.json", "confusion.txt"]
        if self.config.plots:
            plot_confusion(report.confusion_matrix, out / "confusion.png")
            artifacts.append("confusion.png")

        self.write_manifest("evaluate", artifacts, extra={"model": str(model_path), "split": split_name})
        return report

    def _adopt_training_input(self, bundle: ModelBundle) -> None:
        """Sem --data/--synthetic, reusa a entrada e o split gravados no bundle."""
        if self.config.synthetic_size is not None or self.config.data_path:
            return
        trained = bundle.config or {}
        update = {k: trained[k] for k in SPLIT_KEYS if k in trained}
        if update:
            logger.info("🔧 Sem --data/--synthetic: usando a entrada registrada no bundle")
            self.config = RunConfig.model_validate({**self.config.snapshot(), **update})

    def _warn_config_drift(self, bundle: ModelBundle) -> None:
        trained = bundle.config or {}
        for key in SPLIT_KEYS:
            current = self.config.snapshot().get(key)
            if key in trained and trained[key] != current:
                logger.warning(
                    f"⚠️ {key} difere do treino ({trained[key]!r} vs {current!r}): "
                    f"o split avaliado pode conter exemplos de treino"
                )

    def predict_one(self, model_path, headline: str, content: str) -> Prediction:
        return predict(load_model(model_path), headline, content)

    def predict_csv(self, model_path, input_path, output_path=None) -> List[Prediction]:
        """Prevê cada linha de um CSV com colunas headLine/content."""
        bundle = load_model(model_path)
        try:
            df = pd.read_csv(input_path, dtype=str, keep_default_na=False, encoding="utf-8")
        except FileNotFoundError as e:
            raise DataError(f"file not found: {input_path}") from e
        except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
            raise DataError(f"CSV de entrada inválido {input_path}: {e}") from e

        columns = {str(c).strip().lower(): c for c in df.columns}
        if "headline" not in columns and "content" not in columns:
            raise DataError(f"CSV {input_path} precisa de coluna headLine e/ou content")

        empty = pd.Series([""] * len(df), index=df.index)
        headlines = df[columns["headline"]] if "headline" in columns else empty
        contents = df[columns["content"]] if "content" in columns else empty

        predictions = [predict(bundle, h, c) for h, c in zip(headlines, contents)]
        logger.info(f"🔮 {len(predictions)} previsões para {input_path}")

        if output_path is not None:
            out = df.copy()
            out["predicted_label"] = [p.label.value for p in predictions]
            out["probability_real"] = [p.probability for p in predictions]
            Path(output_path).parent.mkdir(parents=True, exist_ok=True)
            out.to_csv(output_path, index=False, lineterminator="\n")
            logger.info(f"💾 Previsões salvas: {output_path}")
        return predictions

    # ─────────────────────────────────────────────
    # GRADCHECK
    # ─────────────────────────────────────────────

    def gradcheck(self, seeds: List[int]) -> Dict[int, float]:
        errors = {seed: grad_check(seed=seed) for seed in seeds}
        worst = max(errors.values())
        status = "✅" if worst < GRAD_CHECK_TOLERANCE else "❌"
        logger.info(f"{status} Grad check: max rel err {worst:.3e} (tolerância {GRAD_CHECK_TOLERANCE:.0e})")
        return errors

