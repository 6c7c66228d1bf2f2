"""
📰 Bangla Fake News GRU - CLI

Comandos: prepare, train, evaluate, predict, gradcheck.

Exit codes: 0 sucesso, 1 uso inválido, 2 erro de dados, 3 falha numérica.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from app import __version__
from app.config import build_config
from app.errors import DataError, FakeNewsError, NumericError, UsageError
from app.neural.grad_check import GRAD_CHECK_TOLERANCE
from app.orchestrator.pipeline_runner import MODEL_FILE, PipelineRunner
from app.training.reports import format_report_table

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# flags → campos do RunConfig
CONFIG_FLAGS = (
    "data_path", "synthetic_size", "output_dir", "seed", "split_ratios", "validation_split",
    "oversample", "text_source", "lemmatizer", "max_words", "seq_len", "embed_dim",
    "gru_units", "learning_rate", "batch_size", "epochs", "threads", "positive_class", "plots",
)


class CliParser(argparse.ArgumentParser):
    """argparse que levanta UsageError em vez de sys.exit(2)."""

    def error(self, message):
        raise UsageError(f"{message}\n{self.format_usage()}")


# ═══════════════════════════════════════════════════════════
# PARSER
# ═══════════════════════════════════════════════════════════

def _add_common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("execução")
    g.add_argument("--config", help="Arquivo JSON de RunConfig (flags sobrescrevem)")
    g.add_argument("--output-dir", dest="output_dir", help="Diretório de artefatos (default runs/default)")
    g.add_argument("--seed", type=int)
    g.add_argument("-v", "--verbose", action="store_true", help="Log em DEBUG")
    g.add_argument("-q", "--quiet", action="store_true", help="Só warnings e erros")


def _add_data(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("dados")
    src = g.add_mutually_exclusive_group()
    src.add_argument("--data", dest="data_path", help="CSV com colunas headLine, content, label")
    src.add_argument("--synthetic", dest="synthetic_size", type=int, metavar="N",
                     help="Usa o corpus sintético de N documentos")
    g.add_argument("--split-ratios", dest="split_ratios", type=float, nargs=3,
                   metavar=("TRAIN", "VAL", "TEST"))
    g.add_argument("--validation-split", dest="validation_split", type=float,
                   help="Validação como fração do treino (ex.: 0.2)")
    g.add_argument("--no-oversample", dest="oversample", action="store_const", const=False)
    g.add_argument("--text-source", dest="text_source", choices=["headline", "content", "both"])
    g.add_argument("--lemmatizer", choices=["identity", "suffix_strip"])
    g.add_argument("--max-words", dest="max_words", type=int)
    g.add_argument("--plots", action="store_const", const=True, help="Salva figuras PNG")


def _add_model(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("modelo")
    g.add_argument("--seq-len", dest="seq_len", type=int)
    g.add_argument("--embed-dim", dest="embed_dim", type=int)
    g.add_argument("--gru-units", dest="gru_units", type=int)
    g.add_argument("--learning-rate", dest="learning_rate", type=float)
    g.add_argument("--batch-size", dest="batch_size", type=int)
    g.add_argument("--epochs", type=int)
    g.add_argument("--threads", type=int, help="Paralelismo dentro do batch (default 1)")


def build_parser() -> CliParser:
    parser = CliParser(
        prog="fakenews",
        description="Detecção de fake news em Bangla com GRU implementado em numpy",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("prepare", help="Split, oversampling, vocabulário e contagens")
    _add_common(p)
    _add_data(p)

    p = sub.add_parser("train", help="Treina e salva model.bin + history.csv")
    _add_common(p)
    _add_data(p)
    _add_model(p)

    p = sub.add_parser("evaluate", help="EvalReport + matriz de confusão")
    _add_common(p)
    _add_data(p)
    p.add_argument("--model", help=f"Model bundle (default <output-dir>/{MODEL_FILE})")
    p.add_argument("--split", dest="split_name", choices=["test", "validation"], default="test")
    p.add_argument("--positive-class", dest="positive_class", choices=["fake", "real"])

    p = sub.add_parser("predict", help="Classifica uma notícia ou um CSV")
    _add_common(p)
    p.add_argument("--model", help=f"Model bundle (default <output-dir>/{MODEL_FILE})")
    p.add_argument("--headline", help="Manchete")
    p.add_argument("--content", help="Texto da notícia")
    p.add_argument("--input", help="CSV com headLine/content para classificar em lote")
    p.add_argument("--output", help="CSV de saída (com --input)")

    p = sub.add_parser("gradcheck", help="Confere o backward com diferenças finitas")
    _add_common(p)
    p.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])

    return parser


# ═══════════════════════════════════════════════════════════
# COMMANDS
# ═══════════════════════════════════════════════════════════

def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    values = {k: getattr(args, k, None) for k in CONFIG_FLAGS}
    if values.get("split_ratios") is not None:
        values["split_ratios"] = tuple(values["split_ratios"])
    return values


def _model_path(args, runner: PipelineRunner) -> Path:
    return Path(args.model) if args.model else runner.output_dir / MODEL_FILE


def _emit(data: Any) -> None:
    print(json.dumps(data, ensure_ascii=False))


def _cmd_prepare(args, runner: PipelineRunner) -> int:
    prepared = runner.prepare(write=True)
    _emit({
        name: {"fake": c.fake, "real": c.real}
        for name, c in prepared.counts.items()
    })
    return 0


def _cmd_train(args, runner: PipelineRunner) -> int:
    _, history = runner.train()
    last = history[-1]
    _emit({
        "model": str(runner.output_dir / MODEL_FILE),
        "epochs": len(history),
        "train_loss": last.train_loss,
        "val_accuracy": last.val_accuracy,
    })
    return 0


def _cmd_evaluate(args, runner: PipelineRunner) -> int:
    report = runner.evaluate(_model_path(args, runner), split_name=args.split_name)
    sys.stdout.write(format_report_table(report))
    return 0


def _cmd_predict(args, runner: PipelineRunner) -> int:
    model = _model_path(args, runner)
    if args.input:
        if args.headline is not None or args.content is not None:
            raise UsageError("use --input OU --headline/--content, não ambos")
        for pred in runner.predict_csv(model, args.input, args.output):
            _emit(pred.model_dump(mode="json", exclude_none=True))
        runner.write_manifest("predict", [args.output] if args.output else [], extra={"model": str(model)})
        return 0

    if args.headline is None and args.content is None:
        raise UsageError("predict precisa de --headline/--content ou --input")
    pred = runner.predict_one(model, args.headline or "", args.content or "")
    _emit(pred.model_dump(mode="json", exclude_none=True))
    runner.write_manifest("predict", [], extra={"model": str(model)})
    return 0


def _cmd_gradcheck(args, runner: PipelineRunner) -> int:
    errors = runner.gradcheck(args.seeds)
    worst = max(errors.values())
    runner.write_manifest("gradcheck", [], extra={"max_relative_error": {str(k): v for k, v in errors.items()}})
    print(repr(worst))
    if worst >= GRAD_CHECK_TOLERANCE:
        logger.error(f"❌ Gradiente analítico diverge do numérico: {worst:.3e} ≥ {GRAD_CHECK_TOLERANCE:.0e}")
        return NumericError.exit_code
    return 0


COMMANDS = {
    "prepare": _cmd_prepare,
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
    "predict": _cmd_predict,
    "gradcheck": _cmd_gradcheck,
}


# ═══════════════════════════════════════════════════════════
# ENTRYPOINT
# ═══════════════════════════════════════════════════════════

def _configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def run(argv: Optional[List[str]] = None) -> int:
    """
    Executa a CLI e devolve o exit code (não chama sys.exit).

    Erros do pacote viram exit codes na borda; a mensagem vai para stderr.
    """
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except SystemExit as e:
        # --help / --version
        return int(e.code or 0)

    if args.verbose and args.quiet:
        print("error: --verbose e --quiet são exclusivos", file=sys.stderr)
        return UsageError.exit_code
    _configure_logging(args.verbose, args.quiet)

    try:
        config = build_config(args.config, _overrides(args))
        return COMMANDS[args.command](args, PipelineRunner(config))
    except FakeNewsError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except ArithmeticError as e:
        logger.error(f"❌ Falha numérica: {e}", exc_info=True)
        print(f"error: falha numérica: {e}", file=sys.stderr)
        return NumericError.exit_code
    except (ValueError, OSError) as e:
        logger.error(f"❌ Erro de dados: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return DataError.exit_code


if __name__ == "__main__":
    sys.exit(run())
