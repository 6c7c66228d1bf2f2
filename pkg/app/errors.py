"""
❌ Erros do pipeline

Cada classe carrega o exit code usado pela CLI (app/main.py).
"""


class FakeNewsError(Exception):
    """Erro base do pacote."""

    exit_code = 1


class UsageError(FakeNewsError):
    """Flags/config inválidos."""

    exit_code = 1


class DataError(FakeNewsError, ValueError):
    """Entrada de dados inválida (CSV, corpus, splits, labels)."""

    exit_code = 2


class BundleError(DataError):
    """Arquivo de modelo corrompido, truncado ou de versão incompatível."""


class NumericError(FakeNewsError, ArithmeticError):
    """Falha numérica (loss não-finita, gradiente divergente)."""

    exit_code = 3
