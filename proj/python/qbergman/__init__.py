"""Toeplitz operators on weighted Bergman spaces of quotient domains."""

import json

from ._qbergman import (
    QbError,
    ReflectionGroup,
    Symbol,
    Weight,
    berezin,
    completeness_defect,
    compressed_toeplitz,
    invariant_dimension,
    isotypic_basis,
    kernel_eval,
    kernel_series,
    monomial_norm_sq,
    quadrature_integral,
    smith_normal_form,
    toeplitz_matrix,
)
from . import _qbergman


def transfer_check(group, u, v, q=None, mode="product", n=8, alpha=()):
    """Transfer report as a dict with per-character residuals."""
    return json.loads(_qbergman.transfer_check(group, u, v, q, mode, n, list(alpha)))


def run_experiment(config):
    """Runs one experiment config (or a batch) and returns the report dicts."""
    return json.loads(_qbergman.run_experiment_json(json.dumps(config)))


def format_report(config, fmt="md"):
    """Runs the config and renders the reports as json, csv or md text."""
    return _qbergman.format_reports_json(json.dumps(config), fmt)


__all__ = [
    "QbError",
    "ReflectionGroup",
    "Symbol",
    "Weight",
    "berezin",
    "completeness_defect",
    "compressed_toeplitz",
    "format_report",
    "invariant_dimension",
    "isotypic_basis",
    "kernel_eval",
    "kernel_series",
    "monomial_norm_sq",
    "quadrature_integral",
    "run_experiment",
    "smith_normal_form",
    "toeplitz_matrix",
    "transfer_check",
]
