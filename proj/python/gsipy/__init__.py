"""Python front end of the polynomial GSIP solver."""

import json

from ._gsipy import ParseError, canonical, corpus_ids, corpus_text, minimize
from ._gsipy import run_corpus_json as _run_corpus_json
from ._gsipy import solve_json as _solve_json

__all__ = ["ParseError", "canonical", "corpus_ids", "corpus_text", "minimize", "solve", "run_corpus"]


def solve(text, **options):
    """Solve problem-file text; returns the report as a dict (see `gsip run --emit`)."""
    return json.loads(_solve_json(text, **options))[0]


def run_corpus(instance, **options):
    """Solve a stored instance and compare with its reference values."""
    return json.loads(_run_corpus_json(instance, **options))[0]
