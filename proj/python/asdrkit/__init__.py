"""Diarization and ASR scoring, fusion and simulation (asdrkit)."""

import json

from ._core import (
    absolute_reduction,
    brute_force,
    cluster,
    edit_distance,
    format_percent,
    fuse_rttm,
    fuse_text,
    post_process,
    rover,
    run_pipeline,
    simulate_conversation,
    simulate_embeddings,
    solve_min_cost,
    split_graphemes,
)
from . import _core

__all__ = [
    "absolute_reduction", "brute_force", "cer", "cluster", "cpcer", "der",
    "edit_distance", "format_percent", "fuse_rttm", "fuse_text", "post_process",
    "rover", "run_pipeline", "simulate_conversation", "simulate_embeddings",
    "solve_min_cost", "split_graphemes",
]


def der(ref, hyp, collar=0.25, score_overlap=True, uem=None):
    """DER report for two RTTM texts, as a dict (see docs/pipeline.md)."""
    return json.loads(_core.der_json(ref, hyp, collar, score_overlap, uem))


def cer(ref, hyp, unit="char", strip_punctuation=False):
    return json.loads(_core.cer_json(ref, hyp, unit, strip_punctuation))


def cpcer(ref, hyp, unit="char", strip_punctuation=False):
    return json.loads(_core.cpcer_json(ref, hyp, unit, strip_punctuation))
