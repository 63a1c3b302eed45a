"""Tagged transcriptions, annotation transforms and HTR/NER/IEHHR metrics."""

from ._core import (
    Error,
    Transcript,
    Vocabulary,
    align,
    cer,
    combine_labels,
    edit_distance,
    evaluate_htr,
    evaluate_iehhr,
    evaluate_ner,
    load_corpus,
    split_labels,
    stats,
    strip_tags,
    to_key_value,
    wer,
)

__all__ = [
    "Error",
    "Transcript",
    "Vocabulary",
    "align",
    "cer",
    "combine_labels",
    "edit_distance",
    "evaluate_htr",
    "evaluate_iehhr",
    "evaluate_ner",
    "load_corpus",
    "split_labels",
    "stats",
    "strip_tags",
    "to_key_value",
    "wer",
]
