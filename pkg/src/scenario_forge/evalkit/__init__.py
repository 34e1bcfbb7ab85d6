"""Evaluation kit: tree edit distance, accuracy, injection, benchmarking."""

from .benchmark import BenchmarkRecord, EvalReport, RecordResult, evaluate, load_benchmark, run_record
from .inject import inject_detection_drop, inject_text_hallucination, specified_leaf_count
from .metrics import ie_accuracy, scenario_ted
from .project import project_fields
from .ted import ted

__all__ = [
    "BenchmarkRecord",
    "EvalReport",
    "RecordResult",
    "evaluate",
    "load_benchmark",
    "run_record",
    "inject_detection_drop",
    "inject_text_hallucination",
    "specified_leaf_count",
    "ie_accuracy",
    "scenario_ted",
    "project_fields",
    "ted",
]
