"""Benchmark records and batch evaluation.

A benchmark directory holds one subdirectory per scenario with
``description.txt``, ``detections.json``, ``ground_truth.scn.yaml`` and an
optional ``image.jpg``.  Evaluation runs the full pipeline per record
(textual extraction, visual extraction, alignment), scores accuracy against
the ground truth, and aggregates a mean with a 95% t-interval margin of
error across repetitions.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from scenario_forge.align import merge
from scenario_forge.ir import Scenario, load_scenario
from scenario_forge.textual import ProviderConfig, extract_textual_ir
from scenario_forge.vision import build_visual_ir, load_detections

from .metrics import ie_accuracy, scenario_ted


@dataclass(frozen=True)
class BenchmarkRecord:
    id: str
    description: str
    detections_path: Path
    ground_truth: Scenario
    image_path: Path | None = None


def load_benchmark(directory) -> list[BenchmarkRecord]:
    """Load every record subdirectory, sorted by name."""
    directory = Path(directory)
    records = []
    for sub in sorted(p for p in directory.iterdir() if p.is_dir()):
        description_path = sub / "description.txt"
        detections_path = sub / "detections.json"
        truth_path = sub / "ground_truth.scn.yaml"
        if not (description_path.exists() and detections_path.exists() and truth_path.exists()):
            continue
        description = description_path.read_text(encoding="utf-8").strip()
        if not description:
            raise ValueError(f"{sub.name}: empty description")
        image = sub / "image.jpg"
        records.append(
            BenchmarkRecord(
                id=sub.name,
                description=description,
                detections_path=detections_path,
                ground_truth=load_scenario(truth_path),
                image_path=image if image.exists() else None,
            )
        )
    if not records:
        raise ValueError(f"no benchmark records under {directory}")
    return records


@dataclass(frozen=True)
class RecordResult:
    id: str
    ted: int | None
    accuracy: float | None
    error: str | None = None


@dataclass(frozen=True)
class EvalReport:
    results: tuple[RecordResult, ...]  # averaged across repetitions
    mean_accuracy: float | None
    margin_of_error: float | None  # None when repetitions == 1 or nothing scored
    repetitions: int

    def to_dict(self) -> dict:
        return {
            "repetitions": self.repetitions,
            "mean_accuracy": self.mean_accuracy,
            "margin_of_error": self.margin_of_error,
            "records": [
                {"id": r.id, "ted": r.ted, "accuracy": r.accuracy, "error": r.error}
                for r in self.results
            ],
        }

    def write_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    def table(self) -> str:
        lines = [f"{'record':<24} {'TED':>5} {'accuracy':>9}"]
        for r in self.results:
            if r.error:
                lines.append(f"{r.id:<24} {'-':>5} {'failed':>9}  ({r.error})")
            else:
                lines.append(f"{r.id:<24} {r.ted:>5} {r.accuracy:>9.4f}")
        mean = "n/a" if self.mean_accuracy is None else f"{self.mean_accuracy:.4f}"
        margin = "n/a" if self.margin_of_error is None else f"{self.margin_of_error:.4f}"
        lines.append(f"{'mean':<24} {'':>5} {mean:>9}  (margin of error: {margin}, runs: {self.repetitions})")
        return "\n".join(lines)


def run_record(record: BenchmarkRecord, provider: ProviderConfig) -> Scenario:
    """Full pipeline for one record: text + vision, aligned."""
    text_ir = extract_textual_ir(record.description, provider)
    visual_ir = build_visual_ir(load_detections(record.detections_path))
    merged, _ = merge(text_ir, visual_ir)
    return merged


def evaluate(
    records,
    provider: ProviderConfig,
    repetitions: int = 3,
    jobs: int = 1,
) -> EvalReport:
    """Score every record against its ground truth, repeated ``repetitions`` times.

    Per-record failures are recorded, not fatal; failed records are
    excluded from the aggregate.  The margin of error is the half-width of
    the 95% t-interval over per-repetition means.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    records = list(records)

    def score_one(record: BenchmarkRecord) -> RecordResult:
        try:
            merged = run_record(record, provider)
            return RecordResult(
                id=record.id,
                ted=scenario_ted(merged, record.ground_truth),
                accuracy=ie_accuracy(merged, record.ground_truth),
            )
        except Exception as err:  # noqa: BLE001 - isolation is the contract
            return RecordResult(id=record.id, ted=None, accuracy=None, error=str(err))

    per_rep: list[list[RecordResult]] = []
    for _ in range(repetitions):
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(score_one, records))
        else:
            results = [score_one(record) for record in records]
        per_rep.append(sorted(results, key=lambda r: r.id))

    rep_means = []
    for results in per_rep:
        scored = [r.accuracy for r in results if r.accuracy is not None]
        if scored:
            rep_means.append(sum(scored) / len(scored))

    averaged: list[RecordResult] = []
    for idx, record in enumerate(sorted(records, key=lambda r: r.id)):
        runs = [rep[idx] for rep in per_rep]
        errors = [r.error for r in runs if r.error]
        scored = [r for r in runs if r.accuracy is not None]
        if not scored:
            averaged.append(RecordResult(record.id, None, None, errors[0] if errors else "failed"))
        else:
            averaged.append(
                RecordResult(
                    record.id,
                    ted=round(sum(r.ted for r in scored) / len(scored)),
                    accuracy=sum(r.accuracy for r in scored) / len(scored),
                    error=errors[0] if errors else None,
                )
            )

    mean_accuracy = sum(rep_means) / len(rep_means) if rep_means else None
    margin = None
    if len(rep_means) >= 2:
        from scipy import stats

        sample_std = math.sqrt(
            sum((m - mean_accuracy) ** 2 for m in rep_means) / (len(rep_means) - 1)
        )
        t_critical = stats.t.ppf(0.975, len(rep_means) - 1)
        margin = t_critical * sample_std / math.sqrt(len(rep_means))
    return EvalReport(
        results=tuple(averaged),
        mean_accuracy=mean_accuracy,
        margin_of_error=margin,
        repetitions=repetitions,
    )
