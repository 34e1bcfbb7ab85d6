"""scenario-forge command line: the pipeline as composable subcommands.

Every subcommand is a pure function of its inputs, flags, and seed, so
reruns produce byte-identical outputs.  Exit codes: 0 success, 1 usage
error, 2 input error (unreadable or malformed inputs), 3 pipeline error
(provider, placement, fuzzing failures).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import yaml

from .align import merge
from .codegen import (
    MapCatalog,
    NoSectionFound,
    PlacementOverflow,
    SCRIPT_SUFFIXES,
    SCRIPT_TARGETS,
    default_catalog,
    emit_script,
    fill_defaults,
    find_map_section,
    place_actors,
)
from .evalkit import (
    evaluate,
    inject_detection_drop,
    inject_text_hallucination,
    load_benchmark,
)
from .ir import (
    InvalidPath,
    SCENARIO_FILE_SUFFIX,
    ScenarioFormatError,
    emit_dsl,
    load_scenario,
    parse_dsl,
)
from .testbed import (
    InvalidScenario,
    MutationInapplicable,
    NoValidSeeds,
    fuzz,
    load_minisim,
    naive_agent,
    no_op_agent,
    run,
)
from .textual import ProviderConfig, ProviderError, extract_textual_ir
from .vision import IoError as DetectionsIoError
from .vision import SchemaError, build_visual_ir, load_detections

DEFAULT_SEED = 20240513

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_PIPELINE = 3

_INPUT_ERRORS = (
    ScenarioFormatError,
    SchemaError,
    DetectionsIoError,
    InvalidPath,
    FileNotFoundError,
    IsADirectoryError,
    json.JSONDecodeError,
    yaml.YAMLError,
)
_PIPELINE_ERRORS = (
    ProviderError,
    NoSectionFound,
    PlacementOverflow,
    NoValidSeeds,
    MutationInapplicable,
    InvalidScenario,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1, not argparse's default 2
        raise _UsageError(f"{self.prog}: {message}")


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise ScenarioFormatError("config file must hold a mapping")
    return data


def _provider_from(args, config: dict) -> ProviderConfig:
    section = dict(config.get("provider", {}))
    if args.provider_kind:
        section["kind"] = args.provider_kind
    if args.mock_dir:
        section["kind"] = "mock"
        section["endpoint"] = args.mock_dir
    kind = section.get("kind", "mock")
    endpoint = section.get("endpoint", os.environ.get("SCENARIO_FORGE_LLM_ENDPOINT", ""))
    model = section.get("model", os.environ.get("SCENARIO_FORGE_LLM_MODEL", ""))
    return ProviderConfig(
        kind=kind,
        endpoint=endpoint,
        model=model,
        timeout=float(section.get("timeout", 30.0)),
        retries=int(section.get("retries", 2)),
    )


def _catalog_from(args, config: dict) -> MapCatalog:
    path = args.catalog or config.get("catalog")
    return MapCatalog.from_file(path) if path else default_catalog()


def _out_path(args, default_name: str) -> Path:
    if args.out:
        return Path(args.out)
    return Path(default_name)


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    print(f"wrote {path}")


def _agent(name: str):
    return naive_agent if name == "naive" else no_op_agent


def build_parser() -> _Parser:
    parser = _Parser(prog="scenario-forge", description=__doc__)
    parser.add_argument("--config", help="YAML config file (provider, catalog, seed)")
    parser.add_argument("--seed", type=int, default=None, help=f"global seed (default {DEFAULT_SEED})")
    parser.add_argument("--catalog", help="map catalog JSON (default: packaged catalog)")
    parser.add_argument("--provider-kind", choices=["mock", "http"], default=None)
    parser.add_argument("--mock-dir", help="directory of canned <digest>.txt responses")
    parser.add_argument("-o", "--out", help="output file path")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract-text", help="description -> textual IR document")
    p.add_argument("description", help="text file with the scenario description")

    p = sub.add_parser("extract-vision", help="detections JSON -> visual IR document")
    p.add_argument("detections", help="detections JSON file")

    p = sub.add_parser("align", help="merge a textual and a visual IR document")
    p.add_argument("text_ir")
    p.add_argument("visual_ir")
    p.add_argument("--report", action="store_true", help="write the merge report JSON")

    p = sub.add_parser("compose", help="full pipeline: description + detections -> aligned IR")
    p.add_argument("description")
    p.add_argument("detections")
    p.add_argument("--report", action="store_true")

    p = sub.add_parser("codegen", help="aligned IR -> executable script")
    p.add_argument("ir")
    p.add_argument("--target", choices=list(SCRIPT_TARGETS), default="minisim")

    p = sub.add_parser("simulate", help="run a minisim scenario with oracles")
    p.add_argument("scenario", help="*.minisim.json file")
    p.add_argument("--agent", choices=["naive", "none"], default="naive")
    p.add_argument("--duration", type=float, default=30.0)
    p.add_argument("--dt", type=float, default=0.1)

    p = sub.add_parser("fuzz", help="mutation fuzz loop over seed scenarios")
    p.add_argument("--seeds", required=True, help="directory of *.scn.yaml seed scenarios")
    p.add_argument("--iters", type=int, required=True)
    p.add_argument("--agent", choices=["naive", "none"], default="naive")

    p = sub.add_parser("evaluate", help="score a benchmark directory")
    p.add_argument("--benchmark", required=True)
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("inject", help="error injection into an IR or detections file")
    p.add_argument("input")
    p.add_argument("--kind", choices=["text", "detect"], required=True)
    p.add_argument("--rate", type=float, required=True)

    return parser


def _cmd_extract_text(args, config) -> int:
    provider = _provider_from(args, config)
    description = Path(args.description).read_text(encoding="utf-8").strip()
    scenario = extract_textual_ir(description, provider)
    out = _out_path(args, Path(args.description).stem + SCENARIO_FILE_SUFFIX)
    _write(out, emit_dsl(scenario))
    return EXIT_OK


def _cmd_extract_vision(args, config) -> int:
    scenario = build_visual_ir(load_detections(args.detections))
    stem = Path(args.detections).name.removesuffix(".json")
    _write(_out_path(args, stem + SCENARIO_FILE_SUFFIX), emit_dsl(scenario))
    return EXIT_OK


def _merge_and_write(args, text_ir, visual_ir, default_name: str) -> int:
    merged, report = merge(text_ir, visual_ir)
    out = _out_path(args, default_name)
    _write(out, emit_dsl(merged))
    if args.report:
        report_path = out.with_suffix("").with_suffix("")  # strip .scn.yaml
        report_path = Path(str(report_path) + ".merge-report.json")
        _write(report_path, json.dumps(report.to_dict(), indent=2) + "\n")
    return EXIT_OK


def _cmd_align(args, config) -> int:
    return _merge_and_write(
        args, load_scenario(args.text_ir), load_scenario(args.visual_ir), "aligned" + SCENARIO_FILE_SUFFIX
    )


def _cmd_compose(args, config) -> int:
    provider = _provider_from(args, config)
    description = Path(args.description).read_text(encoding="utf-8").strip()
    text_ir = extract_textual_ir(description, provider)
    visual_ir = build_visual_ir(load_detections(args.detections))
    return _merge_and_write(args, text_ir, visual_ir, "out" + SCENARIO_FILE_SUFFIX)


def _cmd_codegen(args, config, seed: int) -> int:
    scenario = load_scenario(args.ir)
    catalog = _catalog_from(args, config)
    filled = fill_defaults(scenario, seed)
    section = find_map_section(catalog, filled.road_network)
    concrete = place_actors(filled, section, seed)
    script = emit_script(concrete, args.target)
    stem = Path(args.ir).name.removesuffix(SCENARIO_FILE_SUFFIX).removesuffix(".yaml")
    _write(_out_path(args, stem + SCRIPT_SUFFIXES[args.target]), script)
    return EXIT_OK


def _cmd_simulate(args, config, seed: int) -> int:
    scenario = load_minisim(args.scenario)
    trace, bugs = run(scenario, agent=_agent(args.agent), duration=args.duration, dt=args.dt, seed=seed)
    stem = Path(args.scenario).name.removesuffix(".minisim.json")
    payload = {"bugs": [b.to_dict() for b in bugs], "trace": trace.to_dict()}
    _write(_out_path(args, stem + ".trace.json"), json.dumps(payload, indent=2) + "\n")
    for bug in bugs:
        print(f"{bug.kind} at t={bug.time}s involving {', '.join(bug.participants)}")
    print(f"{len(bugs)} distinct failure(s)")
    return EXIT_OK


def _cmd_fuzz(args, config, seed: int) -> int:
    seeds_dir = Path(args.seeds)
    seed_files = sorted(seeds_dir.glob(f"*{SCENARIO_FILE_SUFFIX}"))
    if not seed_files:
        raise FileNotFoundError(f"no *{SCENARIO_FILE_SUFFIX} seeds under {seeds_dir}")
    seeds = [load_scenario(path) for path in seed_files]
    catalog = _catalog_from(args, config)
    stats = fuzz(seeds, budget_iters=args.iters, agent=_agent(args.agent), seed=seed, catalog=catalog)
    out = _out_path(args, "fuzz-stats.json")
    stats.write_json(out)
    print(f"wrote {out}")
    timeline = Path(str(out).removesuffix(".json") + "-timeline.csv")
    stats.write_timeline_csv(timeline)
    print(f"wrote {timeline}")
    print(f"{stats.distinct_bugs} distinct bug signature(s) in {stats.iterations} iterations")
    return EXIT_OK


def _cmd_evaluate(args, config) -> int:
    provider = _provider_from(args, config)
    records = load_benchmark(args.benchmark)
    report = evaluate(records, provider, repetitions=args.reps, jobs=args.jobs)
    out = _out_path(args, "eval-report.json")
    report.write_json(out)
    print(f"wrote {out}")
    print(report.table())
    return EXIT_OK


def _cmd_inject(args, config, seed: int) -> int:
    if args.kind == "text":
        scenario = load_scenario(args.input)
        mutated = inject_text_hallucination(scenario, rate=args.rate, seed=seed)
        default_name = Path(args.input).name.removesuffix(SCENARIO_FILE_SUFFIX) + ".injected" + SCENARIO_FILE_SUFFIX
        _write(_out_path(args, default_name), emit_dsl(mutated))
    else:
        ds = load_detections(args.input)
        dropped = inject_detection_drop(ds, rate=args.rate, seed=seed)
        payload = {
            "image_size": list(dropped.image_size),
            "boxes": [
                {
                    "class": b.cls,
                    "bbox": list(b.bbox),
                    "confidence": b.confidence,
                    **({"light_state": b.light_state} if b.light_state else {}),
                    **({"sign_kind": b.sign_kind} if b.sign_kind else {}),
                }
                for b in dropped.boxes
            ],
            "lane_boundaries": [[list(p) for p in line] for line in dropped.lane_boundaries],
        }
        default_name = Path(args.input).name.removesuffix(".json") + ".injected.json"
        _write(_out_path(args, default_name), json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(err, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as err:  # --help and friends
        return int(err.code or 0)

    try:
        config = _load_config(args.config)
        seed = args.seed if args.seed is not None else int(config.get("seed", DEFAULT_SEED))
        if args.command == "extract-text":
            return _cmd_extract_text(args, config)
        if args.command == "extract-vision":
            return _cmd_extract_vision(args, config)
        if args.command == "align":
            return _cmd_align(args, config)
        if args.command == "compose":
            return _cmd_compose(args, config)
        if args.command == "codegen":
            return _cmd_codegen(args, config, seed)
        if args.command == "simulate":
            return _cmd_simulate(args, config, seed)
        if args.command == "fuzz":
            return _cmd_fuzz(args, config, seed)
        if args.command == "evaluate":
            return _cmd_evaluate(args, config)
        if args.command == "inject":
            return _cmd_inject(args, config, seed)
        raise _UsageError(f"unknown command {args.command!r}")
    except _INPUT_ERRORS as err:
        print(f"input error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as err:
        print(f"input error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except _PIPELINE_ERRORS as err:
        print(f"pipeline error: {err}", file=sys.stderr)
        return EXIT_PIPELINE
    except ValueError as err:
        print(f"pipeline error: {err}", file=sys.stderr)
        return EXIT_PIPELINE


if __name__ == "__main__":
    sys.exit(main())
