"""Mutation-based fuzz loop over generated scenarios.

Seeds are scenario IRs; each iteration picks a seed round-robin, applies
one seeded mutation, lowers the result through the codegen chain, runs the
mini-sim, and collects deduplicated bug signatures.  Seeds that violate an
oracle before any mutation are dropped by a dry-run pre-validation pass.
"""

from __future__ import annotations

import csv
import json
import random
from dataclasses import dataclass, field

from scenario_forge.codegen import (
    MapCatalog,
    NoSectionFound,
    PlacementOverflow,
    default_catalog,
    fill_defaults,
    find_map_section,
    minisim_dict,
    place_actors,
)
from scenario_forge.ir import Scenario

from .mutate import MUTATION_KINDS, MutationInapplicable, mutate
from .sim import DEFAULT_DT, DEFAULT_DURATION, run


class NoValidSeeds(Exception):
    """Every seed failed dry-run validation."""


@dataclass(frozen=True)
class FuzzStats:
    iterations: int
    distinct_bugs: int
    first_bug_iteration: int | None
    timeline: tuple[tuple[int, int], ...]  # (iteration, cumulative distinct bugs)
    signatures: tuple[tuple, ...]
    dropped_seeds: int
    skipped_iterations: int

    def to_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "distinct_bugs": self.distinct_bugs,
            "first_bug_iteration": self.first_bug_iteration,
            "timeline": [list(point) for point in self.timeline],
            "signatures": [list(s) for s in self.signatures],
            "dropped_seeds": self.dropped_seeds,
            "skipped_iterations": self.skipped_iterations,
        }

    def write_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    def write_timeline_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iteration", "distinct_bugs"])
            for iteration, count in self.timeline:
                writer.writerow([iteration, count])


def concretize(scenario: Scenario, seed: int, catalog: MapCatalog) -> dict:
    """IR to minisim JSON via the full codegen chain."""
    filled = fill_defaults(scenario, seed)
    section = find_map_section(catalog, filled.road_network)
    return minisim_dict(place_actors(filled, section, seed))


def fuzz(
    seeds,
    budget_iters: int,
    agent,
    seed: int,
    catalog: MapCatalog | None = None,
    duration: float = DEFAULT_DURATION,
    dt: float = DEFAULT_DT,
) -> FuzzStats:
    """Run the fuzz loop; fully deterministic for fixed arguments."""
    if budget_iters < 1:
        raise ValueError("budget must be at least one iteration")
    catalog = catalog or default_catalog()
    rng = random.Random(seed)

    corpus = []
    dropped = 0
    for candidate in seeds:
        try:
            minisim = concretize(candidate, seed, catalog)
            _, bugs = run(minisim, agent=agent, duration=duration, dt=dt, seed=seed)
        except (NoSectionFound, PlacementOverflow):
            dropped += 1
            continue
        if bugs:
            dropped += 1
            continue
        corpus.append(candidate)
    if not corpus:
        raise NoValidSeeds(f"all {dropped} seeds failed dry-run validation")

    seen: set[tuple] = set()
    timeline: list[tuple[int, int]] = []
    first_bug: int | None = None
    skipped = 0

    for iteration in range(budget_iters):
        base = corpus[iteration % len(corpus)]
        mutation_seed = rng.randrange(2**32)
        ops = list(MUTATION_KINDS)
        rng.shuffle(ops)
        mutated = None
        for op in ops:
            try:
                mutated = mutate(base, op, mutation_seed)
                break
            except MutationInapplicable:
                continue
        if mutated is None:
            skipped += 1
            continue
        try:
            minisim = concretize(mutated, mutation_seed, catalog)
            _, bugs = run(minisim, agent=agent, duration=duration, dt=dt, seed=mutation_seed)
        except (NoSectionFound, PlacementOverflow):
            skipped += 1
            continue
        for bug in bugs:
            if bug.signature in seen:
                continue
            seen.add(bug.signature)
            if first_bug is None:
                first_bug = iteration
            timeline.append((iteration, len(seen)))

    return FuzzStats(
        iterations=budget_iters,
        distinct_bugs=len(seen),
        first_bug_iteration=first_bug,
        timeline=tuple(timeline),
        signatures=tuple(sorted(seen)),
        dropped_seeds=dropped,
        skipped_iterations=skipped,
    )
