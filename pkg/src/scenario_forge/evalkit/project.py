"""Field projection: masking IR fields for cross-representation comparison.

Used to blank extension fields (the lane index, typically) before scoring
against a representation that lacks them, so comparisons stay fair.
"""

from __future__ import annotations

from scenario_forge.ir import InvalidPath, Scenario, clear_fields


def project_fields(ir: Scenario, mask) -> Scenario:
    """Unspecify every field addressed by the mask paths.

    Paths follow ir.paths syntax (``npc_actors[*].lane_idx``).  Unmasked
    fields pass through untouched; an unknown path raises InvalidPath.
    """
    mask = list(mask)
    if not mask:
        return ir
    return clear_fields(ir, mask)


__all__ = ["project_fields", "InvalidPath"]
