"""Response parsing and the end-to-end textual extraction pass."""

from __future__ import annotations

import re

from scenario_forge.ir import Scenario, ScenarioFormatError, parse_dsl

from .prompt import DEFAULT_FEWSHOT, YAML_END, YAML_START, build_prompt
from .provider import ProviderConfig, complete


class MarkerMissing(ValueError):
    """The response does not contain a <YAML> ... </YAML> pair."""


# Step-walkthrough field names mapped onto the grammar's canonical names.
KEY_SYNONYMS = {
    "current_behavior": "behavior",
    "position_target": "reference_point",
    "position_relation": "relative_position",
    "type": "actor_type",
    "traffic_sign": "traffic_signs",
}

_KEY_LINE_RE = re.compile(r"^(\s*(?:- )?)([A-Za-z_][A-Za-z0-9_]*)(\s*:)")


def _map_synonym_keys(document: str) -> str:
    lines = []
    for line in document.splitlines():
        match = _KEY_LINE_RE.match(line)
        if match and match.group(2) in KEY_SYNONYMS:
            start, key, colon = match.groups()
            line = f"{start}{KEY_SYNONYMS[key]}{colon}{line[match.end():]}"
        lines.append(line)
    return "\n".join(lines)


def parse_response(raw: str) -> Scenario:
    """Extract and parse the scenario document from a model response.

    The document is the text strictly between the first start marker and
    the last end marker; surrounding prose is ignored.  Step-style key
    names are mapped to their canonical forms before parsing.  Parse
    failures propagate with the raw response attached for diagnostics.
    """
    start = raw.find(YAML_START)
    end = raw.rfind(YAML_END)
    if start == -1 or end == -1 or end < start:
        raise MarkerMissing(f"response has no {YAML_START}...{YAML_END} document")
    document = raw[start + len(YAML_START) : end]
    document = _map_synonym_keys(document)
    try:
        return parse_dsl(document)
    except ScenarioFormatError as err:
        err.raw_response = raw
        raise


def extract_textual_ir(
    description: str,
    provider: ProviderConfig,
    fewshot=DEFAULT_FEWSHOT,
    transport=None,
) -> Scenario:
    """Full textual front-end: prompt, complete, parse.

    On a parse failure one bounded repair round-trip is attempted: the
    description is re-prompted with the failure message appended.  A second
    failure surfaces the repair attempt's error.
    """
    bundle = build_prompt(description, fewshot)
    raw = complete(provider, bundle, transport=transport)
    try:
        return parse_response(raw)
    except (MarkerMissing, ScenarioFormatError) as first_error:
        repair_description = (
            f"{description}\n\nYour previous output was rejected: {first_error}. "
            "Produce a corrected scenario document."
        )
        repair_bundle = build_prompt(repair_description, fewshot)
        raw = complete(provider, repair_bundle, transport=transport)
        return parse_response(raw)
