from __future__ import annotations

import os
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


class GoldenChecker:
    """Compare generated text against a committed golden file.

    Set REGEN_GOLDEN=1 to rewrite goldens after an intentional format change.
    """

    def __init__(self, root: Path):
        self.root = root

    def check(self, name: str, text: str) -> None:
        path = self.root / name
        if os.environ.get("REGEN_GOLDEN") == "1":
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        assert path.exists(), f"golden file {path} missing; run with REGEN_GOLDEN=1 to create"
        assert text == path.read_text(encoding="utf-8"), f"output differs from golden {name}"


@pytest.fixture
def golden() -> GoldenChecker:
    return GoldenChecker(FIXTURES / "golden")
