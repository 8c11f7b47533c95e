from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ainfty.fixtures import shipped_fixtures  # noqa: E402


@pytest.fixture(scope="session")
def fixtures():
    return shipped_fixtures()
