import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
if str(TESTS_DIR) not in sys.path:
    sys.path.insert(0, str(TESTS_DIR))

from fixtures import write_wikisql_fixture  # noqa: E402


@pytest.fixture(scope="session")
def wikisql_fixture_path(tmp_path_factory) -> Path:
    """A 60-table WikiSQL-format JSONL file shared across tests."""
    path = tmp_path_factory.mktemp("tables") / "tables.jsonl"
    write_wikisql_fixture(path, n_tables=60, seed=11)
    return path
