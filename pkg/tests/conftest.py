from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def audit_csv_path() -> Path:
    return DATA_DIR / "recognizer_audit_1000.csv"


@pytest.fixture(scope="session")
def paired_csv_path() -> Path:
    return DATA_DIR / "paired_confidences_20.csv"
