import json
import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

DEMO = pathlib.Path(__file__).parent.parent / "demo"


@pytest.fixture(scope="session")
def demo_dir() -> pathlib.Path:
    return DEMO


@pytest.fixture(scope="session")
def demo_doc():
    def load(name: str):
        return json.loads((DEMO / name).read_text())

    return load


@pytest.fixture(scope="session")
def demo_text():
    def load(name: str) -> str:
        return (DEMO / name).read_text()

    return load
