import shutil
import tempfile
from pathlib import Path
from typing import Dict, Iterable

import pytest

from app.models.schemas import Process

REPO_ROOT = Path(__file__).resolve().parent.parent
KB_DIR = REPO_ROOT / "kb"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"

DAHL_SUPPLIES = ["coconut milk", "raw carrot", "raw broccoli", "lentils", "water"]


def process(
    process_id: str,
    inputs: Iterable[str],
    outputs: Iterable[str],
    time: int = 60,
    f_time: int = 0,
    direction: str = "",
) -> Process:
    """Terse Process constructor for tests"""
    return Process(
        id=process_id,
        input=frozenset(inputs),
        output=frozenset(outputs),
        time=time,
        f_time=f_time,
        direction=direction or f"do {process_id}",
    )


def chain(n: int, time: int = 60, f_time: int = 0):
    """p0 <- p1 <- ... each step consuming the previous step's output"""
    return [
        process(f"p{i}", {f"s{i - 1}"} if i else {"raw"}, {f"s{i}"}, time=time, f_time=f_time)
        for i in range(n)
    ]


def antichain(n: int, time: int = 60, f_time: int = 0):
    return [process(f"p{i}", {f"raw{i}"}, {f"s{i}"}, time=time, f_time=f_time) for i in range(n)]


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests"""
    temp_path = Path(tempfile.mkdtemp())
    yield temp_path
    shutil.rmtree(temp_path)


@pytest.fixture(scope="session")
def dahl_kb():
    """Compiled knowledge base of the vegetable dahl example"""
    from app.services.storage import compile_knowledge_base

    return compile_knowledge_base(KB_DIR / "vegetable_dahl.json")


@pytest.fixture(scope="session")
def dahl_content(dahl_kb):
    from app.services.selection import select_content

    return select_content("vegetable dahl", DAHL_SUPPLIES, dahl_kb)


@pytest.fixture(scope="session")
def dahl_stitched(dahl_content):
    """Ghost-free processes and stitched requires graph of the dahl selection"""
    from app.services.scheduling import build_requires_graph, remove_and_stitch

    graph = build_requires_graph(dahl_content.action_list)
    return remove_and_stitch(dahl_content.action_list, graph)


@pytest.fixture(scope="session")
def dahl_ids(dahl_content) -> Dict[str, str]:
    """Process id by label, e.g. dahl_ids['boil_lentils']"""
    return {p.name: p.id for p in dahl_content.action_list}


@pytest.fixture
def dahl_db(temp_dir):
    """Dahl knowledge base compiled to a database file"""
    from app.services.storage import compile_knowledge_base, save_database

    return save_database(compile_knowledge_base(KB_DIR / "vegetable_dahl.json"), temp_dir / "dahl.db.json")
