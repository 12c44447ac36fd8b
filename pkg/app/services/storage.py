"""
Knowledge-base, database, supplies and oracle-report files.
"""
import json
import logging
from pathlib import Path
from typing import Any, List, Optional, Union

from pydantic import ValidationError

from app.core.config import StateMode, settings
from app.core.exceptions import KnowledgeBaseFileError, KnowledgeError
from app.models.schemas import (
    DatabaseFile,
    KnowledgeBase,
    KnowledgeBaseFile,
    OracleReport,
    normalize_text,
)
from app.services.knowledge import from_records

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        raise KnowledgeBaseFileError(path, e.strerror or str(e)) from e


def _read_json(path: Path) -> Any:
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as e:
        raise KnowledgeBaseFileError(path, e.msg, line=e.lineno, column=e.colno) from e


def _validation_message(error: ValidationError) -> str:
    messages = []
    for detail in error.errors():
        location = ".".join(str(part) for part in detail.get("loc", ()))
        messages.append(f"{location}: {detail['msg']}" if location else detail["msg"])
    return "; ".join(messages)


def load_knowledge_base_file(path: PathLike) -> KnowledgeBaseFile:
    path = Path(path)
    data = _read_json(path)
    try:
        return KnowledgeBaseFile.model_validate(data)
    except ValidationError as e:
        raise KnowledgeBaseFileError(path, _validation_message(e)) from e


def compile_knowledge_base(path: PathLike, state_mode: Optional[StateMode] = None) -> KnowledgeBase:
    """Load a KB file and run content production over it"""
    path = Path(path)
    kb_file = load_knowledge_base_file(path)
    try:
        return from_records(kb_file, state_mode)
    except KnowledgeError as e:
        raise KnowledgeBaseFileError(path, str(e)) from e


def save_database(kb: KnowledgeBase, path: PathLike) -> Path:
    """Write the compiled database; output is stable for identical input"""
    path = Path(path)
    record = DatabaseFile(format=settings.KB_FORMAT, can_make=sorted(kb.can_make), skills=list(kb.skills))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(record.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info(f"Wrote {len(kb.skills)} processes to {path}")
    return path


def load_database(path: PathLike) -> KnowledgeBase:
    path = Path(path)
    data = _read_json(path)
    try:
        record = DatabaseFile.model_validate(data)
        return KnowledgeBase(can_make=frozenset(record.can_make), skills=tuple(record.skills))
    except ValidationError as e:
        raise KnowledgeBaseFileError(path, _validation_message(e)) from e


def parse_supplies(text: str) -> List[str]:
    """One descriptive string per line; blank lines and '#' comments are ignored"""
    supplies: List[str] = []
    for line in text.splitlines():
        if line.lstrip().startswith("#"):
            continue
        item = normalize_text(line)
        if item and item not in supplies:
            supplies.append(item)
    return supplies


def load_supplies(path: PathLike) -> List[str]:
    return parse_supplies(_read_text(Path(path)))


def save_report(report: OracleReport, text: str, directory: Optional[PathLike] = None) -> Path:
    """Persist a report as ``<instance_id>.json`` plus a readable ``<instance_id>.txt``"""
    directory = Path(directory or settings.ARTIFACTS_DIR)
    directory.mkdir(parents=True, exist_ok=True)
    stem = "".join(c if c.isalnum() or c in "-_." else "_" for c in report.instance_id)
    json_path = directory / f"{stem}.json"
    json_path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    (directory / f"{stem}.txt").write_text(text, encoding="utf-8")
    return json_path
