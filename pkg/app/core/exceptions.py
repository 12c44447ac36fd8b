"""
Error hierarchy for the planner.

Input-shaped errors also derive from ValueError so callers that already
guard on ValueError keep working.
"""
from pathlib import Path
from typing import Optional, Sequence, Tuple


class PlannerError(Exception):
    """Base class of every planner error"""


# Knowledge

class KnowledgeError(PlannerError, ValueError):
    """Invalid knowledge-base content"""


class IndicatorDisabled(KnowledgeError):
    def __init__(self, action: str, description: str):
        self.action = action
        self.description = description
        super().__init__(f"action '{action}' is disabled for '{description}'")


class DuplicateProcessId(KnowledgeError):
    def __init__(self, process_id: str):
        self.process_id = process_id
        super().__init__(f"duplicate process id '{process_id}'")


class UnknownAction(KnowledgeError):
    def __init__(self, action: str, description: str):
        self.action = action
        self.description = description
        super().__init__(f"food class '{description}' has an indicator for unknown action '{action}'")


class InvalidSynonym(KnowledgeError):
    def __init__(self, name: str, reason: str):
        self.name = name
        super().__init__(f"synonym '{name}': {reason}")


class KnowledgeBaseFileError(KnowledgeError):
    """A KB, database or supplies file that cannot be loaded"""

    def __init__(self, path: Path, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.path = Path(path)
        self.line = line
        self.column = column
        anchor = str(self.path)
        if line is not None:
            anchor += f":{line}"
            if column is not None:
                anchor += f":{column}"
        super().__init__(f"{anchor}: {message}")


# Selection

class SelectionError(PlannerError):
    """Content selection could not complete"""


class EmptyDish(SelectionError, ValueError):
    def __init__(self):
        super().__init__("dish must be a non-empty descriptive string")


class CyclicKnowledgeBase(SelectionError):
    def __init__(self, path: Sequence[str]):
        self.path = tuple(path)
        super().__init__("knowledge base is cyclic: " + " <- ".join(self.path))


# Scheduling

class SchedulingError(PlannerError):
    """Ordering or compression could not complete"""


class CyclicPrecedence(SchedulingError):
    def __init__(self, cycle: Sequence[Tuple[str, str]] = ()):
        self.cycle = tuple(cycle)
        detail = ", ".join(f"{a} requires {b}" for a, b in self.cycle)
        super().__init__("precedence relation is cyclic" + (f": {detail}" if detail else ""))


class OrderExplosion(SchedulingError):
    def __init__(self, count: int, limit: int):
        self.count = count
        self.limit = limit
        super().__init__(f"more than {limit} permissible orders (stopped at {count})")


class NotPermissible(SchedulingError):
    def __init__(self, process_id: str, required_id: str):
        self.edge = (process_id, required_id)
        super().__init__(f"'{process_id}' requires '{required_id}' but precedes it")


# Oracle

class OracleError(PlannerError):
    """Brute-force checker refused the instance"""


class TooLarge(OracleError):
    def __init__(self, size: int, maximum: int):
        self.size = size
        self.maximum = maximum
        super().__init__(f"instance of {size} processes exceeds the oracle limit of {maximum}")
