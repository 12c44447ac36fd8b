"""
Content production: food classes, cooking actions and synonyms expanded
into the process database a planner selects from.
"""
import logging
from collections import deque
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from app.core.config import StateMode, settings
from app.core.exceptions import (
    DuplicateProcessId,
    IndicatorDisabled,
    InvalidSynonym,
    KnowledgeError,
    UnknownAction,
)
from app.models.schemas import (
    CookingActionSpec,
    FoodClass,
    KnowledgeBase,
    KnowledgeBaseFile,
    Process,
    Synonym,
)

logger = logging.getLogger(__name__)


CHOP = CookingActionSpec(
    name="chop",
    state_word="chopped",
    direction_template="chop the {root}",
)
BOIL = CookingActionSpec(
    name="boil",
    state_word="boiled",
    direction_template="boil the {root} for {seconds}",
    extra_inputs=frozenset({"boiling water"}),
    active_seconds=30,
)
FRY = CookingActionSpec(
    name="fry",
    state_word="fried",
    direction_template="fry the {root} for {seconds}",
    active_seconds=120,
    disables=frozenset({"fry", "boil"}),
)

BUILTIN_ACTIONS: Tuple[CookingActionSpec, ...] = (CHOP, BOIL, FRY)


def _handle(text: str) -> str:
    return "_".join(text.split())


def description(fc: FoodClass) -> str:
    """State-prefixed root; the root alone when the class has no state"""
    return f"{fc.state} {fc.root}" if fc.state else fc.root


def apply_action(
    action: CookingActionSpec,
    fc: FoodClass,
    state_mode: StateMode = StateMode.REPLACE,
) -> Tuple[Process, FoodClass]:
    """Perform one cooking action on a food class.

    Returns the generated process and the successor class. Every action in
    ``action.disables`` (its own name included) is disabled on the successor,
    which is what bounds the production fixpoint.
    """
    duration = fc.indicators.get(action.name, False)
    if duration is False:
        raise IndicatorDisabled(action.name, description(fc))

    if state_mode == StateMode.PREPEND and fc.state:
        state = f"{action.state_word} {fc.state}"
    else:
        state = action.state_word

    indicators = dict(fc.indicators)
    for name in action.disables:
        indicators[name] = False
    successor = FoodClass(root=fc.root, state=state, indicators=indicators)

    if action.active_seconds is None:
        f_time = 0
    else:
        f_time = max(0, duration - action.active_seconds)

    process = Process(
        id=f"{action.name}:{description(fc)}",
        label=_handle(f"{action.name} {fc.root}"),
        input=frozenset({description(fc)}) | action.extra_inputs,
        output=frozenset({description(successor)}),
        time=duration,
        f_time=f_time,
        direction=action.direction_template.format(root=fc.root, seconds=duration),
    )
    return process, successor


def ghost(synonym: Synonym, index: int) -> Process:
    """Zero-time bridge from a synonym's definition to its name"""
    return Process(
        id=f"synonym:{index}",
        label=_handle(f"ghost {synonym.name}"),
        input=synonym.definition,
        output=frozenset({synonym.name}),
        time=0,
        f_time=0,
        direction="",
    )


def produce_content(
    foods: Sequence[FoodClass],
    actions: Sequence[CookingActionSpec],
    synonyms: Sequence[Synonym] = (),
    custom: Sequence[Process] = (),
    state_mode: StateMode = StateMode.REPLACE,
) -> KnowledgeBase:
    """Expand food classes into every reachable process, then add ghosts and custom processes.

    Classes are visited breadth-first in the given order and actions are tried in
    the given order, so two runs over the same input give the same skills list.
    """
    known_actions = {action.name for action in actions}
    for fc in foods:
        for name in sorted(fc.indicators):
            if name not in known_actions:
                raise UnknownAction(name, description(fc))

    skills: List[Process] = []
    by_id: Dict[str, Process] = {}

    def add(process: Process) -> bool:
        existing = by_id.get(process.id)
        if existing is None:
            by_id[process.id] = process
            skills.append(process)
            return True
        if existing == process:
            logger.debug(f"Skipping regenerated process {process.id}")
            return False
        raise DuplicateProcessId(process.id)

    seen = set()
    worklist = deque()
    for fc in foods:
        if fc.key() not in seen:
            seen.add(fc.key())
            worklist.append(fc)

    while worklist:
        fc = worklist.popleft()
        for action in actions:
            if fc.indicators.get(action.name, False) is False:
                continue
            process, successor = apply_action(action, fc, state_mode)
            add(process)
            if successor.key() not in seen:
                seen.add(successor.key())
                worklist.append(successor)

    generated = len(skills)

    for index, synonym in enumerate(synonyms, start=1):
        add(ghost(synonym, index))

    for process in custom:
        if not add(process):
            raise DuplicateProcessId(process.id)

    can_make = {description(fc) for fc in foods}
    for process in skills:
        can_make |= process.input | process.output

    logger.info(
        f"Produced {generated} generated, {len(synonyms)} ghost and {len(custom)} custom processes "
        f"({len(can_make)} descriptive strings)"
    )
    return KnowledgeBase(can_make=frozenset(can_make), skills=tuple(skills))


def merge_actions(declared: Iterable[CookingActionSpec]) -> List[CookingActionSpec]:
    """Built-in actions followed by declared ones; a declared action replaces a built-in of the same name"""
    merged: Dict[str, CookingActionSpec] = {action.name: action for action in BUILTIN_ACTIONS}
    for action in declared:
        merged[action.name] = action
    return list(merged.values())


def _first_error(error: ValidationError) -> str:
    detail = error.errors()[0]
    location = ".".join(str(part) for part in detail.get("loc", ()))
    message = detail.get("msg", str(error))
    return f"{location}: {message}" if location else message


def from_records(kb_file: KnowledgeBaseFile, state_mode: Optional[StateMode] = None) -> KnowledgeBase:
    """Compile a parsed knowledge-base file.

    Custom processes get ids ``custom:<n>`` in file order.
    """
    mode = kb_file.state_mode or state_mode or settings.STATE_MODE
    actions = merge_actions(kb_file.actions)

    foods = [FoodClass(root=f.root, state=f.state, indicators=f.indicators) for f in kb_file.foods]

    synonyms: List[Synonym] = []
    for record in kb_file.synonyms:
        try:
            synonyms.append(Synonym(name=record.name, definition=frozenset(record.definition)))
        except ValidationError as e:
            raise InvalidSynonym(record.name, _first_error(e)) from e

    custom: List[Process] = []
    for index, record in enumerate(kb_file.processes, start=1):
        try:
            custom.append(
                Process(
                    id=f"custom:{index}",
                    label=record.label,
                    input=frozenset(record.input),
                    output=frozenset(record.output),
                    time=record.time,
                    f_time=record.f_time,
                    direction=record.direction,
                )
            )
        except ValidationError as e:
            raise KnowledgeError(f"processes.{index - 1}: {_first_error(e)}") from e

    return produce_content(foods, actions, synonyms, custom, state_mode=mode)
