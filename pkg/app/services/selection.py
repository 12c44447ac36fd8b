"""
Backward-chaining content selection.
"""
import logging
import random
from collections import deque
from typing import Iterable, List, Optional, Set, Tuple, Union

from app.core.exceptions import CyclicKnowledgeBase, EmptyDish
from app.models.schemas import (
    InsufficientIngredients,
    KnowledgeBase,
    Process,
    SelectedContent,
    normalize_text,
)

logger = logging.getLogger(__name__)


def normalize_supplies(supplies: Iterable[str]) -> Set[str]:
    return {text for text in (normalize_text(s) for s in supplies) if text}


def select_content(
    dish: str,
    supplies: Iterable[str],
    kb: KnowledgeBase,
    rng: Optional[random.Random] = None,
) -> Union[SelectedContent, InsufficientIngredients]:
    """Select the ingredients and processes that make ``dish`` from ``supplies``.

    Strings are looked for first-in first-out. A supplied string becomes an
    ingredient; otherwise the first producer in ``kb.skills`` order is taken
    (uniformly at random among all producers when ``rng`` is given) and its
    inputs are looked for in turn. Strings nobody produces are reported
    together once the search is exhausted.
    """
    target = normalize_text(dish)
    if not target:
        raise EmptyDish()
    available = normalize_supplies(supplies)

    ingred_list: List[str] = []
    action_list: List[Process] = []
    chosen_ids: Set[str] = set()
    needed: Set[str] = set()

    # each entry carries the chain of strings it was derived from
    looking_for = deque([(target, (target,))])
    queued = {target}

    while looking_for:
        item, path = looking_for.popleft()

        if item in available:
            if item not in ingred_list:
                ingred_list.append(item)
            continue

        producers = kb.producers(item) if item in kb.can_make else []
        if not producers:
            needed.add(item)
            continue

        process = rng.choice(producers) if rng is not None else producers[0]
        if process.id in chosen_ids:
            continue
        chosen_ids.add(process.id)
        action_list.append(process)

        for needed_input in sorted(process.input):
            if needed_input in path:
                raise CyclicKnowledgeBase(path + (needed_input,))
            if needed_input in queued:
                continue
            queued.add(needed_input)
            looking_for.append((needed_input, path + (needed_input,)))

    if needed:
        logger.info(f"Cannot make '{target}': missing {len(needed)} ingredient(s)")
        return InsufficientIngredients(needed=tuple(sorted(needed)))

    logger.info(f"Selected {len(ingred_list)} ingredients and {len(action_list)} processes for '{target}'")
    return SelectedContent(ingred_list=tuple(ingred_list), action_list=tuple(action_list))


def forward_closure(ingredients: Iterable[str], processes: Iterable[Process]) -> Set[str]:
    """Every string reachable by firing processes whose inputs are all available"""
    state = set(ingredients)
    pending: List[Process] = list(processes)
    fired = True
    while fired:
        fired = False
        remaining: List[Process] = []
        for process in pending:
            if process.input <= state:
                state |= process.output
                fired = True
            else:
                remaining.append(process)
        pending = remaining
    return state


def makeable(content: SelectedContent, dish: str) -> Tuple[bool, Set[str]]:
    """Check a selection by forward simulation"""
    reached = forward_closure(content.ingred_list, content.action_list)
    return normalize_text(dish) in reached, reached
