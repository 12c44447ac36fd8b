"""
Turning a compressed plan into the printed recipe.
"""
import logging
import re
from typing import Iterable, List, Tuple

from jinja2 import Environment, PackageLoader, StrictUndefined

from app.models.schemas import (
    Combination,
    OracleReport,
    PassiveInterval,
    PlanItem,
    Process,
    RecipePlan,
    RenderedRecipe,
    normalize_text,
)

logger = logging.getLogger(__name__)

_SINGLE_SYLLABLE_CVC = re.compile(r"^[^aeiou]*[aeiou][^aeiouwxy]$")


def hms(seconds: int) -> str:
    """Hours, minutes and seconds, leaving out zero parts ("0 secs" for zero)"""
    if seconds < 0:
        raise ValueError(f"negative duration: {seconds}")
    hours, rest = divmod(seconds, 3600)
    minutes, secs = divmod(rest, 60)
    parts = []
    if hours:
        parts.append(f"{hours} hrs")
    if minutes:
        parts.append(f"{minutes} min")
    if secs:
        parts.append(f"{secs} secs")
    return " ".join(parts) or "0 secs"


def _ing(verb: str) -> str:
    word = verb.lower()
    if word.endswith("ie"):
        return verb[:-2] + "ying"
    if word.endswith("e") and not word.endswith(("ee", "ye", "oe")) and len(word) > 2:
        return verb[:-1] + "ing"
    if _SINGLE_SYLLABLE_CVC.match(word):
        return verb + verb[-1] + "ing"
    return verb + "ing"


def gerund(direction: str) -> str:
    """Progressive form of an imperative: "boil the lentils" -> "boiling the lentils" """
    verb, _, rest = direction.partition(" ")
    if not verb:
        return direction
    return f"{_ing(verb)} {rest}" if rest else _ing(verb)


def _direction(process: Process) -> str:
    return process.direction or process.name


def instruction_text(item: PlanItem, use_gerund: bool = False) -> str:
    if not isinstance(item, Combination):
        return _direction(item)
    host = item.host_original_direction or item.host.name
    if use_gerund:
        host = gerund(host)
    return f"while {host}, " + " and ".join(_direction(q) for q in item.insertees)


def _remaining_f_time(item: PlanItem) -> int:
    return item.remaining_f_time if isinstance(item, Combination) else item.f_time


def _activity(item: PlanItem) -> str:
    if isinstance(item, Combination):
        return item.host_original_direction or item.host.name
    return _direction(item)


def get_passives(plan: RecipePlan) -> Tuple[List[PassiveInterval], int]:
    """Passive windows at the end of each item, and the finishing clock"""
    passives: List[PassiveInterval] = []
    clock = 0
    for item in plan.items:
        clock += item.time
        free = _remaining_f_time(item)
        if free > 0:
            passives.append(PassiveInterval(start=clock - free, end=clock, activity=_activity(item)))
    return passives, clock


def timed_instructions(plan: RecipePlan, use_gerund: bool = False) -> List[Tuple[int, str]]:
    """Instruction text of every item with the clock at which it starts"""
    instructions = []
    clock = 0
    for item in plan.items:
        instructions.append((clock, instruction_text(item, use_gerund)))
        clock += item.time
    return instructions


def realize(dish: str, ingred_list: Iterable[str], plan: RecipePlan, use_gerund: bool = False) -> RenderedRecipe:
    passives, total = get_passives(plan)
    return RenderedRecipe(
        title=normalize_text(dish),
        total=total,
        ingredients=tuple(ingred_list),
        instructions=tuple(timed_instructions(plan, use_gerund)),
        passives=tuple(passives),
    )


class TextRenderer:
    """Lays out recipes and oracle reports as plain text"""

    def __init__(self):
        self.env = Environment(
            loader=PackageLoader("app", "templates"),
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
            undefined=StrictUndefined,
            autoescape=False,
        )
        self.env.filters["hms"] = hms

    def render_recipe(self, recipe: RenderedRecipe) -> str:
        return self.env.get_template("recipe.txt.j2").render(
            title=recipe.title,
            total=recipe.total,
            ingredients=recipe.ingredients,
            instructions=recipe.instructions,
            passives=recipe.passives,
        )

    def render_report(self, report: OracleReport) -> str:
        optimizer = timed_instructions(report.optimizer_plan) if report.optimizer_plan else []
        return self.env.get_template("report.txt.j2").render(
            report=report,
            witness=timed_instructions(report.witness_plan),
            optimizer=optimizer,
        )
