import logging
import random
from typing import Iterable, List, Optional, Tuple, Union

from app.core.config import LookAhead, settings
from app.core.exceptions import OrderExplosion
from app.models.schemas import (
    InsufficientIngredients,
    KnowledgeBase,
    OracleReport,
    OrdersSummary,
    PlanOutcome,
    Process,
    RequiresGraph,
    SelectedContent,
)
from app.services.compression import compress_orders, optimize
from app.services.oracle import compare
from app.services.realization import realize
from app.services.scheduling import build_requires_graph, iter_permissible_orders, remove_and_stitch
from app.services.selection import select_content

logger = logging.getLogger(__name__)


class RecipePlanner:
    """Runs dish queries against one knowledge base"""

    def __init__(
        self,
        kb: KnowledgeBase,
        *,
        limit: Optional[int] = None,
        lookahead: Optional[LookAhead] = None,
        seed: Optional[int] = None,
    ):
        self.kb = kb
        self.limit = settings.ORDER_LIMIT if limit is None else limit
        self.lookahead = lookahead or settings.LOOKAHEAD
        self.rng = random.Random(seed) if seed is not None else None

    def select(self, dish: str, supplies: Iterable[str]) -> Union[SelectedContent, InsufficientIngredients]:
        return select_content(dish, supplies, self.kb, rng=self.rng)

    def prepare(self, content: SelectedContent) -> Tuple[List[Process], RequiresGraph]:
        """Requires graph of the selection with ghosts stitched out"""
        graph = build_requires_graph(content.action_list)
        return remove_and_stitch(content.action_list, graph)

    def plan(
        self, dish: str, supplies: Iterable[str], use_gerund: bool = False
    ) -> Union[PlanOutcome, InsufficientIngredients]:
        content = self.select(dish, supplies)
        if isinstance(content, InsufficientIngredients):
            return content

        processes, graph = self.prepare(content)
        plan, total = optimize(processes, limit=self.limit, graph=graph, lookahead=self.lookahead)
        recipe = realize(dish, content.ingred_list, plan, use_gerund=use_gerund)
        return PlanOutcome(content=content, graph=graph, plan=plan, total=total, recipe=recipe)

    def orders(self, dish: str, supplies: Iterable[str]) -> Union[OrdersSummary, InsufficientIngredients]:
        content = self.select(dish, supplies)
        if isinstance(content, InsufficientIngredients):
            return content

        processes, graph = self.prepare(content)
        by_id = {p.id: p for p in processes}
        makespans = []
        for _, _, total in compress_orders(iter_permissible_orders(graph.nodes, graph), by_id, graph, self.lookahead):
            makespans.append(total)
            if len(makespans) > self.limit:
                raise OrderExplosion(len(makespans), self.limit)
        return OrdersSummary(makespans=tuple(sorted(makespans)))

    def verify(self, dish: str, supplies: Iterable[str]) -> Union[OracleReport, InsufficientIngredients]:
        content = self.select(dish, supplies)
        if isinstance(content, InsufficientIngredients):
            return content

        processes, graph = self.prepare(content)
        instance_id = "_".join(dish.split()).lower() or "dish"
        return compare(instance_id, processes, graph, lookahead=self.lookahead)
