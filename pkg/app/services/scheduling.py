"""
Precedence between selected processes and enumeration of permissible orders.
"""
import logging
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from app.core.config import settings
from app.core.exceptions import CyclicPrecedence, DuplicateProcessId, NotPermissible, OrderExplosion
from app.models.schemas import PermissibleOrder, PlanItem, Process, RequiresGraph

logger = logging.getLogger(__name__)


def requires(p1: PlanItem, p2: PlanItem) -> bool:
    """p1 consumes something p2 produces, so p2 must come first"""
    return not p1.input.isdisjoint(p2.output)


def build_requires_graph(action_list: Sequence[Process]) -> RequiresGraph:
    """Graph with an edge (a, b) for every ordered pair of distinct processes where a requires b"""
    ids = [p.id for p in action_list]
    seen: Set[str] = set()
    for process_id in ids:
        if process_id in seen:
            raise DuplicateProcessId(process_id)
        seen.add(process_id)

    edges = {
        (a.id, b.id)
        for a in action_list
        for b in action_list
        if a.id != b.id and requires(a, b)
    }
    return RequiresGraph(nodes=tuple(ids), edges=frozenset(edges))


def remove_and_stitch(action_list: Sequence[Process], g: RequiresGraph) -> Tuple[List[Process], RequiresGraph]:
    """Drop ghost processes, keeping the precedence they carried.

    For every ghost G and every pair with requires(A, G) and requires(G, B) an
    edge (A, B) is added. Ghosts are removed one at a time, so chains of
    ghosts collapse into a single edge.
    """
    ghosts = [p.id for p in action_list if p.is_ghost]
    if not ghosts:
        return list(action_list), g

    edges = set(g.edges)
    for ghost_id in ghosts:
        before = {a for a, b in edges if b == ghost_id}
        after = {b for a, b in edges if a == ghost_id}
        edges = {(a, b) for a, b in edges if ghost_id not in (a, b)}
        edges |= {(a, b) for a in before for b in after if a != b}

    gone = set(ghosts)
    kept = [p for p in action_list if p.id not in gone]
    nodes = tuple(n for n in g.nodes if n not in gone)
    logger.info(f"Removed {len(ghosts)} ghost process(es); {len(edges)} requires edges remain")
    return kept, RequiresGraph(nodes=nodes, edges=frozenset(edges))


def no_requirements(x: str, S: Iterable[str], g: RequiresGraph) -> bool:
    """True when x requires nothing else in S"""
    return not any(g.requires(x, s) for s in S if s != x)


def _ordered(S: Iterable[str], g: RequiresGraph) -> List[str]:
    members = set(S)
    unknown = members.difference(g.nodes)
    if unknown:
        raise ValueError(f"processes outside the requires graph: {sorted(unknown)}")
    return [n for n in g.nodes if n in members]


def possible_next(S: Iterable[str], prefix: Sequence[str], g: RequiresGraph) -> List[str]:
    """Elements of S that may follow ``prefix``, in graph node order"""
    nodes = _ordered(S, g)
    placed = set(prefix)
    remaining = [n for n in nodes if n not in placed]
    return [x for x in remaining if no_requirements(x, remaining, g)]


def permissible_prefixes(S: Iterable[str], g: RequiresGraph, length: int) -> List[Tuple[str, ...]]:
    """Every permissible prefix of the given length, built one stage at a time"""
    nodes = _ordered(S, g)
    paths: List[Tuple[str, ...]] = [()]
    for _ in range(min(length, len(nodes))):
        paths = [path + (x,) for path in paths for x in possible_next(nodes, path, g)]
    return paths


def iter_permissible_orders(S: Iterable[str], g: RequiresGraph) -> Iterator[PermissibleOrder]:
    """Depth-first generator of every linear extension of the requires relation over S.

    Candidates at each depth are tried in graph node order, which is the
    action_list order the graph was built from.
    """
    nodes = _ordered(S, g)
    members = set(nodes)
    needs: Dict[str, Set[str]] = {
        x: {b for a, b in g.edges if a == x and b in members and b != x} for x in nodes
    }
    prefix: List[str] = []
    placed: Set[str] = set()

    def extend() -> Iterator[PermissibleOrder]:
        if len(prefix) == len(nodes):
            yield PermissibleOrder(order=tuple(prefix))
            return
        for x in nodes:
            if x in placed or not needs[x] <= placed:
                continue
            placed.add(x)
            prefix.append(x)
            yield from extend()
            prefix.pop()
            placed.discard(x)

    yield from extend()


def find_all_lists(S: Iterable[str], g: RequiresGraph, limit: Optional[int] = None) -> List[PermissibleOrder]:
    """Collect every permissible order; more than ``limit`` of them is an error"""
    limit = settings.ORDER_LIMIT if limit is None else limit
    nodes = _ordered(S, g)
    orders: List[PermissibleOrder] = []
    for order in iter_permissible_orders(nodes, g):
        orders.append(order)
        if len(orders) > limit:
            raise OrderExplosion(len(orders), limit)
    if nodes and not orders:
        raise CyclicPrecedence()
    logger.info(f"Enumerated {len(orders)} permissible orders of {len(nodes)} processes")
    return orders


def check_permissible(order: Sequence[str], g: RequiresGraph) -> None:
    """Raise NotPermissible for the first requirement the order breaks"""
    position = {process_id: index for index, process_id in enumerate(order)}
    for a, b in sorted(g.edges):
        if a in position and b in position and position[b] > position[a]:
            raise NotPermissible(a, b)
