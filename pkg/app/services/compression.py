"""
Concurrent compression: packing independent processes into the free time of
another process, and choosing the fastest compressed plan.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from app.core.config import LookAhead, settings
from app.core.exceptions import OrderExplosion
from app.models.schemas import (
    Combination,
    PermissibleOrder,
    PlanItem,
    Process,
    RecipePlan,
    RequiresGraph,
)
from app.services.scheduling import (
    build_requires_graph,
    check_permissible,
    iter_permissible_orders,
    remove_and_stitch,
)

logger = logging.getLogger(__name__)


def can_insert(p1: Process, p2_remaining_f_time: int, p1_p2_independent: bool) -> bool:
    """p1 fits into the remaining free time of an independent host"""
    return p1_p2_independent and p1.time <= p2_remaining_f_time


def members(item: PlanItem) -> Tuple[Process, ...]:
    return item.members if isinstance(item, Combination) else (item,)


def item_requires(a: PlanItem, b: PlanItem, g: RequiresGraph) -> bool:
    """Some member of a requires some member of b; edges transfer to combinations"""
    return any(g.requires(x.id, y.id) for x in members(a) for y in members(b))


@dataclass
class _Slot:
    """Working position in the list being compressed"""
    host: Process
    insertees: List[Process] = field(default_factory=list)

    @property
    def combined(self) -> bool:
        return bool(self.insertees)

    def to_item(self) -> PlanItem:
        if not self.insertees:
            return self.host
        return Combination(
            host=self.host,
            host_original_direction=self.host.direction,
            insertees=tuple(self.insertees),
            remaining_f_time=self.host.f_time - sum(q.time for q in self.insertees),
        )


def _depends(p: Process, q: Process, g: RequiresGraph) -> bool:
    return g.requires(p.id, q.id) or g.requires(q.id, p.id)


def _pairwise_independent(group: Sequence[Process], g: RequiresGraph) -> bool:
    return all(not _depends(a, b, g) for i, a in enumerate(group) for b in group[i + 1:])


def _future_host(slots: List[_Slot], idx: int, g: RequiresGraph, lookahead: LookAhead) -> Optional[Process]:
    """First earlier process with room for this one, scanning left until a dependency.

    Everything left of ``idx`` is still bare: positions are compressed right to left.
    """
    p = slots[idx].host
    required = p.time
    for k in range(idx - 1, -1, -1):
        candidate = slots[k].host
        if _depends(p, candidate, g):
            return None
        if candidate.f_time >= required:
            if lookahead == LookAhead.DEPENDENTS:
                return candidate
            carried = [s.host for s in slots[k + 1:idx + 1]]
            if all(not _depends(q, candidate, g) for q in carried) and _pairwise_independent(carried, g):
                return candidate
            return None
        required += candidate.time
    return None


def concurrent_compression(
    L: PermissibleOrder,
    processes: Mapping[str, Process],
    g: RequiresGraph,
    lookahead: Optional[LookAhead] = None,
) -> RecipePlan:
    """Compress one permissible order.

    Hosts are tried from the last position to the first. Each host takes the
    contiguous run of following bare processes that fit its free time and are
    independent of it and of each other. A host gives up its insertees when an
    earlier process could take the host itself (see LookAhead).
    """
    lookahead = lookahead or settings.LOOKAHEAD
    check_permissible(L.order, g)
    slots = [_Slot(processes[process_id]) for process_id in L.order]

    for idx in range(len(slots) - 1, -1, -1):
        p = slots[idx].host
        remaining = p.f_time
        concurrents: List[Process] = []

        for j in range(idx + 1, len(slots)):
            if slots[j].combined:
                break
            q = slots[j].host
            free = not _depends(q, p, g) and all(not _depends(q, c, g) for c in concurrents)
            if not can_insert(q, remaining, free):
                break
            concurrents.append(q)
            remaining -= q.time
            logger.debug(f"Tentatively inserting {q.id} into {p.id} ({remaining}s free)")

        if not concurrents:
            continue

        future = _future_host(slots, idx, g, lookahead)
        if future is not None:
            if lookahead == LookAhead.FLAT:
                dropped, concurrents = concurrents, []
            else:
                dropped = [q for q in concurrents if _depends(q, future, g)]
                concurrents = [q for q in concurrents if not _depends(q, future, g)]
            if dropped:
                logger.debug(f"{p.id} forgoes {len(dropped)} insertion(s) to fit into {future.id}")
            if not concurrents:
                continue

        chosen = {q.id for q in concurrents}
        slots[idx].insertees = concurrents
        slots[idx + 1:] = [s for s in slots[idx + 1:] if s.host.id not in chosen]
        logger.debug(
            f"Inserted {len(concurrents)} process(es) into {p.id} "
            f"({p.f_time - sum(q.time for q in concurrents)}s free)"
        )

    return RecipePlan(items=tuple(slot.to_item() for slot in slots))


def total_time(plan: RecipePlan) -> int:
    """Sum of the times of processes not inserted into another"""
    return sum(item.time for item in plan.items)


def compress_orders(
    orders: Iterable[PermissibleOrder],
    processes: Mapping[str, Process],
    g: RequiresGraph,
    lookahead: Optional[LookAhead] = None,
) -> Iterator[Tuple[PermissibleOrder, RecipePlan, int]]:
    for order in orders:
        plan = concurrent_compression(order, processes, g, lookahead)
        yield order, plan, total_time(plan)


def optimize(
    action_list: Sequence[Process],
    limit: Optional[int] = None,
    graph: Optional[RequiresGraph] = None,
    lookahead: Optional[LookAhead] = None,
) -> Tuple[RecipePlan, int]:
    """Fastest compressed plan over every permissible order.

    Ties go to the earliest order in enumeration order. ``graph`` carries
    stitched edges that cannot be recovered from the processes; ghosts still
    in ``action_list`` are stitched out first.
    """
    limit = settings.ORDER_LIMIT if limit is None else limit
    if graph is None:
        graph = build_requires_graph(action_list)
    if any(p.is_ghost for p in action_list):
        action_list, graph = remove_and_stitch(action_list, graph)

    processes: Dict[str, Process] = {p.id: p for p in action_list}
    best: Optional[Tuple[RecipePlan, int]] = None
    count = 0
    for _, plan, total in compress_orders(iter_permissible_orders(graph.nodes, graph), processes, graph, lookahead):
        count += 1
        if count > limit:
            raise OrderExplosion(count, limit)
        if best is None or total < best[1]:
            best = (plan, total)

    if best is None:
        best = (RecipePlan(), 0)
    logger.info(f"Compressed {count} orders; best total time {best[1]}s")
    return best


def coherence_violations(plan: RecipePlan, g: RequiresGraph) -> List[str]:
    """Every way the plan breaks precedence, independence or capacity; empty when coherent"""
    problems: List[str] = []
    position: Dict[str, int] = {}
    for index, item in enumerate(plan.items):
        for p in members(item):
            position[p.id] = index

    for later_index, later in enumerate(plan.items):
        for earlier in plan.items[:later_index]:
            if item_requires(earlier, later, g):
                problems.append(f"{earlier.id} requires {later.id} but comes first")

    for a, b in sorted(g.edges):
        if a in position and b in position and position[a] == position[b]:
            problems.append(f"{a} and {b} are dependent but combined")

    for item in plan.items:
        if not isinstance(item, Combination):
            continue
        used = sum(q.time for q in item.insertees)
        if used > item.host.f_time:
            problems.append(f"{item.host.id} is free for {item.host.f_time}s but hosts {used}s")

    missing = set(g.nodes) - set(position)
    if missing:
        problems.append(f"processes missing from plan: {sorted(missing)}")
    return problems
